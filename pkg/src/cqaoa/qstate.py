"""Exact complex state vectors and the two QAOA evolution primitives.

States live in the 2**n dimensional computational basis.  Bit k (least
significant) of a basis index is combinatorial variable k; printed bit
strings are most-significant-first, so variable 0 is the rightmost
character.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.sparse import csr_matrix

NORM_TOL = 1e-12
DENSE_DIM_LIMIT = 1024
DEFAULT_KRYLOV_TOL = 1e-12
DEFAULT_KRYLOV_DIM = 30
_MAX_STEP_DOUBLINGS = 24


class KrylovConvergenceError(RuntimeError):
    """Raised when the Krylov propagator cannot reach the requested tolerance."""


def format_bits(x: int, n: int) -> str:
    """Render a basis index as an n-character bit string, most significant bit first."""
    return format(x, f"0{n}b")


def parse_bits(bits: str) -> int:
    """Inverse of :func:`format_bits`."""
    return int(bits, 2)


@dataclass(eq=False)
class QuantumState:
    """Normalized complex amplitude vector over n qubits. Immutable after construction."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amp = np.asarray(self.amplitudes, dtype=np.complex128).copy()
        if amp.shape != (1 << self.n,):
            raise ValueError(f"amplitude vector must have length 2**{self.n}, got shape {amp.shape}")
        norm = np.linalg.norm(amp)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        amp.flags.writeable = False
        self.amplitudes = amp

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


@dataclass(eq=False)
class DiagonalCost:
    """Diagonal quality operator: weights[x] is the quality of basis state x (larger is better)."""

    n: int
    weights: np.ndarray

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=np.float64).copy()
        if w.shape != (1 << self.n,):
            raise ValueError(f"weight vector must have length 2**{self.n}, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise ValueError("cost weights must all be finite")
        w.flags.writeable = False
        self.weights = w


@dataclass(eq=False)
class SparseHermitian:
    """Real-symmetric sparse operator stored as an explicit symmetric entry list.

    Off-diagonal entries must appear in both (r, c) and (c, r) orientation with
    equal value; duplicates are rejected.  Diagonal entries are permitted.
    """

    n: int
    rows: np.ndarray
    cols: np.ndarray
    vals: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=np.int64).copy()
        cols = np.asarray(self.cols, dtype=np.int64).copy()
        vals = np.asarray(self.vals, dtype=np.float64).copy()
        if not (rows.shape == cols.shape == vals.shape) or rows.ndim != 1:
            raise ValueError("rows, cols and vals must be 1-d arrays of equal length")
        dim = 1 << self.n
        if rows.size and (rows.min() < 0 or cols.min() < 0 or rows.max() >= dim or cols.max() >= dim):
            raise ValueError(f"entry indices must lie in [0, 2**{self.n})")
        self._check_symmetric(rows, cols, vals)
        for a in (rows, cols, vals):
            a.flags.writeable = False
        self.rows, self.cols, self.vals = rows, cols, vals
        self._csr_cache = None
        self._eig_cache = None

    @staticmethod
    def _check_symmetric(rows, cols, vals):
        order = np.lexsort((cols, rows))
        key = np.stack([rows[order], cols[order]], axis=1)
        if key.shape[0] > 1 and np.any(np.all(key[1:] == key[:-1], axis=1)):
            raise ValueError("duplicate (row, col) entries")
        order_t = np.lexsort((rows, cols))
        if not (
            np.array_equal(rows[order], cols[order_t])
            and np.array_equal(cols[order], rows[order_t])
            and np.array_equal(vals[order], vals[order_t])
        ):
            raise ValueError("entry list is not symmetric")

    @property
    def nnz(self) -> int:
        return int(self.rows.size)

    def csr(self) -> csr_matrix:
        if self._csr_cache is None:
            dim = 1 << self.n
            self._csr_cache = csr_matrix((self.vals, (self.rows, self.cols)), shape=(dim, dim))
        return self._csr_cache

    def dense(self) -> np.ndarray:
        dim = 1 << self.n
        a = np.zeros((dim, dim))
        a[self.rows, self.cols] = self.vals
        return a

    def eigensystem(self) -> tuple[np.ndarray, np.ndarray]:
        """Memoized dense eigendecomposition; only available up to DENSE_DIM_LIMIT."""
        if self._eig_cache is None:
            dim = 1 << self.n
            if dim > DENSE_DIM_LIMIT:
                raise ValueError(
                    f"dense eigendecomposition limited to dimension {DENSE_DIM_LIMIT}, got {dim}"
                )
            self._eig_cache = np.linalg.eigh(self.dense())
        return self._eig_cache


def uniform_state_over(support: Iterable[int], n: int) -> QuantumState:
    """Equal positive amplitude on every member of the support, zero elsewhere."""
    members = sorted(set(int(x) for x in support))
    if not members:
        raise ValueError("empty initial support")
    dim = 1 << n
    if members[0] < 0 or members[-1] >= dim:
        raise ValueError(f"support members must lie in [0, 2**{n})")
    amp = np.zeros(dim, dtype=np.complex128)
    amp[members] = 1.0 / np.sqrt(len(members))
    return QuantumState(n, amp)


def basis_state(x: int, n: int) -> QuantumState:
    return uniform_state_over([x], n)


def apply_cost_phase(state: QuantumState, gamma: float, cost: DiagonalCost) -> QuantumState:
    """Multiply amplitude x by exp(-1j * gamma * weights[x])."""
    if state.n != cost.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, cost has {cost.n}")
    if gamma == 0.0:
        return state
    return QuantumState(state.n, state.amplitudes * np.exp(-1j * gamma * cost.weights))


def apply_hermitian_exponential(
    state: QuantumState,
    beta: float,
    op: SparseHermitian,
    method: str = "auto",
    tol: float = DEFAULT_KRYLOV_TOL,
    krylov_dim: int = DEFAULT_KRYLOV_DIM,
) -> QuantumState:
    """Apply exp(-1j * beta * op) to the state.

    Dense eigendecomposition is used up to dimension DENSE_DIM_LIMIT; above
    that a restarted Lanczos propagator is used.  ``method`` forces the route
    ("dense" or "krylov").
    """
    if state.n != op.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, operator has {op.n}")
    if beta == 0.0:
        return state
    dim = 1 << state.n
    if method == "auto":
        method = "dense" if dim <= DENSE_DIM_LIMIT else "krylov"
    if method == "dense":
        evals, evecs = op.eigensystem()
        amp = evecs @ (np.exp(-1j * beta * evals) * (evecs.conj().T @ state.amplitudes))
    elif method == "krylov":
        amp = _krylov_apply(op.csr(), state.amplitudes, beta, tol, krylov_dim)
    else:
        raise ValueError(f"unknown exponential method {method!r}")
    return QuantumState(state.n, amp / np.linalg.norm(amp))


def expectation(state: QuantumState, cost: DiagonalCost) -> float:
    """Sum over x of |amplitude_x|**2 * weights[x]."""
    if state.n != cost.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, cost has {cost.n}")
    return float(np.dot(state.probabilities(), cost.weights))


def distribution(state: QuantumState, floor: float = 1e-12) -> dict[int, float]:
    """Measurement probabilities keyed by basis index; entries below the floor omitted."""
    probs = state.probabilities()
    keep = np.nonzero(probs >= floor)[0]
    return {int(x): float(probs[x]) for x in keep}


def _lanczos_propagate(a, v: np.ndarray, dt: float, m: int) -> tuple[np.ndarray, float]:
    """One Krylov step of exp(-1j*dt*A) @ v with an a-posteriori error estimate."""
    dim = v.shape[0]
    m = min(m, dim)
    q = np.zeros((dim, m), dtype=np.complex128)
    alphas = np.zeros(m)
    betas = np.zeros(m)
    vnorm = np.linalg.norm(v)
    q[:, 0] = v / vnorm
    k = m
    happy = False
    for j in range(m):
        w = a @ q[:, j]
        if j > 0:
            w = w - betas[j - 1] * q[:, j - 1]
        alphas[j] = np.real(np.vdot(q[:, j], w))
        w = w - alphas[j] * q[:, j]
        # full reorthogonalization, twice, to hold 1e-12 targets
        for _ in range(2):
            w = w - q[:, : j + 1] @ (q[:, : j + 1].conj().T @ w)
        b = np.linalg.norm(w)
        betas[j] = b
        if b < 1e-14:
            k = j + 1
            happy = True
            break
        if j + 1 < m:
            q[:, j + 1] = w / b
    tmat = np.diag(alphas[:k]) + np.diag(betas[: k - 1], 1) + np.diag(betas[: k - 1], -1)
    evals, evecs = np.linalg.eigh(tmat)
    small = evecs @ (np.exp(-1j * dt * evals) * evecs[0, :].conj())
    out = vnorm * (q[:, :k] @ small)
    err = 0.0 if happy else abs(dt) * betas[k - 1] * abs(small[-1]) * vnorm
    return out, err


def _krylov_apply(a, amplitudes: np.ndarray, beta: float, tol: float, m: int) -> np.ndarray:
    """Restarted Lanczos action of exp(-1j*beta*A), halving the step until the error bound holds."""
    nsteps = 1
    for _ in range(_MAX_STEP_DOUBLINGS):
        current = amplitudes
        total_err = 0.0
        failed = False
        for _step in range(nsteps):
            current, err = _lanczos_propagate(a, current, beta / nsteps, m)
            total_err += err
            if total_err > tol:
                failed = True
                break
        if not failed:
            return current
        nsteps *= 2
    raise KrylovConvergenceError(
        f"Krylov propagation did not reach tolerance {tol} within "
        f"{_MAX_STEP_DOUBLINGS} step halvings (basis size {m})"
    )
