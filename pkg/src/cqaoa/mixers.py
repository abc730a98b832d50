"""Mixer operator constructions.

Viewed as graphs over the computational basis, these operators decide which
solutions exchange amplitude under exp(-1j*beta*B):

* distance-2 / distance-1 mixers -- connect feasible strings at exact Hamming
  distance 2 (equality-constrained problems) or 1 (inequality-constrained),
* ring XY mixer -- the cyclic XX+YY chain; preserves Hamming weight but is
  blind to the feasible set,
* star mixer -- one feasible center connected to every other feasible string;
  rank 2, works for arbitrary constraints,
* transverse field -- the full hypercube, no feasibility structure at all.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .problems import FeasibleSet
from .qstate import QuantumState, SparseHermitian

MIXER_KINDS = ("distance2", "distance1", "ring_xy", "star", "transverse_field")


@dataclass(frozen=True)
class MixerOperator:
    kind: str
    n: int
    matrix: SparseHermitian
    center: int | None = None

    def __post_init__(self):
        if self.kind not in MIXER_KINDS:
            raise ValueError(f"unknown mixer kind {self.kind!r}")
        if (self.kind == "star") != (self.center is not None):
            raise ValueError("center must be given exactly for star mixers")


def _symmetric(n: int, pairs: dict[tuple[int, int], float]) -> SparseHermitian:
    """Build a SparseHermitian from unordered off-diagonal pairs (u < v)."""
    rows, cols, vals = [], [], []
    for (u, v), w in sorted(pairs.items()):
        rows += [u, v]
        cols += [v, u]
        vals += [w, w]
    return SparseHermitian(n, np.array(rows, dtype=np.int64), np.array(cols, dtype=np.int64),
                           np.array(vals))


def build_distance_mixer(omega: FeasibleSet, d: int) -> MixerOperator:
    """Unit coupling between feasible strings at Hamming distance exactly d (1 or 2).

    Row computation: for each feasible string, flip every d-subset of bit
    positions and test membership of the result.
    """
    if d not in (1, 2):
        raise ValueError("distance mixers are defined for d = 1 or 2")
    if len(omega) == 0:
        raise ValueError("feasible set is empty")
    n = omega.n
    masks = [sum(1 << i for i in positions) for positions in combinations(range(n), d)]
    pairs = {}
    for x in omega:
        for mask in masks:
            y = x ^ mask
            if y > x and y in omega:
                pairs[(x, y)] = 1.0
    return MixerOperator(f"distance{d}", n, _symmetric(n, pairs))


def build_ring_xy_mixer(n: int) -> MixerOperator:
    """The cyclic -sum_i (XX + YY) chain expanded in the computational basis.

    Couples strings that differ by swapping two cyclically adjacent unequal
    bits, with matrix element -2 per chain term, so total Hamming weight is
    conserved.  The i = n term wraps around to qubit 1.
    """
    if n < 2:
        raise ValueError("ring XY mixer needs at least 2 qubits")
    pairs: dict[tuple[int, int], float] = {}
    for x in range(1 << n):
        for i in range(n):
            j = (i + 1) % n
            if ((x >> i) & 1) != ((x >> j) & 1):
                y = x ^ ((1 << i) | (1 << j))
                if y > x:
                    key = (x, y)
                    pairs[key] = pairs.get(key, 0.0) - 2.0
    return MixerOperator("ring_xy", n, _symmetric(n, pairs))


def build_star_mixer(omega: FeasibleSet, center: int) -> MixerOperator:
    """Unit coupling from one feasible center string to every other feasible string."""
    if center not in omega:
        raise ValueError(f"star center {center} is not feasible")
    pairs = {(min(center, x), max(center, x)): 1.0 for x in omega if x != center}
    return MixerOperator("star", omega.n, _symmetric(omega.n, pairs), center=center)


def build_transverse_field(n: int) -> MixerOperator:
    """Sum of single-qubit bit flips: the n-dimensional hypercube adjacency."""
    if n < 1:
        raise ValueError("transverse field needs at least 1 qubit")
    pairs = {}
    for x in range(1 << n):
        for i in range(n):
            if not (x >> i) & 1:
                pairs[(x, x | (1 << i))] = 1.0
    return MixerOperator("transverse_field", n, _symmetric(n, pairs))


def star_leaves(mixer: MixerOperator) -> np.ndarray:
    """Sorted leaf indices of a star mixer."""
    if mixer.kind != "star":
        raise ValueError("not a star mixer")
    mat = mixer.matrix
    return np.sort(mat.cols[mat.rows == mixer.center])


def star_exponential_apply(state: QuantumState, beta: float, mixer: MixerOperator) -> QuantumState:
    """Closed-form exp(-1j*beta*B) for a star mixer, in O(feasible set size).

    The star operator has rank 2: it acts as sqrt(m) * sigma_x on the span of
    the center state and the normalized uniform leaf state (m = leaf count)
    and annihilates everything orthogonal to that plane, so the exponential
    is a rotation by beta*sqrt(m) in the plane plus identity elsewhere.
    """
    if mixer.kind != "star":
        raise ValueError("star_exponential_apply requires a star mixer")
    if state.n != mixer.n:
        raise ValueError(f"dimension mismatch: state has {state.n} qubits, mixer has {mixer.n}")
    leaves = star_leaves(mixer)
    m = leaves.size
    if beta == 0.0 or m == 0:
        return state
    amp = state.amplitudes.copy()
    theta = beta * np.sqrt(m)
    a = amp[mixer.center]
    b = amp[leaves].sum() / np.sqrt(m)
    amp[mixer.center] = np.cos(theta) * a - 1j * np.sin(theta) * b
    amp[leaves] += (np.cos(theta) * b - 1j * np.sin(theta) * a - b) / np.sqrt(m)
    return QuantumState(state.n, amp)


def edge_list(mixer: MixerOperator) -> list[tuple[int, int]]:
    """Sorted unordered pairs (u < v) of all nonzero off-diagonal couplings."""
    mat = mixer.matrix
    sel = mat.rows < mat.cols
    return sorted(zip(mat.rows[sel].tolist(), mat.cols[sel].tolist()))
