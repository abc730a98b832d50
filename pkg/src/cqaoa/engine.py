"""The alternating QAOA evolution loop and its derivative-free parameter search.

A depth-p run applies, per layer, the diagonal cost phase followed by the
mixer exponential, then maximizes the exact expectation of the cost operator
over the 2p angles with multistart Nelder-Mead.  When the mixer never couples
the feasible set to its complement and the initial state is supported on the
feasible set, the whole evolution is carried out in the feasible subspace.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import mixers, problems, qstate
from .mixers import MixerOperator
from .problems import FeasibleSet, ProblemInstance
from .qstate import DiagonalCost, QuantumState

INITIAL_STATES = ("uniform_feasible", "trivial_basis", "uniform_all")
MIXER_CHOICES = mixers.MIXER_KINDS


@dataclass(frozen=True)
class QaoaSchedule:
    """p layers of (gamma, beta) angles, applied cost-phase-first."""

    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        betas = tuple(float(b) for b in self.betas)
        if len(gammas) != len(betas) or not gammas:
            raise ValueError("gammas and betas must have equal nonzero length")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)

    @property
    def p(self) -> int:
        return len(self.gammas)


@dataclass(frozen=True)
class RunConfig:
    p: int
    mixer: str = "distance2"
    initial_state: str = "uniform_feasible"
    restarts: int = 20
    seed: int = 0
    tolerance: float = 1e-8
    max_evaluations: int = 5000
    star_center: int | None = None

    def __post_init__(self):
        if self.p < 1:
            raise ValueError("layer count p must be at least 1")
        if self.mixer not in MIXER_CHOICES:
            raise ValueError(f"unknown mixer kind {self.mixer!r}")
        if self.initial_state not in INITIAL_STATES:
            raise ValueError(f"unknown initial state {self.initial_state!r}")
        if self.restarts < 1:
            raise ValueError("restarts must be at least 1")
        if self.tolerance <= 0:
            raise ValueError("optimizer tolerance must be positive")
        if self.max_evaluations < 1:
            raise ValueError("max evaluations must be at least 1")


@dataclass(frozen=True)
class RestartTrace:
    seed: int
    expectation: float
    evaluations: int
    converged: bool


@dataclass(eq=False)
class RunResult:
    schedule: QaoaSchedule
    expectation: float
    distribution: dict[int, float]
    optimal_probability: float
    infeasible_probability: float
    trace: tuple[RestartTrace, ...]
    projected_weights: np.ndarray | None = None


def build_mixer(problem: ProblemInstance, kind: str, omega: FeasibleSet | None = None,
                center: int | None = None) -> MixerOperator:
    """Construct the requested mixer kind for a problem instance."""
    n = problems.qubit_count(problem)
    if kind in ("distance1", "distance2"):
        if omega is None:
            omega = problems.feasible_set(problem)
        return mixers.build_distance_mixer(omega, 2 if kind == "distance2" else 1)
    if kind == "ring_xy":
        return mixers.build_ring_xy_mixer(n)
    if kind == "star":
        if omega is None:
            omega = problems.feasible_set(problem)
        if center is None:
            center = problems.trivial_feasible(problem)
        return mixers.build_star_mixer(omega, center)
    if kind == "transverse_field":
        return mixers.build_transverse_field(n)
    raise ValueError(f"unknown mixer kind {kind!r}")


def initial_state_vector(problem: ProblemInstance, mixer: MixerOperator, omega: FeasibleSet,
                         choice: str) -> QuantumState:
    n = problems.qubit_count(problem)
    if choice == "uniform_feasible":
        return qstate.uniform_state_over(omega.members, n)
    if choice == "trivial_basis":
        x = mixer.center if mixer.kind == "star" else problems.trivial_feasible(problem)
        return qstate.basis_state(x, n)
    if choice == "uniform_all":
        return qstate.uniform_state_over(range(1 << n), n)
    raise ValueError(f"unknown initial state {choice!r}")


class _Evolver:
    """Pre-factorized alternating evolution for one (cost, mixer, initial state).

    Works in the feasible subspace whenever the mixer has no coupling between
    the feasible set and its complement and the initial state lives on the
    feasible set; otherwise in the full 2**n space.
    """

    def __init__(self, cost: DiagonalCost, mixer: MixerOperator, initial: QuantumState,
                 omega: FeasibleSet | None = None):
        if not (cost.n == mixer.n == initial.n):
            raise ValueError("cost, mixer and initial state dimensions disagree")
        self.n = cost.n
        dim = 1 << self.n
        self.mixer = mixer
        members = omega.members if omega is not None else None
        self.reduced = False
        if members is not None and members.size < dim:
            mat = mixer.matrix
            in_r = np.isin(mat.rows, members)
            in_c = np.isin(mat.cols, members)
            confined = not np.any(in_r != in_c)
            mask = np.ones(dim, dtype=bool)
            mask[members] = False
            supported = not np.any(initial.amplitudes[mask] != 0)
            self.reduced = confined and supported
        if self.reduced:
            self.basis = members
            k = members.size
            sel = np.isin(mat.rows, members) & np.isin(mat.cols, members)
            rr = np.searchsorted(members, mat.rows[sel])
            cc = np.searchsorted(members, mat.cols[sel])
            sub = np.zeros((k, k))
            sub[rr, cc] = mat.vals[sel]
            self.weights = cost.weights[members]
            self.init = initial.amplitudes[members].copy()
            self._setup_mixer_apply(sub, k)
        else:
            self.basis = None
            self.weights = cost.weights
            self.init = initial.amplitudes.copy()
            self._setup_mixer_apply(None, dim)

    def _setup_mixer_apply(self, sub, k):
        if self.mixer.kind == "star":
            # rank-2 closed form, valid in either basis
            leaves = mixers.star_leaves(self.mixer)
            if self.reduced:
                center = int(np.searchsorted(self.basis, self.mixer.center))
                leaves = np.searchsorted(self.basis, leaves)
            else:
                center = self.mixer.center
            sqm = np.sqrt(leaves.size) if leaves.size else 1.0

            def apply(amp, beta):
                if beta == 0.0 or leaves.size == 0:
                    return amp
                theta = beta * np.sqrt(leaves.size)
                a = amp[center]
                b = amp[leaves].sum() / sqm
                amp[center] = np.cos(theta) * a - 1j * np.sin(theta) * b
                amp[leaves] += (np.cos(theta) * b - 1j * np.sin(theta) * a - b) / sqm
                return amp

            self._apply_mixer = apply
            return
        if k <= qstate.DENSE_DIM_LIMIT:
            dense = sub if sub is not None else self.mixer.matrix.dense()
            evals, evecs = np.linalg.eigh(dense)
            evecs_h = evecs.conj().T

            def apply(amp, beta):
                if beta == 0.0:
                    return amp
                return evecs @ (np.exp(-1j * beta * evals) * (evecs_h @ amp))

            self._apply_mixer = apply
        else:
            if sub is not None:
                from scipy.sparse import csr_matrix

                rows, cols = np.nonzero(sub)
                a = csr_matrix((sub[rows, cols], (rows, cols)), shape=sub.shape)
            else:
                a = self.mixer.matrix.csr()

            def apply(amp, beta):
                if beta == 0.0:
                    return amp
                out = qstate._krylov_apply(a, amp, beta, qstate.DEFAULT_KRYLOV_TOL,
                                           qstate.DEFAULT_KRYLOV_DIM)
                return out / np.linalg.norm(out)

            self._apply_mixer = apply

    def run(self, gammas, betas) -> np.ndarray:
        amp = self.init.copy()
        for g, b in zip(gammas, betas):
            amp = amp * np.exp(-1j * g * self.weights)
            amp = self._apply_mixer(amp, b)
        return amp

    def expectation_of(self, amp: np.ndarray) -> float:
        probs = np.abs(amp) ** 2
        return float(np.dot(probs, self.weights))

    def objective(self, params: np.ndarray) -> float:
        p = params.size // 2
        return self.expectation_of(self.run(params[:p], params[p:]))

    def full_state(self, amp: np.ndarray) -> QuantumState:
        if not self.reduced:
            return QuantumState(self.n, amp)
        full = np.zeros(1 << self.n, dtype=np.complex128)
        full[self.basis] = amp
        return QuantumState(self.n, full)


def evolve(problem: ProblemInstance, mixer: MixerOperator, schedule: QaoaSchedule,
           initial_state: QuantumState) -> QuantumState:
    """Apply p layers of cost phase followed by mixer exponential to the initial state."""
    cost = problems.cost_operator(problem)
    evolver = _Evolver(cost, mixer, initial_state)
    return evolver.full_state(evolver.run(schedule.gammas, schedule.betas))


def objective(problem: ProblemInstance, mixer: MixerOperator, schedule: QaoaSchedule,
              initial_state: QuantumState) -> float:
    """Expectation of the cost operator in the evolved state."""
    cost = problems.cost_operator(problem)
    evolver = _Evolver(cost, mixer, initial_state)
    return evolver.expectation_of(evolver.run(schedule.gammas, schedule.betas))


class _BudgetExhausted(Exception):
    pass


def _nelder_mead(fn, simplex0: np.ndarray, tol: float, max_evals: int):
    """Minimize fn with the simplex method; coefficients 1, 2, 0.5, 0.5.

    Converges when the spread of simplex function values drops below tol.
    Returns (best point, best value, evaluation count, converged flag); the
    best point ever evaluated is tracked, so a budget stop still returns the
    incumbent.
    """
    evals = 0
    best_x, best_f = None, np.inf

    def f(x):
        nonlocal evals, best_x, best_f
        if evals >= max_evals:
            raise _BudgetExhausted
        evals += 1
        val = fn(x)
        if val < best_f:
            best_x, best_f = x.copy(), val
        return val

    pts = [np.array(p, dtype=np.float64) for p in simplex0]
    converged = False
    try:
        vals = [f(p) for p in pts]
        while True:
            order = np.argsort(vals, kind="stable")
            pts = [pts[i] for i in order]
            vals = [vals[i] for i in order]
            if vals[-1] - vals[0] < tol:
                converged = True
                break
            centroid = np.mean(pts[:-1], axis=0)
            xr = centroid + (centroid - pts[-1])
            fr = f(xr)
            if fr < vals[0]:
                xe = centroid + 2.0 * (centroid - pts[-1])
                fe = f(xe)
                if fe < fr:
                    pts[-1], vals[-1] = xe, fe
                else:
                    pts[-1], vals[-1] = xr, fr
            elif fr < vals[-2]:
                pts[-1], vals[-1] = xr, fr
            else:
                if fr < vals[-1]:
                    xc = centroid + 0.5 * (xr - centroid)
                    fc = f(xc)
                    if fc <= fr:
                        pts[-1], vals[-1] = xc, fc
                        continue
                else:
                    xc = centroid - 0.5 * (centroid - pts[-1])
                    fc = f(xc)
                    if fc < vals[-1]:
                        pts[-1], vals[-1] = xc, fc
                        continue
                # shrink toward the best vertex
                for i in range(1, len(pts)):
                    pts[i] = pts[0] + 0.5 * (pts[i] - pts[0])
                    vals[i] = f(pts[i])
    except _BudgetExhausted:
        converged = False
    return best_x, best_f, evals, converged


def _run_restart(evolver: _Evolver, p: int, master_seed: int, restart: int,
                 tol: float, max_evals: int):
    ss = np.random.SeedSequence([master_seed, restart])
    rng = np.random.default_rng(ss)
    simplex = rng.uniform(0.0, 2.0 * np.pi, size=(2 * p + 1, 2 * p))
    x, negval, evals, converged = _nelder_mead(lambda v: -evolver.objective(v), simplex,
                                               tol, max_evals)
    trace = RestartTrace(seed=int(ss.generate_state(1, dtype=np.uint64)[0]),
                         expectation=-negval, evaluations=evals, converged=converged)
    return x, trace


def _optimize_over(evolver: _Evolver, omega: FeasibleSet, optima, config: RunConfig,
                   threads: int, projected_weights=None) -> RunResult:
    indices = range(config.restarts)
    args = [(evolver, config.p, config.seed, r, config.tolerance, config.max_evaluations)
            for r in indices]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(lambda a: _run_restart(*a), args))
    else:
        outcomes = [_run_restart(*a) for a in args]

    best_idx = 0
    for i, (_, trace) in enumerate(outcomes):
        if trace.expectation > outcomes[best_idx][1].expectation:
            best_idx = i
    best_params = outcomes[best_idx][0]

    p = config.p
    schedule = QaoaSchedule(tuple(best_params[:p]), tuple(best_params[p:]))
    amp = evolver.run(schedule.gammas, schedule.betas)
    state = evolver.full_state(amp)
    probs = state.probabilities()
    feasible_mass = float(probs[omega.members].sum())
    return RunResult(
        schedule=schedule,
        expectation=evolver.expectation_of(amp),
        distribution=qstate.distribution(state),
        optimal_probability=float(sum(probs[x] for x in optima)),
        infeasible_probability=max(0.0, 1.0 - feasible_mass),
        trace=tuple(trace for _, trace in outcomes),
        projected_weights=projected_weights,
    )


def optimize(problem: ProblemInstance, config: RunConfig, threads: int = 1) -> RunResult:
    """Multistart Nelder-Mead maximization of the evolved expectation.

    Deterministic for a fixed (seed, restarts, tolerance, max_evaluations)
    regardless of thread count; the best restart wins, ties broken by restart
    index.
    """
    omega = problems.feasible_set(problem)
    cost = problems.cost_operator(problem)
    mixer = build_mixer(problem, config.mixer, omega, config.star_center)
    initial = initial_state_vector(problem, mixer, omega, config.initial_state)
    evolver = _Evolver(cost, mixer, initial, omega)
    optima = problems.brute_force_optima(problem)
    return _optimize_over(evolver, omega, optima, config, threads)


def project_cost(cost: DiagonalCost, omega: FeasibleSet) -> DiagonalCost:
    """Zero the cost weights outside the feasible set (projection from both sides)."""
    weights = np.zeros_like(cost.weights)
    weights[omega.members] = cost.weights[omega.members]
    return DiagonalCost(cost.n, weights)


def run_projected_scheme(problem: ProblemInstance, config: RunConfig, threads: int = 1) -> RunResult:
    """Constraint handling on the cost side: projected cost weights, plain
    transverse-field mixer, uniform initial state over the full space.

    The evolution explores the whole space, so infeasible probability is
    generally nonzero.  Meaningful for problems whose feasible qualities are
    nonnegative (the projection assigns quality 0 to infeasible strings).
    """
    omega = problems.feasible_set(problem)
    cost = project_cost(problems.cost_operator(problem), omega)
    mixer = mixers.build_transverse_field(problems.qubit_count(problem))
    initial = initial_state_vector(problem, mixer, omega, "uniform_all")
    evolver = _Evolver(cost, mixer, initial, omega)
    optima = problems.brute_force_optima(problem)
    return _optimize_over(evolver, omega, optima, config, threads,
                          projected_weights=cost.weights)
