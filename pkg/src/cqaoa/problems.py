"""Problem instances, feasibility oracles, quality functions and linear constraint forms.

Four problem families are supported:

* graph partition -- split an even vertex set into two equal halves, minimizing
  the number of edges crossing the cut (one qubit per vertex),
* multi-processor scheduling -- assign each task to exactly one processor,
  minimizing the makespan, with optional conflict (must be apart) and
  colocation (must be together) pairs (one qubit per processor/task pair),
* set packing -- select a maximum number of pairwise disjoint subsets
  (one qubit per subset),
* minimum vertex cover -- select a minimum vertex set touching every edge
  (one qubit per vertex).

Qualities are uniformly "larger is better": makespan and cover size enter
negated.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .qstate import DiagonalCost

ENUMERATION_CAP = 20


class EnumerationCapExceeded(RuntimeError):
    """Raised when an exhaustive enumeration would exceed the configured qubit cap."""


def _check_cap(n: int, cap: int):
    if n > cap:
        raise EnumerationCapExceeded(f"enumeration over {n} qubits exceeds the cap of {cap}")


def _normalize_pairs(pairs, count: int, what: str) -> tuple[tuple[int, int], ...]:
    seen = set()
    out = []
    for pair in pairs:
        u, v = int(pair[0]), int(pair[1])
        if u == v:
            raise ValueError(f"{what} ({u}, {v}) must reference two distinct indices")
        if not (0 <= u < count and 0 <= v < count):
            raise ValueError(f"{what} ({u}, {v}) out of range for count {count}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValueError(f"duplicate {what} ({key[0]}, {key[1]})")
        seen.add(key)
        out.append(key)
    return tuple(sorted(out))


@dataclass(frozen=True)
class GraphPartition:
    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertices <= 0 or self.vertices % 2 != 0:
            raise ValueError("graph partition requires a positive even vertex count")
        object.__setattr__(self, "edges", _normalize_pairs(self.edges, self.vertices, "edge"))


@dataclass(frozen=True)
class MultiProcessorScheduling:
    processors: int
    times: tuple[float, ...]
    conflicts: tuple[tuple[int, int], ...] = ()
    colocations: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.processors < 1:
            raise ValueError("need at least one processor")
        times = tuple(float(t) for t in self.times)
        if not times or any(t <= 0 for t in times):
            raise ValueError("task times must be a nonempty list of positive reals")
        object.__setattr__(self, "times", times)
        nt = len(times)
        object.__setattr__(self, "conflicts", _normalize_pairs(self.conflicts, nt, "conflict"))
        object.__setattr__(self, "colocations", _normalize_pairs(self.colocations, nt, "colocation"))

    @property
    def task_count(self) -> int:
        return len(self.times)

    def qubit(self, processor: int, task: int) -> int:
        """Qubit index for "task runs on processor": processor*task_count + task."""
        return processor * self.task_count + task


@dataclass(frozen=True)
class SetPacking:
    universe_size: int
    subsets: tuple[frozenset[int], ...]

    def __post_init__(self):
        subsets = tuple(frozenset(int(e) for e in s) for s in self.subsets)
        for s in subsets:
            if any(not (0 <= e < self.universe_size) for e in s):
                raise ValueError(f"subset element out of range for universe of size {self.universe_size}")
        object.__setattr__(self, "subsets", subsets)


@dataclass(frozen=True)
class VertexCover:
    vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.vertices <= 0:
            raise ValueError("vertex cover requires a positive vertex count")
        object.__setattr__(self, "edges", _normalize_pairs(self.edges, self.vertices, "edge"))


ProblemInstance = Union[GraphPartition, MultiProcessorScheduling, SetPacking, VertexCover]


@dataclass(eq=False)
class LinearConstraint:
    """Componentwise bounds lower <= sum_k coeffs[k]*x_k <= upper over n binary variables.

    ``coeffs`` has shape (n, kappa): row k is the coefficient vector of
    variable k.  Equality constraints carry identical lower and upper bounds.
    """

    kind: str  # "equality" | "inequality"
    coeffs: np.ndarray
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        if self.kind not in ("equality", "inequality"):
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 2:
            raise ValueError("coeffs must be a 2-d array of shape (n, kappa)")
        lower = np.asarray(self.lower, dtype=np.float64)
        upper = np.asarray(self.upper, dtype=np.float64)
        kappa = coeffs.shape[1]
        if lower.shape != (kappa,) or upper.shape != (kappa,):
            raise ValueError("bound vectors must have length kappa")
        if self.kind == "equality" and not np.array_equal(lower, upper):
            raise ValueError("equality constraints require identical lower and upper bounds")
        self.coeffs, self.lower, self.upper = coeffs, lower, upper

    @property
    def n(self) -> int:
        return self.coeffs.shape[0]

    @property
    def kappa(self) -> int:
        return self.coeffs.shape[1]

    def evaluate(self, x: int) -> np.ndarray:
        bits = np.array([(x >> k) & 1 for k in range(self.n)], dtype=np.float64)
        return bits @ self.coeffs

    def satisfied_by(self, x: int) -> bool:
        f = self.evaluate(x)
        return bool(np.all(self.lower <= f) and np.all(f <= self.upper))


@dataclass(eq=False)
class FeasibleSet:
    """Sorted basis indices of all feasibility-oracle-passing bit strings."""

    n: int
    members: np.ndarray

    def __post_init__(self):
        members = np.asarray(self.members, dtype=np.int64).copy()
        if members.ndim != 1:
            raise ValueError("members must be a 1-d array")
        if members.size:
            if members.min() < 0 or members.max() >= (1 << self.n):
                raise ValueError(f"members must lie in [0, 2**{self.n})")
            if np.any(np.diff(members) <= 0):
                raise ValueError("members must be strictly increasing")
        members.flags.writeable = False
        self.members = members
        self._member_set = frozenset(int(x) for x in members)

    def __len__(self) -> int:
        return int(self.members.size)

    def __contains__(self, x: int) -> bool:
        return int(x) in self._member_set

    def __iter__(self):
        return iter(int(x) for x in self.members)


def qubit_count(problem: ProblemInstance) -> int:
    if isinstance(problem, GraphPartition):
        return problem.vertices
    if isinstance(problem, MultiProcessorScheduling):
        return problem.processors * problem.task_count
    if isinstance(problem, SetPacking):
        return len(problem.subsets)
    if isinstance(problem, VertexCover):
        return problem.vertices
    raise TypeError(f"unknown problem type {type(problem).__name__}")


def validate(problem: ProblemInstance, x: int) -> bool:
    """Feasibility oracle: does bit string x satisfy every constraint of the problem?"""
    if isinstance(problem, GraphPartition):
        return x.bit_count() == problem.vertices // 2
    if isinstance(problem, MultiProcessorScheduling):
        procs = _mps_processor_of(problem, x)
        if procs is None:
            return False
        for j, k in problem.conflicts:
            if procs[j] == procs[k]:
                return False
        for j, k in problem.colocations:
            if procs[j] != procs[k]:
                return False
        return True
    if isinstance(problem, SetPacking):
        chosen = [s for k, s in enumerate(problem.subsets) if (x >> k) & 1]
        for i in range(len(chosen)):
            for j in range(i + 1, len(chosen)):
                if chosen[i] & chosen[j]:
                    return False
        return True
    if isinstance(problem, VertexCover):
        return all(((x >> u) & 1) or ((x >> v) & 1) for u, v in problem.edges)
    raise TypeError(f"unknown problem type {type(problem).__name__}")


def _mps_processor_of(problem: MultiProcessorScheduling, x: int) -> list[int] | None:
    """Processor of each task, or None if some task is not scheduled exactly once."""
    nt = problem.task_count
    procs = []
    for j in range(nt):
        assigned = [i for i in range(problem.processors) if (x >> problem.qubit(i, j)) & 1]
        if len(assigned) != 1:
            return None
        procs.append(assigned[0])
    return procs


def quality(problem: ProblemInstance, x: int) -> float:
    """Solution quality, larger is better, defined on every bit string."""
    if isinstance(problem, GraphPartition):
        cut = sum(1 for u, v in problem.edges if ((x >> u) & 1) != ((x >> v) & 1))
        return float(len(problem.edges) - cut)
    if isinstance(problem, MultiProcessorScheduling):
        nt = problem.task_count
        loads = [
            sum(problem.times[j] for j in range(nt) if (x >> problem.qubit(i, j)) & 1)
            for i in range(problem.processors)
        ]
        return -float(max(loads))
    if isinstance(problem, SetPacking):
        return float(x.bit_count())
    if isinstance(problem, VertexCover):
        return -float(x.bit_count())
    raise TypeError(f"unknown problem type {type(problem).__name__}")


def feasible_set(problem: ProblemInstance, cap: int = ENUMERATION_CAP) -> FeasibleSet:
    n = qubit_count(problem)
    _check_cap(n, cap)
    members = [x for x in range(1 << n) if validate(problem, x)]
    return FeasibleSet(n, np.array(members, dtype=np.int64))


def cost_operator(problem: ProblemInstance, cap: int = ENUMERATION_CAP) -> DiagonalCost:
    n = qubit_count(problem)
    _check_cap(n, cap)
    weights = np.array([quality(problem, x) for x in range(1 << n)])
    return DiagonalCost(n, weights)


def linear_constraint(problem: ProblemInstance) -> LinearConstraint | None:
    """The problem's linear constraint form, or None when no such form exists.

    Multi-processor scheduling with conflict or colocation pairs has no linear
    form; every other family does.
    """
    if isinstance(problem, GraphPartition):
        n = problem.vertices
        half = np.array([n / 2.0])
        return LinearConstraint("equality", np.ones((n, 1)), half, half)
    if isinstance(problem, MultiProcessorScheduling):
        if problem.conflicts or problem.colocations:
            return None
        nt = problem.task_count
        coeffs = np.zeros((problem.processors * nt, nt))
        for k in range(problem.processors * nt):
            coeffs[k, k % nt] = 1.0
        ones = np.ones(nt)
        return LinearConstraint("equality", coeffs, ones, ones)
    if isinstance(problem, SetPacking):
        kappa = problem.universe_size
        coeffs = np.zeros((len(problem.subsets), kappa))
        for k, s in enumerate(problem.subsets):
            for e in s:
                coeffs[k, e] = 1.0
        return LinearConstraint("inequality", coeffs, np.zeros(kappa), np.ones(kappa))
    if isinstance(problem, VertexCover):
        n = problem.vertices
        slots = [(u, v) for u in range(n) for v in range(u + 1, n)]
        edge_set = set(problem.edges)
        coeffs = np.zeros((n, len(slots)))
        lower = np.zeros(len(slots))
        for mu, (u, v) in enumerate(slots):
            if (u, v) in edge_set:
                coeffs[u, mu] = 1.0
                coeffs[v, mu] = 1.0
                lower[mu] = 1.0
        return LinearConstraint("inequality", coeffs, lower, coeffs.sum(axis=0))
    raise TypeError(f"unknown problem type {type(problem).__name__}")


def feasible_set_from_constraint(constraint: LinearConstraint, cap: int = ENUMERATION_CAP) -> FeasibleSet:
    """Enumerate all bit strings satisfying the constraint bounds."""
    n = constraint.n
    _check_cap(n, cap)
    dim = 1 << n
    bits = (np.arange(dim)[:, None] >> np.arange(n)[None, :]) & 1
    f = bits.astype(np.float64) @ constraint.coeffs
    ok = np.all(f >= constraint.lower, axis=1) & np.all(f <= constraint.upper, axis=1)
    return FeasibleSet(n, np.nonzero(ok)[0].astype(np.int64))


def brute_force_optima(problem: ProblemInstance, cap: int = ENUMERATION_CAP) -> tuple[int, ...]:
    """All quality-maximizing feasible bit strings, by exhaustive enumeration."""
    omega = feasible_set(problem, cap)
    if len(omega) == 0:
        raise ValueError("problem has no feasible solutions")
    qualities = {x: quality(problem, x) for x in omega}
    best = max(qualities.values())
    return tuple(sorted(x for x, q in qualities.items() if q == best))


def trivial_feasible(problem: ProblemInstance) -> int:
    """A cheaply-known feasible solution."""
    if isinstance(problem, GraphPartition):
        return (1 << (problem.vertices // 2)) - 1
    if isinstance(problem, MultiProcessorScheduling):
        candidate = (1 << problem.task_count) - 1  # everything on processor 0
        if validate(problem, candidate):
            return candidate
        n = qubit_count(problem)
        _check_cap(n, ENUMERATION_CAP)
        for x in range(1 << n):
            if validate(problem, x):
                return x
        raise ValueError("no feasible solution exists")
    if isinstance(problem, SetPacking):
        return 0
    if isinstance(problem, VertexCover):
        return (1 << problem.vertices) - 1
    raise TypeError(f"unknown problem type {type(problem).__name__}")
