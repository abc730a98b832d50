"""Mixer-graph diagnostics and the mixer comparison harness.

The central quantity is the regularity of the feasible subgraph: the maximum
minus the minimum degree over feasible nodes.  Zero means a regular graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace

import numpy as np

from . import engine, problems
from .engine import RunConfig
from .mixers import MixerOperator
from .problems import ENUMERATION_CAP, FeasibleSet, LinearConstraint, ProblemInstance


@dataclass(eq=False)
class MixerReport:
    node_count: int
    edge_count: int
    degree_histogram: dict[int, int]
    max_degree: int
    min_degree: int
    regularity: int
    component_count: int
    component_sizes: tuple[int, ...]


def induced_edges(mixer: MixerOperator, omega: FeasibleSet) -> list[tuple[int, int]]:
    """Off-diagonal couplings of the mixer restricted to feasible nodes, as pairs u < v."""
    mat = mixer.matrix
    sel = (mat.rows < mat.cols) & np.isin(mat.rows, omega.members) & np.isin(mat.cols, omega.members)
    return sorted(zip(mat.rows[sel].tolist(), mat.cols[sel].tolist()))


def mixer_report(mixer: MixerOperator, omega: FeasibleSet) -> MixerReport:
    """Degrees, regularity and connected components of the feasible subgraph."""
    if mixer.n != omega.n:
        raise ValueError(f"dimension mismatch: mixer has {mixer.n} qubits, feasible set has {omega.n}")
    edges = induced_edges(mixer, omega)
    adjacency: dict[int, list[int]] = {x: [] for x in omega}
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    degrees = [len(adjacency[x]) for x in omega]
    histogram: dict[int, int] = {}
    for d in degrees:
        histogram[d] = histogram.get(d, 0) + 1
    sizes = []
    seen: set[int] = set()
    for start in omega:
        if start in seen:
            continue
        queue = deque([start])
        seen.add(start)
        size = 0
        while queue:
            node = queue.popleft()
            size += 1
            for nb in adjacency[node]:
                if nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        sizes.append(size)
    max_deg = max(degrees) if degrees else 0
    min_deg = min(degrees) if degrees else 0
    return MixerReport(
        node_count=len(omega),
        edge_count=len(edges),
        degree_histogram=dict(sorted(histogram.items())),
        max_degree=max_deg,
        min_degree=min_deg,
        regularity=max_deg - min_deg,
        component_count=len(sizes),
        component_sizes=tuple(sorted(sizes, reverse=True)),
    )


@dataclass(frozen=True)
class TheoremCheck:
    thm1_applicable: bool
    thm3_applicable: bool
    witness: str


def check_theorem_conditions(constraint: LinearConstraint, cap: int = ENUMERATION_CAP) -> TheoremCheck:
    """Check the sufficient conditions of the two mixer connectivity guarantees.

    The distance-2 guarantee needs an equality constraint whose feasible
    solutions all share one Hamming weight (verified by enumeration).  The
    distance-1 guarantee needs an inequality constraint with nonnegative
    coefficients whose bound gap is at least twice the largest coefficient in
    every component.  The witness names the first violated condition of the
    constraint's own kind; both conditions are sufficient, not necessary.
    """
    coeffs = constraint.coeffs
    thm1 = False
    thm3 = False
    witness = ""
    if constraint.kind == "equality":
        omega = problems.feasible_set_from_constraint(constraint, cap)
        if len(omega) == 0:
            witness = "no feasible solutions under the constraint"
        else:
            weights = {x.bit_count() for x in omega}
            if len(weights) == 1:
                thm1 = True
            else:
                witness = "feasible solutions have non-constant Hamming weight"
    else:
        if np.any(coeffs < 0):
            k, mu = map(int, np.argwhere(coeffs < 0)[0])
            witness = (f"coefficient ({k}, {mu}) is negative; the distance-1 guarantee "
                       "requires nonnegative coefficients")
        else:
            gap = constraint.upper - constraint.lower
            need = 2.0 * coeffs.max(axis=0)
            bad = np.nonzero(gap < need)[0]
            if bad.size:
                mu = int(bad[0])
                witness = (f"bound gap {gap[mu]:g} at component {mu} is below twice the "
                           f"largest coefficient ({need[mu]:g})")
            else:
                thm3 = True
    return TheoremCheck(thm1_applicable=thm1, thm3_applicable=thm3, witness=witness)


def mixer_applicability(problem: ProblemInstance, kind: str) -> tuple[bool, str]:
    """Whether a mixer kind may be driven on a problem, with a reason when not.

    The distance-2 mixer is gated on the equality-constraint conditions; the
    ring XY mixer requires the feasible set to sit in a single Hamming-weight
    sector.  Every other kind (including the projected-cost scheme) applies
    unconditionally.
    """
    if kind == "distance2":
        constraint = problems.linear_constraint(problem)
        if constraint is None:
            return False, ("constraint is not linear; the distance-2 mixer requires the "
                           "equality form with constant-weight feasible solutions")
        check = check_theorem_conditions(constraint)
        if constraint.kind != "equality":
            return False, "distance-2 mixer requires an equality constraint"
        if not check.thm1_applicable:
            return False, f"distance-2 mixer inapplicable: {check.witness}"
        return True, ""
    if kind == "ring_xy":
        omega = problems.feasible_set(problem)
        if len({x.bit_count() for x in omega}) > 1:
            return False, "mixer not weight-preserving for this feasible set"
        return True, ""
    return True, ""


@dataclass(eq=False)
class ComparisonRow:
    mixer: str
    p: int
    regularity: int | None
    optimal_probability: float | None
    expectation: float | None
    infeasible_probability: float | None
    seed: int
    error: str = ""


def compare_mixers(problem: ProblemInstance, kinds: list[str], p_values: list[int],
                   config: RunConfig, threads: int = 1) -> list[ComparisonRow]:
    """Run every (mixer kind, p) combination and tabulate the outcomes.

    Inapplicable kinds produce an error row and the sweep continues.  The
    pseudo-kind "projected-c" runs the projected-cost scheme on the plain
    transverse field.
    """
    omega = problems.feasible_set(problem)
    rows = []
    for kind in kinds:
        applicable, reason = (True, "") if kind == "projected-c" else mixer_applicability(problem, kind)
        if not applicable:
            for p in p_values:
                rows.append(ComparisonRow(kind, p, None, None, None, None, config.seed, reason))
            continue
        if kind == "projected-c":
            mixer = engine.build_mixer(problem, "transverse_field")
        else:
            mixer = engine.build_mixer(problem, kind, omega, config.star_center)
        report = mixer_report(mixer, omega)
        for p in p_values:
            if kind == "projected-c":
                result = engine.run_projected_scheme(problem, replace(config, p=p, mixer="transverse_field"),
                                                     threads=threads)
            else:
                result = engine.optimize(problem, replace(config, p=p, mixer=kind), threads=threads)
            rows.append(ComparisonRow(
                mixer=kind,
                p=p,
                regularity=report.regularity,
                optimal_probability=result.optimal_probability,
                expectation=result.expectation,
                infeasible_probability=result.infeasible_probability,
                seed=config.seed,
            ))
    return rows
