"""Exact QAOA simulation with constraint-preserving mixer operators.

Feasibility constraints of NP optimization problems are encoded directly in
the mixing operator (distance, ring-XY and star constructions) or,
alternatively, projected into the cost operator, and the alternating
evolution is simulated exactly on the state vector.
"""

from .analysis import (ComparisonRow, MixerReport, TheoremCheck, check_theorem_conditions,
                       compare_mixers, mixer_applicability, mixer_report)
from .engine import (QaoaSchedule, RestartTrace, RunConfig, RunResult, build_mixer, evolve,
                     objective, optimize, project_cost, run_projected_scheme)
from .mixers import (MixerOperator, build_distance_mixer, build_ring_xy_mixer, build_star_mixer,
                     build_transverse_field, star_exponential_apply)
from .problems import (ENUMERATION_CAP, EnumerationCapExceeded, FeasibleSet, GraphPartition,
                       LinearConstraint, MultiProcessorScheduling, ProblemInstance, SetPacking,
                       VertexCover, brute_force_optima, cost_operator, feasible_set,
                       feasible_set_from_constraint, linear_constraint, quality, qubit_count,
                       trivial_feasible, validate)
from .qstate import (DiagonalCost, KrylovConvergenceError, QuantumState, SparseHermitian,
                     apply_cost_phase, apply_hermitian_exponential, basis_state, distribution,
                     expectation, format_bits, parse_bits, uniform_state_over)

__version__ = "0.1.0"

__all__ = [
    "ComparisonRow", "MixerReport", "TheoremCheck", "check_theorem_conditions",
    "compare_mixers", "mixer_applicability", "mixer_report",
    "QaoaSchedule", "RestartTrace", "RunConfig", "RunResult", "build_mixer", "evolve",
    "objective", "optimize", "project_cost", "run_projected_scheme",
    "MixerOperator", "build_distance_mixer", "build_ring_xy_mixer", "build_star_mixer",
    "build_transverse_field", "star_exponential_apply",
    "ENUMERATION_CAP", "EnumerationCapExceeded", "FeasibleSet", "GraphPartition",
    "LinearConstraint", "MultiProcessorScheduling", "ProblemInstance", "SetPacking",
    "VertexCover", "brute_force_optima", "cost_operator", "feasible_set",
    "feasible_set_from_constraint", "linear_constraint", "quality", "qubit_count",
    "trivial_feasible", "validate",
    "DiagonalCost", "KrylovConvergenceError", "QuantumState", "SparseHermitian",
    "apply_cost_phase", "apply_hermitian_exponential", "basis_state", "distribution",
    "expectation", "format_bits", "parse_bits", "uniform_state_over",
]
