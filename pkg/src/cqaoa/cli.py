"""Command-line front end: run single experiments, sweeps, brute-force oracles and graph dumps.

Problem files are JSON documents with a ``type`` tag:

* ``{"type": "graph_partition", "n": 4, "edges": [[0, 1], ...]}``
* ``{"type": "mps", "processors": 2, "times": [3, 4, 8, 2, 5],
    "conflicts": [[2, 3], ...], "colocations": [[2, 4], ...]}``
* ``{"type": "set_packing", "universe": 6, "subsets": [[0, 2], [1], ...]}``
* ``{"type": "vertex_cover", "n": 6, "edges": [[0, 4], ...]}``

Vertices, elements and tasks are 0-indexed.  Bit strings print most
significant bit first, so variable 0 is the rightmost character.

Exit codes: 0 success, 2 schema or usage violation, 3 inapplicable mixer,
4 enumeration cap exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

from . import analysis, engine, problems
from .problems import (EnumerationCapExceeded, GraphPartition, MultiProcessorScheduling,
                       ProblemInstance, SetPacking, VertexCover)
from .qstate import format_bits, parse_bits

SCHEMA_VERSION = 1

MIXER_FLAGS = {
    "distance2": "distance2",
    "distance1": "distance1",
    "ring-xy": "ring_xy",
    "star": "star",
    "transverse": "transverse_field",
    "projected-c": "projected-c",
}
INIT_FLAGS = {
    "uniform-feasible": "uniform_feasible",
    "trivial": "trivial_basis",
    "uniform-all": "uniform_all",
}


class ProblemSchemaError(ValueError):
    pass


class MixerNotApplicable(RuntimeError):
    pass


def _require_fields(data: dict, required: set, defaults: dict | None = None) -> dict:
    defaults = defaults or {}
    unknown = set(data) - required - set(defaults) - {"type"}
    if unknown:
        raise ProblemSchemaError(f"unknown fields {sorted(unknown)} in problem document")
    missing = required - set(data)
    if missing:
        raise ProblemSchemaError(f"missing fields {sorted(missing)} in problem document")
    out = dict(defaults)
    out.update({k: v for k, v in data.items() if k != "type"})
    return out


def _pairs(value, what: str) -> list[tuple[int, int]]:
    if not isinstance(value, list) or any(
        not isinstance(p, list) or len(p) != 2 or not all(isinstance(e, int) for e in p)
        for p in value
    ):
        raise ProblemSchemaError(f"{what} must be a list of [i, j] integer pairs")
    return [(p[0], p[1]) for p in value]


def parse_problem(data) -> ProblemInstance:
    if not isinstance(data, dict) or "type" not in data:
        raise ProblemSchemaError("problem document must be a JSON object with a 'type' field")
    kind = data["type"]
    try:
        if kind == "graph_partition":
            fields = _require_fields(data, {"n", "edges"})
            return GraphPartition(fields["n"], tuple(_pairs(fields["edges"], "edges")))
        if kind == "mps":
            fields = _require_fields(data, {"processors", "times"},
                                     {"conflicts": [], "colocations": []})
            return MultiProcessorScheduling(
                fields["processors"], tuple(fields["times"]),
                tuple(_pairs(fields["conflicts"], "conflicts")),
                tuple(_pairs(fields["colocations"], "colocations")))
        if kind == "set_packing":
            fields = _require_fields(data, {"universe", "subsets"})
            return SetPacking(fields["universe"], tuple(frozenset(s) for s in fields["subsets"]))
        if kind == "vertex_cover":
            fields = _require_fields(data, {"n", "edges"})
            return VertexCover(fields["n"], tuple(_pairs(fields["edges"], "edges")))
    except (ValueError, TypeError) as exc:
        if isinstance(exc, ProblemSchemaError):
            raise
        raise ProblemSchemaError(str(exc)) from exc
    raise ProblemSchemaError(f"unknown problem type {kind!r}")


def problem_to_dict(problem: ProblemInstance) -> dict:
    if isinstance(problem, GraphPartition):
        return {"type": "graph_partition", "n": problem.vertices,
                "edges": [list(e) for e in problem.edges]}
    if isinstance(problem, MultiProcessorScheduling):
        return {"type": "mps", "processors": problem.processors, "times": list(problem.times),
                "conflicts": [list(p) for p in problem.conflicts],
                "colocations": [list(p) for p in problem.colocations]}
    if isinstance(problem, SetPacking):
        return {"type": "set_packing", "universe": problem.universe_size,
                "subsets": [sorted(s) for s in problem.subsets]}
    if isinstance(problem, VertexCover):
        return {"type": "vertex_cover", "n": problem.vertices,
                "edges": [list(e) for e in problem.edges]}
    raise TypeError(f"unknown problem type {type(problem).__name__}")


def load_problem(path: str) -> ProblemInstance:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ProblemSchemaError(f"cannot read problem file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemSchemaError(f"problem file is not valid JSON: {exc}") from exc
    return parse_problem(data)


def _positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be at least 1")
    return n


def _p_range(value: str) -> list[int]:
    try:
        lo, hi = value.split("..")
        lo, hi = int(lo), int(hi)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a range like 3..5")
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError("range bounds must satisfy 1 <= a <= b")
    return list(range(lo, hi + 1))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cqaoa",
                                     description="Exact QAOA runs with constraint-preserving mixers.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, mixers=True):
        sp.add_argument("--problem", required=True, help="path to a problem JSON file")
        if mixers:
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--restarts", type=_positive_int, default=20)
            sp.add_argument("--tol", type=float, default=1e-8)
            sp.add_argument("--max-evals", type=_positive_int, default=5000)
            sp.add_argument("--init", choices=sorted(INIT_FLAGS), default="uniform-feasible")
            sp.add_argument("--star-center", default=None,
                            help="star mixer center as a bit string (default: trivial feasible)")
            sp.add_argument("--threads", type=_positive_int, default=1)
        sp.add_argument("--out", default=None, help="write output to this path instead of stdout")

    run = sub.add_parser("run", help="optimize one problem with one mixer")
    common(run)
    run.add_argument("--mixer", choices=sorted(MIXER_FLAGS), required=True)
    run.add_argument("--p", type=_positive_int, required=True)
    run.set_defaults(func=cmd_run)

    comp = sub.add_parser("compare", help="sweep mixers and depths, emit CSV")
    common(comp)
    comp.add_argument("--mixers", nargs="+", choices=sorted(MIXER_FLAGS), required=True)
    group = comp.add_mutually_exclusive_group(required=True)
    group.add_argument("--p", type=_positive_int)
    group.add_argument("--p-range", type=_p_range)
    comp.set_defaults(func=cmd_compare)

    brute = sub.add_parser("brute", help="brute-force optima with qualities")
    common(brute, mixers=False)
    brute.set_defaults(func=cmd_brute)

    graph = sub.add_parser("graph", help="edge list of the feasible mixer subgraph")
    common(graph, mixers=False)
    graph.add_argument("--mixer", choices=sorted(MIXER_FLAGS), required=True)
    graph.add_argument("--star-center", default=None)
    graph.set_defaults(func=cmd_graph)

    return parser


def _emit(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _config_from_args(args, p: int, mixer_flag: str) -> engine.RunConfig:
    center = parse_bits(args.star_center) if args.star_center else None
    internal = MIXER_FLAGS[mixer_flag]
    return engine.RunConfig(
        p=p,
        mixer="transverse_field" if internal == "projected-c" else internal,
        initial_state="uniform_all" if internal == "projected-c" else INIT_FLAGS[args.init],
        restarts=args.restarts,
        seed=args.seed,
        tolerance=args.tol,
        max_evaluations=args.max_evals,
        star_center=center,
    )


def _check_applicable(problem, mixer_flag: str):
    internal = MIXER_FLAGS[mixer_flag]
    if internal == "projected-c":
        return
    applicable, reason = analysis.mixer_applicability(problem, internal)
    if not applicable:
        raise MixerNotApplicable(reason)


def _result_to_dict(result: engine.RunResult, n: int) -> dict:
    return {
        "schedule": {"gammas": list(result.schedule.gammas), "betas": list(result.schedule.betas)},
        "expectation": result.expectation,
        "distribution": {format_bits(x, n): p for x, p in sorted(result.distribution.items())},
        "optimal_probability": result.optimal_probability,
        "infeasible_probability": result.infeasible_probability,
        "trace": [{"seed": t.seed, "expectation": t.expectation, "evaluations": t.evaluations,
                   "converged": t.converged} for t in result.trace],
        "projected_weights": None if result.projected_weights is None
        else list(result.projected_weights),
    }


def _report_to_dict(report: analysis.MixerReport) -> dict:
    return {
        "node_count": report.node_count,
        "edge_count": report.edge_count,
        "degree_histogram": {str(d): c for d, c in report.degree_histogram.items()},
        "max_degree": report.max_degree,
        "min_degree": report.min_degree,
        "regularity": report.regularity,
        "component_count": report.component_count,
        "component_sizes": list(report.component_sizes),
    }


def cmd_run(args) -> int:
    problem = load_problem(args.problem)
    _check_applicable(problem, args.mixer)
    config = _config_from_args(args, args.p, args.mixer)
    started = time.perf_counter()
    if MIXER_FLAGS[args.mixer] == "projected-c":
        result = engine.run_projected_scheme(problem, config, threads=args.threads)
    else:
        result = engine.optimize(problem, config, threads=args.threads)
    duration = time.perf_counter() - started
    omega = problems.feasible_set(problem)
    mixer = engine.build_mixer(problem, config.mixer, omega, config.star_center)
    n = problems.qubit_count(problem)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "problem": problem_to_dict(problem),
        "config": {
            "mixer": args.mixer,
            "p": args.p,
            "initial_state": args.init,
            "restarts": args.restarts,
            "seed": args.seed,
            "tolerance": args.tol,
            "max_evaluations": args.max_evals,
            "star_center": format_bits(config.star_center, n) if config.star_center is not None else None,
            "threads": args.threads,
        },
        "result": _result_to_dict(result, n),
        "mixer_report": _report_to_dict(analysis.mixer_report(mixer, omega)),
        "duration_seconds": duration,
    }
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_compare(args) -> int:
    problem = load_problem(args.problem)
    p_values = args.p_range if args.p_range else [args.p]
    # per-row mixer and p are substituted inside the sweep
    config = engine.RunConfig(
        p=p_values[0],
        mixer="distance1",
        initial_state=INIT_FLAGS[args.init],
        restarts=args.restarts,
        seed=args.seed,
        tolerance=args.tol,
        max_evaluations=args.max_evals,
        star_center=parse_bits(args.star_center) if args.star_center else None,
    )
    kinds = [MIXER_FLAGS[m] for m in args.mixers]
    rows = analysis.compare_mixers(problem, kinds, p_values, config, threads=args.threads)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["mixer", "p", "regularity", "optimal_probability", "expectation",
                     "infeasible_probability", "seed", "error"])
    flag_of = {v: k for k, v in MIXER_FLAGS.items()}
    for row in rows:
        writer.writerow([
            flag_of[row.mixer], row.p,
            "" if row.regularity is None else row.regularity,
            "" if row.optimal_probability is None else repr(row.optimal_probability),
            "" if row.expectation is None else repr(row.expectation),
            "" if row.infeasible_probability is None else repr(row.infeasible_probability),
            row.seed, row.error,
        ])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_brute(args) -> int:
    problem = load_problem(args.problem)
    optima = problems.brute_force_optima(problem)
    n = problems.qubit_count(problem)
    payload = [{"bits": format_bits(x, n), "quality": problems.quality(problem, x)} for x in optima]
    _emit(json.dumps(payload, indent=2) + "\n", args.out)
    return 0


def cmd_graph(args) -> int:
    problem = load_problem(args.problem)
    _check_applicable(problem, args.mixer)
    internal = MIXER_FLAGS[args.mixer]
    kind = "transverse_field" if internal == "projected-c" else internal
    omega = problems.feasible_set(problem)
    center = parse_bits(args.star_center) if args.star_center else None
    mixer = engine.build_mixer(problem, kind, omega, center)
    report = analysis.mixer_report(mixer, omega)
    n = problems.qubit_count(problem)
    lines = [
        f"# mixer={args.mixer} nodes={report.node_count} edges={report.edge_count}"
        f" max_degree={report.max_degree} min_degree={report.min_degree}"
        f" regularity={report.regularity} components={report.component_count}"
    ]
    for u, v in analysis.induced_edges(mixer, omega):
        lines.append(f"{format_bits(u, n)} {format_bits(v, n)}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProblemSchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except MixerNotApplicable as exc:
        print(f"error: mixer not applicable: {exc}", file=sys.stderr)
        return 3
    except EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
