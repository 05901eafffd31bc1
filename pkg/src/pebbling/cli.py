"""Command-line interface: ``pebbling <command> ...``.

Exit status: 0 on success, 1 when a verdict or bound check fails, 2 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from pebbling import bench as bench_mod
from pebbling import oracle
from pebbling.decomposition import decompose, merge_small_parts
from pebbling.errors import PebblingError, PreconditionError
from pebbling.generators import FAMILIES, InstanceSpec, generate
from pebbling.graph import boundary_profile, topological_sort
from pebbling.io import emit_dot, emit_edge_list, parse_dag, vertex_ids
from pebbling.schedule import format_moves, parse_moves, verify_full
from pebbling.schedulers import STRATEGIES, run_strategy

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args):
    return parse_dag(_read(args.graph), args.format)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _spec_from_args(args) -> InstanceSpec:
    return InstanceSpec(
        family=args.family, n=args.n, height=args.height, width=args.width,
        layers=args.layers, degree=args.degree, hub_fraction=args.hub_fraction, seed=args.seed,
    )


def cmd_gen(args) -> int:
    dag = generate(_spec_from_args(args))
    sys.stdout.write(emit_dot(dag) if args.output_format == "dot" else emit_edge_list(dag))
    return EXIT_OK


def cmd_stats(args) -> int:
    dag = _load(args)
    prof = boundary_profile(dag, topological_sort(dag))
    names = dag.names
    out = {
        "n": dag.n, "m": dag.m, "d": dag.d, "d_avg": str(dag.avg_in_degree),
        "depth": dag.depth, "max_boundary": prof.max_value, "argmax": prof.argmax,
        "sources": [names[v] for v in dag.sources()], "sinks": [names[v] for v in dag.sinks()],
    }
    print(json.dumps(out))
    return EXIT_OK


def cmd_decompose(args) -> int:
    dag = _load(args)
    dec = decompose(dag, topological_sort(dag), args.budget)
    if args.merge and dag.d >= 2:
        dec = merge_small_parts(dag, dec, dag.d)
    data = dec.to_json()
    data["parts"] = [[dag.name(v) for v in seg] for seg in data["parts"]]
    data["levels"] = dec.levels
    print(json.dumps(data))
    return EXIT_OK


def cmd_schedule(args) -> int:
    dag = _load(args)
    opts = {"budget": args.budget} if args.budget is not None else {}
    if opts and args.strategy != "decomposition":
        raise PreconditionError("--budget only applies to the decomposition strategy")
    rep = run_strategy(args.strategy, dag, **opts)
    if args.emit == "moves":
        for line in format_moves(rep.schedule, dag.names):
            sys.stdout.write(line + "\n")
        return EXIT_OK
    verdict = verify_full(dag, rep.schedule)
    if args.emit == "metrics":
        out = verdict.metrics.to_json(dag.names) if verdict.metrics else {"verdict": str(verdict)}
    else:
        out = rep.to_json(verdict.metrics)
        out["verdict"] = str(verdict)
    print(json.dumps(out))
    ok = verdict.ok and verdict.metrics.peak <= rep.space_bound
    return EXIT_OK if ok else EXIT_FAIL


def cmd_verify(args) -> int:
    dag = _load(args)
    sched = parse_moves(_read(args.schedule), vertex_ids(dag))
    verdict = verify_full(dag, sched)
    out = {"verdict": str(verdict)}
    if verdict.metrics:
        out.update(verdict.metrics.to_json(dag.names))
    print(json.dumps(out))
    return EXIT_OK if verdict.ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    dag = _load(args)
    names = dag.names
    if args.what == "pebbles":
        res = oracle.optimal_pebbles(dag, oracle.SearchBudget(args.max_pebbles, args.max_states, args.timeout))
        print(json.dumps({"optimal": res.value, "states": res.states, "reason": res.reason}))
        return EXIT_OK if res.exact else EXIT_FAIL
    fn = oracle.brute_force_separator if args.what == "separator" else oracle.heuristic_separator
    left, sep, right = fn(dag)
    print(json.dumps({k: sorted(names[v] for v in s) for k, s in (("L", left), ("S", sep), ("R", right))}))
    return EXIT_OK


def cmd_bench(args) -> int:
    strategies = args.strategies.split(",")
    unknown = [s for s in strategies if s not in STRATEGIES]
    if unknown:
        raise PreconditionError(f"unknown strategies: {', '.join(unknown)}")
    specs: list[InstanceSpec] = []
    if args.instances:
        specs = [InstanceSpec.from_json(d) for d in json.loads(_read(args.instances))]
    elif args.family:
        for seed in args.seeds:
            specs.append(_spec_from_args(argparse.Namespace(**{**vars(args), "seed": seed})))
    rows = bench_mod.bench(strategies, specs, jobs=args.jobs, move_cap=args.move_cap)
    text = bench_mod.to_csv(rows)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_FAIL if any(r["status"] in ("violated", "error") for r in rows) else EXIT_OK


def _add_graph(p) -> None:
    p.add_argument("graph", help="edge-list or DOT file ('-' for stdin)")
    p.add_argument("--format", choices=("edges", "dot"), default=None, help="input format (auto-detected)")


def _add_spec(p, family_required: bool) -> None:
    p.add_argument("family", choices=FAMILIES) if family_required else p.add_argument(
        "--family", choices=FAMILIES
    )
    p.add_argument("--n", type=int)
    p.add_argument("--height", type=int)
    p.add_argument("--width", type=int)
    p.add_argument("--layers", type=int)
    p.add_argument("--degree", type=int, default=2)
    p.add_argument("--hub-fraction", type=float, default=0.05)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pebbling", description="Construct and verify pebbling schedules for DAGs.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate an instance")
    _add_spec(p, True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-format", choices=("edges", "dot"), default="edges")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("stats", help="graph statistics as JSON")
    _add_graph(p)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("decompose", help="budget decomposition as JSON")
    _add_graph(p)
    p.add_argument("--budget", "-B", type=_fraction, required=True, help="budget B (e.g. 3 or 7/2)")
    p.add_argument("--merge", action="store_true", help="merge parts smaller than d")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("schedule", help="build a schedule")
    _add_graph(p)
    p.add_argument("--strategy", "-s", choices=tuple(STRATEGIES), default="topo")
    p.add_argument("--budget", "-B", type=_fraction, help="budget for the decomposition strategy")
    p.add_argument("--emit", choices=("report", "metrics", "moves"), default="report")
    p.set_defaults(func=cmd_schedule)

    p = sub.add_parser("verify", help="check a schedule file against a graph")
    _add_graph(p)
    p.add_argument("schedule", help="schedule file, one move per line")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact pebbling number or separators")
    _add_graph(p)
    p.add_argument("what", choices=("pebbles", "separator", "heuristic-separator"))
    p.add_argument("--max-pebbles", type=int, default=16)
    p.add_argument("--max-states", type=int, default=2_000_000)
    p.add_argument("--timeout", type=float, default=60.0)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="benchmark strategies, CSV out")
    p.add_argument("--strategies", default="topo,general")
    p.add_argument("--instances", help="JSON file holding a list of instance specs")
    _add_spec(p, False)
    p.add_argument("--seeds", type=lambda s: [int(x) for x in s.split(",")], default=[0])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--move-cap", type=int, default=bench_mod.DEFAULT_MOVE_CAP)
    p.add_argument("--out", help="write CSV here instead of stdout")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PebblingError, OSError, ValueError, TypeError) as exc:
        print(f"pebbling {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
