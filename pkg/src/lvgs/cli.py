"""Command-line entry point.

Exit codes: 0 cleared, 2 unclearable, 3 timeout or state limit, 1 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import experiments
from .generators import GeneratorParams
from .graph_core import GraphError, load_graph
from .info_search import (
    SearchTimeout,
    StateOverflow,
    build_info_graph_eager,
    export_dot,
    solve,
    solve_dfs,
)
from .naive_solver import StateLimitExceeded, solve_naive
from .visibility import VisibilityError, build_visibility, parse_visibility_arg

EXIT_OK, EXIT_ERROR, EXIT_UNCLEARABLE, EXIT_TIMEOUT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _write(path, text):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _load(args):
    try:
        g = load_graph(args.graph)
    except OSError as exc:
        raise UsageError(f"{args.graph}: {exc.strerror}") from exc
    except GraphError as exc:
        raise UsageError(f"{args.graph}: {exc}") from exc
    try:
        b = build_visibility(g, parse_visibility_arg(args.visibility))
    except OSError as exc:
        raise UsageError(f"{exc.filename}: {exc.strerror}") from exc
    except (VisibilityError, GraphError) as exc:
        raise UsageError(str(exc)) from exc
    return g, b


def _common(p, solver_opts=True):
    p.add_argument("--graph", required=True, help="graph JSON file")
    p.add_argument("--visibility", default="range:1", help="range:L | matrix:PATH | line[:eps]")
    p.add_argument("--semantics", choices=("concurrent", "sequential"), default="concurrent",
                   help="whether the target may move while the searcher travels (default: concurrent)")
    p.add_argument("--schedule", help="write schedule JSON here")
    if solver_opts:
        p.add_argument("--timeout", type=float, default=300.0, help="wall-clock budget in seconds")


def cmd_solve(args, solver=None) -> int:
    g, b = _load(args)
    solver = solver or args.solver
    try:
        if solver == "dfs":
            sched = solve_dfs(g, b, timeout=args.timeout, semantics=args.semantics)
        else:
            sched = solve(g, b, mode=args.mode, timeout=args.timeout, max_states=args.max_states,
                          semantics=args.semantics)
    except SearchTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except StateOverflow as exc:
        print(f"state limit: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    if args.schedule:
        _write(args.schedule, sched.to_json() + "\n")
    if getattr(args, "dot", None):
        try:
            ig = build_info_graph_eager(g, b, args.max_states, args.semantics)
        except StateOverflow as exc:
            print(f"state limit: {exc}", file=sys.stderr)
            return EXIT_TIMEOUT
        _write(args.dot, export_dot(ig))
    if sched.clearable:
        print(f"clearable: cost {sched.cost}, place at {sched.placement}, moves {sched.moves} "
              f"({sched.states_expanded} states expanded)")
        return EXIT_OK
    print(f"unclearable: cost inf ({sched.states_expanded} states expanded)")
    return EXIT_UNCLEARABLE


def cmd_oracle(args) -> int:
    g, b = _load(args)
    speed = None if args.speed == "inf" else int(args.speed)
    if speed is not None and speed < 1:
        raise UsageError("--speed must be a positive integer or inf")
    try:
        res = solve_naive(g, b, k=args.searchers, speed=speed, semantics=args.semantics,
                          max_states=args.max_states)
    except StateLimitExceeded as exc:
        print(f"state limit: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    if args.schedule:
        doc = {
            "clearable": res.clearable,
            "cost": res.cost,
            "placement": list(res.placement) if res.placement else None,
            "moves": [list(m) for m in res.moves],
        }
        _write(args.schedule, json.dumps(doc, separators=(",", ":")) + "\n")
    if res.clearable:
        print(f"clearable: cost {res.cost}, place at {list(res.placement)}, moves {[list(m) for m in res.moves]}")
        return EXIT_OK
    print("unclearable: cost inf")
    return EXIT_UNCLEARABLE


def cmd_export_dot(args) -> int:
    g, b = _load(args)
    try:
        ig = build_info_graph_eager(g, b, args.max_states, args.semantics)
    except StateOverflow as exc:
        print(f"state limit: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    _write(args.out, export_dot(ig))
    return EXIT_OK


def cmd_gen(args) -> int:
    family = {"tree": "complete-binary-tree", "cbt": "complete-binary-tree"}.get(args.family, args.family)
    try:
        params = GeneratorParams(family, n=args.n, depth=args.depth, rows=args.rows, cols=args.cols,
                                 max_depth=args.max_depth, p=args.p, seed=args.seed)
        g = params.build()
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    _write(args.out, g.to_json() + "\n")
    return EXIT_OK


def cmd_suite(args) -> int:
    if args.family not in experiments.SUITE_FAMILIES:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(experiments.SUITE_FAMILIES)}")
    try:
        Ls = experiments.parse_range(args.L)
        if args.family == "grids":
            sizes = [experiments.parse_size(s) for s in args.sizes.split(",")] if args.sizes else experiments.DEFAULT_GRID_SIZES
        else:
            sizes = [experiments.parse_size(s) for s in (args.sizes or "3x3").split(",")]
        instances = experiments.make_instances(
            args.family,
            n=experiments.parse_range(args.n),
            depth=experiments.parse_range(args.depth),
            sizes=sizes,
            count=args.count,
            max_depth=args.max_depth,
            p=args.p,
            seed=args.seed,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = experiments.run_suite(instances, Ls, timeout=args.timeout, jobs=args.jobs,
                                 semantics=args.semantics)
    _write(args.out, experiments.rows_to_csv(rows, with_times=not args.omit_times))
    groups = [f"{r}x{c}" for r, c in sizes] if args.family == "deleted-grids" else [None]
    for grp in groups:
        stats = experiments.suite_stats(rows, grp)
        if stats:
            title = f"{args.family} {grp}" if grp else args.family
            sys.stderr.write(experiments.format_stats(stats, title))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lvgs", description="Limited-visibility graph search solver")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="optimal clearing schedule via the information graph")
    _common(p)
    p.add_argument("--solver", choices=("dijkstra", "dfs"), default="dijkstra")
    p.add_argument("--mode", choices=("lazy", "eager"), default="lazy")
    p.add_argument("--max-states", type=int, default=1 << 22, help="cap for eager construction")
    p.add_argument("--dot", help="write the eager information graph as DOT here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("dfs", help="some clearing schedule via depth-first search")
    _common(p)
    p.add_argument("--max-states", type=int, default=1 << 22)
    p.add_argument("--dot", help="write the eager information graph as DOT here")
    p.set_defaults(func=lambda a: cmd_solve(a, solver="dfs"), mode="lazy")

    p = sub.add_parser("oracle", help="brute force over full states (small graphs)")
    _common(p, solver_opts=False)
    p.add_argument("--speed", default="inf", help="target speed: inf or a positive integer")
    p.add_argument("--searchers", type=int, default=1)
    p.add_argument("--max-states", type=int, default=1 << 24)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("export-dot", help="write the eager information graph as DOT")
    p.add_argument("--graph", required=True)
    p.add_argument("--visibility", default="range:1")
    p.add_argument("--semantics", choices=("concurrent", "sequential"), default="concurrent")
    p.add_argument("--max-states", type=int, default=1 << 16)
    p.add_argument("--out")
    p.set_defaults(func=cmd_export_dot)

    p = sub.add_parser("gen", help="generate a graph JSON")
    p.add_argument("--family", required=True,
                   help="path | complete-binary-tree | grid | random-tree | deleted-grid")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--rows", type=int, default=2)
    p.add_argument("--cols", type=int, default=2)
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", help="run an experiment family and emit CSV")
    p.add_argument("--family", required=True, help=" | ".join(experiments.SUITE_FAMILIES))
    p.add_argument("--n", default="1..20", help="path lengths (paths)")
    p.add_argument("--depth", default="1..4", help="tree depths (trees)")
    p.add_argument("--sizes", help="comma-separated RxC sizes (grids, deleted-grids)")
    p.add_argument("--L", default="1..4", help="visibility ranges")
    p.add_argument("--count", type=int, default=100, help="instances per size (random families)")
    p.add_argument("--max-depth", type=int, default=5)
    p.add_argument("--p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--timeout", type=float, default=300.0, help="per-instance budget in seconds")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--semantics", choices=("concurrent", "sequential"), default="concurrent")
    p.add_argument("--omit-times", action="store_true", help="leave time_ms empty for byte-stable output")
    p.add_argument("--out")
    p.set_defaults(func=cmd_suite)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
