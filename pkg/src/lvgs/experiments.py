"""Experiment suites: instance lists per family, per-instance solving, CSV and summary stats."""

from __future__ import annotations

import csv
import io
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

from .generators import (
    derive_seed,
    gen_complete_binary_tree,
    gen_deleted_grid,
    gen_grid,
    gen_path,
    gen_random_tree,
)
from .info_search import SearchTimeout, solve
from .visibility import range_visibility

CSV_COLUMNS = ["family", "instance", "params", "L", "clearable", "cost", "states_expanded", "time_ms"]
SUITE_FAMILIES = ("paths", "trees", "grids", "random-trees", "deleted-grids")
DEFAULT_GRID_SIZES = [
    (2, 2), (2, 3), (2, 4), (2, 5), (2, 6),
    (3, 3), (3, 4), (3, 5), (3, 6),
    (4, 4), (4, 5), (4, 6),
    (5, 5), (5, 6),
    (6, 6),
]


@dataclass(frozen=True)
class Instance:
    family: str
    instance_id: int
    params: str
    build_args: tuple


@dataclass
class SuiteResultRow:
    family: str
    instance_id: int
    params: str
    L: int
    clearable: Optional[bool]  # None when the solver timed out
    cost: Optional[int]
    states_expanded: int
    wall_ms: float

    @property
    def timed_out(self) -> bool:
        return self.clearable is None

    def csv_fields(self, with_times: bool = True) -> list[str]:
        if self.timed_out:
            clearable, cost = "n/a", "n/a"
        elif self.clearable:
            clearable, cost = "true", str(self.cost)
        else:
            clearable, cost = "false", "inf"
        t = f"{self.wall_ms:.3f}" if with_times else ""
        return [self.family, str(self.instance_id), self.params, str(self.L), clearable, cost,
                str(self.states_expanded), t]


def parse_range(text: str) -> list[int]:
    """``"3"``, ``"1..4"`` or ``"1,3,5"`` to a list of ints."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def parse_size(text: str) -> tuple[int, int]:
    r, _, c = text.lower().partition("x")
    return int(r), int(c)


def make_instances(family: str, *, n: Iterable[int] = (), depth: Iterable[int] = (),
                   sizes: Iterable[tuple[int, int]] = (), count: int = 0, max_depth: int = 5,
                   p: float = 0.5, seed: int = 0) -> list[Instance]:
    if family == "paths":
        return [Instance(family, i, f"n={k}", ("path", k)) for i, k in enumerate(n)]
    if family == "trees":
        return [Instance(family, i, f"depth={d}", ("cbt", d)) for i, d in enumerate(depth)]
    if family == "grids":
        return [Instance(family, i, f"{r}x{c}", ("grid", r, c)) for i, (r, c) in enumerate(sizes)]
    if family == "random-trees":
        out = []
        for i in range(count):
            s = derive_seed(seed, i)
            out.append(Instance(family, i, f"max_depth={max_depth};seed={s}", ("rtree", max_depth, s)))
        return out
    if family == "deleted-grids":
        out = []
        for (r, c) in sizes:
            for i in range(count):
                s = derive_seed(seed, i)
                iid = len(out)
                out.append(Instance(family, iid, f"{r}x{c};p={p:g};seed={s}", ("dgrid", r, c, p, s)))
        return out
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(SUITE_FAMILIES)}")


def build_graph(args: tuple):
    kind = args[0]
    if kind == "path":
        return gen_path(args[1])
    if kind == "cbt":
        return gen_complete_binary_tree(args[1])
    if kind == "grid":
        return gen_grid(args[1], args[2])
    if kind == "rtree":
        return gen_random_tree(args[1], args[2])
    if kind == "dgrid":
        return gen_deleted_grid(*args[1:])
    raise ValueError(kind)


def run_one(inst: Instance, L: int, timeout: Optional[float], semantics: str = "concurrent") -> SuiteResultRow:
    g = build_graph(inst.build_args)
    b = range_visibility(g, L)
    t0 = time.perf_counter()
    try:
        s = solve(g, b, timeout=timeout, trace=False, semantics=semantics)
        clearable, cost, expanded = s.clearable, s.cost, s.states_expanded
    except SearchTimeout as exc:
        clearable, cost, expanded = None, None, exc.states_expanded
    ms = (time.perf_counter() - t0) * 1000.0
    return SuiteResultRow(inst.family, inst.instance_id, inst.params, L, clearable, cost, expanded, ms)


def _run_packed(job):
    return run_one(*job)


def run_suite(instances: list[Instance], Ls: list[int], timeout: Optional[float] = 300.0,
              jobs: int = 1, semantics: str = "concurrent") -> list[SuiteResultRow]:
    work = [(inst, L, timeout, semantics) for inst in instances for L in Ls]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_packed, work, chunksize=8))
    else:
        rows = [_run_packed(w) for w in work]
    rows.sort(key=lambda r: (r.instance_id, r.L))
    return rows


def rows_to_csv(rows: list[SuiteResultRow], with_times: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in rows:
        w.writerow(r.csv_fields(with_times))
    return buf.getvalue()


@dataclass
class SuiteStats:
    L: int
    cleared: int
    total: int
    timed_out: int
    avg_length: Optional[float]
    max_length: Optional[int]
    min_length: Optional[int]
    avg_ms: Optional[float]
    max_ms: Optional[float]
    min_ms: Optional[float]


def suite_stats(rows: list[SuiteResultRow], group: Optional[str] = None) -> list[SuiteStats]:
    """Per-L aggregates; clearing lengths are taken over cleared instances only."""
    out = []
    for L in sorted({r.L for r in rows}):
        sel = [r for r in rows if r.L == L and (group is None or r.params.split(";")[0] == group)]
        if not sel:
            continue
        lengths = [r.cost for r in sel if r.clearable]
        times = [r.wall_ms for r in sel]
        out.append(SuiteStats(
            L=L,
            cleared=len(lengths),
            total=len(sel),
            timed_out=sum(r.timed_out for r in sel),
            avg_length=statistics.fmean(lengths) if lengths else None,
            max_length=max(lengths) if lengths else None,
            min_length=min(lengths) if lengths else None,
            avg_ms=statistics.fmean(times) if times else None,
            max_ms=max(times) if times else None,
            min_ms=min(times) if times else None,
        ))
    return out


def format_stats(stats: list[SuiteStats], title: str = "") -> str:
    def f(x, nd=2):
        if x is None:
            return "-"
        return f"{x:.{nd}f}" if isinstance(x, float) else str(x)

    head = ["L"] + [str(s.L) for s in stats]
    body = [
        ["Number of Cleared Graphs"] + [f"{s.cleared}/{s.total}" for s in stats],
        ["Average Clearing Length"] + [f(s.avg_length) for s in stats],
        ["Maximum Clearing Length"] + [f(s.max_length) for s in stats],
        ["Minimum Clearing Length"] + [f(s.min_length) for s in stats],
        ["Average Calculation Time (ms)"] + [f(s.avg_ms, 1) for s in stats],
        ["Maximum Calculation Time (ms)"] + [f(s.max_ms, 1) for s in stats],
        ["Minimum Calculation Time (ms)"] + [f(s.min_ms, 1) for s in stats],
        ["Timed Out"] + [str(s.timed_out) for s in stats],
    ]
    width = max(len(r[0]) for r in body + [head])
    lines = [title] if title else []
    for row in [head] + body:
        lines.append(row[0].ljust(width) + "  " + "  ".join(c.rjust(8) for c in row[1:]))
    return "\n".join(lines) + "\n"
