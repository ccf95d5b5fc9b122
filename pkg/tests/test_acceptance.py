"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see only the verdicts.
"""

import random
import subprocess
import sys
import time

import pytest

from lvgs.experiments import make_instances, run_suite, suite_stats
from lvgs.generators import (
    gen_complete_binary_tree,
    gen_grid,
    gen_path,
    random_connected_graph,
)
from lvgs.graph_core import (
    BoolMatrix,
    connected_components,
    full_state_space_size,
    mask_of,
    modified_adjacency,
    star_multiply,
)
from lvgs.info_search import (
    build_info_graph_eager,
    initial_info_state,
    replay,
    solve,
    solve_dfs,
    transition,
    verify_schedule,
)
from lvgs.naive_solver import replay_naive, solve_naive
from lvgs.visibility import range_visibility

from conftest import TREE_COSTS, GRID_COSTS, all_small_family_graphs

SUITE_SEED = 7


def verdict(capsys, number, title, ok, detail=""):
    with capsys.disabled():
        line = f"CRITERION {number} [{title}]: {'PASS' if ok else 'FAIL'}"
        print("\n" + line + (f" ({detail})" if detail else ""))
    assert ok, detail


def cost_or_inf(s):
    return s.cost if s.clearable else None


def test_criterion_01_path_formula(capsys):
    t0 = time.perf_counter()
    bad = []
    for n in range(1, 21):
        g = gen_path(n)
        for L in range(1, 5):
            s = solve(g, range_visibility(g, L), trace=False)
            if not s.clearable or s.cost != max(n - (2 * L + 1), 0):
                bad.append((n, L, cost_or_inf(s)))
    dt = time.perf_counter() - t0
    verdict(capsys, 1, "path formula", not bad and dt < 10, f"{80 - len(bad)}/80 cells, {dt:.2f}s, mismatches {bad}")


def test_criterion_02_complete_binary_trees(capsys):
    bad = []
    t0 = time.perf_counter()
    for depth, row in TREE_COSTS.items():
        g = gen_complete_binary_tree(depth)
        for L, expected in enumerate(row, start=1):
            b = range_visibility(g, L)
            if expected == "n/a":
                t1 = time.perf_counter()
                d = solve_dfs(g, b, timeout=60)
                if not (d.clearable and verify_schedule(g, b, d) and time.perf_counter() - t1 < 60):
                    bad.append((depth, L, "dfs"))
                continue
            got = cost_or_inf(solve(g, b, trace=False))
            if got != expected:
                bad.append((depth, L, got, expected))
    dt = time.perf_counter() - t0
    verdict(capsys, 2, "binary tree costs", not bad and dt < 900, f"{dt:.2f}s, mismatches {bad}")


def test_criterion_03_grids(capsys):
    bad = []
    t0 = time.perf_counter()
    for (r, c), row in GRID_COSTS.items():
        g = gen_grid(r, c)
        for L, expected in enumerate(row, start=1):
            got = cost_or_inf(solve(g, range_visibility(g, L), trace=False))
            if got != expected:
                bad.append((f"{r}x{c}", L, got, expected))
    dt = time.perf_counter() - t0
    verdict(capsys, 3, "grid costs", not bad and dt < 600, f"60 cells, {dt:.2f}s, mismatches {bad}")


def test_criterion_04_state_counts(capsys, tree7, tree7_b):
    count = build_info_graph_eager(tree7, tree7_b).non_lambda_count
    sizes = (full_state_space_size(7), full_state_space_size(10))
    ok = count == 36 and sizes == (897, 10241)
    verdict(capsys, 4, "state-space sizes", ok, f"info states {count}, naive sizes {sizes}")


def test_criterion_05_walk_replay(capsys, tree7, tree7_b):
    expected = [
        ([[4], [5], [6], [7]], [1, 1, 1, 1]),
        ([[3, 6, 7]], [1]),
        ([[4], [5], [6], [7]], [0, 0, 1, 1]),
        ([[2, 4, 5]], [0]),
    ]
    states = replay(tree7, tree7_b, 1, [2, 1, 3])
    got = []
    from lvgs.info_search import SearchSpace

    space = SearchSpace(tree7, tree7_b)
    for st in states:
        entry = space.trace_entry(*space.from_info(st))
        got.append((entry["components"], entry["dirty"]))
    # the transition function agrees step by step
    s = initial_info_state()
    chain = []
    for mv in [1, 2, 1, 3]:
        s = transition(tree7, tree7_b, s, mv)
        chain.append(s)
    ok = got == expected and chain == states and not any(states[-1].comp_dirty)
    verdict(capsys, 5, "reference walk replay", ok, f"rows {got}")


def test_criterion_06_oracle_equivalence(capsys):
    t0 = time.perf_counter()
    graphs = [g for _, _, g in all_small_family_graphs()]
    graphs += [random_connected_graph(2 + i % 6, 1000 + i, 0.25) for i in range(200)]
    bad = []
    checked = 0
    for g in graphs:
        for L in (1, 2):
            b = range_visibility(g, L)
            s = solve(g, b)
            nv = solve_naive(g, b)
            checked += 1
            if s.cost != nv.cost:
                bad.append((g.n, sorted(g.edges), L, s.cost, nv.cost))
                continue
            if s.clearable:
                full = replay_naive(g, b, nv.placement, nv.moves)
                if not verify_schedule(g, b, s) or full[-1].dirty != 0:
                    bad.append((g.n, sorted(g.edges), L, "replay"))
    dt = time.perf_counter() - t0
    verdict(capsys, 6, "oracle equivalence", not bad and dt < 300,
            f"{checked} instance/L pairs, {dt:.1f}s, disagreements {bad[:3]}")


def test_criterion_07_random_trees(capsys):
    rows = run_suite(make_instances("random-trees", count=100, max_depth=5, seed=SUITE_SEED), [1, 2, 3, 4],
                     timeout=None)
    stats = {s.L: s for s in suite_stats(rows)}
    cleared = [stats[L].cleared for L in (1, 2, 3, 4)]
    avg4 = stats[4].avg_length
    ok = all(abs(c - t) <= 10 for c, t in zip(cleared, (81, 100, 100, 100))) and abs(avg4 - 0.36) <= 0.5
    verdict(capsys, 7, "random-tree statistics", ok,
            f"seed {SUITE_SEED}: cleared {cleared} vs (81,100,100,100) +-10, avg length L=4 {avg4:.2f} vs 0.36 +-0.5")


def test_criterion_08_deleted_grids(capsys):
    insts = make_instances("deleted-grids", sizes=[(3, 3), (4, 4)], count=100, p=0.5, seed=SUITE_SEED)
    from lvgs.experiments import build_graph

    connected = all(build_graph(i.build_args).is_connected() for i in insts)
    rows = run_suite(insts, [1, 2, 3, 4], timeout=None)
    pct = {}
    for grp in ("3x3", "4x4"):
        pct[grp] = [s.cleared * 100 // s.total for s in suite_stats(rows, grp)]
    target = {"3x3": [73, 95, 99, 100], "4x4": [44, 91, 96, 99]}
    within = all(abs(a - b) <= 12 for grp in target for a, b in zip(pct[grp], target[grp]))
    ok = connected and within and all(v >= 90 for v in pct["3x3"][1:])
    verdict(capsys, 8, "deleted-grid suite", ok,
            f"seed {SUITE_SEED}: connected={connected}, cleared % 3x3 {pct['3x3']} vs {target['3x3']}, "
            f"4x4 {pct['4x4']} vs {target['4x4']}, +-12 points; 3x3 L>=2 at least 90")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "lvgs.cli", *args], capture_output=True)


def test_criterion_09_determinism(capsys, tmp_path):
    g = tmp_path / "g.json"
    gen = _cli("gen", "--family", "deleted-grid", "--rows", "3", "--cols", "4", "--seed", "11", "--out", str(g))
    assert gen.returncode == 0
    outputs = []
    for run in range(2):
        d = tmp_path / str(run)
        d.mkdir()
        rc = [
            _cli("solve", "--graph", str(g), "--schedule", str(d / "s.json"), "--dot", str(d / "i.dot")).returncode,
            _cli("suite", "--family", "deleted-grids", "--sizes", "3x3", "--count", "10", "--seed", "5",
                 "--omit-times", "--out", str(d / "r.csv")).returncode,
        ]
        outputs.append((rc, [(d / f).read_bytes() for f in ("s.json", "i.dot", "r.csv")]))
    ok = outputs[0] == outputs[1] and all(f for f in outputs[0][1])
    verdict(capsys, 9, "determinism", ok, f"exit codes {outputs[0][0]}, schedule/DOT/CSV byte-identical={ok}")


def test_criterion_10_invariants(capsys):
    rng = random.Random(2024)
    failures = []

    def rand_matrix(r, c):
        return BoolMatrix.from_lists([[rng.randint(0, 1) for _ in range(c)] for _ in range(r)])

    for _ in range(300):
        a, b, c, d = (rng.randint(1, 6) for _ in range(4))
        P, Q, R = rand_matrix(a, b), rand_matrix(b, c), rand_matrix(c, d)
        if star_multiply(star_multiply(P, Q), R) != star_multiply(P, star_multiply(Q, R)):
            failures.append("associativity")
    for i in range(150):
        g = random_connected_graph(rng.randint(2, 8), i, 0.25)
        L = rng.randint(0, 3)
        b = range_visibility(g, L)
        u = rng.randint(1, g.n)
        abar = modified_adjacency(g, b, [u])
        vis = b.bits[u - 1]
        if not abar.is_symmetric() or any(abar.bits[x - 1] and vis >> (x - 1) & 1 for x in g.vertices):
            failures.append("abar")
        if any(abar.bits[x - 1] & vis for x in g.vertices):
            failures.append("abar-columns")
        keep = rng.getrandbits(g.n)
        comps = connected_components(g, keep)
        if mask_of(v for c_ in comps for v in c_) != keep or sum(map(len, comps)) != bin(keep).count("1"):
            failures.append("partition")
        costs = []
        for L2 in range(0, 4):
            bb = range_visibility(g, L2)
            lazy = solve(g, bb, trace=False)
            eager = solve(g, bb, mode="eager", trace=False)
            dfs = solve_dfs(g, bb)
            if lazy.cost != eager.cost:
                failures.append("lazy=eager")
            if dfs.clearable != lazy.clearable or (dfs.clearable and dfs.cost < lazy.cost):
                failures.append("dfs>=dijkstra")
            costs.append(lazy.cost if lazy.clearable else float("inf"))
        if costs != sorted(costs, reverse=True):
            failures.append("monotone")
    verdict(capsys, 10, "invariants", not failures, f"failures {sorted(set(failures))}")
