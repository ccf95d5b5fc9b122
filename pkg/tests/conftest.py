import itertools
from collections import deque

import pytest

from lvgs.generators import gen_complete_binary_tree, gen_grid, gen_path
from lvgs.graph_core import BoolMatrix, Graph
from lvgs.visibility import range_visibility

# Reference tree: complete binary tree of depth 2
TREE7_EDGES = [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)]

TREE7_B = [
    [1, 1, 1, 0, 0, 0, 0],
    [1, 1, 0, 1, 1, 0, 0],
    [1, 0, 1, 0, 0, 1, 1],
    [0, 1, 0, 1, 0, 0, 0],
    [0, 1, 0, 0, 1, 0, 0],
    [0, 0, 1, 0, 0, 1, 0],
    [0, 0, 1, 0, 0, 0, 1],
]

INF = None

# Optimal clearing lengths, complete binary trees, rows depth 1..4, columns L = 1..5.
# "n/a" marks a cell whose optimum is not asserted.
TREE_COSTS = {
    1: [0, 0, 0, 0, 0],
    2: [2, 0, 0, 0, 0],
    3: [8, 2, 0, 0, 0],
    4: [INF, 8, "n/a", 0, 0],
}

# Optimal clearing lengths, grids, columns L = 1..4.
GRID_COSTS = {
    (2, 2): [INF, 0, 0, 0],
    (2, 3): [INF, 0, 0, 0],
    (2, 4): [INF, 1, 0, 0],
    (2, 5): [INF, 2, 0, 0],
    (2, 6): [INF, 3, 1, 0],
    (3, 3): [INF, 0, 0, 0],
    (3, 4): [INF, 1, 0, 0],
    (3, 5): [INF, 2, 0, 0],
    (3, 6): [INF, 3, 1, 0],
    (4, 4): [INF, INF, 1, 0],
    (4, 5): [INF, INF, 1, 0],
    (4, 6): [INF, INF, 3, 1],
    (5, 5): [INF, INF, 2, 0],
    (5, 6): [INF, INF, 3, 1],
    (6, 6): [INF, INF, INF, 3],
}

SAMPLE_B = """\
1 1 0 0 0 0 0 0 0 0 0 0
1 1 1 0 0 0 0 0 0 0 0 0
0 1 1 1 0 0 0 0 1 0 0 0
0 0 1 1 1 0 1 1 1 0 0 0
0 0 0 1 1 1 1 1 0 0 0 0
0 0 0 0 1 1 0 0 0 0 0 0
0 0 0 1 1 0 1 1 0 0 0 0
0 0 0 0 1 0 1 1 0 0 0 0
0 0 1 1 0 0 0 0 1 1 1 1
0 0 0 0 0 0 0 0 1 1 1 1
0 0 0 0 0 0 0 0 1 1 1 1
0 0 0 0 0 0 0 0 1 1 1 1
"""


@pytest.fixture
def tree7():
    return Graph.from_edges(7, TREE7_EDGES)


@pytest.fixture
def tree7_b(tree7):
    return range_visibility(tree7, 1)


def bfs_dist(g, src):
    dist = {src: 0}
    q = deque([src])
    while q:
        v = q.popleft()
        for w in g.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                q.append(w)
    return dist


def brute_star(p, q):
    """Max-min product straight from the definition, on nested lists."""
    return [
        [max(min(p[l][m], q[m][n]) for m in range(len(q))) for n in range(len(q[0]))]
        for l in range(len(p))
    ]


def set_closure(g, seeds, allowed):
    reach = set(seeds) & allowed
    stack = list(reach)
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w in allowed and w not in reach:
                reach.add(w)
                stack.append(w)
    return reach


def brute_force_cost(g, b, semantics="concurrent"):
    """Breadth-first search over (position, dirty vertex set) using plain set operations.

    Independent of both solvers: no bitmasks, matrices or component bookkeeping.
    Returns the optimal number of moves after a free placement, or None.
    """
    rows = b.to_lists()
    vis = {v: {y for y in g.vertices if rows[v - 1][y - 1]} for v in g.vertices}
    allv = set(g.vertices)

    def step(pos, dirty, u):
        if pos is None or semantics == "sequential":
            spread = set_closure(g, dirty - vis[u], allv - vis[u])
        else:
            spread = set_closure(g, dirty, allv - (vis[pos] & vis[u])) - vis[u]
        return frozenset(spread)

    layer = {(u, step(None, allv, u)) for u in g.vertices}
    seen = set(layer)
    cost = 0
    while layer:
        if any(not d for _, d in layer):
            return cost
        nxt = set()
        for pos, dirty in layer:
            for u in g.closed_neighbors(pos):
                s = (u, step(pos, dirty, u))
                if s not in seen:
                    seen.add(s)
                    nxt.add(s)
        layer = nxt
        cost += 1
    return None


def all_small_family_graphs():
    """Every instance of each generator family with at most 7 vertices."""
    from lvgs.generators import gen_deleted_grid, gen_random_tree

    out = [("path", n, gen_path(n)) for n in range(1, 8)]
    out += [("cbt", d, gen_complete_binary_tree(d)) for d in (0, 1, 2)]
    out += [("grid", (r, c), gen_grid(r, c)) for r in range(1, 8) for c in range(1, 8) if r * c <= 7]
    for seed in range(40):
        g = gen_random_tree(3, seed)
        if g.n <= 7:
            out.append(("rtree", seed, g))
    for seed in range(10):
        out.append(("dgrid", seed, gen_deleted_grid(2, 3, 0.5, seed)))
        out.append(("dgrid", seed, gen_deleted_grid(2, 2, 0.5, seed)))
    return out
