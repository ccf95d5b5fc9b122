"""Instance generators for the experiment families.

Random families draw from :class:`XorShift64Star`, a fixed 64-bit generator,
so a seed pins the instance on every platform and Python version:

* state initialisation: ``state = splitmix64(seed mod 2**64)``, replaced by
  ``0x9E3779B97F4A7C15`` in the (unreachable in practice) case it is zero;
* step: ``x ^= x >> 12; x ^= x << 25; x ^= x >> 27`` (mod 2**64), output
  ``x * 0x2545F4914F6CDD1D mod 2**64``;
* ``below(k)`` is ``(next_u64() * k) >> 64``; ``random()`` is
  ``(next_u64() >> 11) / 2**53``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Optional

from .graph_core import Graph

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(x: int) -> int:
    x = (x + GOLDEN) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


def derive_seed(seed: int, index: int) -> int:
    """Seed for the ``index``-th instance of a suite run with master ``seed``."""
    return splitmix64((seed + index * GOLDEN) & MASK64)


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or GOLDEN

    def next_u64(self) -> int:
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & MASK64
        x ^= x >> 27
        self.state = x
        return (x * 0x2545F4914F6CDD1D) & MASK64

    def random(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def below(self, k: int) -> int:
        return (self.next_u64() * k) >> 64


FAMILIES = ("path", "complete-binary-tree", "grid", "random-tree", "deleted-grid")


@dataclass(frozen=True)
class GeneratorParams:
    family: str
    n: int = 0
    depth: int = 0
    rows: int = 0
    cols: int = 0
    max_depth: int = 0
    p: float = 0.5
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"p must lie in [0, 1], got {self.p}")

    def build(self) -> Graph:
        if self.family == "path":
            return gen_path(self.n)
        if self.family == "complete-binary-tree":
            return gen_complete_binary_tree(self.depth)
        if self.family == "grid":
            return gen_grid(self.rows, self.cols)
        if self.family == "random-tree":
            return gen_random_tree(self.max_depth, self.seed)
        return gen_deleted_grid(self.rows, self.cols, self.p, self.seed)


def gen_path(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    coords = [(float(i), 0.0) for i in range(n)]
    return Graph.from_edges(n, [(i, i + 1) for i in range(1, n)], coords)


def gen_complete_binary_tree(depth: int) -> Graph:
    """Level-order ids: root 1, children of i are 2i and 2i+1."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    n = 2 ** (depth + 1) - 1
    return Graph.from_edges(n, [(i // 2, i) for i in range(2, n + 1)])


def _grid_edges(rows: int, cols: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c + 1
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return sorted(edges)


def gen_grid(rows: int, cols: int) -> Graph:
    """Row-major ids, 4-neighbour edges, vertex (r, c) placed at (c, r) (0-based)."""
    if rows < 1 or cols < 1:
        raise ValueError("grid needs rows, cols >= 1")
    coords = [(float(c), float(r)) for r in range(rows) for c in range(cols)]
    return Graph.from_edges(rows * cols, _grid_edges(rows, cols), coords)


def gen_random_tree(max_depth: int, seed: int) -> Graph:
    """Random tree grown from a root with two children.

    Vertices are processed in breadth-first order. Each non-root vertex above
    ``max_depth`` draws its child count once, uniformly from {0, 1, 2}, and its
    children get the next free ids.
    """
    if max_depth < 1:
        raise ValueError("max_depth must be >= 1")
    rng = XorShift64Star(seed)
    edges = [(1, 2), (1, 3)]
    queue = deque([(2, 1), (3, 1)])
    n = 3
    while queue:
        v, d = queue.popleft()
        if d >= max_depth:
            continue
        for _ in range(rng.below(3)):
            n += 1
            edges.append((v, n))
            queue.append((n, d + 1))
    return Graph.from_edges(n, edges)


def gen_deleted_grid(rows: int, cols: int, p: float, seed: int) -> Graph:
    """Full grid with edges deleted at random, never disconnecting it.

    Edges are visited in ascending ``(min vertex, max vertex)`` order. An edge
    whose removal would disconnect the current graph is kept without drawing;
    any other edge is removed when ``random() < p``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    full = gen_grid(rows, cols)
    n = full.n
    rng = XorShift64Star(seed)
    nbr = list(full.nbr)
    kept = []
    for x, y in full.sorted_edges():
        nbr[x] &= ~(1 << (y - 1))
        nbr[y] &= ~(1 << (x - 1))
        if _reaches(nbr, x, y) and rng.random() < p:
            continue
        nbr[x] |= 1 << (y - 1)
        nbr[y] |= 1 << (x - 1)
        kept.append((x, y))
    return Graph.from_edges(n, kept, full.coords)


def _reaches(nbr, x: int, y: int) -> bool:
    target = 1 << (y - 1)
    seen = 1 << (x - 1)
    frontier = seen
    while frontier:
        if frontier & target:
            return True
        nxt = 0
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            nxt |= nbr[low.bit_length()]
        frontier = nxt & ~seen
        seen |= frontier
    return False


def random_connected_graph(n: int, seed: int, extra_p: float = 0.3, rng: Optional[XorShift64Star] = None) -> Graph:
    """Random spanning tree on 1..n plus each remaining pair with probability ``extra_p``."""
    rng = rng or XorShift64Star(seed)
    edges = set()
    for v in range(2, n + 1):
        edges.add((1 + rng.below(v - 1), v))
    for x in range(1, n + 1):
        for y in range(x + 1, n + 1):
            if (x, y) not in edges and rng.random() < extra_p:
                edges.add((x, y))
    return Graph.from_edges(n, edges)
