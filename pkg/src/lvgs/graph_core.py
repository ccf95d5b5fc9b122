"""Graphs, boolean matrices and the contamination algebra.

Vertex sets are carried around as Python ints used as bitsets: vertex ``v``
(1-based) lives in bit ``v - 1``. Matrix rows use the same layout, so a
boolean matrix is a tuple of row masks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class GraphError(ValueError):
    """Raised for malformed graphs, matrices or vertex ids."""


def bit(v: int) -> int:
    return 1 << (v - 1)


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << (v - 1)
    return m


def vertices_of(mask: int) -> list[int]:
    """Ascending 1-based vertex ids of the bits set in ``mask``."""
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


@dataclass(frozen=True)
class BoolMatrix:
    """A rows x cols 0/1 matrix; ``bits[i]`` holds row i with column j at bit j (0-based)."""

    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise GraphError(f"matrix dimensions must be positive, got {self.rows}x{self.cols}")
        if len(self.bits) != self.rows:
            raise GraphError("row count does not match bits")
        limit = 1 << self.cols
        for r in self.bits:
            if r < 0 or r >= limit:
                raise GraphError("row mask has bits outside the column range")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BoolMatrix":
        if not entries:
            raise GraphError("empty matrix")
        cols = len(entries[0])
        rows = []
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise GraphError(f"row {i + 1} has {len(row)} entries, expected {cols}")
            m = 0
            for j, x in enumerate(row):
                if x not in (0, 1, True, False):
                    raise GraphError(f"entry ({i + 1},{j + 1}) is not 0/1: {x!r}")
                if x:
                    m |= 1 << j
            rows.append(m)
        return cls(len(entries), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "BoolMatrix":
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> "BoolMatrix":
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def row_vector(cls, mask: int, n: int) -> "BoolMatrix":
        return cls(1, n, (mask,))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return (self.bits[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [[(r >> j) & 1 for j in range(self.cols)] for r in self.bits]

    def transpose(self) -> "BoolMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.bits):
            for j in range(self.cols):
                if (r >> j) & 1:
                    out[j] |= 1 << i
        return BoolMatrix(self.cols, self.rows, tuple(out))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and self == self.transpose()

    def __or__(self, other: "BoolMatrix") -> "BoolMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise GraphError("dimension mismatch")
        return BoolMatrix(self.rows, self.cols, tuple(a | b for a, b in zip(self.bits, other.bits)))


def star_multiply(p: BoolMatrix, q: BoolMatrix) -> BoolMatrix:
    """Max-min product: ``(P*Q)[l,n] = max_m min(P[l,m], Q[m,n])``.

    On 0/1 entries this is the boolean matrix product, so each output row is
    the OR of the rows of ``q`` selected by the set bits of the matching row
    of ``p``.
    """
    if p.cols != q.rows:
        raise GraphError(f"cannot star-multiply {p.rows}x{p.cols} by {q.rows}x{q.cols}")
    out = []
    for prow in p.bits:
        acc = 0
        m = 0
        while prow:
            if prow & 1:
                acc |= q.bits[m]
            prow >>= 1
            m += 1
        out.append(acc)
    return BoolMatrix(p.rows, q.cols, tuple(out))


def row_star(d: int, m: BoolMatrix, steps: int) -> int:
    """Apply ``d <- d * M`` ``steps`` times to the 0/1 row vector ``d`` (a bitmask)."""
    if steps < 1:
        raise GraphError("steps must be >= 1")
    if m.rows != m.cols:
        raise GraphError("row_star needs a square matrix")
    if d >> m.rows:
        raise GraphError("vector longer than matrix")
    vec = BoolMatrix.row_vector(d, m.rows)
    for _ in range(steps):
        nxt = star_multiply(vec, m)
        if nxt == vec:
            break
        vec = nxt
    return vec.bits[0]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 1..n."""

    n: int
    edges: frozenset
    coords: tuple | None = None
    nbr: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise GraphError("graph needs at least one vertex")
        norm = set()
        for e in self.edges:
            x, y = e
            if x == y:
                raise GraphError(f"self-loop at vertex {x}")
            for v in (x, y):
                if not (isinstance(v, int) and 1 <= v <= self.n):
                    raise GraphError(f"edge {list(e)} has vertex outside 1..{self.n}")
            norm.add((min(x, y), max(x, y)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.coords is not None:
            if len(self.coords) != self.n:
                raise GraphError(f"coords has {len(self.coords)} entries, expected {self.n}")
            object.__setattr__(self, "coords", tuple((float(a), float(b)) for a, b in self.coords))
        nbr = [0] * (self.n + 1)
        for x, y in norm:
            nbr[x] |= bit(y)
            nbr[y] |= bit(x)
        object.__setattr__(self, "nbr", tuple(nbr))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]], coords=None) -> "Graph":
        return cls(n, frozenset(tuple(e) for e in edges), None if coords is None else tuple(coords))

    @property
    def vertices(self) -> range:
        return range(1, self.n + 1)

    @property
    def all_mask(self) -> int:
        return (1 << self.n) - 1

    def neighbors(self, v: int) -> list[int]:
        self.check_vertex(v)
        return vertices_of(self.nbr[v])

    def closed_neighbors(self, v: int) -> list[int]:
        self.check_vertex(v)
        return vertices_of(self.nbr[v] | bit(v))

    def check_vertex(self, v) -> None:
        if not (isinstance(v, int) and 1 <= v <= self.n):
            raise GraphError(f"invalid vertex {v!r} (graph has vertices 1..{self.n})")

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def adjacency(self) -> BoolMatrix:
        return BoolMatrix(self.n, self.n, tuple(self.nbr[v] for v in self.vertices))

    def is_connected(self) -> bool:
        return len(connected_components(self, self.all_mask)) == 1

    def to_json(self) -> str:
        doc = {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}
        if self.coords is not None:
            doc["coords"] = [list(c) for c in self.coords]
        return json.dumps(doc, separators=(", ", ": "))

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
            raise GraphError('graph JSON needs "n" and "edges"')
        n = doc["n"]
        if not isinstance(n, int) or isinstance(n, bool):
            raise GraphError('"n" must be an integer')
        edges = []
        for e in doc["edges"]:
            if not (isinstance(e, list) and len(e) == 2):
                raise GraphError(f"edge {e!r} is not a pair")
            edges.append(tuple(e))
        coords = doc.get("coords")
        if coords is not None:
            if not all(isinstance(c, list) and len(c) == 2 for c in coords):
                raise GraphError("coords must be a list of [x, y] pairs")
        return cls.from_edges(n, edges, coords)


def load_graph(path) -> Graph:
    with open(path) as fh:
        return Graph.from_json(fh.read())


def component_masks(g: Graph, keep: int) -> list[int]:
    """Connected components of the subgraph induced by ``keep``, as masks.

    Ordered by minimum vertex id; this order fixes the meaning of the
    contamination bits everywhere else.
    """
    comps = []
    rest = keep
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            v = low.bit_length()
            new = g.nbr[v] & keep & ~comp
            comp |= new
            frontier |= new
        comps.append(comp)
        rest &= ~comp
    return comps


def connected_components(g: Graph, keep) -> list[list[int]]:
    """Components of the subgraph induced by ``keep`` (a mask or an iterable of vertices)."""
    if not isinstance(keep, int):
        keep = list(keep)
        for v in keep:
            g.check_vertex(v)
        keep = mask_of(keep)
    elif keep >> g.n:
        raise GraphError("keep mask has bits outside 1..n")
    return [vertices_of(c) for c in component_masks(g, keep)]


def visible_mask(b: BoolMatrix, positions: Iterable[int]) -> int:
    vis = 0
    for u in positions:
        vis |= b.bits[u - 1]
    return vis


def hidden_adjacency(g: Graph, hidden: int) -> BoolMatrix:
    """Adjacency restricted to the vertices in ``hidden``, plus a self-loop on each.

    The self-loop keeps a dirty vertex with no hidden neighbours dirty.
    """
    rows = []
    for v in g.vertices:
        if hidden & bit(v):
            rows.append((g.nbr[v] & hidden) | bit(v))
        else:
            rows.append(0)
    return BoolMatrix(g.n, g.n, tuple(rows))


def _check_positions(g: Graph, b: BoolMatrix, positions) -> None:
    if not positions:
        raise GraphError("positions must be nonempty")
    for u in positions:
        g.check_vertex(u)
    if (b.rows, b.cols) != (g.n, g.n):
        raise GraphError(f"visibility matrix is {b.rows}x{b.cols}, graph has {g.n} vertices")


def modified_adjacency(g: Graph, b: BoolMatrix, positions: Sequence[int]) -> BoolMatrix:
    """Adjacency of the part of ``g`` that no searcher at ``positions`` can see."""
    _check_positions(g, b, positions)
    return hidden_adjacency(g, g.all_mask & ~visible_mask(b, positions))


def transit_adjacency(g: Graph, b: BoolMatrix, old: Sequence[int], new: Sequence[int]) -> BoolMatrix:
    """Hidden adjacency while searchers travel from ``old`` to ``new``.

    A searcher in transit along an edge only watches the vertices seen from
    both of its endpoints; everything else is open to the target.
    """
    _check_positions(g, b, old)
    _check_positions(g, b, new)
    if len(old) != len(new):
        raise GraphError("old and new positions differ in length")
    watched = 0
    for x, u in zip(old, new):
        watched |= b.bits[x - 1] & b.bits[u - 1]
    return hidden_adjacency(g, g.all_mask & ~watched)


def full_state_space_size(n: int, k: int = 1) -> int:
    """Size of the complete state space: n**k * 2**n joint states plus the unplaced start."""
    return n**k * 2**n + 1
