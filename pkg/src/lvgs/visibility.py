"""Visibility matrices: explicit, distance-range and straight-line models."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .graph_core import BoolMatrix, Graph, GraphError, bit


class VisibilityError(ValueError):
    pass


@dataclass(frozen=True)
class VisibilitySpec:
    model: str  # "explicit", "range" or "line"
    L: int = 0
    matrix: Optional[BoolMatrix] = None
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.model not in ("explicit", "range", "line"):
            raise VisibilityError(f"unknown visibility model {self.model!r}")
        if self.model == "range" and (not isinstance(self.L, int) or self.L < 0):
            raise VisibilityError(f"range L must be a nonnegative integer, got {self.L!r}")
        if self.model == "explicit" and self.matrix is None:
            raise VisibilityError("explicit model needs a matrix")
        if self.model == "line" and not self.epsilon >= 0:
            raise VisibilityError("epsilon must be nonnegative")


def parse_visibility_arg(text: str) -> VisibilitySpec:
    """Parse the CLI grammar ``range:<L> | matrix:<path> | line[:<epsilon>]``."""
    kind, _, rest = text.partition(":")
    if kind == "range":
        try:
            L = int(rest)
        except ValueError:
            raise VisibilityError(f"bad range value {rest!r}") from None
        return VisibilitySpec("range", L=L)
    if kind == "matrix":
        if not rest:
            raise VisibilityError("matrix: needs a file path")
        with open(rest) as fh:
            return VisibilitySpec("explicit", matrix=parse_matrix_file(fh.read(), source=rest))
    if kind == "line":
        if not rest:
            return VisibilitySpec("line")
        try:
            return VisibilitySpec("line", epsilon=float(rest))
        except ValueError:
            raise VisibilityError(f"bad epsilon {rest!r}") from None
    raise VisibilityError(f"unknown visibility spec {text!r}; use range:L, matrix:PATH or line[:eps]")


def parse_matrix_file(text: str, source: str = "<matrix>") -> BoolMatrix:
    rows = []
    width = None
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks:
            continue
        row = []
        for t in toks:
            if t not in ("0", "1"):
                raise VisibilityError(f"{source}: line {lineno}: token {t!r} is not 0 or 1")
            row.append(int(t))
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise VisibilityError(
                f"{source}: line {lineno}: expected {width} entries, found {len(row)}"
            )
        rows.append(row)
    if not rows:
        raise VisibilityError(f"{source}: empty matrix")
    return BoolMatrix.from_lists(rows)


def serialize_matrix(b: BoolMatrix) -> str:
    return "".join(" ".join(str(x) for x in row) + "\n" for row in b.to_lists())


def range_visibility(g: Graph, L: int) -> BoolMatrix:
    """B[x,y] = 1 iff dist(x, y) <= L, by breadth-first search from every vertex."""
    rows = []
    for x in g.vertices:
        seen = bit(x)
        frontier = seen
        for _ in range(L):
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                f ^= low
                nxt |= g.nbr[low.bit_length()]
            frontier = nxt & ~seen
            if not frontier:
                break
            seen |= frontier
        rows.append(seen)
    return BoolMatrix(g.n, g.n, tuple(rows))


def line_visibility(g: Graph, epsilon: float = 1e-9) -> BoolMatrix:
    """Straight-line visibility along edge paths.

    y is seen from x when some edge path x = v0, ..., vk = y keeps every vertex
    on the segment through x and y and moves strictly forward along it.
    """
    if g.coords is None:
        raise VisibilityError("line visibility needs vertex coordinates")
    pts = (None,) + g.coords
    rows = [0] * g.n
    for x in g.vertices:
        for y in g.vertices:
            if x == y or _line_reachable(g, pts, x, y, epsilon):
                rows[x - 1] |= bit(y)
    return BoolMatrix(g.n, g.n, tuple(rows))


def _line_reachable(g: Graph, pts, x: int, y: int, eps: float) -> bool:
    ox, oy = pts[x]
    dx, dy = pts[y][0] - ox, pts[y][1] - oy
    norm2 = dx * dx + dy * dy
    if norm2 == 0.0:
        return False
    norm = math.sqrt(norm2)

    def param(w):
        wx, wy = pts[w][0] - ox, pts[w][1] - oy
        if abs(dx * wy - dy * wx) > eps * norm * max(math.hypot(wx, wy), 1.0):
            return None
        return (dx * wx + dy * wy) / norm2

    stack = [(x, 0.0)]
    seen = {x}
    while stack:
        v, t = stack.pop()
        for w in g.neighbors(v):
            if w in seen:
                continue
            tw = param(w)
            if tw is None or tw <= t + eps or tw > 1.0 + eps:
                continue
            if w == y:
                return True
            seen.add(w)
            stack.append((w, tw))
    return False


def build_visibility(g: Graph, spec: VisibilitySpec) -> BoolMatrix:
    if spec.model == "range":
        return range_visibility(g, spec.L)
    if spec.model == "line":
        return line_visibility(g, spec.epsilon)
    b = spec.matrix
    if b.rows != b.cols:
        raise VisibilityError(f"visibility matrix must be square, got {b.rows}x{b.cols}")
    if b.rows != g.n:
        raise VisibilityError(f"visibility matrix is {b.rows}x{b.rows}, graph has {g.n} vertices")
    for i in range(b.rows):
        if not b[i, i]:
            raise VisibilityError(f"visibility matrix diagonal entry {i + 1} is 0")
    return b


def check_visibility(g: Graph, b: BoolMatrix) -> BoolMatrix:
    """Validate an already-built matrix against ``g``; returns it unchanged."""
    try:
        return build_visibility(g, VisibilitySpec("explicit", matrix=b))
    except GraphError as exc:
        raise VisibilityError(str(exc)) from exc
