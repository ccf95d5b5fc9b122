"""Information-state search for a single searcher against an arbitrarily fast target.

An information state is the searcher position together with one dirty bit per
invisible component at that position. Because the target is arbitrarily fast,
a component is either wholly dirty or wholly clear, so these bits carry all
the search history that matters.

Internally a state is ``(pos, bits)`` where ``pos == 0`` stands for the
unplaced start and ``bits`` packs the component flags with component 0 in the
most significant position. For states at the same position, integer order on
``bits`` is then lexicographic order on the flag tuple, which is what the
tie-breaking rule of the solvers relies on.

Two move rules are supported. ``sequential``: the searcher arrives, then the
target runs through whatever the searcher cannot see from its new vertex.
``concurrent`` (the default): the target runs while the searcher is on the
edge, when only vertices seen from both endpoints are watched. Only the
concurrent rule makes a 4-cycle unclearable at range 1.
"""

from __future__ import annotations

import heapq
import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph_core import BoolMatrix, Graph, GraphError, bit, component_masks, vertices_of
from .visibility import check_visibility

LAMBDA = 0
SEMANTICS = ("concurrent", "sequential")


class IllegalMove(ValueError):
    pass


class StateOverflow(RuntimeError):
    """Eager construction would exceed the configured state cap."""


class SearchTimeout(RuntimeError):
    def __init__(self, states_expanded: int, budget: float):
        super().__init__(f"search exceeded {budget:g}s after expanding {states_expanded} states")
        self.states_expanded = states_expanded
        self.budget = budget


@dataclass(frozen=True)
class InfoState:
    position: Optional[int]  # None for the unplaced start
    comp_dirty: tuple

    def __str__(self):
        pos = "λ" if self.position is None else str(self.position)
        return f"({pos},[{','.join(map(str, self.comp_dirty))}])"


@dataclass(frozen=True)
class Decomposition:
    position: int
    visible: tuple
    components: tuple  # tuple of ascending vertex tuples, ordered by min vertex


@dataclass
class Schedule:
    clearable: bool
    cost: Optional[int] = None
    placement: Optional[int] = None
    moves: list = field(default_factory=list)
    trace: Optional[list] = None
    states_expanded: int = 0

    def to_dict(self) -> dict:
        doc = {
            "clearable": self.clearable,
            "cost": self.cost,
            "placement": self.placement,
            "moves": list(self.moves),
        }
        if self.trace is not None:
            doc["trace"] = self.trace
        return doc

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


class SearchSpace:
    """Per-position visible sets and invisible components, shared by every solver here."""

    def __init__(self, g: Graph, b: BoolMatrix, semantics: str = "concurrent"):
        if semantics not in SEMANTICS:
            raise ValueError(f"unknown semantics {semantics!r}")
        check_visibility(g, b)
        self.g = g
        self.b = b
        self.concurrent = semantics == "concurrent"
        self.visible = [0] * (g.n + 1)
        self.comps: list = [()] * (g.n + 1)
        for v in g.vertices:
            vis = b.bits[v - 1]
            self.visible[v] = vis
            self.comps[v] = tuple(component_masks(g, g.all_mask & ~vis))
        # closed neighbourhood minus the vertex itself; staying put never changes a state
        self.moves = [()] + [tuple(vertices_of(g.nbr[v])) for v in g.vertices]

    def ncomp(self, pos: int) -> int:
        return 1 if pos == LAMBDA else len(self.comps[pos])

    def dirty_mask(self, pos: int, bits: int) -> int:
        """Union of the dirty components of state ``(pos, bits)`` as a vertex mask."""
        if pos == LAMBDA:
            return self.g.all_mask
        comps = self.comps[pos]
        m = len(comps)
        out = 0
        for i, c in enumerate(comps):
            if bits >> (m - 1 - i) & 1:
                out |= c
        return out

    def step(self, pos: int, bits: int, move: int) -> int:
        """Component bits after moving from ``(pos, bits)`` to ``move``."""
        dirty = self.dirty_mask(pos, bits)
        if self.concurrent and pos != LAMBDA and pos != move:
            dirty = self._spread(dirty, ~(self.visible[pos] & self.visible[move]))
        survivors = dirty & ~self.visible[move]
        out = 0
        for c in self.comps[move]:
            out = (out << 1) | (1 if c & survivors else 0)
        return out

    def _spread(self, dirty: int, allowed: int) -> int:
        nbr = self.g.nbr
        reach = dirty
        frontier = dirty
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = nbr[low.bit_length()] & allowed & ~reach
            reach |= new
            frontier |= new
        return reach

    def legal(self, pos: int, move: int) -> bool:
        if not (1 <= move <= self.g.n):
            return False
        return pos == LAMBDA or move == pos or bool(self.g.nbr[pos] & bit(move))

    def to_info(self, pos: int, bits: int) -> InfoState:
        m = self.ncomp(pos)
        flags = tuple((bits >> (m - 1 - i)) & 1 for i in range(m))
        return InfoState(None if pos == LAMBDA else pos, flags)

    def from_info(self, st: InfoState) -> tuple[int, int]:
        pos = LAMBDA if st.position is None else st.position
        if pos != LAMBDA:
            self.g.check_vertex(pos)
        if len(st.comp_dirty) != self.ncomp(pos):
            raise ValueError(f"state {st} has {len(st.comp_dirty)} flags, expected {self.ncomp(pos)}")
        bits = 0
        for f in st.comp_dirty:
            bits = (bits << 1) | (1 if f else 0)
        return pos, bits

    def trace_entry(self, pos: int, bits: int) -> dict:
        st = self.to_info(pos, bits)
        return {
            "pos": pos,
            "components": [vertices_of(c) for c in self.comps[pos]],
            "dirty": list(st.comp_dirty),
        }


def initial_info_state() -> InfoState:
    return InfoState(None, (1,))


def decompose(g: Graph, b: BoolMatrix, position: int) -> Decomposition:
    g.check_vertex(position)
    vis = b.bits[position - 1]
    comps = component_masks(g, g.all_mask & ~vis)
    return Decomposition(position, tuple(vertices_of(vis)), tuple(tuple(vertices_of(c)) for c in comps))


def transition(g: Graph, b: BoolMatrix, state: InfoState, move: int, semantics: str = "concurrent",
               space: SearchSpace | None = None) -> InfoState:
    """Information state after the searcher moves from ``state`` to ``move``."""
    space = space or SearchSpace(g, b, semantics)
    pos, bits = space.from_info(state)
    g.check_vertex(move)
    if not space.legal(pos, move):
        raise IllegalMove(f"cannot move from {pos} to {move}: not in its closed neighbourhood")
    return space.to_info(move, space.step(pos, bits, move))


# ---------------------------------------------------------------------------
# Eager construction of the whole information graph


@dataclass
class InfoGraph:
    space: SearchSpace
    states: list  # (pos, bits); index 0 is the unplaced start
    index: dict
    arcs: list  # (src index, dst index, move, cost), identity arcs included

    @property
    def non_lambda_count(self) -> int:
        return len(self.states) - 1

    def info_states(self) -> list[InfoState]:
        return [self.space.to_info(p, c) for p, c in self.states]

    def successors(self) -> list[list]:
        out = [[] for _ in self.states]
        for s, d, mv, c in self.arcs:
            out[s].append((d, mv, c))
        return out


def build_info_graph_eager(g: Graph, b: BoolMatrix, max_states: int = 1 << 22,
                           semantics: str = "concurrent") -> InfoGraph:
    """Every information state and every arc, as the textbook construction lists them.

    Each vertex v contributes ``2**m_v`` states, one per flag vector over its
    ``m_v`` invisible components, plus the single unplaced start.
    """
    space = SearchSpace(g, b, semantics)
    total = 1 + sum(1 << len(space.comps[v]) for v in g.vertices)
    if total > max_states:
        raise StateOverflow(
            f"eager information graph needs {total} states (cap {max_states}); use the lazy solver"
        )
    states = [(LAMBDA, 1)]
    for v in g.vertices:
        states.extend((v, c) for c in range(1 << len(space.comps[v])))
    index = {s: i for i, s in enumerate(states)}
    arcs = []
    for v in g.vertices:
        arcs.append((0, index[(v, space.step(LAMBDA, 1, v))], v, 0))
    for v in g.vertices:
        for j in g.closed_neighbors(v):
            for c in range(1 << len(space.comps[v])):
                arcs.append((index[(v, c)], index[(j, space.step(v, c, j))], j, 1))
    return InfoGraph(space, states, index, arcs)


# ---------------------------------------------------------------------------
# Solvers


def _deadline(timeout):
    return None if timeout is None else time.monotonic() + timeout


def _finish(space: SearchSpace, parent: dict, goal, expanded: int, trace: bool) -> Schedule:
    path = []
    st = goal
    while st is not None:
        path.append(st)
        st = parent[st][0] if parent[st] else None
    path.reverse()
    path = path[1:]  # drop the unplaced start
    moves = [p for p, _ in path[1:]]
    sched = Schedule(True, len(moves), path[0][0], moves, states_expanded=expanded)
    if trace:
        sched.trace = [space.trace_entry(p, c) for p, c in path]
    return sched


def _dijkstra(space: SearchSpace, succ, timeout, trace: bool) -> Schedule:
    """Dijkstra from the unplaced start; ``succ(state)`` yields ``(next, move, cost)``.

    Heap entries are ``(cost, pos, bits)`` so equal-cost states are settled in
    lexicographic order.
    """
    deadline = _deadline(timeout)
    start = (LAMBDA, 1)
    best = {start: 0}
    parent = {start: None}
    heap = [(0, LAMBDA, 1)]
    done = set()
    expanded = 0
    while heap:
        cost, pos, bits = heapq.heappop(heap)
        st = (pos, bits)
        if st in done:
            continue
        done.add(st)
        expanded += 1
        if deadline is not None and expanded & 255 == 1 and time.monotonic() > deadline:
            raise SearchTimeout(expanded, timeout)
        if bits == 0:
            return _finish(space, parent, st, expanded, trace)
        for nxt, move, c in succ(st):
            nc = cost + c
            if nc < best.get(nxt, nc + 1):
                best[nxt] = nc
                parent[nxt] = (st, move)
                heapq.heappush(heap, (nc, nxt[0], nxt[1]))
    return Schedule(False, states_expanded=expanded)


def _lazy_successors(space: SearchSpace):
    g = space.g

    def succ(st):
        pos, bits = st
        if pos == LAMBDA:
            return [((v, space.step(LAMBDA, 1, v)), v, 0) for v in g.vertices]
        return [((j, space.step(pos, bits, j)), j, 1) for j in space.moves[pos]]

    return succ


def solve(g: Graph, b: BoolMatrix, mode: str = "lazy", timeout: float | None = None,
          trace: bool = True, max_states: int = 1 << 22, semantics: str = "concurrent") -> Schedule:
    """Shortest clearing schedule, or ``Schedule(clearable=False)`` when none exists.

    ``lazy`` expands states on demand from the start; ``eager`` first builds
    every information state and arc, then runs the same search over them.
    """
    if mode == "lazy":
        space = SearchSpace(g, b, semantics)
        return _dijkstra(space, _lazy_successors(space), timeout, trace)
    if mode == "eager":
        ig = build_info_graph_eager(g, b, max_states, semantics)
        adj = ig.successors()
        states = ig.states

        def succ(st):
            return [(states[d], mv, c) for d, mv, c in adj[ig.index[st]] if states[d] != st]

        return _dijkstra(ig.space, succ, timeout, trace)
    raise ValueError(f"unknown mode {mode!r}")


def solve_dfs(g: Graph, b: BoolMatrix, timeout: float | None = None, trace: bool = True,
              semantics: str = "concurrent") -> Schedule:
    """Depth-first search for any clearing schedule; not necessarily the shortest.

    Successors are tried in order of fewest dirty vertices, then by move id.
    """
    space = SearchSpace(g, b, semantics)
    succ = _lazy_successors(space)
    deadline = _deadline(timeout)
    start = (LAMBDA, 1)
    parent = {start: None}
    seen = {start}
    stack = [start]
    expanded = 0
    while stack:
        st = stack.pop()
        expanded += 1
        if deadline is not None and expanded & 255 == 1 and time.monotonic() > deadline:
            raise SearchTimeout(expanded, timeout)
        if st[1] == 0:
            return _finish(space, parent, st, expanded, trace)
        children = []
        for nxt, move, _ in succ(st):
            if nxt in seen:
                continue
            weight = space.dirty_mask(*nxt).bit_count() if nxt[1] else -1
            children.append((weight, move, nxt))
        children.sort(reverse=True)  # best child ends on top of the stack
        for _, move, nxt in children:
            if nxt in seen:
                continue
            seen.add(nxt)
            parent[nxt] = (st, move)
            stack.append(nxt)
    return Schedule(False, states_expanded=expanded)


def replay(g: Graph, b: BoolMatrix, placement: int, moves: Sequence[int],
           semantics: str = "concurrent") -> list[InfoState]:
    """Information states after placement and after each move; raises on illegal moves."""
    space = SearchSpace(g, b, semantics)
    st = transition(g, b, initial_info_state(), placement, space=space)
    out = [st]
    for mv in moves:
        st = transition(g, b, st, mv, space=space)
        out.append(st)
    return out


def verify_schedule(g: Graph, b: BoolMatrix, sched: Schedule, semantics: str = "concurrent") -> bool:
    if not sched.clearable:
        return False
    if sched.cost != len(sched.moves):
        return False
    try:
        states = replay(g, b, sched.placement, sched.moves, semantics)
    except (IllegalMove, GraphError):
        return False
    return not any(states[-1].comp_dirty)


# ---------------------------------------------------------------------------
# DOT export


def export_dot(ig: InfoGraph) -> str:
    space = ig.space
    lines = ["digraph info_graph {", "  rankdir=LR;"]
    for i, (pos, bits) in enumerate(ig.states):
        label = str(space.to_info(pos, bits))
        shape = "doublecircle" if bits == 0 and pos != LAMBDA else "ellipse"
        if pos == LAMBDA:
            shape = "box"
        lines.append(f'  s{i} [label="{label}", shape={shape}];')
    for s, d, mv, c in sorted(ig.arcs):
        lines.append(f'  s{s} -> s{d} [label="{mv}/{c}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
