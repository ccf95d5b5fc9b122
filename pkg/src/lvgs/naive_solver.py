"""Brute-force solver over full states (searcher positions, vertex dirty set).

This is the reference the information-state solver is checked against. It
propagates contamination with the star product over the modified adjacency
matrix, exactly as the evolution equation reads, and supports several
searchers and a finite target speed.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .graph_core import (
    BoolMatrix,
    Graph,
    GraphError,
    bit,
    modified_adjacency,
    row_star,
    transit_adjacency,
    visible_mask,
)

SEMANTICS = ("concurrent", "sequential")


class IllegalMove(ValueError):
    """A searcher was asked to move to a vertex outside its closed neighbourhood."""

    def __init__(self, index: int, src: int, dst: int):
        super().__init__(f"searcher {index}: illegal move {src} -> {dst}")
        self.index = index


class StateLimitExceeded(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"state limit of {limit} exceeded")
        self.limit = limit


@dataclass(frozen=True, order=True)
class FullState:
    """``positions`` is ``None`` before placement; ``dirty`` is a vertex bitmask."""

    positions: Optional[tuple]
    dirty: int

    def key(self):
        return (self.positions or (), self.dirty)


@dataclass
class NaiveSchedule:
    clearable: bool
    cost: Optional[int] = None
    placement: Optional[tuple] = None
    moves: list = field(default_factory=list)
    states_expanded: int = 0


def initial_state(g: Graph) -> FullState:
    return FullState(None, g.all_mask)


def _check_legal(g: Graph, state: FullState, control: Sequence[int]) -> None:
    for u in control:
        g.check_vertex(u)
    if state.positions is None:
        return
    if len(control) != len(state.positions):
        raise GraphError(f"control has {len(control)} entries, expected {len(state.positions)}")
    for k, (x, u) in enumerate(zip(state.positions, control)):
        if u != x and not g.nbr[x] & bit(u):
            raise IllegalMove(k, x, u)


def evolve(g: Graph, b: BoolMatrix, state: FullState, control: Sequence[int], speed=None,
           semantics: str = "concurrent", _cache: Optional[dict] = None) -> FullState:
    """One step of the search: searchers move to ``control`` and the target spreads.

    ``sequential``: the searchers arrive first, then the target moves ``speed``
    hops through the graph they cannot see. ``concurrent``: the target moves
    while the searchers travel, blocked only by vertices seen from both ends of
    each searcher's edge; whatever the searchers see on arrival is cleared.
    Placement from the unplaced state is the same under both.

    ``speed=None`` means an arbitrarily fast target, which is the same as n hops.
    """
    if semantics not in SEMANTICS:
        raise ValueError(f"unknown semantics {semantics!r}")
    control = tuple(control)
    _check_legal(g, state, control)
    steps = g.n if speed is None else min(int(speed), g.n)
    if steps < 1:
        raise ValueError("speed must be >= 1")
    transit = state.positions is not None and semantics == "concurrent"
    key = (state.positions, control) if transit else control
    m = None if _cache is None else _cache.get(key)
    if m is None:
        if transit:
            m = transit_adjacency(g, b, state.positions, control)
        else:
            m = modified_adjacency(g, b, control)
        if _cache is not None:
            _cache[key] = m
    mask = g.all_mask & ~visible_mask(b, control) if transit else g.all_mask
    return FullState(control, row_star(state.dirty, m, steps) & mask)


def solve_naive(g: Graph, b: BoolMatrix, k: int = 1, speed=None, semantics: str = "concurrent",
                max_states: int = 1 << 24) -> NaiveSchedule:
    """Dijkstra from the unplaced all-dirty state to any state with no dirty vertex.

    Placement is free, every later step costs one. Ties on cost go to the
    smallest ``(positions, dirty)`` key.
    """
    if k < 1:
        raise ValueError("need at least one searcher")
    start = initial_state(g)
    cache: dict = {}
    best = {start: 0}
    parent: dict = {start: None}
    heap = [(0, start.key(), start)]
    done = set()
    expanded = 0
    placements = list(itertools.product(g.vertices, repeat=k))
    while heap:
        cost, _, st = heapq.heappop(heap)
        if st in done:
            continue
        done.add(st)
        expanded += 1
        if st.dirty == 0:
            return _unwind(parent, st, cost, expanded)
        if st.positions is None:
            controls, step = placements, 0
        else:
            controls = itertools.product(*(g.closed_neighbors(x) for x in st.positions))
            step = 1
        for u in controls:
            nxt = evolve(g, b, st, u, speed, semantics, cache)
            c = cost + step
            if c < best.get(nxt, c + 1):
                if nxt not in best and len(best) >= max_states:
                    raise StateLimitExceeded(max_states)
                best[nxt] = c
                parent[nxt] = st
                heapq.heappush(heap, (c, nxt.key(), nxt))
    return NaiveSchedule(False, states_expanded=expanded)


def _unwind(parent, st, cost, expanded) -> NaiveSchedule:
    chain = []
    while st is not None and st.positions is not None:
        chain.append(st.positions)
        st = parent[st]
    chain.reverse()
    return NaiveSchedule(True, cost, chain[0], chain[1:], expanded)


def replay_naive(g: Graph, b: BoolMatrix, placement: Sequence[int], moves, speed=None,
                 semantics: str = "concurrent") -> list[FullState]:
    """States after placement and after each move; raises on an illegal move."""
    st = evolve(g, b, initial_state(g), tuple(placement), speed, semantics)
    out = [st]
    for u in moves:
        st = evolve(g, b, st, tuple(u), speed, semantics)
        out.append(st)
    return out
