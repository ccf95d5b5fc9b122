"""Minimum-length clearing schedules for limited-visibility graph search."""

from .graph_core import BoolMatrix, Graph, GraphError, connected_components, modified_adjacency, row_star, star_multiply
from .info_search import InfoState, Schedule, decompose, solve, solve_dfs, transition
from .naive_solver import solve_naive
from .visibility import VisibilitySpec, build_visibility

__all__ = [
    "BoolMatrix",
    "Graph",
    "GraphError",
    "InfoState",
    "Schedule",
    "VisibilitySpec",
    "build_visibility",
    "connected_components",
    "decompose",
    "modified_adjacency",
    "row_star",
    "solve",
    "solve_dfs",
    "solve_naive",
    "star_multiply",
    "transition",
]
