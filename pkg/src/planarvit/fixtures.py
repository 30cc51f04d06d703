"""Small named instances used by tests, docs and the CLI."""

from __future__ import annotations

from .planar_core import EmbeddedGraph, build_embedded_graph
from .toolkit.generators import grid_graph


def fix_edge() -> EmbeddedGraph:
    return build_embedded_graph(2, 0, 1, [[1], [0]])


def fix_p3() -> EmbeddedGraph:
    # s=0, v=1, t=2
    return build_embedded_graph(3, 0, 2, [[1], [0, 2], [1]])


def fix_p3_pendant() -> EmbeddedGraph:
    # path s-v-t plus pendant v-w (w=3)
    return build_embedded_graph(4, 0, 2, [[1], [0, 3, 2], [1], [1]])


def fix_c4() -> EmbeddedGraph:
    # s=0, a=1, t=2, b=3
    return build_embedded_graph(4, 0, 2, [[1, 3], [0, 2], [1, 3], [2, 0]])


def fix_diamond() -> EmbeddedGraph:
    # s=0, a=1, b=2, t=3; edges sa, sb, ab, at, bt in that id order
    return build_embedded_graph(4, 0, 3, [[1, 2], [2, 0, 3], [0, 1, 3], [1, 2]])


def fix_theta() -> EmbeddedGraph:
    # s=0, u=1 (top), w=2 (bottom), t=3; s left and t right of the middle edge
    return build_embedded_graph(4, 0, 3, [[1, 3, 2], [3, 0], [0, 3], [1, 2, 0]])


def fix_grid3() -> EmbeddedGraph:
    return grid_graph(3, 3)


FIXTURES = {
    "edge": fix_edge,
    "p3": fix_p3,
    "p3-pendant": fix_p3_pendant,
    "c4": fix_c4,
    "diamond": fix_diamond,
    "theta": fix_theta,
    "grid3": fix_grid3,
}
