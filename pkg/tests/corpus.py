"""Seeded instance corpora shared by the test modules."""

from __future__ import annotations

import numpy as np

from planarvit.errors import CannotSatisfy
from planarvit.planar_core import EmbeddedGraph, build_embedded_graph
from planarvit.toolkit.generators import grid_graph, grid_minus, triangulated_disk

KIND_NAMES = ("grid", "grid-minus", "triangulated-disk")


def random_instance(rng: np.random.Generator, kind: str, n_lo: int, n_hi: int,
                    random_terminals: bool) -> EmbeddedGraph | None:
    n = int(rng.integers(n_lo, n_hi + 1))
    seed = int(rng.integers(1 << 30))
    try:
        if kind == "triangulated-disk":
            g = triangulated_disk(max(n, 4), seed)
        else:
            rows = int(rng.integers(2, max(3, int(np.sqrt(n)) + 2)))
            cols = max(2, n // rows)
            if kind == "grid":
                g = grid_graph(rows, cols)
            else:
                m = 2 * rows * cols - rows - cols
                slack = m - (rows * cols - 1)
                dels = int(rng.integers(0, max(1, min(slack, rows * cols // 3)) + 1))
                g = grid_minus(rows, cols, dels, seed)
    except CannotSatisfy:
        return None
    if random_terminals:
        s, t = rng.choice(g.n, 2, replace=False)
        g = g.with_terminals(int(s), int(t))
    return g


def corpus(count: int, seed: int, n_lo: int = 4, n_hi: int = 400) -> list[EmbeddedGraph]:
    """``count`` instances cycling through the three kinds; every other one
    gets random terminals instead of the generator's corner terminals."""
    rng = np.random.default_rng(seed)
    out: list[EmbeddedGraph] = []
    i = 0
    while len(out) < count:
        kind = KIND_NAMES[i % 3]
        g = random_instance(rng, kind, n_lo, n_hi, random_terminals=bool((i // 3) % 2))
        i += 1
        if g is not None and n_lo <= g.n <= n_hi:
            out.append(g)
    return out


# --------------------------------------------------------------------------
# bridge-bearing instances
# --------------------------------------------------------------------------

def rotation_lists(g: EmbeddedGraph) -> list[list[int]]:
    ptr = g.indptr.tolist()
    nb = g.nbrs.tolist()
    return [nb[ptr[v]:ptr[v + 1]] for v in range(g.n)]


def with_pendants(g: EmbeddedGraph, count: int, rng: np.random.Generator) -> EmbeddedGraph:
    """Hang ``count`` new vertices off random existing vertices (a random forest
    of pendant trees); terminals are kept."""
    rot = rotation_lists(g)
    for _ in range(count):
        v = int(rng.integers(len(rot)))
        w = len(rot)
        rot[v].insert(int(rng.integers(len(rot[v]) + 1)), w)
        rot.append([v])
    return build_embedded_graph(len(rot), g.s, g.t, rot)


def joined_by_bridge(a: EmbeddedGraph, b: EmbeddedGraph, rng: np.random.Generator,
                     t_in_b: bool) -> EmbeddedGraph:
    """Disjoint union of ``a`` and ``b`` plus one bridge between random vertices.

    ``s`` is ``a.s``; ``t`` is ``b.t`` when ``t_in_b`` (the bridge separates the
    terminals) and ``a.t`` otherwise."""
    ra, rb = rotation_lists(a), rotation_lists(b)
    off = a.n
    rot = ra + [[w + off for w in row] for row in rb]
    u = int(rng.integers(a.n))
    v = int(rng.integers(b.n)) + off
    rot[u].insert(int(rng.integers(len(rot[u]) + 1)), v)
    rot[v].insert(int(rng.integers(len(rot[v]) + 1)), u)
    t = b.t + off if t_in_b else a.t
    return build_embedded_graph(len(rot), a.s, t, rot)
