"""Pure-Python implementations of the hot loops.

Same signatures and return conventions as the compiled ``_ckernels`` module;
``planarvit.kernels`` picks one of the two at import time.  Arrays are int64
numpy arrays.  Rotation systems are passed as CSR blocks: the darts leaving
vertex ``v`` in clockwise order are ``rot[indptr[v]:indptr[v + 1]]`` and
``pos[d]`` is the offset of dart ``d`` inside its block.
"""

from __future__ import annotations

from collections import deque

import numpy as np

SPLIT_OK = 0
SPLIT_CONFLICT = 1
SPLIT_UNCLASSIFIED = 2


def trace_permutation(succ):
    n = len(succ)
    label = np.full(n, -1, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    starts = [0]
    k = 0
    c = 0
    for d0 in range(n):
        if label[d0] >= 0:
            continue
        d = d0
        while label[d] < 0:
            label[d] = c
            order[k] = d
            k += 1
            d = succ[d]
        c += 1
        starts.append(k)
    return label, order, np.asarray(starts, dtype=np.int64)


def bfs_region(indptr, rot, head, edge, stamp, token, src, dist):
    dist[src] = 0
    visited = [src]
    i = 0
    while i < len(visited):
        v = visited[i]
        i += 1
        dv = dist[v] + 1
        for p in range(indptr[v], indptr[v + 1]):
            d = rot[p]
            if stamp[edge[d]] != token:
                continue
            w = head[d]
            if dist[w] < 0:
                dist[w] = dv
                visited.append(w)
    return np.asarray(visited, dtype=np.int64)


def leftmost_walk(indptr, rot, pos, head, twin, edge, stamp, token, dist, x):
    """Greedy walk from ``x`` down the distance labels, most-clockwise-first.

    At ``x`` the scan starts just counterclockwise of the gap between the
    last and first dart of the rotation block; afterwards it starts just
    counterclockwise of the reversed incoming dart.  Returns ``None`` when
    the walk gets stuck.
    """
    out = []
    v = x
    if dist[v] < 0:
        return None
    back = -1
    while dist[v] > 0:
        base = indptr[v]
        deg = indptr[v + 1] - base
        target = dist[v] - 1
        found = -1
        if back < 0:
            for k in range(deg):
                d = rot[base + deg - 1 - k]
                if stamp[edge[d]] == token and dist[head[d]] == target:
                    found = d
                    break
        else:
            p = pos[back]
            for k in range(1, deg):
                d = rot[base + (p - k) % deg]
                if stamp[edge[d]] == token and dist[head[d]] == target:
                    found = d
                    break
        if found < 0:
            return None
        out.append(found)
        v = head[found]
        back = twin[found]
    return np.asarray(out, dtype=np.int64)


def split_region(indptr, rot, pos, tail, head, twin, edge, stamp, token,
                 region_edges, path, vmark, vside, eside):
    """Classify region edges as path (0), clockwise side (1) or other side (2).

    ``vmark``/``vside``/``eside`` are caller-owned scratch arrays filled with
    -1/0/-1; they are restored before returning.
    """
    m = len(path)
    verts = [tail[path[0]]] + [head[path[t]] for t in range(m)]
    for t in range(m):
        eside[edge[path[t]]] = 0
    for t, v in enumerate(verts):
        vmark[v] = t
    touched = []
    status = SPLIT_OK
    queue = deque()
    for t, v in enumerate(verts):
        base = indptr[v]
        deg = indptr[v + 1] - base
        two = 2 * deg
        b2 = two - 1 if t == 0 else 2 * pos[twin[path[t - 1]]]
        f2 = two - 1 if t == m else 2 * pos[path[t]]
        span = (b2 - f2) % two
        for q in range(deg):
            d = rot[base + q]
            e = edge[d]
            if stamp[e] != token or eside[e] == 0:
                continue
            r = (2 * q - f2) % two
            side = 1 if 0 < r < span else 2
            if eside[e] < 0:
                eside[e] = side
            elif eside[e] != side:
                status = SPLIT_CONFLICT
            w = head[d]
            if vmark[w] < 0:
                if vside[w] == 0:
                    vside[w] = side
                    touched.append(w)
                    queue.append(w)
                elif vside[w] != side:
                    status = SPLIT_CONFLICT
    while queue and status == SPLIT_OK:
        w = queue.popleft()
        side = vside[w]
        for p in range(indptr[w], indptr[w + 1]):
            d = rot[p]
            e = edge[d]
            if stamp[e] != token:
                continue
            if eside[e] < 0:
                eside[e] = side
            elif eside[e] != side:
                status = SPLIT_CONFLICT
                break
            z = head[d]
            if vmark[z] < 0:
                if vside[z] == 0:
                    vside[z] = side
                    touched.append(z)
                    queue.append(z)
                elif vside[z] != side:
                    status = SPLIT_CONFLICT
                    break
    sides = np.empty(len(region_edges), dtype=np.int8)
    for i in range(len(region_edges)):
        e = region_edges[i]
        s = eside[e]
        if s < 0 and status == SPLIT_OK:
            status = SPLIT_UNCLASSIFIED
        sides[i] = s
        eside[e] = -1
    for t in range(m):
        eside[edge[path[t]]] = -1
    for v in verts:
        vmark[v] = -1
    for w in touched:
        vside[w] = 0
    return sides, status


def propagate_face_labels(face_indptr, face_order, face_of, twin, edge, is_u,
                          outer, label):
    """Spread face labels across non-wall edges; returns a conflicting face or -1."""
    queue = deque(int(f) for f in np.flatnonzero(label >= 0) if f != outer)
    while queue:
        f = queue.popleft()
        lf = label[f]
        for p in range(face_indptr[f], face_indptr[f + 1]):
            d = face_order[p]
            if is_u[edge[d]]:
                continue
            g = face_of[twin[d]]
            if g == outer:
                continue
            if label[g] < 0:
                label[g] = lf
                queue.append(g)
            elif label[g] != lf:
                return g
    return -1


def bfs_csr(indptr, indices, src):
    n = len(indptr) - 1
    dist = np.full(n, -1, dtype=np.int64)
    dist[src] = 0
    queue = [src]
    i = 0
    while i < len(queue):
        v = queue[i]
        i += 1
        dv = dist[v] + 1
        for p in range(indptr[v], indptr[v + 1]):
            w = indices[p]
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
    return dist
