# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the loops in ``_pykernels`` (same contracts)."""

import numpy as np
from libc.stdint cimport int64_t, int8_t

cdef enum:
    C_OK = 0
    C_CONFLICT = 1
    C_UNCLASSIFIED = 2

SPLIT_OK = C_OK
SPLIT_CONFLICT = C_CONFLICT
SPLIT_UNCLASSIFIED = C_UNCLASSIFIED


cdef inline int64_t _mod(int64_t a, int64_t b) nogil:
    cdef int64_t r = a % b
    return r + b if r < 0 else r


def trace_permutation(const int64_t[:] succ):
    cdef Py_ssize_t n = succ.shape[0]
    label_a = np.full(n, -1, dtype=np.int64)
    order_a = np.empty(n, dtype=np.int64)
    starts_a = np.empty(n + 1, dtype=np.int64)
    cdef int64_t[:] label = label_a
    cdef int64_t[:] order = order_a
    cdef int64_t[:] starts = starts_a
    cdef int64_t k = 0, c = 0, d, d0
    starts[0] = 0
    with nogil:
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
            starts[c] = k
    return label_a, order_a, starts_a[:c + 1].copy()


def bfs_region(const int64_t[:] indptr, const int64_t[:] rot,
               const int64_t[:] head, const int64_t[:] edge,
               const int64_t[:] stamp, int64_t token, int64_t src,
               int64_t[:] dist):
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    queue_a = np.empty(nv, dtype=np.int64)
    cdef int64_t[:] queue = queue_a
    cdef int64_t head_i = 0, tail_i = 1, v, w, d, p, dv
    dist[src] = 0
    queue[0] = src
    with nogil:
        while head_i < tail_i:
            v = queue[head_i]
            head_i += 1
            dv = dist[v] + 1
            for p in range(indptr[v], indptr[v + 1]):
                d = rot[p]
                if stamp[edge[d]] != token:
                    continue
                w = head[d]
                if dist[w] < 0:
                    dist[w] = dv
                    queue[tail_i] = w
                    tail_i += 1
    return queue_a[:tail_i].copy()


def leftmost_walk(const int64_t[:] indptr, const int64_t[:] rot,
                  const int64_t[:] pos, const int64_t[:] head,
                  const int64_t[:] twin, const int64_t[:] edge,
                  const int64_t[:] stamp, int64_t token,
                  const int64_t[:] dist, int64_t x):
    if dist[x] < 0:
        return None
    cdef int64_t n_out = dist[x]
    out_a = np.empty(n_out, dtype=np.int64)
    cdef int64_t[:] out = out_a
    cdef int64_t v = x, back = -1, base, deg, target, found, k, d, p, i = 0
    with nogil:
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
                    d = rot[base + _mod(p - k, deg)]
                    if stamp[edge[d]] == token and dist[head[d]] == target:
                        found = d
                        break
            if found < 0:
                break
            out[i] = found
            i += 1
            v = head[found]
            back = twin[found]
    if i != n_out:
        return None
    return out_a


def split_region(const int64_t[:] indptr, const int64_t[:] rot,
                 const int64_t[:] pos, const int64_t[:] tail,
                 const int64_t[:] head, const int64_t[:] twin,
                 const int64_t[:] edge, const int64_t[:] stamp, int64_t token,
                 const int64_t[:] region_edges, const int64_t[:] path,
                 int64_t[:] vmark, int8_t[:] vside, int64_t[:] eside):
    cdef Py_ssize_t m = path.shape[0]
    cdef Py_ssize_t nv = indptr.shape[0] - 1
    cdef Py_ssize_t nr = region_edges.shape[0]
    verts_a = np.empty(m + 1, dtype=np.int64)
    queue_a = np.empty(nv, dtype=np.int64)
    sides_a = np.empty(nr, dtype=np.int8)
    cdef int64_t[:] verts = verts_a
    cdef int64_t[:] queue = queue_a
    cdef int8_t[:] sides = sides_a
    cdef int64_t t, v, base, deg, two, b2, f2, span, q, d, e, r, w, z, p
    cdef int64_t qh = 0, qt = 0, i
    cdef int8_t side, s
    cdef int status = C_OK
    with nogil:
        verts[0] = tail[path[0]]
        for t in range(m):
            verts[t + 1] = head[path[t]]
            eside[edge[path[t]]] = 0
        for t in range(m + 1):
            vmark[verts[t]] = t
        for t in range(m + 1):
            v = verts[t]
            base = indptr[v]
            deg = indptr[v + 1] - base
            two = 2 * deg
            b2 = two - 1 if t == 0 else 2 * pos[twin[path[t - 1]]]
            f2 = two - 1 if t == m else 2 * pos[path[t]]
            span = _mod(b2 - f2, two)
            for q in range(deg):
                d = rot[base + q]
                e = edge[d]
                if stamp[e] != token or eside[e] == 0:
                    continue
                r = _mod(2 * q - f2, two)
                side = 1 if (0 < r and r < span) else 2
                if eside[e] < 0:
                    eside[e] = side
                elif eside[e] != side:
                    status = C_CONFLICT
                w = head[d]
                if vmark[w] < 0:
                    if vside[w] == 0:
                        vside[w] = side
                        queue[qt] = w
                        qt += 1
                    elif vside[w] != side:
                        status = C_CONFLICT
        while qh < qt and status == C_OK:
            w = queue[qh]
            qh += 1
            side = vside[w]
            for p in range(indptr[w], indptr[w + 1]):
                d = rot[p]
                e = edge[d]
                if stamp[e] != token:
                    continue
                if eside[e] < 0:
                    eside[e] = side
                elif eside[e] != side:
                    status = C_CONFLICT
                    break
                z = head[d]
                if vmark[z] < 0:
                    if vside[z] == 0:
                        vside[z] = side
                        queue[qt] = z
                        qt += 1
                    elif vside[z] != side:
                        status = C_CONFLICT
                        break
        for i in range(nr):
            e = region_edges[i]
            s = <int8_t>eside[e]
            if s < 0 and status == C_OK:
                status = C_UNCLASSIFIED
            sides[i] = s
            eside[e] = -1
        for t in range(m):
            eside[edge[path[t]]] = -1
        for t in range(m + 1):
            vmark[verts[t]] = -1
        for i in range(qt):
            vside[queue[i]] = 0
    return sides_a, status


def propagate_face_labels(const int64_t[:] face_indptr,
                          const int64_t[:] face_order,
                          const int64_t[:] face_of, const int64_t[:] twin,
                          const int64_t[:] edge, const int8_t[:] is_u,
                          int64_t outer, int64_t[:] label):
    cdef Py_ssize_t nf = face_indptr.shape[0] - 1
    queue_a = np.empty(nf, dtype=np.int64)
    cdef int64_t[:] queue = queue_a
    cdef int64_t qh = 0, qt = 0, f, g, p, d, lf, bad = -1
    with nogil:
        for f in range(nf):
            if label[f] >= 0 and f != outer:
                queue[qt] = f
                qt += 1
        while qh < qt:
            f = queue[qh]
            qh += 1
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
                    queue[qt] = g
                    qt += 1
                elif label[g] != lf:
                    bad = g
                    break
            if bad >= 0:
                break
    return bad


def bfs_csr(const int64_t[:] indptr, const int64_t[:] indices, int64_t src):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    dist_a = np.full(n, -1, dtype=np.int64)
    queue_a = np.empty(n, dtype=np.int64)
    cdef int64_t[:] dist = dist_a
    cdef int64_t[:] queue = queue_a
    cdef int64_t qh = 0, qt = 1, v, w, p
    dist[src] = 0
    queue[0] = src
    with nogil:
        while qh < qt:
            v = queue[qh]
            qh += 1
            for p in range(indptr[v], indptr[v + 1]):
                w = indices[p]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue[qt] = w
                    qt += 1
    return dist_a
