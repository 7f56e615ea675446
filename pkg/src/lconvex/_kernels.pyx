# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the pair-check and dual-enumeration kernels.

Same contracts as ``_kernels_py``; see that module for documentation.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef enum:
    FINITE = 2


def midpoint_violation(mid_lo, mid_hi, int n, long long base, codes, vals, state):
    cdef long long[::1] lo_t = np.ascontiguousarray(mid_lo, dtype=np.int64)
    cdef long long[::1] hi_t = np.ascontiguousarray(mid_hi, dtype=np.int64)
    cdef long long[::1] cs = np.ascontiguousarray(codes, dtype=np.int64)
    cdef long long[::1] vs = np.ascontiguousarray(vals, dtype=np.int64)
    cdef signed char[::1] st = np.ascontiguousarray(state, dtype=np.int8)
    cdef Py_ssize_t m = cs.shape[0]
    cdef long long[:, ::1] dig = np.empty((max(m, 1), max(n, 1)), dtype=np.int64)
    cdef Py_ssize_t i, j
    cdef int c
    cdef long long rest, lo, hi, p, a, b, l, h
    cdef bint bad
    for i in range(m):
        rest = cs[i]
        for c in range(n):
            dig[i, c] = rest % base
            rest = rest // base
    for i in range(m):
        for j in range(i + 1, m):
            lo = 0
            hi = 0
            p = 1
            bad = False
            for c in range(n):
                a = dig[i, c]
                b = dig[j, c]
                l = lo_t[a * base + b]
                h = hi_t[a * base + b]
                if l < 0 or h < 0:
                    bad = True
                    break
                lo += l * p
                hi += h * p
                p *= base
            if bad:
                return i, j
            if st[lo] != FINITE or st[hi] != FINITE:
                return i, j
            if vs[cs[i]] + vs[cs[j]] < vs[lo] + vs[hi]:
                return i, j
    return -1, -1


cdef inline long long _dist(long long ri, long long ti, long long rj, long long tj) nogil:
    if ti == 0 or tj == 0 or ri == rj:
        return ti - tj if ti >= tj else tj - ti
    return ti + tj


def potential_ball_min(cand_ray, cand_t, cand_len, unary, ei, ej, ec, ea2):
    cdef long long[:, ::1] R = np.ascontiguousarray(cand_ray, dtype=np.int64)
    cdef long long[:, ::1] T = np.ascontiguousarray(cand_t, dtype=np.int64)
    cdef long long[::1] L = np.ascontiguousarray(cand_len, dtype=np.int64)
    cdef long long[::1] U = np.ascontiguousarray(unary, dtype=np.int64)
    cdef long long[::1] EI = np.ascontiguousarray(ei, dtype=np.int64)
    cdef long long[::1] EJ = np.ascontiguousarray(ej, dtype=np.int64)
    cdef long long[::1] EC = np.ascontiguousarray(ec, dtype=np.int64)
    cdef long long[::1] EA = np.ascontiguousarray(ea2, dtype=np.int64)
    cdef int n = L.shape[0]
    cdef Py_ssize_t m = EI.shape[0]
    if n == 0:
        return 0, 1, 0, []
    # edges grouped by their later endpoint so each level adds its own terms
    order = sorted(range(m), key=lambda e: max(EI[e], EJ[e]))
    cdef long long[::1] lvl_start = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] other = np.zeros(max(m, 1), dtype=np.int64)
    cdef long long[::1] cost = np.zeros(max(m, 1), dtype=np.int64)
    cdef long long[::1] twoa = np.zeros(max(m, 1), dtype=np.int64)
    cdef Py_ssize_t e, k
    cdef int lvl
    counts = [0] * (n + 1)
    for e in range(m):
        counts[max(EI[e], EJ[e]) + 1] += 1
    for lvl in range(n):
        lvl_start[lvl + 1] = lvl_start[lvl] + counts[lvl + 1]
    fill = [lvl_start[x] for x in range(n)]
    for e in order:
        hiv = max(EI[e], EJ[e])
        lov = min(EI[e], EJ[e])
        k = fill[hiv]
        other[k] = lov
        cost[k] = EC[e]
        twoa[k] = EA[e]
        fill[hiv] = k + 1

    cdef long long[::1] idx = np.zeros(n, dtype=np.int64)
    cdef long long[::1] partial = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] hop = np.zeros(n + 1, dtype=np.int64)
    cdef long long[::1] best_idx = np.zeros(n, dtype=np.int64)
    # suffix lower bounds of the unary terms; pair terms are nonnegative
    cdef long long[::1] rest = np.zeros(n + 1, dtype=np.int64)
    cdef long long lowest
    cdef Py_ssize_t q
    for lvl in range(n - 1, -1, -1):
        lowest = U[lvl] * T[lvl, 0]
        for q in range(1, L[lvl]):
            if U[lvl] * T[lvl, q] < lowest:
                lowest = U[lvl] * T[lvl, q]
        rest[lvl] = rest[lvl + 1] + lowest
    cdef long long best = 0, count = 0, min_hop = 0
    cdef bint have = False
    cdef long long val, d, over, ri, ti, h
    cdef int i
    lvl = 0
    idx[0] = -1
    with nogil:
        while lvl >= 0:
            idx[lvl] += 1
            if idx[lvl] >= L[lvl]:
                idx[lvl] = -1
                lvl -= 1
                continue
            ri = R[lvl, idx[lvl]]
            ti = T[lvl, idx[lvl]]
            val = partial[lvl] + U[lvl] * ti
            for k in range(lvl_start[lvl], lvl_start[lvl + 1]):
                i = <int>other[k]
                d = _dist(ri, ti, R[i, idx[i]], T[i, idx[i]])
                over = d - twoa[k]
                if over > 0:
                    val += cost[k] * over
            h = hop[lvl]
            if ti > h:
                h = ti
            if lvl == n - 1:
                if not have or val < best:
                    have = True
                    best = val
                    count = 1
                    min_hop = h
                    for i in range(n):
                        best_idx[i] = idx[i]
                elif val == best:
                    count += 1
                    if h < min_hop:
                        min_hop = h
            elif have and val + rest[lvl + 1] > best:
                continue
            else:
                partial[lvl + 1] = val
                hop[lvl + 1] = h
                lvl += 1
                idx[lvl] = -1
    return best, count, min_hop, [int(best_idx[i]) for i in range(n)]
