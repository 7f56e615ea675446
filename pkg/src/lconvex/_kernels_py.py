"""Pure-Python/numpy kernels; the reference the compiled module must match."""

from __future__ import annotations

import itertools

import numpy as np

ABSENT, INFINITE, FINITE = 0, 1, 2

_PAIR_CHUNK = 1 << 22


def midpoint_violation(mid_lo, mid_hi, n, base, codes, vals, state):
    """First pair ``(i, j)``, ``i < j``, of ``codes`` violating
    ``g(x) + g(y) >= g(x.y) + g(xoy)``; ``(-1, -1)`` if none.

    Points are mixed-radix codes over ``base`` symbols per coordinate;
    ``mid_lo``/``mid_hi`` are flattened ``base x base`` tables (``-1`` where
    undefined); ``vals``/``state`` are indexed by point code.
    """
    codes = np.asarray(codes, dtype=np.int64)
    m = len(codes)
    if m < 2:
        return -1, -1
    mid_lo = np.asarray(mid_lo, dtype=np.int64)
    mid_hi = np.asarray(mid_hi, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.int64)
    state = np.asarray(state, dtype=np.int8)
    digits = np.empty((m, n), dtype=np.int64)
    rest = codes.copy()
    for c in range(n):
        digits[:, c] = rest % base
        rest //= base
    powers = base ** np.arange(n, dtype=np.int64)
    rows = max(1, _PAIR_CHUNK // m)
    for start in range(0, m - 1, rows):
        stop = min(m - 1, start + rows)
        di = digits[start:stop]
        lo = np.zeros((stop - start, m), dtype=np.int64)
        hi = np.zeros((stop - start, m), dtype=np.int64)
        bad = np.zeros((stop - start, m), dtype=bool)
        for c in range(n):
            idx = di[:, c][:, None] * base + digits[:, c][None, :]
            lc = mid_lo[idx]
            hc = mid_hi[idx]
            bad |= (lc < 0) | (hc < 0)
            lo += np.where(lc < 0, 0, lc) * powers[c]
            hi += np.where(hc < 0, 0, hc) * powers[c]
        bad |= state[lo] != FINITE
        bad |= state[hi] != FINITE
        lhs = vals[codes[start:stop]][:, None] + vals[codes][None, :]
        bad |= lhs < vals[lo] + vals[hi]
        # keep only j > i
        ii = np.arange(start, stop)[:, None]
        jj = np.arange(m)[None, :]
        bad &= jj > ii
        if bad.any():
            r, j = np.argwhere(bad)[0]
            return int(start + r), int(j)
    return -1, -1


def _pair_cost(ray_i, t_i, ray_j, t_j, two_a):
    same = (ray_i == ray_j) | (t_i == 0) | (t_j == 0)
    dist = np.where(same, np.abs(t_i - t_j), t_i + t_j)
    return np.maximum(dist - two_a, 0)


def potential_ball_min(cand_ray, cand_t, cand_len, unary, ei, ej, ec, ea2):
    """Exhaustive minimum of twice the dual objective over a product of
    per-node candidate lists.

    Returns ``(best, count, min_maxhop, argmin)`` where ``argmin`` is the
    lexicographically first minimizer (candidate indices) and ``min_maxhop``
    is the least ``max_i t_i`` over all minimizers.
    """
    n = len(cand_len)
    cand_len = [int(x) for x in cand_len]
    rays = [np.asarray(cand_ray[i][: cand_len[i]], dtype=np.int64) for i in range(n)]
    ts = [np.asarray(cand_t[i][: cand_len[i]], dtype=np.int64) for i in range(n)]
    edges = list(zip((int(x) for x in ei), (int(x) for x in ej), (int(x) for x in ec), (int(x) for x in ea2)))
    # vectorize the trailing coordinates, loop over the leading ones
    tail = n
    size = 1
    while tail > 0 and size * cand_len[tail - 1] <= 1 << 20:
        tail -= 1
        size *= cand_len[tail]
    best = None
    count = 0
    min_hop = None
    arg = None
    tail_idx = np.indices([cand_len[i] for i in range(tail, n)]).reshape(n - tail, -1) if tail < n else np.zeros((0, 1), dtype=np.int64)
    for head in itertools.product(*(range(cand_len[i]) for i in range(tail))):
        total = np.zeros(tail_idx.shape[1], dtype=np.int64)
        ray = {}
        t = {}
        for i in range(n):
            if i < tail:
                ray[i] = np.full(tail_idx.shape[1], rays[i][head[i]])
                t[i] = np.full(tail_idx.shape[1], ts[i][head[i]])
            else:
                ray[i] = rays[i][tail_idx[i - tail]]
                t[i] = ts[i][tail_idx[i - tail]]
            total += int(unary[i]) * t[i]
        for i, j, c, a2 in edges:
            total += c * _pair_cost(ray[i], t[i], ray[j], t[j], a2)
        lo = int(total.min())
        hit = total == lo
        maxhop = np.zeros(tail_idx.shape[1], dtype=np.int64)
        for i in range(n):
            maxhop = np.maximum(maxhop, t[i])
        hop_here = int(maxhop[hit].min())
        if best is None or lo < best:
            best, count, min_hop = lo, int(hit.sum()), hop_here
            k = int(np.argmax(hit))
            arg = list(head) + [int(tail_idx[i][k]) for i in range(n - tail)]
        elif lo == best:
            count += int(hit.sum())
            min_hop = min(min_hop, hop_here)
    return best, count, min_hop, arg
