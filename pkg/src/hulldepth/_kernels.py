"""Numba kernels behind the hull and depth hot paths.

All point lists handed to the merge-based entry points must be sorted
lexicographically by (x, y).  Per-draw randomness is a pure hash of
(seed, draw, step), so results are independent of evaluation order and of
the number of threads; parallel loops only ever write disjoint output slots.
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)
_INV53 = 1.0 / 9007199254740992.0  # 2**-53


@njit(cache=True, inline="always")
def _mix64(z):
    z = (z ^ (z >> _U64(30))) * _MIX1
    z = (z ^ (z >> _U64(27))) * _MIX2
    return z ^ (z >> _U64(31))


@njit(cache=True, inline="always")
def _draw_base(seed, draw):
    return _mix64(_mix64(_U64(seed)) ^ ((_U64(draw) + _U64(1)) * _GOLDEN))


@njit(cache=True, inline="always")
def _stream_u01(base, step):
    bits = _mix64(base + (_U64(step) + _U64(1)) * _GOLDEN)
    return np.float64(bits >> _U64(11)) * _INV53


@njit(cache=True)
def chain_ring(px, py):
    """Monotone-chain hull of lexicographically sorted points.

    Returns indices into (px, py) forming the CCW vertex ring; collinear
    boundary points are dropped.  Degenerate inputs yield rings of 1 or 2
    indices (possibly referring to duplicate coordinates).
    """
    m = px.shape[0]
    if m == 1:
        out = np.empty(1, np.int64)
        out[0] = 0
        return out
    idx = np.empty(2 * m + 1, np.int64)
    k = 0
    for i in range(m):
        while k >= 2:
            o, a = idx[k - 2], idx[k - 1]
            if (px[a] - px[o]) * (py[i] - py[o]) - (py[a] - py[o]) * (px[i] - px[o]) <= 0.0:
                k -= 1
            else:
                break
        idx[k] = i
        k += 1
    t = k + 1
    for i in range(m - 2, -1, -1):
        while k >= t:
            o, a = idx[k - 2], idx[k - 1]
            if (px[a] - px[o]) * (py[i] - py[o]) - (py[a] - py[o]) * (px[i] - px[o]) <= 0.0:
                k -= 1
            else:
                break
        idx[k] = i
        k += 1
    return idx[: k - 1].copy()


@njit(cache=True)
def chain_area(px, py, m):
    """Convex hull area of the first m lexicographically sorted points."""
    if m < 3:
        return 0.0
    hx = np.empty(2 * m + 1, np.float64)
    hy = np.empty(2 * m + 1, np.float64)
    k = 0
    for i in range(m):
        while k >= 2:
            if (hx[k - 1] - hx[k - 2]) * (py[i] - hy[k - 2]) - (hy[k - 1] - hy[k - 2]) * (px[i] - hx[k - 2]) <= 0.0:
                k -= 1
            else:
                break
        hx[k] = px[i]
        hy[k] = py[i]
        k += 1
    t = k + 1
    for i in range(m - 2, -1, -1):
        while k >= t:
            if (hx[k - 1] - hx[k - 2]) * (py[i] - hy[k - 2]) - (hy[k - 1] - hy[k - 2]) * (px[i] - hx[k - 2]) <= 0.0:
                k -= 1
            else:
                break
        hx[k] = px[i]
        hy[k] = py[i]
        k += 1
    # ring is hx[0..k-2]; hx[k-1] repeats the start, closing the loop
    area2 = 0.0
    for i in range(k - 1):
        area2 += hx[i] * hy[i + 1] - hx[i + 1] * hy[i]
    return abs(area2) / 2.0


@njit(cache=True)
def _merge_lists(xs, ys, offs, members, l, wx, wy):
    """Merge l sorted per-curve vertex lists into (wx, wy); returns count."""
    cur = np.empty(l, np.int64)
    end = np.empty(l, np.int64)
    for j in range(l):
        c = members[j]
        cur[j] = offs[c]
        end[j] = offs[c + 1]
    m = 0
    while True:
        best = -1
        for j in range(l):
            if cur[j] < end[j]:
                if best < 0:
                    best = j
                else:
                    p, q = cur[j], cur[best]
                    if xs[p] < xs[q] or (xs[p] == xs[q] and ys[p] < ys[q]):
                        best = j
        if best < 0:
            break
        p = cur[best]
        wx[m] = xs[p]
        wy[m] = ys[p]
        m += 1
        cur[best] += 1
    return m


@njit(cache=True)
def _merge_two(ax, ay, na, bx, by, nb, wx, wy):
    i = 0
    j = 0
    m = 0
    while i < na and j < nb:
        if ax[i] < bx[j] or (ax[i] == bx[j] and ay[i] <= by[j]):
            wx[m] = ax[i]
            wy[m] = ay[i]
            i += 1
        else:
            wx[m] = bx[j]
            wy[m] = by[j]
            j += 1
        m += 1
    while i < na:
        wx[m] = ax[i]
        wy[m] = ay[i]
        i += 1
        m += 1
    while j < nb:
        wx[m] = bx[j]
        wy[m] = by[j]
        j += 1
        m += 1
    return m


@njit(cache=True, inline="always")
def _ratio(num, den):
    if den <= 0.0:
        return 1.0  # query added nothing to a degenerate hull
    r = num / den
    return 1.0 if r > 1.0 else r


@njit(cache=True)
def sample_draws(seed, n, J, K, cumw, averaged):
    """Draw K subsets; stream for draw k is keyed by (seed, k).

    Averaged mode first picks a degree l from the cumulative weights, then a
    uniform size-l subset (Floyd's algorithm); otherwise the degree is J.
    """
    degrees = np.empty(K, np.int64)
    members = np.empty((K, J), np.int64)
    for k in range(K):
        base = _draw_base(seed, k)
        step = 0
        l = J
        if averaged:
            u = _stream_u01(base, step)
            step += 1
            l = 1
            while l < J and u >= cumw[l - 1]:
                l += 1
        degrees[k] = l
        cnt = 0
        for j in range(n - l, n):
            r = np.int64(_stream_u01(base, step) * (j + 1))
            step += 1
            dup = False
            for q in range(cnt):
                if members[k, q] == r:
                    dup = True
                    break
            members[k, cnt] = j if dup else r
            cnt += 1
    return degrees, members


@njit(cache=True)
def merged_sizes(lengths, degrees, members):
    K = degrees.shape[0]
    sizes = np.empty(K, np.int64)
    for k in range(K):
        s = 0
        for j in range(degrees[k]):
            s += lengths[members[k, j]]
        sizes[k] = s
    return sizes


@njit(cache=True)
def build_subset_cache(xs, ys, offs, degrees, members, moffs, mx, my, areas):
    """Merge every drawn subset once; store merged points and hull areas."""
    K = degrees.shape[0]
    for k in range(K):
        a = moffs[k]
        m = _merge_lists(xs, ys, offs, members[k], degrees[k], mx[a:], my[a:])
        areas[k] = chain_area(mx[a:], my[a:], m)


@njit(cache=True)
def score_against_cache(mx, my, moffs, sizes, areas, qx, qy, wx, wy):
    """Mean hull-area ratio over cached subsets for one query."""
    K = sizes.shape[0]
    nq = qx.shape[0]
    acc = 0.0
    for k in range(K):
        a = moffs[k]
        na = sizes[k]
        m = _merge_two(mx[a : a + na], my[a : a + na], na, qx, qy, nq, wx, wy)
        acc += _ratio(areas[k], chain_area(wx, wy, m))
    return acc / K


@njit(cache=True, parallel=True)
def score_many_against_cache(mx, my, moffs, sizes, areas, qxs, qys, qoffs, out):
    nq = qoffs.shape[0] - 1
    maxm = 0
    for k in range(sizes.shape[0]):
        if sizes[k] > maxm:
            maxm = sizes[k]
    for qi in prange(nq):
        q0 = qoffs[qi]
        q1 = qoffs[qi + 1]
        wx = np.empty(maxm + (q1 - q0), np.float64)
        wy = np.empty(maxm + (q1 - q0), np.float64)
        out[qi] = score_against_cache(mx, my, moffs, sizes, areas, qxs[q0:q1], qys[q0:q1], wx, wy)


@njit(cache=True)
def exact_score(xs, ys, offs, n, j, total, qx, qy):
    """Mean ratio over all C(n, j) subsets, enumerated in lexicographic order."""
    maxlen = 0
    for c in range(n):
        ln = offs[c + 1] - offs[c]
        if ln > maxlen:
            maxlen = ln
    nq = qx.shape[0]
    wx = np.empty(j * maxlen, np.float64)
    wy = np.empty(j * maxlen, np.float64)
    vx = np.empty(j * maxlen + nq, np.float64)
    vy = np.empty(j * maxlen + nq, np.float64)
    comb = np.empty(j, np.int64)
    for i in range(j):
        comb[i] = i
    acc = 0.0
    while True:
        m = _merge_lists(xs, ys, offs, comb, j, wx, wy)
        num = chain_area(wx, wy, m)
        m2 = _merge_two(wx, wy, m, qx, qy, nq, vx, vy)
        acc += _ratio(num, chain_area(vx, vy, m2))
        i = j - 1
        while i >= 0 and comb[i] == n - j + i:
            i -= 1
        if i < 0:
            break
        comb[i] += 1
        for q in range(i + 1, j):
            comb[q] = comb[q - 1] + 1
    return acc / total


@njit(cache=True)
def population_score(xs, ys, offs, probs, j, qx, qy):
    """Expected ratio over ordered j-tuples of atoms with product weights."""
    s = probs.shape[0]
    maxlen = 0
    for c in range(s):
        ln = offs[c + 1] - offs[c]
        if ln > maxlen:
            maxlen = ln
    nq = qx.shape[0]
    wx = np.empty(j * maxlen, np.float64)
    wy = np.empty(j * maxlen, np.float64)
    vx = np.empty(j * maxlen + nq, np.float64)
    vy = np.empty(j * maxlen + nq, np.float64)
    idx = np.zeros(j, np.int64)
    acc = 0.0
    while True:
        w = 1.0
        for q in range(j):
            w *= probs[idx[q]]
        if w > 0.0:
            m = _merge_lists(xs, ys, offs, idx, j, wx, wy)
            num = chain_area(wx, wy, m)
            m2 = _merge_two(wx, wy, m, qx, qy, nq, vx, vy)
            acc += w * _ratio(num, chain_area(vx, vy, m2))
        pos = j - 1
        while pos >= 0 and idx[pos] == s - 1:
            idx[pos] = 0
            pos -= 1
        if pos < 0:
            break
        idx[pos] += 1
    return acc
