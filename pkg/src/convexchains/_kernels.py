"""Compiled inner loops. Inputs are already in standard position
(p0 = (0, 1), p2 = (1, 0)) and sorted by increasing x, ties by decreasing y.
"""
import numpy as np
from numba import njit

NO_PRED = -1


@njit(cache=True, nogil=True)
def _grow(buf, need):
    if need <= buf.shape[0]:
        return buf
    size = buf.shape[0] * 2
    while size < need:
        size *= 2
    out = np.empty(size, dtype=buf.dtype)
    out[: buf.shape[0]] = buf
    return out


@njit(cache=True, nogil=True)
def slope_list_dp(xs, ys, prune):
    """Minimal-last-slope dynamic program.

    For point i the entries ``start[i] .. start[i] + count[i] - 1`` of
    ``slopes``/``preds`` hold, for chain length k = 1, 2, ..., the smallest
    slope of the last segment over chains p0 -> ... -> i of exactly k points,
    and the index of the previous chain point (NO_PRED for p0).

    With ``prune`` set, entries whose slope is >= slope(i, p2) are dropped:
    such chains can neither close at p2 nor be extended into one that does.
    """
    n = xs.shape[0]
    start = np.zeros(n, dtype=np.int64)
    count = np.zeros(n, dtype=np.int64)
    first = np.empty(n, dtype=np.float64)  # slope of entry 1, +inf if empty
    cand = np.empty(n + 1, dtype=np.int64)
    cand_dx = np.empty(n + 1, dtype=np.float64)
    cand_dy = np.empty(n + 1, dtype=np.float64)
    cap = max(16, 8 * n)
    slopes = np.empty(cap, dtype=np.float64)
    preds = np.empty(cap, dtype=np.int64)
    used = 0

    stair_s = np.empty(8, dtype=np.float64)
    stair_p = np.empty(8, dtype=np.int64)
    maxlen = 0

    for q in range(n):
        xq = xs[q]
        yq = ys[q]
        if xq > 0.0:
            s0 = (yq - 1.0) / xq
        else:
            s0 = -np.inf
        if xq < 1.0:
            s_end = (0.0 - yq) / (1.0 - xq)
        else:
            s_end = np.inf

        # stair[j] = min slope over candidates with reach >= j; nondecreasing
        width = maxlen + 2
        if stair_s.shape[0] < width:
            stair_s = np.empty(2 * width, dtype=np.float64)
            stair_p = np.empty(2 * width, dtype=np.int64)
        for j in range(width):
            stair_s[j] = np.inf
            stair_p[j] = NO_PRED
        top = 0

        # pass 1: division-free wedge test with slack, vectorizable
        m = 0
        for p in range(q):
            dx = xq - xs[p]
            dy = yq - ys[p]
            ok = first[p] * dx < dy + 1e-12
            if prune:
                ok = ok & (dy * (1.0 - xq) < 1e-12 - yq * dx)
            cand[m] = p
            cand_dx[m] = dx
            cand_dy[m] = dy
            m += ok
        # pass 2: exact decision; reach J by binary search unless dominated
        for c in range(m - 1, -1, -1):
            dx = cand_dx[c]
            if dx <= 0.0:
                continue
            s = cand_dy[c] / dx
            if prune and s >= s_end:
                continue
            p = cand[c]
            cp = count[p]
            if s >= stair_s[cp]:
                continue  # stair[J] <= stair[cp] for the true reach J <= cp
            base = start[p]
            if not slopes[base] < s:
                continue
            if slopes[base + cp - 1] < s:
                lo = cp
            else:
                # largest J with slopes[base + J - 1] < s
                lo = 1
                hi = cp - 1
                while lo < hi:
                    mid = (lo + hi + 1) >> 1
                    if slopes[base + mid - 1] < s:
                        lo = mid
                    else:
                        hi = mid - 1
            if lo > top:
                top = lo
            j = lo
            while j >= 1 and stair_s[j] > s:
                stair_s[j] = s
                stair_p[j] = p
                j -= 1

        # entry for length j + 1 is stair[j]
        length = top + 1
        if prune and not s0 < s_end:
            length = 0
        start[q] = used
        slopes = _grow(slopes, used + length)
        preds = _grow(preds, used + length)
        if length > 0:
            slopes[used] = s0
            preds[used] = NO_PRED
            for j in range(1, length):
                slopes[used + j] = stair_s[j]
                preds[used + j] = stair_p[j]
            if prune:
                k = 1
                while k < length and slopes[used + k] < s_end:
                    k += 1
                length = k
        count[q] = length
        first[q] = slopes[used] if length > 0 else np.inf
        used += length
        if length > maxlen:
            maxlen = length

    return start, count, slopes[:used], preds[:used]


@njit(cache=True, nogil=True)
def best_chain_end(xs, ys, start, count, slopes):
    """(point, length) of a longest chain that closes at p2; (-1, 0) if none."""
    best_len = 0
    best_pt = -1
    for p in range(xs.shape[0]):
        if xs[p] >= 1.0:
            continue
        s_end = (0.0 - ys[p]) / (1.0 - xs[p])
        cp = count[p]
        base = start[p]
        k = cp
        while k > 0 and not slopes[base + k - 1] < s_end:
            k -= 1
        if k > best_len:
            best_len = k
            best_pt = p
    return best_pt, best_len


@njit(cache=True, nogil=True)
def longest_chain_length(xs, ys):
    start, count, slopes, preds = slope_list_dp(xs, ys, True)
    return best_chain_end(xs, ys, start, count, slopes)[1]


@njit(cache=True, nogil=True)
def _cross(ox, oy, ax, ay, bx, by):
    return (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)


@njit(cache=True, nogil=True)
def hull_vertex_count(pts, eps):
    """Number of strict convex-hull vertices (Andrew's monotone chain).
    ``pts`` must be sorted lexicographically. Collinear boundary points are
    not counted; exact duplicates count once."""
    n = pts.shape[0]
    if n < 3:
        return n
    hull = np.empty(2 * n, dtype=np.int64)
    k = 0
    for i in range(n):
        while k >= 2:
            a = hull[k - 2]
            b = hull[k - 1]
            c = _cross(pts[a, 0], pts[a, 1], pts[b, 0], pts[b, 1], pts[i, 0], pts[i, 1])
            scale = abs((pts[b, 0] - pts[a, 0]) * (pts[i, 1] - pts[a, 1])) + abs(
                (pts[b, 1] - pts[a, 1]) * (pts[i, 0] - pts[a, 0])
            )
            if c <= eps * scale:
                k -= 1
            else:
                break
        hull[k] = i
        k += 1
    lower = k + 1
    for i in range(n - 2, -1, -1):
        while k >= lower:
            a = hull[k - 2]
            b = hull[k - 1]
            c = _cross(pts[a, 0], pts[a, 1], pts[b, 0], pts[b, 1], pts[i, 0], pts[i, 1])
            scale = abs((pts[b, 0] - pts[a, 0]) * (pts[i, 1] - pts[a, 1])) + abs(
                (pts[b, 1] - pts[a, 1]) * (pts[i, 0] - pts[a, 0])
            )
            if c <= eps * scale:
                k -= 1
            else:
                break
        hull[k] = i
        k += 1
    return k - 1


@njit(cache=True, nogil=True)
def convex_position_batch(batch, eps):
    """batch: (m, n, 2), each row sorted lexicographically."""
    m = batch.shape[0]
    n = batch.shape[1]
    out = np.empty(m, dtype=np.bool_)
    for i in range(m):
        out[i] = hull_vertex_count(batch[i], eps) == n
    return out
