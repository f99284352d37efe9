"""Compiled pairwise kernels and the chunked executor that drives them.

Work is always cut into the same ``N_CHUNKS`` index ranges whatever the
worker count, and partial results are combined in chunk order, so output
is bit-identical for any number of workers.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from numba import njit

N_CHUNKS = 64


def chunk_bounds(n, n_chunks=N_CHUNKS):
    n_chunks = max(1, min(n_chunks, n))
    return np.linspace(0, n, n_chunks + 1).astype(np.int64)


def run_chunked(fn, n, workers=1):
    """Call ``fn(start, stop)`` on each fixed chunk; results in chunk order."""
    bounds = chunk_bounds(n)
    spans = list(zip(bounds[:-1].tolist(), bounds[1:].tolist()))
    if workers is None or workers <= 1 or len(spans) == 1:
        return [fn(a, b) for a, b in spans]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda ab: fn(*ab), spans))


@njit(nogil=True, cache=True, inline="always")
def _maxnorm(a, b):
    d = 0.0
    for c in range(a.shape[0]):
        t = abs(a[c] - b[c])
        if t > d:
            d = t
    return d


@njit(nogil=True, cache=True, inline="always")
def _bin(d, radii):
    # number of radii <= d; distance d counts toward C(r) for every r > d
    lo = 0
    hi = radii.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if radii[mid] <= d:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(nogil=True, cache=True)
def exact_pair_hist(points, radii, theiler, i0, i1):
    m = points.shape[0]
    hist = np.zeros(radii.shape[0] + 1, dtype=np.int64)
    for i in range(i0, i1):
        for j in range(i + theiler + 1, m):
            hist[_bin(_maxnorm(points[i], points[j]), radii)] += 1
    return hist


@njit(nogil=True, cache=True)
def sampled_pair_hist(points, first, second, radii, s0, s1):
    hist = np.zeros(radii.shape[0] + 1, dtype=np.int64)
    for s in range(s0, s1):
        hist[_bin(_maxnorm(points[first[s]], points[second[s]]), radii)] += 1
    return hist


@njit(nogil=True, cache=True, inline="always")
def _offer(bd, bi, cnt, k, d, j):
    """Insert (d, j) into the sorted best-k list; returns the new count."""
    if cnt == k:
        if d > bd[k - 1] or (d == bd[k - 1] and j > bi[k - 1]):
            return cnt
        pos = k - 1
    else:
        pos = cnt
        cnt += 1
    while pos > 0 and (bd[pos - 1] > d or (bd[pos - 1] == d and bi[pos - 1] > j)):
        bd[pos] = bd[pos - 1]
        bi[pos] = bi[pos - 1]
        pos -= 1
    bd[pos] = d
    bi[pos] = j
    return cnt


@njit(nogil=True, cache=True)
def knn_brute(lib, queries, qidx, k, theiler, q0, q1, out_i, out_d):
    bd = np.empty(k)
    bi = np.empty(k, dtype=np.int64)
    for q in range(q0, q1):
        cnt = 0
        t = qidx[q]
        for j in range(lib.shape[0]):
            if abs(t - j) <= theiler:
                continue
            cnt = _offer(bd, bi, cnt, k, _maxnorm(queries[q], lib[j]), j)
        for c in range(k):
            if c < cnt:
                out_i[q, c] = bi[c]
                out_d[q, c] = bd[c]
            else:
                out_i[q, c] = -1
                out_d[q, c] = np.inf


@njit(nogil=True, cache=True)
def _find_cell(keys, key):
    lo = 0
    hi = keys.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    if lo < keys.shape[0] and keys[lo] == key:
        return lo
    return -1


@njit(nogil=True, cache=True)
def knn_grid(lib, order, cell_of_key, keys, starts, lo, h, ncell, queries, qidx, k,
             theiler, ring_limit, q0, q1, out_i, out_d):
    """Ring-by-ring search outward from the query's cell.

    ``cell_of_key`` is a dense key -> cell table when the grid is small
    enough, otherwise empty and cells are found by bisecting ``keys``.
    """
    g = ncell.shape[0]
    dense = cell_of_key.shape[0] > 0
    stride = np.ones(g, dtype=np.int64)
    for d in range(g - 2, -1, -1):
        stride[d] = stride[d + 1] * ncell[d + 1]
    bd = np.empty(k)
    bi = np.empty(k, dtype=np.int64)
    cq = np.empty(g, dtype=np.int64)
    off = np.empty(g, dtype=np.int64)
    for q in range(q0, q1):
        cnt = 0
        t = qidx[q]
        rmax = 0
        for d in range(g):
            cq[d] = np.int64(np.floor((queries[q, d] - lo[d]) / h))
            far = max(cq[d], ncell[d] - 1 - cq[d])
            if far > rmax:
                rmax = far
        r = 0
        while True:
            for d in range(g):
                off[d] = -r
            done = False
            while not done:
                ring = False
                inside = True
                key = 0
                for d in range(g):
                    if off[d] == r or off[d] == -r:
                        ring = True
                    c = cq[d] + off[d]
                    if c < 0 or c >= ncell[d]:
                        inside = False
                    key += c * stride[d]
                if ring and inside:
                    if dense:
                        cell = cell_of_key[key]
                    else:
                        cell = _find_cell(keys, key)
                    if cell >= 0:
                        for p in range(starts[cell], starts[cell + 1]):
                            j = order[p]
                            if abs(t - j) <= theiler:
                                continue
                            cnt = _offer(bd, bi, cnt, k,
                                         _maxnorm(queries[q], lib[j]), j)
                # odometer over the (2r+1)^g block
                d = g - 1
                while d >= 0:
                    off[d] += 1
                    if off[d] <= r:
                        break
                    off[d] = -r
                    d -= 1
                if d < 0:
                    done = True
            if r >= rmax:
                break
            if cnt == k:
                # distance from the query to the outside of the visited block
                margin = np.inf
                for d in range(g):
                    below = queries[q, d] - (lo[d] + (cq[d] - r) * h)
                    above = lo[d] + (cq[d] + r + 1) * h - queries[q, d]
                    margin = min(margin, below, above)
                if bd[k - 1] * (1.0 + 1e-12) < margin * (1.0 - 1e-12):
                    break
            r += 1
            if r > ring_limit:
                # sparse neighbourhood: an exact scan is cheaper than more rings
                cnt = 0
                for j in range(lib.shape[0]):
                    if abs(t - j) <= theiler:
                        continue
                    cnt = _offer(bd, bi, cnt, k, _maxnorm(queries[q], lib[j]), j)
                break
        for c in range(k):
            if c < cnt:
                out_i[q, c] = bi[c]
                out_d[q, c] = bd[c]
            else:
                out_i[q, c] = -1
                out_d[q, c] = np.inf
