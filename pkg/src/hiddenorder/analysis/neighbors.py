"""Exact k-nearest-neighbour search under the max-norm.

Library points are identified by their row index, which doubles as their
time index; a candidate ``j`` is skipped for a query at time ``t`` when
``|t - j| <= theiler``. Ties in distance go to the smaller index, so the
grid search and the exhaustive scan return identical neighbours.
"""
from __future__ import annotations

import numpy as np

from . import _kernels

BRUTE_FORCE_BELOW = 2000
MAX_GRID_DIMS = 3
MAX_CELLS_PER_AXIS = 1024
RING_LIMIT = 4
DENSE_CELLS_PER_POINT = 8
_SCALE_PROBES = 256
# cell edge relative to the median k-th neighbour distance
CELL_SCALE = 1.5


class GridIndex:
    """Library points bucketed into cubic cells over the first few coordinates."""

    def __init__(self, points, cell_size):
        self.points = np.ascontiguousarray(points, dtype=np.float64)
        g = min(self.points.shape[1], MAX_GRID_DIMS)
        proj = self.points[:, :g]
        self.lo = proj.min(axis=0)
        extent = float((proj.max(axis=0) - self.lo).max())
        h = max(float(cell_size), extent / (MAX_CELLS_PER_AXIS - 1))
        if extent == 0.0:
            h = 1.0
        self.cell_size = h
        coords = np.floor((proj - self.lo) / h).astype(np.int64)
        self.ncell = coords.max(axis=0) + 1
        stride = np.ones(g, dtype=np.int64)
        for d in range(g - 2, -1, -1):
            stride[d] = stride[d + 1] * self.ncell[d + 1]
        cell_keys = coords @ stride
        self.order = np.argsort(cell_keys, kind="stable").astype(np.int64)
        sorted_keys = cell_keys[self.order]
        self.keys, first = np.unique(sorted_keys, return_index=True)
        self.starts = np.append(first, sorted_keys.size).astype(np.int64)
        n_keys = int(np.prod(self.ncell))
        if n_keys <= DENSE_CELLS_PER_POINT * max(len(self.points), 1024):
            self.cell_of_key = np.full(n_keys, -1, dtype=np.int64)
            self.cell_of_key[self.keys] = np.arange(self.keys.size)
        else:
            self.cell_of_key = np.empty(0, dtype=np.int64)

    def query(self, queries, query_index, k, theiler, workers=1):
        out_i, out_d = _alloc(queries.shape[0], k)

        def work(a, b):
            _kernels.knn_grid(self.points, self.order, self.cell_of_key, self.keys, self.starts,
                              self.lo, self.cell_size, self.ncell, queries,
                              query_index, k, theiler, RING_LIMIT, a, b, out_i, out_d)

        _kernels.run_chunked(work, queries.shape[0], workers)
        return out_i, out_d


def _alloc(nq, k):
    return np.empty((nq, k), dtype=np.int64), np.empty((nq, k), dtype=np.float64)


def brute_knn(library, queries, query_index, k, theiler, workers=1):
    out_i, out_d = _alloc(queries.shape[0], k)

    def work(a, b):
        _kernels.knn_brute(library, queries, query_index, k, theiler, a, b,
                           out_i, out_d)

    _kernels.run_chunked(work, queries.shape[0], workers)
    return out_i, out_d


def neighbor_scale(library, k, theiler):
    """Median k-th neighbour distance over evenly spaced library probes.

    The probes are answered on a provisional grid sized as if the points
    were spread uniformly; the search is exact either way.
    """
    n = library.shape[0]
    probe = np.unique(np.linspace(0, n - 1, min(n, _SCALE_PROBES)).astype(np.int64))
    g = min(library.shape[1], MAX_GRID_DIMS)
    proj = library[:, :g]
    extent = float((proj.max(axis=0) - proj.min(axis=0)).max())
    rough = GridIndex(library, extent / max(1.0, (n / k) ** (1.0 / g)))
    _, dist = rough.query(np.ascontiguousarray(library[probe]), probe, k, theiler)
    finite = dist[:, -1][np.isfinite(dist[:, -1])]
    if finite.size == 0:
        return 0.0
    return float(np.median(finite))


def knn(library, queries, query_index, k, theiler=0, workers=1, method="auto"):
    """Indices and distances of the ``k`` nearest admissible library rows.

    Rows with fewer than ``k`` admissible candidates are padded with index
    -1 and distance inf.
    """
    library = np.ascontiguousarray(library, dtype=np.float64)
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    query_index = np.ascontiguousarray(query_index, dtype=np.int64)
    if method == "auto":
        method = "brute" if library.shape[0] < BRUTE_FORCE_BELOW else "grid"
    if method == "brute":
        return brute_knn(library, queries, query_index, k, theiler, workers)
    if method != "grid":
        raise ValueError(f"unknown neighbour method {method!r}")
    index = GridIndex(library, CELL_SCALE * neighbor_scale(library, k, theiler))
    return index.query(queries, query_index, k, theiler, workers)
