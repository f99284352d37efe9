"""Nearest-neighbour forecastability in the reconstructed phase space."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..embedding import EmbeddingConfig, delay_embed
from ..errors import InsufficientData
from ..series import EventSeries
from .neighbors import knn

DEFAULT_K = 4
DEFAULT_TEST_FRACTION = 0.25
MIN_POINTS = 500


@dataclass(frozen=True)
class ForecastResult:
    horizon: int
    normalized_error: float
    neighbor_count: int
    test_points: int
    library_points: int
    theiler: int


def knn_forecast_error(series: EventSeries, config: EmbeddingConfig = EmbeddingConfig(),
                       k: int = DEFAULT_K, test_fraction: float = DEFAULT_TEST_FRACTION,
                       horizon: int = 1, theiler: Optional[int] = None,
                       workers: int = 1) -> ForecastResult:
    """One-step analogue forecast scored against the mean predictor.

    The last ``test_fraction`` of delay vectors are predicted from the
    ``k`` nearest earlier vectors (max-norm, Theiler-excluded) as the mean
    of their successors. The score is RMS forecast error divided by the RMS
    error of always predicting the library's mean successor.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 < test_fraction <= 0.5:
        raise ValueError("test_fraction must lie in (0, 0.5]")
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    values = series.values
    if values.size - config.span < MIN_POINTS:
        raise InsufficientData(
            f"forecast needs >= {MIN_POINTS} delay vectors, got {max(values.size - config.span, 0)}")
    points = delay_embed(series, config).points
    usable = values.size - config.span - horizon
    n_test = int(round(usable * test_fraction))
    n_lib = usable - n_test
    if n_test < 1 or n_lib < k:
        raise InsufficientData("too few points to split into library and test set")
    if theiler is None:
        theiler = config.theiler

    successor = values[config.span + horizon: config.span + horizon + usable]
    lib = points[:n_lib]
    qidx = np.arange(n_lib, usable, dtype=np.int64)
    idx, _ = knn(lib, points[n_lib:usable], qidx, k, theiler, workers)
    if np.any(idx < 0):
        raise InsufficientData("Theiler window leaves fewer than k library candidates")
    prediction = successor[idx].mean(axis=1)
    truth = successor[n_lib:usable]
    baseline = successor[:n_lib].mean()
    err = np.sqrt(np.mean((prediction - truth) ** 2))
    ref = np.sqrt(np.mean((baseline - truth) ** 2))
    if ref == 0:
        normalized = 0.0 if err == 0 else float("inf")
    else:
        normalized = float(err / ref)
    return ForecastResult(horizon=horizon, normalized_error=normalized, neighbor_count=k,
                          test_points=n_test, library_points=n_lib, theiler=int(theiler))


@dataclass(frozen=True)
class ReturnMapFit:
    rms_residual: float
    value_range: float
    neighbors: int

    @property
    def relative_residual(self) -> float:
        return self.rms_residual / self.value_range if self.value_range > 0 else float("inf")


def return_map_fit(maxima: EventSeries, k: int = 2) -> ReturnMapFit:
    """How well ``M_{i+1}`` is a function of ``M_i``.

    Each successor is predicted by the mean successor of the ``k`` closest
    other ``M_j`` (leave-one-out local averaging); the RMS residual is
    reported next to the range of the maxima.
    """
    m = maxima.values
    if m.size < k + 2:
        raise InsufficientData("too few maxima for a return-map fit")
    x = np.ascontiguousarray(m[:-1, None])
    y = m[1:]
    # every point is its own query; excluding |i - j| <= 0 drops only itself
    idx, _ = knn(x, x, np.arange(x.shape[0]), k, theiler=0, method="brute")
    resid = y - y[idx].mean(axis=1)
    return ReturnMapFit(rms_residual=float(np.sqrt(np.mean(resid ** 2))),
                        value_range=float(m.max() - m.min()), neighbors=k)
