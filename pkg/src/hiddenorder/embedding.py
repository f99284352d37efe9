"""Delay-coordinate reconstruction and return-map extraction."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InsufficientData, NoMaxima
from .series import EventSeries

MAX_DIMENSION = 10


@dataclass(frozen=True)
class EmbeddingConfig:
    dimension: int = 3
    lag: int = 1

    def __post_init__(self):
        if int(self.dimension) != self.dimension or not 1 <= self.dimension <= MAX_DIMENSION:
            raise ValueError(f"dimension must be an integer in [1, {MAX_DIMENSION}]")
        if int(self.lag) != self.lag or self.lag < 1:
            raise ValueError("lag must be a positive integer")

    @property
    def span(self) -> int:
        """Samples consumed beyond the first: ``(m - 1) * lag``."""
        return (self.dimension - 1) * self.lag

    @property
    def theiler(self) -> int:
        return self.dimension * self.lag


@dataclass(frozen=True, eq=False)
class PhasePortrait:
    """Delay vectors; row ``j`` is ``(q_j, q_{j+lag}, ..., q_{j+(m-1)lag})``."""

    points: np.ndarray
    config: EmbeddingConfig
    source: dict

    def __len__(self):
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.config.dimension


def delay_embed(series: EventSeries, config: EmbeddingConfig = EmbeddingConfig()) -> PhasePortrait:
    v = series.values
    count = v.size - config.span
    if count < 1:
        raise InsufficientData(
            f"series of length {v.size} is too short for m={config.dimension}, "
            f"lag={config.lag}")
    idx = np.arange(count)[:, None] + config.lag * np.arange(config.dimension)[None, :]
    points = v[idx]
    points.setflags(write=False)
    return PhasePortrait(points, config, dict(series.metadata))


def successive_maxima(series: EventSeries) -> EventSeries:
    """Local maxima of a sampled flow observable, refined by a parabola.

    A sample qualifies when it rises from its left neighbour and the signal
    falls after it (a plateau counts once, at its first sample). The peak
    value is taken from the parabola through the sample and its two
    neighbours; a symmetric peak or a plateau returns the sample itself.
    """
    v = series.values
    n = v.size
    if n < 3:
        raise InsufficientData("need at least 3 samples to find maxima")
    peaks = []
    i = 1
    while i < n - 1:
        if v[i - 1] < v[i]:
            j = i
            while j + 1 < n and v[j + 1] == v[i]:
                j += 1
            if j + 1 < n and v[j + 1] < v[i]:
                peaks.append(i)
            i = j + 1
        else:
            i += 1
    if not peaks:
        raise NoMaxima("series has no interior local maximum")
    p = np.asarray(peaks)
    left, mid, right = v[p - 1], v[p], v[p + 1]
    curv = 0.5 * (left + right) - mid
    slope = 0.5 * (right - left)
    refined = mid.copy()
    ok = (curv < 0) & (right < mid)
    refined[ok] = mid[ok] - slope[ok] ** 2 / (4.0 * curv[ok])
    return EventSeries(refined, source_label=f"maxima({series.source_label})",
                       seed=series.seed)


def autocorrelation(values: np.ndarray, max_lag: int) -> np.ndarray:
    """Biased sample autocorrelation for lags ``0..max_lag`` via FFT."""
    x = np.asarray(values, dtype=np.float64) - np.mean(values)
    n = x.size
    size = 1 << (2 * n - 1).bit_length()
    power = np.fft.rfft(x, size)
    acov = np.fft.irfft(power * np.conj(power), size)[: max_lag + 1]
    if acov[0] == 0:
        return np.ones(max_lag + 1)
    return acov / acov[0]


def suggest_lag(series: EventSeries) -> int:
    """First lag at which the autocorrelation drops below 1/e.

    Clamped to ``[1, N // 10]``; a series that never decorrelates within
    that range gets the upper clamp.
    """
    n = series.length
    if n < 100:
        raise InsufficientData("lag heuristic needs at least 100 samples")
    upper = max(1, n // 10)
    acf = autocorrelation(series.values, upper)
    below = np.flatnonzero(acf[1:] < 1.0 / math.e)
    if below.size == 0:
        return upper
    return int(below[0]) + 1
