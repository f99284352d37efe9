"""Correlation integral and correlation-dimension fit."""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from ..embedding import PhasePortrait
from ..errors import InsufficientData, NoScalingRegion
from ..generators import make_rng
from . import _kernels

DEFAULT_PAIR_BUDGET = 10_000_000
MIN_POINTS = 1000
N_RADII = 24
FIT_C_RANGE = (1e-4, 0.5)
MIN_WINDOW = 4
MIN_CANDIDATES = 8
MIN_R2 = 0.98
# windows whose R^2 is within this of the best count as tied
R2_TIE = 1e-4
_SAMPLE_BLOCK = 1 << 20


@dataclass(frozen=True, eq=False)
class CorrelationCurve:
    """Sampled correlation integral, optionally with a fitted scaling law.

    ``scaling_region`` is a half-open index interval ``(start, stop)`` into
    ``radii``; the slope fields stay ``None`` until :func:`fit_dimension`
    succeeds.
    """

    radii: np.ndarray
    c_values: np.ndarray
    pair_count: int
    exact: bool
    theiler: int
    embedding_dimension: int
    scaling_region: Optional[tuple] = None
    slope: Optional[float] = None
    slope_stderr: Optional[float] = None
    r_squared: Optional[float] = None

    @property
    def fitted(self) -> bool:
        return self.slope is not None


def portrait_diameter(points) -> float:
    """Max-norm diameter: the largest coordinate range."""
    return float((points.max(axis=0) - points.min(axis=0)).max())


def default_radii(portrait: PhasePortrait, n: int = N_RADII) -> np.ndarray:
    """``n`` log-spaced radii from 1e-3 to 1 times the portrait diameter."""
    diam = portrait_diameter(portrait.points)
    if diam == 0:
        diam = 1.0
    return np.logspace(-3.0, 0.0, n) * diam


def _admissible_pairs(m, theiler):
    free = m - theiler - 1
    return free * (free + 1) // 2 if free > 0 else 0


def _sample_pairs(rng, m, theiler, count):
    """Uniform pairs ``i < j`` with ``j - i > theiler`` by rejection."""
    got_i, got_j, have = [], [], 0
    while have < count:
        want = min(_SAMPLE_BLOCK, 2 * (count - have) + 1024)
        a = rng.integers(0, m, want)
        b = rng.integers(0, m, want)
        ok = np.abs(a - b) > theiler
        a, b = a[ok], b[ok]
        got_i.append(np.minimum(a, b))
        got_j.append(np.maximum(a, b))
        have += a.size
    return (np.concatenate(got_i)[:count].astype(np.int64),
            np.concatenate(got_j)[:count].astype(np.int64))


def correlation_integral(portrait: PhasePortrait, radii: Optional[Sequence[float]] = None,
                         pair_budget: int = DEFAULT_PAIR_BUDGET, seed: int = 0,
                         theiler: Optional[int] = None, workers: int = 1,
                         min_points: int = MIN_POINTS) -> CorrelationCurve:
    """Fraction of point pairs closer than ``r`` (max-norm), for each radius.

    Pairs closer in time than the Theiler window are excluded. All pairs are
    used when there are at most ``pair_budget`` of them; otherwise
    ``pair_budget`` pairs are drawn uniformly with ``seed``.
    """
    points = np.ascontiguousarray(portrait.points, dtype=np.float64)
    m = points.shape[0]
    if m < min_points:
        raise InsufficientData(f"correlation integral needs >= {min_points} points, got {m}")
    radii = default_radii(portrait) if radii is None else np.asarray(radii, dtype=np.float64)
    if radii.ndim != 1 or radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise ValueError("radii must be positive and strictly increasing")
    if theiler is None:
        theiler = portrait.config.theiler
    total = _admissible_pairs(m, theiler)
    if total == 0:
        raise InsufficientData("no admissible pairs outside the Theiler window")

    if total <= pair_budget:
        exact = True
        used = total
        parts = _kernels.run_chunked(
            lambda a, b: _kernels.exact_pair_hist(points, radii, theiler, a, b), m, workers)
    else:
        exact = False
        used = int(pair_budget)
        first, second = _sample_pairs(make_rng(seed), m, theiler, used)
        parts = _kernels.run_chunked(
            lambda a, b: _kernels.sampled_pair_hist(points, first, second, radii, a, b),
            used, workers)
    hist = np.sum(parts, axis=0)
    counts = np.cumsum(hist)[: radii.size]
    return CorrelationCurve(radii=radii, c_values=counts / used, pair_count=used,
                            exact=exact, theiler=int(theiler),
                            embedding_dimension=portrait.dimension)


def _linfit(x, y):
    n = x.size
    xm, ym = x.mean(), y.mean()
    sxx = np.sum((x - xm) ** 2)
    sxy = np.sum((x - xm) * (y - ym))
    slope = sxy / sxx
    resid = y - (ym + slope * (x - xm))
    ss_res = float(np.sum(resid ** 2))
    ss_tot = float(np.sum((y - ym) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 0.0
    stderr = float(np.sqrt(ss_res / (n - 2) / sxx)) if n > 2 else float("inf")
    return float(slope), stderr, r2


def fit_dimension(curve: CorrelationCurve, window: Optional[tuple] = None,
                  min_r2: float = MIN_R2) -> CorrelationCurve:
    """Fit the log-log slope of ``C(r)`` over the best scaling window.

    Candidate radii have ``1e-4 < C(r) < 0.5``. Every contiguous window of
    at least four candidates is fitted by least squares; the highest R^2
    wins and near-ties go to the longer window. ``window`` (half-open index
    interval) bypasses the search.
    """
    c = np.asarray(curve.c_values)
    logr = np.log(curve.radii)
    with np.errstate(divide="ignore"):
        logc = np.log(c)

    if window is not None:
        a, b = int(window[0]), int(window[1])
        if b - a < MIN_WINDOW or a < 0 or b > c.size or np.any(c[a:b] <= 0):
            raise NoScalingRegion(f"manual window {window} is unusable")
        slope, err, r2 = _linfit(logr[a:b], logc[a:b])
        return replace(curve, scaling_region=(a, b), slope=slope,
                       slope_stderr=err, r_squared=r2)

    lo, hi = FIT_C_RANGE
    cand = np.flatnonzero((c > lo) & (c < hi))
    if cand.size < MIN_CANDIDATES:
        raise NoScalingRegion(
            f"only {cand.size} radii have C(r) in ({lo:g}, {hi:g}); need {MIN_CANDIDATES}")
    first, last = int(cand[0]), int(cand[-1]) + 1
    fits = []
    for a in range(first, last - MIN_WINDOW + 1):
        for b in range(a + MIN_WINDOW, last + 1):
            slope, err, r2 = _linfit(logr[a:b], logc[a:b])
            fits.append((r2, b - a, a, b, slope, err))
    best_r2 = max(f[0] for f in fits)
    if best_r2 < min_r2:
        raise NoScalingRegion(f"best scaling window has R^2 = {best_r2:.4f} < {min_r2}")
    tied = [f for f in fits if f[0] >= best_r2 - R2_TIE]
    # longest window, then highest R^2, then smallest radii
    r2, _, a, b, slope, err = max(tied, key=lambda f: (f[1], f[0], -f[2]))
    return replace(curve, scaling_region=(a, b), slope=slope, slope_stderr=err,
                   r_squared=r2)
