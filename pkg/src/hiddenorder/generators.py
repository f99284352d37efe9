"""Synthetic event series with known provenance.

Deterministic sources (logistic, Henon, Lorenz), truly random sources
(i.i.d. uniform, Born-rule screen hits), the chaos-masked counterpart that
shares the Born marginal but inherits chaotic ordering, and detector-style
corruption (dropout plus additive noise).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from numba import njit

from .errors import DivergenceError, InsufficientData
from .series import EventSeries

RNG_NAME = "numpy.random.PCG64"
DIVERGENCE_BOUND = 1e6
CDF_TABLE_SIZE = 4096


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _check_count(n):
    if int(n) != n or n < 1:
        raise ValueError(f"series length must be a positive integer, got {n!r}")
    return int(n)


@dataclass(frozen=True)
class MapParams:
    logistic_k: float = 4.0
    henon_a: float = 1.4
    henon_b: float = 0.3

    def __post_init__(self):
        if not 0.0 < self.logistic_k <= 4.0:
            raise ValueError(f"logistic k must lie in (0, 4], got {self.logistic_k}")
        if not (math.isfinite(self.henon_a) and math.isfinite(self.henon_b)):
            raise ValueError("Henon parameters must be finite")


@dataclass(frozen=True)
class LorenzParams:
    sigma: float = 10.0
    rho: float = 28.0
    beta: float = 8.0 / 3.0
    dt: float = 0.01
    transient_steps: int = 1000

    def __post_init__(self):
        if not self.dt > 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if self.transient_steps < 0:
            raise ValueError("transient_steps must be >= 0")


@dataclass(frozen=True)
class SlitScreenModel:
    """Two-slit intensity ``cos^2(f q) * exp(-q^2 / w^2)`` on ``[-1, 1]``.

    ``envelope_width=math.inf`` gives a flat envelope; with
    ``fringe_frequency=0`` as well the screen density is uniform.
    """

    fringe_frequency: float = 5.0
    envelope_width: float = 0.8
    screen_interval: tuple = (-1.0, 1.0)

    def intensity(self, q):
        q = np.asarray(q, dtype=np.float64)
        fringes = np.cos(self.fringe_frequency * q) ** 2
        if math.isinf(self.envelope_width):
            envelope = np.ones_like(q)
        else:
            envelope = np.exp(-(q / self.envelope_width) ** 2)
        return fringes * envelope

    def cdf_table(self, size: int = CDF_TABLE_SIZE):
        """Return ``(q_grid, cdf)`` with cdf rising from 0 to 1.

        Trapezoid cumulative integral of the intensity, so the inverse by
        linear interpolation is exact for the piecewise-linear density.
        """
        lo, hi = self.screen_interval
        q = np.linspace(lo, hi, size)
        dens = self.intensity(q)
        if np.any(dens < 0) or not np.all(np.isfinite(dens)):
            raise ValueError("intensity must be finite and non-negative")
        steps = 0.5 * (dens[1:] + dens[:-1]) * np.diff(q)
        total = steps.sum()
        if not total > 0:
            raise ValueError("slit model has zero total intensity")
        cdf = np.concatenate([[0.0], np.cumsum(steps)]) / total
        cdf[-1] = 1.0
        return q, cdf

    def inverse_cdf(self, u):
        q, cdf = self.cdf_table()
        # Flat stretches of the CDF (zero intensity) make the inverse
        # multi-valued; keep the first knot of each run.
        keep = np.concatenate([[True], np.diff(cdf) > 0])
        return np.interp(u, cdf[keep], q[keep])

    def cdf(self, x):
        q, cdf = self.cdf_table()
        return np.interp(x, q, cdf)


def logistic_series(x0: float, k: float = 4.0, n: int = 1000) -> EventSeries:
    """Iterate ``x -> k x (1 - x)`` from ``x0``; ``values[0] == x0``."""
    n = _check_count(n)
    if not 0.0 < x0 < 1.0:
        raise ValueError(f"x0 must lie in (0, 1), got {x0}")
    MapParams(logistic_k=k)
    out = np.empty(n)
    x = float(x0)
    for i in range(n):
        out[i] = x
        x = k * x * (1.0 - x)
    return EventSeries(out, source_label=f"logistic(k={k!r}, x0={x0!r})")


def henon_series(x0: float = 0.0, y0: float = 0.0,
                 params: MapParams = MapParams(), n: int = 1000,
                 bound: float = DIVERGENCE_BOUND):
    """Aligned ``(x, y)`` series of the Henon map.

    Raises DivergenceError once ``|x|`` exceeds ``bound``, which means the
    initial point lies outside the attractor's basin.
    """
    n = _check_count(n)
    a, b = params.henon_a, params.henon_b
    xs = np.empty(n)
    ys = np.empty(n)
    x, y = float(x0), float(y0)
    for i in range(n):
        if not abs(x) <= bound:
            raise DivergenceError(
                f"Henon orbit left |x| <= {bound:g} at step {i} (x={x!r})")
        xs[i] = x
        ys[i] = y
        x, y = y + 1.0 - a * x * x, b * x
    label = f"henon(a={a!r}, b={b!r})"
    return (EventSeries(xs, source_label=label + ".x"),
            EventSeries(ys, source_label=label + ".y"))


@njit(cache=True)
def _lorenz_rhs(x, y, z, sigma, rho, beta):
    return sigma * (y - x), x * (rho - z) - y, x * y - beta * z


@njit(cache=True)
def _lorenz_rk4(x, y, z, sigma, rho, beta, dt, skip, n):
    out = np.empty((n, 3))
    h2 = 0.5 * dt
    for step in range(skip + n):
        if step >= skip:
            out[step - skip, 0] = x
            out[step - skip, 1] = y
            out[step - skip, 2] = z
        k1x, k1y, k1z = _lorenz_rhs(x, y, z, sigma, rho, beta)
        k2x, k2y, k2z = _lorenz_rhs(x + h2 * k1x, y + h2 * k1y, z + h2 * k1z,
                                    sigma, rho, beta)
        k3x, k3y, k3z = _lorenz_rhs(x + h2 * k2x, y + h2 * k2y, z + h2 * k2z,
                                    sigma, rho, beta)
        k4x, k4y, k4z = _lorenz_rhs(x + dt * k3x, y + dt * k3y, z + dt * k3z,
                                    sigma, rho, beta)
        x += dt / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        z += dt / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
        if not (np.isfinite(x) and np.isfinite(y) and np.isfinite(z)):
            return out, step
    return out, -1


def lorenz_series(initial: Sequence[float] = (1.0, 1.0, 1.0),
                  params: LorenzParams = LorenzParams(), n: int = 10000):
    """Fixed-step RK4 integration of the Lorenz flow.

    The first ``params.transient_steps`` states are discarded; the remaining
    ``n`` are returned as three aligned series.
    """
    n = _check_count(n)
    x0, y0, z0 = (float(v) for v in initial)
    out, failed = _lorenz_rk4(x0, y0, z0, float(params.sigma), float(params.rho),
                              float(params.beta), float(params.dt),
                              int(params.transient_steps), n)
    if failed >= 0:
        raise DivergenceError(f"Lorenz state became non-finite at step {failed}")
    label = (f"lorenz(sigma={params.sigma!r}, rho={params.rho!r}, "
             f"beta={params.beta!r}, dt={params.dt!r})")
    return tuple(EventSeries(out[:, c].copy(), source_label=f"{label}.{name}")
                 for c, name in enumerate("xyz"))


def iid_uniform(n: int, seed: int) -> EventSeries:
    n = _check_count(n)
    values = make_rng(seed).random(n)
    return EventSeries(values, source_label="iid-uniform", seed=seed)


def born_hits(model: SlitScreenModel = SlitScreenModel(), n: int = 10000,
              seed: int = 0) -> EventSeries:
    """Independent screen hits drawn from the normalized intensity."""
    n = _check_count(n)
    u = make_rng(seed).random(n)
    return EventSeries(model.inverse_cdf(u), source_label="born", seed=seed)


def chaos_masked_hits(base: EventSeries, model: SlitScreenModel = SlitScreenModel(),
                      method: str = "value",
                      reference: Optional[np.ndarray] = None) -> EventSeries:
    """Push a chaotic series in [0, 1] through the screen's quantile function.

    ``method="value"`` treats each base value as a CDF level directly.
    ``method="rank"`` uses the base value's rank instead: level
    ``(rank + 0.5) / n``, or, when ``reference`` is given, the sorted
    reference sample itself, which reproduces its marginal exactly.
    Both transforms are monotone, so temporal determinism survives.
    """
    v = base.values
    if v.min() < 0.0 or v.max() > 1.0:
        raise ValueError("base values must lie in [0, 1]")
    if method == "value":
        out = model.inverse_cdf(v)
    elif method == "rank":
        order = np.argsort(v, kind="stable")
        ranks = np.empty(v.size, dtype=np.int64)
        ranks[order] = np.arange(v.size)
        if reference is None:
            out = model.inverse_cdf((ranks + 0.5) / v.size)
        else:
            ref = np.sort(np.asarray(reference, dtype=np.float64).reshape(-1))
            if ref.size != v.size:
                raise ValueError("reference sample must match the base length")
            out = ref[ranks]
    else:
        raise ValueError(f"unknown masking method {method!r}")
    return EventSeries(out, source_label=f"chaos-masked[{method}]({base.source_label})",
                       seed=base.seed)


def corrupt(series: EventSeries, dropout_rate: float = 0.0,
            noise_sigma: float = 0.0, seed: int = 0) -> EventSeries:
    """Simulate an imperfect detector.

    Each sample is dropped independently with probability ``dropout_rate``;
    survivors get additive N(0, noise_sigma^2) noise in the series' own units.
    """
    if not 0.0 <= dropout_rate < 1.0:
        raise ValueError(f"dropout_rate must lie in [0, 1), got {dropout_rate}")
    if not noise_sigma >= 0.0:
        raise ValueError(f"noise_sigma must be >= 0, got {noise_sigma}")
    rng = make_rng(seed)
    v = series.values
    keep = rng.random(v.size) >= dropout_rate
    out = v[keep].copy()
    if out.size == 0:
        raise InsufficientData("dropout removed every sample")
    if noise_sigma > 0:
        out += rng.normal(0.0, noise_sigma, out.size)
    return EventSeries(out, source_label=series.source_label, seed=series.seed)
