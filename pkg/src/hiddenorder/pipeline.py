"""normalize -> embed -> analyze -> classify, producing an AnalysisReport."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field
from typing import Optional, Tuple, Union

from .analysis.correlation import (DEFAULT_PAIR_BUDGET, N_RADII, correlation_integral,
                                   default_radii, fit_dimension)
from .analysis.forecast import DEFAULT_K, DEFAULT_TEST_FRACTION, knn_forecast_error
from .analysis.surrogate import DEFAULT_SURROGATES, shuffle_surrogate_test
from .analysis.verdict import DEFAULT_ALPHA, classify
from .embedding import EmbeddingConfig, delay_embed, suggest_lag
from .errors import NoScalingRegion
from .generators import RNG_NAME
from .report.document import AnalysisReport
from .series import EventSeries, normalize


@dataclass(frozen=True)
class AnalysisConfig:
    """Every knob that influences the report; echoed into it verbatim."""

    dimension: int = 3
    lag: Union[int, str] = 1
    k: int = DEFAULT_K
    test_fraction: float = DEFAULT_TEST_FRACTION
    n_surrogates: int = DEFAULT_SURROGATES
    seed: int = 0
    alpha: float = DEFAULT_ALPHA
    probe_dimensions: Tuple[int, ...] = (2, 3, 4)
    pair_budget: int = DEFAULT_PAIR_BUDGET
    n_radii: int = N_RADII
    fit_window: Optional[Tuple[int, int]] = None

    def __post_init__(self):
        if self.lag != "auto" and (not isinstance(self.lag, int) or self.lag < 1):
            raise ValueError("lag must be a positive integer or 'auto'")
        object.__setattr__(self, "probe_dimensions",
                           tuple(sorted({int(m) for m in self.probe_dimensions})))

    def echo(self) -> dict:
        d = asdict(self)
        d["probe_dimensions"] = list(self.probe_dimensions)
        d["fit_window"] = list(self.fit_window) if self.fit_window else None
        return d


def _dimension_curve(series, m, lag, config, workers):
    portrait = delay_embed(series, EmbeddingConfig(m, lag))
    curve = correlation_integral(portrait, default_radii(portrait, config.n_radii),
                                 pair_budget=config.pair_budget, seed=config.seed,
                                 workers=workers)
    try:
        return fit_dimension(curve, window=config.fit_window)
    except NoScalingRegion:
        return curve


def analyze(series: EventSeries, config: AnalysisConfig = AnalysisConfig(),
            workers: int = 1) -> AnalysisReport:
    """Run the whole discriminator on one series.

    ``workers`` only changes speed; the report is identical for any value.
    """
    timings = {}
    t0 = time.perf_counter()
    norm = normalize(series)
    lag = suggest_lag(norm) if config.lag == "auto" else int(config.lag)
    embed = EmbeddingConfig(config.dimension, lag)
    delay_embed(norm, embed)  # fail fast on short input
    timings["normalize_embed"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    dims = sorted(set(config.probe_dimensions) | {config.dimension})
    curves = [_dimension_curve(norm, m, lag, config, workers) for m in dims]
    timings["correlation_dimension"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    forecast = knn_forecast_error(norm, embed, k=config.k,
                                  test_fraction=config.test_fraction, workers=workers)
    surrogate = shuffle_surrogate_test(norm, embed, n_surrogates=config.n_surrogates,
                                       seed=config.seed, k=config.k,
                                       test_fraction=config.test_fraction, workers=workers)
    timings["surrogate_test"] = time.perf_counter() - t0

    by_dim = {c.embedding_dimension: c for c in curves}
    probe = {m: by_dim[m].slope for m in config.probe_dimensions}
    verdict = classify(by_dim[config.dimension], surrogate, probe, alpha=config.alpha)
    return AnalysisReport(input_digest=norm.digest(), input_length=norm.length,
                          config_echo=config.echo(), verdict=verdict, curves=curves,
                          forecast=forecast, surrogate=surrogate, lag=lag,
                          timings=timings, rng=RNG_NAME)
