"""Shuffle-surrogate test of temporal determinism."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..embedding import EmbeddingConfig
from ..generators import make_rng
from ..series import EventSeries
from .forecast import DEFAULT_K, DEFAULT_TEST_FRACTION, knn_forecast_error

DEFAULT_SURROGATES = 99
MIN_SURROGATES = 19
STATISTIC = "knn_normalized_forecast_error"


@dataclass(frozen=True, eq=False)
class SurrogateResult:
    observed: float
    surrogate_values: np.ndarray
    p_value: float
    statistic_name: str = STATISTIC

    @property
    def n_surrogates(self) -> int:
        return int(self.surrogate_values.size)


def rank_p_value(observed, surrogate_values) -> float:
    """One-sided Monte Carlo p-value; small statistic means structure."""
    s = np.asarray(surrogate_values)
    return (1 + int(np.count_nonzero(s <= observed))) / (s.size + 1)


def shuffle_surrogates(series: EventSeries, n_surrogates: int, seed: int):
    """Yield uniformly random permutations of the series values."""
    rng = make_rng(seed)
    for _ in range(n_surrogates):
        yield series.with_values(rng.permutation(series.values),
                                 source_label=f"shuffle({series.source_label})")


def shuffle_surrogate_test(series: EventSeries, config: EmbeddingConfig = EmbeddingConfig(),
                           n_surrogates: int = DEFAULT_SURROGATES, seed: int = 0,
                           k: int = DEFAULT_K, test_fraction: float = DEFAULT_TEST_FRACTION,
                           workers: int = 1) -> SurrogateResult:
    """Compare forecastability against order-destroying shuffles.

    Shuffles keep the value multiset and kill temporal order, so under the
    i.i.d. null the observed forecast error is exchangeable with theirs.
    """
    if n_surrogates < MIN_SURROGATES:
        raise ValueError(f"need at least {MIN_SURROGATES} surrogates")

    def stat(s):
        return knn_forecast_error(s, config, k=k, test_fraction=test_fraction,
                                  workers=workers).normalized_error

    observed = stat(series)
    values = np.array([stat(s) for s in shuffle_surrogates(series, n_surrogates, seed)])
    return SurrogateResult(observed=observed, surrogate_values=values,
                           p_value=rank_p_value(observed, values))
