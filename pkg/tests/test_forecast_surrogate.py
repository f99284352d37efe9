import math

import numpy as np
import pytest
from scipy.spatial import cKDTree

from hiddenorder import generators as gen
from hiddenorder.analysis.forecast import knn_forecast_error, return_map_fit
from hiddenorder.analysis.surrogate import (rank_p_value, shuffle_surrogate_test,
                                            shuffle_surrogates)
from hiddenorder.analysis.verdict import (DETERMINISTIC, INCONCLUSIVE, RANDOM,
                                          SurrogateResult, classify, is_saturated)
from hiddenorder.embedding import EmbeddingConfig, successive_maxima
from hiddenorder.errors import InsufficientData
from hiddenorder.series import EventSeries, normalize


def _oracle_error(values, m, lag, k, frac):
    """Independent forecast score built on a k-d tree."""
    span = (m - 1) * lag
    usable = values.size - span - 1
    pts = np.stack([values[c * lag: c * lag + usable] for c in range(m)], axis=1)
    succ = values[span + 1: span + 1 + usable]
    n_test = int(round(usable * frac))
    n_lib = usable - n_test
    theiler = m * lag
    tree = cKDTree(pts[:n_lib])
    d, idx = tree.query(pts[n_lib:], k=k + theiler + 1, p=np.inf)
    pred = np.empty(n_test)
    for r in range(n_test):
        keep = [j for j in idx[r] if abs(n_lib + r - j) > theiler][:k]
        pred[r] = succ[keep].mean()
    truth = succ[n_lib:]
    return math.sqrt(np.mean((pred - truth) ** 2) / np.mean((succ[:n_lib].mean() - truth) ** 2))


def test_forecast_matches_kdtree_oracle():
    s = normalize(gen.iid_uniform(6000, seed=12))
    for k in (1, 2, 4):
        ours = knn_forecast_error(s, EmbeddingConfig(3, 1), k=k).normalized_error
        assert ours == pytest.approx(_oracle_error(s.values, 3, 1, k, 0.25), rel=1e-12)


def test_forecast_iid_k2_follows_variance_inflation():
    # mean of k independent successors: error^2 = var * (1 + 1/k)
    errs = [knn_forecast_error(gen.iid_uniform(10_000, seed=s), k=2).normalized_error
            for s in range(10)]
    assert np.mean(errs) == pytest.approx(math.sqrt(1.5), abs=0.02)


def test_forecast_iid_default_k_in_band():
    r = knn_forecast_error(gen.iid_uniform(10_000, seed=2024))
    assert 0.9 <= r.normalized_error <= 1.2


def test_forecast_logistic_is_tiny(logistic_10k):
    r = knn_forecast_error(logistic_10k, k=2)
    assert r.normalized_error < 0.05
    assert r.test_points == 2499 and r.library_points + r.test_points == 9997


def test_forecast_periodic_is_exact():
    s = EventSeries(np.tile([0.1, 0.7, 0.3, 0.9, 0.2, 0.5, 0.8], 200))
    assert knn_forecast_error(s, k=1).normalized_error == 0.0


def test_forecast_guards():
    with pytest.raises(InsufficientData):
        knn_forecast_error(gen.iid_uniform(300, seed=0))
    with pytest.raises(ValueError):
        knn_forecast_error(gen.iid_uniform(3000, seed=0), k=0)
    with pytest.raises(ValueError):
        knn_forecast_error(gen.iid_uniform(3000, seed=0), test_fraction=0.9)


def test_return_map_lorenz_is_a_curve(lorenz_50k):
    fit = return_map_fit(successive_maxima(lorenz_50k[2]))
    assert fit.relative_residual < 0.02
    shuffled = EventSeries(np.random.default_rng(0).permutation(
        successive_maxima(lorenz_50k[2]).values))
    assert return_map_fit(shuffled).relative_residual > 0.1


def test_rank_p_value_formula():
    assert rank_p_value(0.5, [1.0] * 99) == 0.01
    assert rank_p_value(2.0, [1.0] * 99) == 1.0
    assert rank_p_value(1.0, np.arange(19) / 10) == pytest.approx(12 / 20)


def test_shuffles_are_permutations_and_seeded():
    s = gen.iid_uniform(500, seed=1)
    a = [x.values for x in shuffle_surrogates(s, 3, seed=4)]
    b = [x.values for x in shuffle_surrogates(s, 3, seed=4)]
    for u, v in zip(a, b):
        assert np.array_equal(u, v)
        assert np.array_equal(np.sort(u), np.sort(s.values))


def test_surrogate_test_separates_cases(logistic_10k):
    det = shuffle_surrogate_test(logistic_10k, n_surrogates=19, seed=0)
    assert det.p_value == pytest.approx(1 / 20)
    rnd = shuffle_surrogate_test(gen.iid_uniform(3000, seed=5), n_surrogates=19, seed=0)
    assert rnd.p_value > 0.05
    with pytest.raises(ValueError):
        shuffle_surrogate_test(logistic_10k, n_surrogates=5)


def test_surrogate_examples_at_5000():
    logistic = gen.logistic_series(0.123, 4.0, 5000)
    assert shuffle_surrogate_test(logistic, k=2, seed=0).p_value == 0.01
    iid = shuffle_surrogate_test(gen.iid_uniform(5000, seed=1), seed=1)
    assert iid.p_value > 0.05
    assert iid.n_surrogates == 99


def test_forecast_examples_at_5000():
    assert knn_forecast_error(gen.logistic_series(0.123, 4.0, 5000),
                              EmbeddingConfig(2, 1), k=2).normalized_error < 0.05
    # default k = 4 keeps the i.i.d. score inside [0.9, 1.2]
    r = knn_forecast_error(gen.iid_uniform(5000, seed=1), EmbeddingConfig(2, 1))
    assert 0.9 <= r.normalized_error <= 1.2


def _sur(p, observed=0.5):
    n = 99
    below = int(round(p * (n + 1))) - 1
    values = np.concatenate([np.zeros(below), np.ones(n - below)])
    return SurrogateResult(observed=observed, surrogate_values=values,
                           p_value=rank_p_value(observed, values))


def test_classify_rules():
    assert classify(None, _sur(0.01), {2: 0.5, 3: 0.5}).classification == DETERMINISTIC
    v = classify(None, _sur(0.5), {2: 1.9, 3: 2.8, 4: 3.5})
    assert v.classification == RANDOM and v.dimension_saturation
    assert "orthodox randomness" in v.interpretation
    v = classify(None, _sur(0.5), {2: 1.9, 3: 2.0, 4: 2.1})
    assert v.classification == INCONCLUSIVE
    assert classify(None, _sur(0.5), {2: 1.9, 3: None}).classification == INCONCLUSIVE
    assert classify(None, _sur(0.02), {2: 2.0}, alpha=0.05).classification == DETERMINISTIC
    assert classify(None, _sur(0.04)).classification == INCONCLUSIVE


def test_saturation_threshold():
    assert is_saturated({3: 2.41})
    assert not is_saturated({3: 2.39})
    assert not is_saturated({})
