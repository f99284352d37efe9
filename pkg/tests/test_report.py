import json
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from hiddenorder import generators as gen
from hiddenorder.analysis.correlation import correlation_integral, fit_dimension
from hiddenorder.embedding import EmbeddingConfig, delay_embed, successive_maxima
from hiddenorder.errors import BadProjection
from hiddenorder.pipeline import AnalysisConfig, analyze
from hiddenorder.report import svg
from hiddenorder.report.document import SCHEMA, emit_report, emit_timings, report_document
from hiddenorder.series import EventSeries, normalize

SMALL = AnalysisConfig(n_surrogates=19, alpha=0.05, probe_dimensions=(2, 3))


@pytest.fixture(scope="module")
def small_report(logistic_10k):
    s = EventSeries(logistic_10k.values[:3000], source_label="logistic")
    return s, analyze(s, SMALL)


def test_report_sections(small_report):
    _, rep = small_report
    doc = report_document(rep)
    assert doc["schema"] == SCHEMA
    assert doc["rng"] == "numpy.random.PCG64"
    assert doc["config"]["n_surrogates"] == 19
    assert doc["verdict"]["classification"] == "DeterministicStructure"
    assert doc["verdict"]["interpretation"] == "locality violated, hidden variables favored"
    assert [c["embedding_dimension"] for c in doc["curves"]] == [2, 3]
    assert len(doc["surrogate"]["surrogate_values"]) == 19
    assert doc["input"]["length"] == 3000
    assert set(json.loads(emit_timings(rep))) == {"normalize_embed", "correlation_dimension",
                                                  "surrogate_test"}


def test_report_bytes_are_reproducible(small_report):
    s, rep = small_report
    again = analyze(s, SMALL, workers=3)
    assert emit_report(rep) == emit_report(again)
    text = emit_report(rep)
    assert text.endswith("\n") and "NaN" not in text


def test_report_invariant_under_affine_rescale(small_report):
    s, rep = small_report
    scaled = EventSeries(3.7 * s.values - 1.2, source_label="logistic")
    assert emit_report(analyze(scaled, SMALL)) == emit_report(rep)


def test_numbers_are_rounded(small_report):
    doc = json.loads(emit_report(small_report[1]))
    for v in doc["surrogate"]["surrogate_values"]:
        assert len(repr(v).replace("-", "").replace(".", "").lstrip("0").split("e")[0]) <= 12


def _parse(text):
    root = ET.fromstring(text.encode())
    assert root.tag.endswith("svg")
    return root


def test_svg_portraits_parse_and_are_deterministic(logistic_10k):
    p = delay_embed(normalize(logistic_10k), EmbeddingConfig(3, 1))
    two = svg.render_portrait(p, (0, 1))
    three = svg.render_portrait(p, (0, 1, 2))
    for text in (two, three):
        root = _parse(text)
        circles = root.findall(".//{http://www.w3.org/2000/svg}circle")
        assert len(circles) == len(p)
    assert two == svg.render_portrait(p, (0, 1))
    assert "azimuth 30" in three


def test_svg_thinning():
    p = delay_embed(gen.iid_uniform(50_000, seed=1), EmbeddingConfig(2, 1))
    root = _parse(svg.render_portrait(p, (0, 1), max_points=10_000))
    assert len(root.findall(".//{http://www.w3.org/2000/svg}circle")) <= 10_000


def test_svg_bad_projection(logistic_10k):
    p = delay_embed(logistic_10k, EmbeddingConfig(2, 1))
    with pytest.raises(BadProjection):
        svg.render_portrait(p, (0, 2))
    with pytest.raises(BadProjection):
        svg.render_portrait(p, (0,))


def test_svg_curves_and_maps(logistic_10k, lorenz_50k):
    p = delay_embed(normalize(logistic_10k), EmbeddingConfig(2, 1))
    curve = correlation_integral(p)
    assert "no scaling region" in svg.render_curve(curve)
    fitted = fit_dimension(curve)
    text = svg.render_curve(fitted)
    _parse(text)
    assert f"slope = {fitted.slope:.3f}" in text
    _parse(svg.render_series(logistic_10k.values))
    _parse(svg.render_return_map(successive_maxima(lorenz_50k[2]).values))


def test_svg_escapes_labels():
    p = delay_embed(EventSeries(np.arange(10.0), source_label="<a&b>"), EmbeddingConfig(2, 1))
    _parse(svg.render_portrait(p, (0, 1)))
