"""The analysis report and its canonical text form."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..analysis.correlation import CorrelationCurve
from ..analysis.forecast import ForecastResult
from ..analysis.surrogate import SurrogateResult
from ..analysis.verdict import Verdict

SCHEMA = "hiddenorder.report/1"
SIG_DIGITS = 12

CAVEATS = (
    "The significance level alpha and the dimension-saturation rule "
    "(slope >= 0.8 m at every probed m) are conventions of this tool, not "
    "thresholds derived from physics.",
    "The interpretation line restates the classification in terms of the "
    "locality-versus-reality dichotomy; it is not a physical measurement.",
)


@dataclass
class AnalysisReport:
    input_digest: str
    input_length: int
    config_echo: dict
    verdict: Verdict
    curves: List[CorrelationCurve]
    forecast: ForecastResult
    surrogate: SurrogateResult
    lag: int
    timings: dict = field(default_factory=dict)
    rng: str = "numpy.random.PCG64"


def _num(x):
    """Round to 12 significant digits; non-finite values become strings."""
    if x is None:
        return None
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    x = float(x)
    if not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    return float(f"{x:.{SIG_DIGITS}g}")


def _curve_doc(c: CorrelationCurve) -> dict:
    return {
        "embedding_dimension": c.embedding_dimension,
        "radii": [_num(r) for r in c.radii],
        "c_values": [_num(v) for v in c.c_values],
        "pair_count": c.pair_count,
        "exact": c.exact,
        "theiler_window": c.theiler,
        "scaling_region": list(c.scaling_region) if c.scaling_region else None,
        "slope": _num(c.slope),
        "slope_stderr": _num(c.slope_stderr),
        "r_squared": _num(c.r_squared),
    }


def report_document(report: AnalysisReport) -> dict:
    v = report.verdict
    f = report.forecast
    s = report.surrogate
    return {
        "schema": SCHEMA,
        "input": {"digest_sha256": report.input_digest, "length": report.input_length,
                  "normalization": "min-max to [0, 1], quantized to 2^-26"},
        "config": report.config_echo,
        "rng": report.rng,
        "embedding": {"lag_used": report.lag},
        "verdict": {
            "classification": v.classification,
            "interpretation": v.interpretation,
            "dimension_estimate": _num(v.dimension_estimate),
            "forecast_p": _num(v.forecast_p),
            "alpha": _num(v.alpha),
            "dimension_saturation": v.dimension_saturation,
            "saturation_slopes": {str(m): _num(sl) for m, sl in v.saturation_slopes.items()},
            "evidence_summary": v.evidence_summary,
        },
        "forecast": {
            "horizon": f.horizon,
            "normalized_error": _num(f.normalized_error),
            "neighbor_count": f.neighbor_count,
            "test_points": f.test_points,
            "library_points": f.library_points,
            "theiler_window": f.theiler,
        },
        "surrogate": {
            "statistic_name": s.statistic_name,
            "observed": _num(s.observed),
            "p_value": _num(s.p_value),
            "n_surrogates": s.n_surrogates,
            "surrogate_values": [_num(x) for x in s.surrogate_values],
        },
        "curves": [_curve_doc(c) for c in report.curves],
        "caveats": list(CAVEATS),
    }


def emit_report(report: AnalysisReport) -> str:
    """Canonical key-sorted JSON; identical inputs give identical bytes.

    Wall-clock timings are deliberately left out (see :func:`emit_timings`).
    """
    return json.dumps(report_document(report), sort_keys=True, indent=2,
                      ensure_ascii=True, allow_nan=False) + "\n"


def emit_timings(report: AnalysisReport) -> str:
    doc = {k: round(float(v), 6) for k, v in report.timings.items()}
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
