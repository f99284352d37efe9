"""Decision rule turning the statistics into a classification."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np

from .correlation import CorrelationCurve
from .surrogate import SurrogateResult

DETERMINISTIC = "DeterministicStructure"
RANDOM = "RandomConsistent"
INCONCLUSIVE = "Inconclusive"

DEFAULT_ALPHA = 0.01
SATURATION_RATIO = 0.8

INTERPRETATION = {
    DETERMINISTIC: "locality violated, hidden variables favored",
    RANDOM: "objective reality violated, orthodox randomness favored",
    INCONCLUSIVE: "no decision between the deterministic and random alternatives",
}


@dataclass(frozen=True)
class Verdict:
    classification: str
    dimension_estimate: Optional[float]
    forecast_p: float
    dimension_saturation: bool
    evidence_summary: str
    alpha: float = DEFAULT_ALPHA
    saturation_slopes: Mapping[int, Optional[float]] = field(default_factory=dict)

    @property
    def interpretation(self) -> str:
        return INTERPRETATION[self.classification]


def is_saturated(slopes: Mapping[int, Optional[float]],
                 ratio: float = SATURATION_RATIO) -> bool:
    """True when every probed dimension has a slope of at least ``ratio * m``.

    A missing slope (no scaling region) counts against saturation.
    """
    if not slopes:
        return False
    return all(s is not None and s >= ratio * m for m, s in slopes.items())


def classify(dim: Optional[CorrelationCurve], forecast_sur: SurrogateResult,
             saturation_probe: Optional[Mapping[int, Optional[float]]] = None,
             alpha: float = DEFAULT_ALPHA) -> Verdict:
    slopes = dict(sorted((saturation_probe or {}).items()))
    saturated = is_saturated(slopes)
    p = forecast_sur.p_value
    dimension = dim.slope if dim is not None and dim.fitted else None

    if p <= alpha:
        label = DETERMINISTIC
        why = (f"forecast error {forecast_sur.observed:.4g} against shuffle median "
               f"{float(np.median(forecast_sur.surrogate_values)):.4g}; "
               f"p = {p:.4g} <= alpha = {alpha:g}")
    elif saturated:
        label = RANDOM
        why = (f"forecast p = {p:.4g} > alpha = {alpha:g} and correlation "
               f"dimension tracks the embedding dimension (space-filling)")
    else:
        label = INCONCLUSIVE
        why = (f"forecast p = {p:.4g} > alpha = {alpha:g} but dimension "
               f"estimates do not saturate the embedding")
    if dimension is not None:
        why += f"; correlation dimension {dimension:.4g}"
    return Verdict(classification=label, dimension_estimate=dimension, forecast_p=p,
                   dimension_saturation=saturated, evidence_summary=why, alpha=alpha,
                   saturation_slopes=slopes)
