"""The scalar event record and its normalization."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

# Normalized values are snapped to this grid so that a*s + b and s normalize
# to the same bits despite rounding in the affine map.
NORMALIZE_QUANTUM = 2.0 ** -26


@dataclass(frozen=True, eq=False)
class EventSeries:
    """Ordered scalar observations ``q_i`` plus provenance.

    ``values`` is stored as a read-only float64 array. ``times`` holds
    timestamps when the record came from a two-column file.
    """

    values: np.ndarray
    source_label: str = "unknown"
    seed: Optional[int] = None
    times: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if values.size < 1:
            raise ValueError("EventSeries needs at least one value")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            raise ValueError(f"non-finite value at index {bad}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.times is not None:
            times = np.array(self.times, dtype=np.float64).reshape(-1)
            if times.size != values.size:
                raise ValueError("times and values differ in length")
            times.setflags(write=False)
            object.__setattr__(self, "times", times)

    def __len__(self):
        return self.values.size

    @property
    def length(self) -> int:
        return self.values.size

    @property
    def metadata(self) -> dict:
        return {"source_label": self.source_label, "seed": self.seed,
                "length": self.length}

    def with_values(self, values, source_label=None, keep_times=False) -> "EventSeries":
        return EventSeries(values,
                           source_label=source_label or self.source_label,
                           seed=self.seed,
                           times=self.times if keep_times else None)

    def digest(self) -> str:
        """SHA-256 of the little-endian float64 bytes."""
        return hashlib.sha256(self.values.astype("<f8").tobytes()).hexdigest()


def normalize(series: EventSeries) -> EventSeries:
    """Min-max rescale to [0, 1], snapped to ``NORMALIZE_QUANTUM``.

    A constant series maps to all zeros.
    """
    v = series.values
    lo, hi = v.min(), v.max()
    span = hi - lo
    if span == 0:
        out = np.zeros_like(v)
    else:
        out = (v - lo) / span
        out = np.round(out / NORMALIZE_QUANTUM) * NORMALIZE_QUANTUM
        np.clip(out, 0.0, 1.0, out=out)
    return EventSeries(out, source_label=series.source_label, seed=series.seed)
