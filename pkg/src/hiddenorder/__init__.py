"""Test event series for deterministic structure by delay embedding."""
from .embedding import EmbeddingConfig, PhasePortrait, delay_embed, successive_maxima, suggest_lag
from .errors import (BadProjection, DivergenceError, EmptyInput, HiddenOrderError,
                     InsufficientData, NoMaxima, NoScalingRegion, ParseError)
from .pipeline import AnalysisConfig, analyze
from .series import EventSeries, normalize

__version__ = "0.1.0"
