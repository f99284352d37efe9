from .correlation import CorrelationCurve, correlation_integral, default_radii, fit_dimension
from .forecast import ForecastResult, ReturnMapFit, knn_forecast_error, return_map_fit
from .surrogate import SurrogateResult, shuffle_surrogate_test
from .verdict import DETERMINISTIC, INCONCLUSIVE, RANDOM, Verdict, classify
