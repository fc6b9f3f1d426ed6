"""Forecasting univariate series with several unknown seasonal periods."""

__version__ = "0.1.0"

from .core import (
    CsvParseError,
    DetectionError,
    DomainError,
    ForecastResult,
    InsufficientDataError,
    MSError,
    TimeSeries,
    center,
    cmse,
    read_csv,
)
from .forecast import predict
from .model import Coefficients, ModelSpec, ResidualState, log_likelihood, residuals, sse_and_gradient
from .optimizer import OptimOptions, OptimResult, bfgs_minimize
from .selection import (
    FittedModel,
    MsConfig,
    criterion_score,
    enumerate_grid,
    fit_spec,
    select_model,
)
from .simgen import SetupKind, SimSetup, gen_arma_noise, gen_setup
from .spectrum import (
    Periodogram,
    SeasonalLagSet,
    build_candidate_sets,
    lag_set_from_period,
    periodogram,
    top_candidates,
)
