"""Recursive multi-step point forecasts from a fitted model."""

from __future__ import annotations

import numpy as np

from .core import ForecastResult, InsufficientDataError, DomainError, _as_series
from .model import residual_path

__all__ = ["predict", "extend_path"]


def extend_path(x: np.ndarray, e: np.ndarray, spec, theta: np.ndarray, future_e: np.ndarray) -> np.ndarray:
    """Run the model recursion forward past the end of ``x``.

    ``e`` holds in-sample residuals aligned with ``x`` (zeros before burn-in);
    ``future_e`` supplies the innovations for the new steps, so zeros give the
    conditional mean. Returns the ``len(future_e)`` new values.
    """
    xl, xp, el, ep = spec.lag_tables
    cx, ce = theta[xp], theta[ep]
    n, h = x.size, future_e.size
    xx = np.concatenate([x, np.zeros(h)])
    ee = np.concatenate([e, future_e])
    for t in range(n, n + h):
        xx[t] = cx @ xx[t - xl] + ce @ ee[t - el] + ee[t]
    return xx[n:]


def predict(series, model, n: int) -> ForecastResult:
    """``n``-step-ahead conditional-mean forecasts ``X_{N+1} .. X_{N+n}``.

    Future innovations are zero, and so are residuals before the model's
    burn-in. The model's stored mean is removed before and restored after.
    """
    if n < 1:
        raise DomainError(f"horizon must be >= 1, got {n}")
    series = _as_series(series)
    spec = model.spec
    if series.n < spec.burn_in:
        raise InsufficientDataError(
            f"insufficient data for lags: model needs {spec.burn_in} observations, got {series.n}"
        )
    x = series.values - model.mean
    theta = model.coef.to_theta()
    e = residual_path(x, spec, theta)
    path = extend_path(x, e, spec, theta, np.zeros(n))
    return ForecastResult(origin=series.n, horizon=n, predictions=path + model.mean)
