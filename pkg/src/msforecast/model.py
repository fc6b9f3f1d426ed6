"""Generalised multi-seasonal ARMA model.

    X_t = Phi' X_{t-1..t-p} + Psi' e_{t-1..t-q}
          + sum_i (Gamma_i' X_{S_i} + Lambda_i' e_{S_i}) + e_t

Residuals are computed conditionally on the first ``t0 - 1`` observations,
where ``t0 = max(p, q, largest seasonal lag) + 1``; innovations and their
derivatives before ``t0`` are taken as zero.

The flat parameter layout is ``[Phi | Psi | Gamma_1 | Lambda_1 | ... ]``.
The noise scale is profiled out (``sigma^2 = sse / M``) and never optimised.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .core import DomainError, InsufficientDataError, _as_series
from .spectrum import SeasonalLagSet

__all__ = [
    "SIGMA2_FLOOR",
    "ModelSpec",
    "Coefficients",
    "ResidualState",
    "residuals",
    "log_likelihood",
    "sse_and_gradient",
]

SIGMA2_FLOOR = 1e-12


@dataclass(frozen=True)
class ModelSpec:
    p: int
    q: int
    lag_sets: tuple[SeasonalLagSet, ...] = ()

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise DomainError(f"orders must be non-negative, got p={self.p}, q={self.q}")
        sets = tuple(self.lag_sets)
        object.__setattr__(self, "lag_sets", sets)
        short = max(self.p, self.q)
        for i, s in enumerate(sets):
            if s.lo <= short:
                raise DomainError(
                    f"seasonal lag {s.lo} must exceed max(p, q) = {short}"
                )
            for other in sets[i + 1 :]:
                if s.overlaps(other):
                    raise DomainError(f"lag sets {s.lags} and {other.lags} overlap")

    @property
    def r(self) -> int:
        return len(self.lag_sets)

    @property
    def n_params(self) -> int:
        return self.p + self.q + 2 * sum(s.tau for s in self.lag_sets)

    @property
    def max_lag(self) -> int:
        return max([self.p, self.q] + [s.hi for s in self.lag_sets])

    @property
    def burn_in(self) -> int:
        """First modelled time index ``t0`` (1-based)."""
        return self.max_lag + 1

    def seasonal_offsets(self) -> list[int]:
        """Start index of each ``Gamma_i`` in the flat vector."""
        out, off = [], self.p + self.q
        for s in self.lag_sets:
            out.append(off)
            off += 2 * s.tau
        return out

    @cached_property
    def lag_tables(self):
        x_lags = list(range(1, self.p + 1))
        x_par = list(range(self.p))
        e_lags = list(range(1, self.q + 1))
        e_par = list(range(self.p, self.p + self.q))
        for s, off in zip(self.lag_sets, self.seasonal_offsets()):
            for m, lag in enumerate(s.lags):
                x_lags.append(lag)
                x_par.append(off + m)
                e_lags.append(lag)
                e_par.append(off + s.tau + m)
        as_int = lambda v: np.array(v, dtype=np.int64)
        return as_int(x_lags), as_int(x_par), as_int(e_lags), as_int(e_par)

    def describe(self) -> str:
        sets = ", ".join(f"{s.lo}..{s.hi}" for s in self.lag_sets) or "-"
        return f"p={self.p} q={self.q} C=[{sets}]"


@dataclass(frozen=True)
class Coefficients:
    phi: np.ndarray
    psi: np.ndarray
    gamma: tuple[np.ndarray, ...]
    lambda_: tuple[np.ndarray, ...]
    sigma: float = 1.0

    def __post_init__(self):
        if not (self.sigma > 0 and np.isfinite(self.sigma)):
            raise DomainError(f"sigma must be positive and finite, got {self.sigma}")
        for arr in [self.phi, self.psi, *self.gamma, *self.lambda_]:
            if not np.all(np.isfinite(arr)):
                raise DomainError("coefficients must be finite")

    @classmethod
    def from_theta(cls, spec: ModelSpec, theta, sigma: float = 1.0) -> "Coefficients":
        theta = _check_theta(spec, theta)
        p, q = spec.p, spec.q
        gamma, lam = [], []
        for s, off in zip(spec.lag_sets, spec.seasonal_offsets()):
            gamma.append(theta[off : off + s.tau].copy())
            lam.append(theta[off + s.tau : off + 2 * s.tau].copy())
        return cls(
            phi=theta[:p].copy(),
            psi=theta[p : p + q].copy(),
            gamma=tuple(gamma),
            lambda_=tuple(lam),
            sigma=float(sigma),
        )

    @classmethod
    def zeros(cls, spec: ModelSpec) -> "Coefficients":
        return cls.from_theta(spec, np.zeros(spec.n_params))

    def to_theta(self) -> np.ndarray:
        parts = [self.phi, self.psi]
        for g, l in zip(self.gamma, self.lambda_):
            parts += [g, l]
        return np.concatenate([np.asarray(a, dtype=np.float64).reshape(-1) for a in parts])

    def check(self, spec: ModelSpec) -> None:
        ok = (
            len(self.phi) == spec.p
            and len(self.psi) == spec.q
            and len(self.gamma) == spec.r
            and len(self.lambda_) == spec.r
            and all(len(g) == s.tau for g, s in zip(self.gamma, spec.lag_sets))
            and all(len(l) == s.tau for l, s in zip(self.lambda_, spec.lag_sets))
        )
        if not ok:
            raise DomainError(f"coefficient dimensions do not match {spec.describe()}")


@dataclass(frozen=True)
class ResidualState:
    """Residuals ``e_t`` for ``t = t0..N`` and their sum of squares."""

    residuals: np.ndarray
    burn_in: int
    sse: float

    @property
    def m(self) -> int:
        return int(self.residuals.size)


def _check_theta(spec: ModelSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=np.float64).reshape(-1)
    if theta.size != spec.n_params:
        raise DomainError(
            f"parameter vector has length {theta.size}, {spec.describe()} needs {spec.n_params}"
        )
    return theta


def _check_length(x: np.ndarray, spec: ModelSpec) -> None:
    if x.size < spec.burn_in:
        raise InsufficientDataError(
            f"insufficient data for lags: largest lag is {spec.max_lag}, "
            f"need at least {spec.burn_in} observations, got {x.size}"
        )


def residual_path(x: np.ndarray, spec: ModelSpec, theta: np.ndarray) -> np.ndarray:
    """Full-length residual array (zeros before burn-in), 0-based."""
    xl, xp, el, ep = spec.lag_tables
    return _kernels.residual_recursion(
        np.ascontiguousarray(x, dtype=np.float64), theta, xl, xp, el, ep, spec.burn_in - 1
    )


def residuals(series, spec: ModelSpec, coef: Coefficients) -> ResidualState:
    x = _as_series(series).values
    coef.check(spec)
    _check_length(x, spec)
    e = residual_path(x, spec, coef.to_theta())[spec.burn_in - 1 :]
    return ResidualState(residuals=e, burn_in=spec.burn_in, sse=float(np.dot(e, e)))


def log_likelihood(state: ResidualState) -> tuple[float, float]:
    """Gaussian log-likelihood at the profiled ``sigma^2 = sse / M``.

    Returns ``(loglik, sigma_hat)``. ``sigma^2`` is floored at
    ``SIGMA2_FLOOR`` so that exact fits keep a finite likelihood.
    """
    m = state.m
    if m < 1:
        raise DomainError("log-likelihood needs at least one residual")
    s2 = max(state.sse / m, SIGMA2_FLOOR)
    loglik = -0.5 * m * (np.log(2.0 * np.pi * s2) + 1.0)
    return float(loglik), float(np.sqrt(s2))


def sse_and_gradient(series, spec: ModelSpec, theta) -> tuple[float, np.ndarray]:
    """Sum of squared residuals and its exact gradient in ``theta``.

    The derivative of every residual is propagated through the same MA-type
    feedback (``Psi`` and every ``Lambda_i``) that produces the residual.
    """
    x = series.values if hasattr(series, "values") else np.asarray(series, dtype=np.float64)
    theta = _check_theta(spec, theta)
    _check_length(x, spec)
    xl, xp, el, ep = spec.lag_tables
    sse, grad, _ = _kernels.sse_gradient_recursion(
        np.ascontiguousarray(x, dtype=np.float64), theta, xl, xp, el, ep, spec.burn_in - 1
    )
    return float(sse), grad


def make_objective(series, spec: ModelSpec):
    """Closure ``theta -> (sse, grad)`` with validation hoisted out."""
    x = np.ascontiguousarray(_as_series(series).values)
    _check_length(x, spec)
    xl, xp, el, ep = spec.lag_tables
    start = spec.burn_in - 1
    d = spec.n_params

    def f(theta):
        if theta.dtype != np.float64:
            theta = theta.astype(np.float64)
        if theta.size != d:
            raise DomainError(f"expected {d} parameters, got {theta.size}")
        sse, grad, _ = _kernels.sse_gradient_recursion(x, theta, xl, xp, el, ep, start)
        return sse, grad

    return f
