"""Grid search over ``(p, q, C)``, least-squares fitting and criterion scoring."""

from __future__ import annotations

import itertools
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from math import comb
from typing import Optional, Sequence

import numpy as np

from .core import DomainError, InsufficientDataError, MSError, TimeSeries, _as_series
from .model import (
    SIGMA2_FLOOR,
    Coefficients,
    ModelSpec,
    log_likelihood,
    make_objective,
    residuals,
)
from .optimizer import OptimOptions, bfgs_minimize
from .spectrum import SeasonalLagSet, build_candidate_sets

__all__ = [
    "CRITERIA",
    "MsConfig",
    "FittedModel",
    "FitFailure",
    "Leaderboard",
    "SelectionError",
    "criterion_score",
    "bc_penalty",
    "enumerate_grid",
    "fit_spec",
    "select_model",
]

log = logging.getLogger(__name__)

CRITERIA = ("BC", "AIC", "BIC")
FORMAT_NAME = "msforecast.fitted_model"


class SelectionError(MSError):
    """Every spec in the grid failed to fit."""


@dataclass(frozen=True)
class MsConfig:
    """Settings of the two-stage procedure.

    ``r = 0`` turns off seasonal detection and searches plain ARMA(p, q)
    models, which is the vanilla baseline.
    """

    r: int
    tau: int = 6
    p_max: int = 3
    q_max: int = 3
    criterion: str = "BC"
    min_period: Optional[int] = None  # default max(p_max, q_max)
    max_period: Optional[int] = None  # default floor(N/2)
    allow_fewer: bool = False
    center: bool = False
    grad_tol: float = 1e-6
    max_iter: int = 500
    n_starts: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.r < 0:
            raise DomainError(f"r must be >= 0, got {self.r}")
        if self.tau < 1:
            raise DomainError(f"tau must be >= 1, got {self.tau}")
        if self.p_max < 0 or self.q_max < 0:
            raise DomainError("p_max and q_max must be non-negative")
        if self.tau <= max(self.p_max, self.q_max):
            raise DomainError(
                f"tau must exceed max(p_max, q_max): tau={self.tau}, "
                f"p_max={self.p_max}, q_max={self.q_max}"
            )
        kind = self.criterion.upper()
        if kind not in CRITERIA:
            raise DomainError(f"unknown criterion {self.criterion!r}, expected one of {CRITERIA}")
        object.__setattr__(self, "criterion", kind)

    @property
    def min_lag(self) -> int:
        return max(self.p_max, self.q_max) if self.min_period is None else self.min_period

    def optim_options(self) -> OptimOptions:
        return OptimOptions(
            grad_tol=self.grad_tol, max_iter=self.max_iter, n_starts=self.n_starts, seed=self.seed
        )


def bc_penalty(m: int, k: int) -> float:
    """Bridge-criterion penalty ``M**(2/3) * (1 + 1/2 + ... + 1/k)``."""
    return m ** (2.0 / 3.0) * sum(1.0 / j for j in range(1, k + 1))


def criterion_score(kind: str, m: int, sse: float, k: int) -> float:
    """``M ln(sigma^2) + penalty(k)`` with ``sigma^2 = max(sse/M, 1e-12)``.

    >>> criterion_score("AIC", 100, 100.0, 3)
    6.0
    """
    if m < 1 or sse < 0 or k < 0:
        raise DomainError(f"invalid criterion arguments M={m}, sse={sse}, k={k}")
    fit = m * np.log(max(sse / m, SIGMA2_FLOOR))
    kind = kind.upper()
    if kind == "AIC":
        pen = 2.0 * k
    elif kind == "BIC":
        pen = k * np.log(m)
    elif kind == "BC":
        pen = bc_penalty(m, k)
    else:
        raise DomainError(f"unknown criterion {kind!r}, expected one of {CRITERIA}")
    return float(fit + pen)


@dataclass(frozen=True)
class FittedModel:
    spec: ModelSpec
    coef: Coefficients
    sse: float
    loglik: float
    criterion: str
    criterion_value: float
    m: int
    k: int
    mean: float = 0.0
    termination: str = ""
    iterations: int = 0
    config: dict = field(default_factory=dict, compare=False)

    @property
    def theta(self) -> np.ndarray:
        return self.coef.to_theta()

    def to_dict(self) -> dict:
        from . import __version__

        c = self.coef
        return {
            "format": FORMAT_NAME,
            "version": __version__,
            "spec": {
                "p": self.spec.p,
                "q": self.spec.q,
                "lag_sets": [{"center": s.center, "lags": list(s.lags)} for s in self.spec.lag_sets],
            },
            "coefficients": {
                "phi": [float(v) for v in c.phi],
                "psi": [float(v) for v in c.psi],
                "gamma": [[float(v) for v in g] for g in c.gamma],
                "lambda": [[float(v) for v in l] for l in c.lambda_],
                "sigma": float(c.sigma),
            },
            "sse": self.sse,
            "loglik": self.loglik,
            "criterion": {"name": self.criterion, "value": self.criterion_value},
            "effective_count": self.m,
            "param_count": self.k,
            "mean": self.mean,
            "optimizer": {"termination": self.termination, "iterations": self.iterations},
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    @classmethod
    def from_dict(cls, doc: dict) -> "FittedModel":
        if doc.get("format") != FORMAT_NAME:
            raise DomainError(f"not a fitted-model document (format={doc.get('format')!r})")
        s = doc["spec"]
        spec = ModelSpec(
            p=int(s["p"]),
            q=int(s["q"]),
            lag_sets=tuple(SeasonalLagSet(d["center"], tuple(d["lags"])) for d in s["lag_sets"]),
        )
        c = doc["coefficients"]
        arr = lambda v: np.array(v, dtype=np.float64)
        coef = Coefficients(
            phi=arr(c["phi"]),
            psi=arr(c["psi"]),
            gamma=tuple(arr(g) for g in c["gamma"]),
            lambda_=tuple(arr(l) for l in c["lambda"]),
            sigma=float(c["sigma"]),
        )
        coef.check(spec)
        opt = doc.get("optimizer", {})
        return cls(
            spec=spec,
            coef=coef,
            sse=float(doc["sse"]),
            loglik=float(doc["loglik"]),
            criterion=doc["criterion"]["name"],
            criterion_value=float(doc["criterion"]["value"]),
            m=int(doc["effective_count"]),
            k=int(doc["param_count"]),
            mean=float(doc.get("mean", 0.0)),
            termination=opt.get("termination", ""),
            iterations=int(opt.get("iterations", 0)),
            config=doc.get("config", {}),
        )

    @classmethod
    def from_json(cls, text: str) -> "FittedModel":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FitFailure:
    spec: ModelSpec
    reason: str


class Leaderboard(list):
    """Fitted models sorted by criterion value; ``failures`` lists skipped specs."""

    def __init__(self, entries=(), failures=()):
        super().__init__(entries)
        self.failures: list[FitFailure] = list(failures)


def enumerate_grid(candidates: Sequence[SeasonalLagSet], cfg: MsConfig) -> list[ModelSpec]:
    """All ``(p, q, C)`` combinations in lexicographic order.

    ``C`` ranges over the subsets of ``candidates`` of size ``min(r, len)``;
    with ``allow_fewer`` every smaller size down to the empty set follows.
    """
    candidates = list(candidates)
    if cfg.r > 0 and not candidates:
        raise DomainError("enumerate_grid needs at least one candidate lag set")
    top = min(cfg.r, len(candidates))
    sizes = range(top, -1, -1) if cfg.allow_fewer else (top,)
    subsets = [c for size in sizes for c in itertools.combinations(candidates, size)]
    return [
        ModelSpec(p, q, tuple(sub))
        for p in range(cfg.p_max + 1)
        for q in range(cfg.q_max + 1)
        for sub in subsets
    ]


def grid_size(n_candidates: int, cfg: MsConfig) -> int:
    top = min(cfg.r, n_candidates)
    sizes = range(top + 1) if cfg.allow_fewer else (top,)
    return (cfg.p_max + 1) * (cfg.q_max + 1) * sum(comb(n_candidates, s) for s in sizes)


def fit_spec(
    series,
    spec: ModelSpec,
    criterion: str = "BC",
    opts: OptimOptions | None = None,
    mean: float = 0.0,
) -> FittedModel:
    """Least-squares fit of one spec from ``theta = 0``.

    ``series`` is used as given; ``mean`` is only recorded so that forecasts
    can add it back.
    """
    series = _as_series(series)
    objective = make_objective(series, spec)
    res = bfgs_minimize(objective, np.zeros(spec.n_params), opts)
    theta = res.theta_star
    state = residuals(series, spec, Coefficients.from_theta(spec, theta))
    loglik, sigma = log_likelihood(state)
    k = spec.n_params
    return FittedModel(
        spec=spec,
        coef=Coefficients.from_theta(spec, theta, sigma=sigma),
        sse=state.sse,
        loglik=loglik,
        criterion=criterion.upper(),
        criterion_value=criterion_score(criterion, state.m, state.sse, k),
        m=state.m,
        k=k,
        mean=mean,
        termination=res.termination,
        iterations=res.iterations,
    )


def _fit_job(args):
    x, spec, criterion, opts, mean = args
    try:
        fm = fit_spec(TimeSeries(x), spec, criterion, opts, mean)
    except (MSError, FloatingPointError, np.linalg.LinAlgError) as exc:
        return FitFailure(spec, f"{type(exc).__name__}: {exc}")
    if not np.isfinite(fm.criterion_value):
        return FitFailure(spec, "non-finite criterion value")
    return fm


def candidate_sets(series, cfg: MsConfig) -> list[SeasonalLagSet]:
    if cfg.r == 0:
        return []
    return build_candidate_sets(series, cfg.r, cfg.tau, cfg.min_lag, cfg.max_period)


def select_model(series, cfg: MsConfig, jobs: int = 1) -> tuple[FittedModel, Leaderboard]:
    """Detect candidates, fit every grid spec, return the best and the leaderboard.

    The winner minimises the criterion; ties go to fewer parameters, then to
    enumeration order. The result does not depend on ``jobs``.
    """
    series = _as_series(series)
    mean = 0.0
    if cfg.center:
        mean = float(np.mean(series.values))
        series = TimeSeries(series.values - mean)
    cands = candidate_sets(series, cfg)
    specs = enumerate_grid(cands, cfg)
    opts = cfg.optim_options()
    jobs_args = [(series.values, s, cfg.criterion, opts, mean) for s in specs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_fit_job, jobs_args, chunksize=4))
    else:
        results = [_fit_job(a) for a in jobs_args]

    echo = asdict(cfg)
    fitted, failures = [], []
    for idx, res in enumerate(results):
        if isinstance(res, FitFailure):
            log.debug("spec %s failed: %s", res.spec.describe(), res.reason)
            failures.append(res)
        else:
            fitted.append((res.criterion_value, res.k, idx, replace(res, config=echo)))
    if not fitted:
        reasons = "; ".join(f"{f.spec.describe()}: {f.reason}" for f in failures)
        raise SelectionError(f"all {len(specs)} specs failed: {reasons}")
    fitted.sort(key=lambda e: e[:3])
    board = Leaderboard([e[3] for e in fitted], failures)
    return board[0], board
