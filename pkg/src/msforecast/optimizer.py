"""Dense BFGS with a strong-Wolfe line search.

Used for the least-squares fits; kept in-repo so that the fitting path has no
external solver dependency and every accepted step can be audited.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import DomainError

__all__ = ["OptimOptions", "OptimResult", "Step", "bfgs_minimize", "wolfe_line_search"]

Objective = Callable[[np.ndarray], "tuple[float, np.ndarray]"]

TERMINATIONS = ("grad_tol", "step_tol", "max_iter", "line_search_fail")


@dataclass(frozen=True)
class OptimOptions:
    grad_tol: float = 1e-6  # relative: |g|_inf < grad_tol * (1 + |f|)
    step_tol: float = 1e-12
    max_iter: int = 500
    c1: float = 1e-4
    c2: float = 0.9
    max_ls_evals: int = 40
    refine: bool = False
    n_starts: int = 1
    jitter: float = 0.01
    seed: int = 0


@dataclass
class Step:
    """One accepted iterate, kept for auditing the line-search conditions."""

    alpha: float
    f_before: float
    f_after: float
    slope_before: float
    slope_after: float

    def armijo(self, c1: float) -> bool:
        return self.f_after <= self.f_before + c1 * self.alpha * self.slope_before

    def curvature(self, c2: float) -> bool:
        return abs(self.slope_after) <= -c2 * self.slope_before


@dataclass
class OptimResult:
    theta_star: np.ndarray
    objective: float
    grad_norm: float
    iterations: int
    termination: str
    n_evals: int = 0
    steps: list[Step] = field(default_factory=list, repr=False)

    @property
    def converged(self) -> bool:
        return self.termination in ("grad_tol", "step_tol")


def _finite(f, g) -> bool:
    return math.isfinite(f) and bool(np.isfinite(g).all())


def _cubic_min(a, fa, da, b, fb, db):
    """Minimiser of the cubic interpolating (a, fa, da) and (b, fb, db), or None."""
    d1 = da + db - 3.0 * (fa - fb) / (a - b)
    rad = d1 * d1 - da * db
    if rad < 0:
        return None
    d2 = math.copysign(math.sqrt(rad), b - a)
    denom = db - da + 2.0 * d2
    if denom == 0:
        return None
    t = b - (b - a) * (db + d2 - d1) / denom
    return t if math.isfinite(t) else None


def wolfe_line_search(
    fg: Objective, x, f0, g0, p, c1=1e-4, c2=0.9, alpha0=1.0, max_evals=40, refine=False
):
    """Find a step satisfying the strong Wolfe conditions along ``p``.

    Returns ``(alpha, f, g, evals)`` or ``(None, None, None, evals)``. Points
    where the objective is not finite count as overshooting and are bisected
    away. With ``refine`` an acceptable step is polished by one cubic
    interpolation through ``0`` and the accepted step; the polished point
    replaces it only if it also satisfies both conditions and does not raise
    ``f``. This makes the search exact on quadratics. Comparisons of ``f``
    then also allow a few ulps of ``|f0|``: near a minimiser the predicted
    decrease drops below the resolution of ``f`` and only the slope is
    informative.
    """
    d0 = float(np.dot(g0, p))
    evals = 0
    tol = 8.0 * np.finfo(float).eps * abs(f0) if refine else 0.0

    def phi(a):
        nonlocal evals
        evals += 1
        f, g = fg(x + a * p)
        f = float(f)
        if not _finite(f, g):
            return math.inf, None, math.nan
        return f, g, float(np.dot(g, p))

    def zoom(lo, f_lo, d_lo, g_lo, hi, f_hi, d_hi):
        while evals < max_evals:
            width = hi - lo
            trial = None
            if math.isfinite(f_hi) and math.isfinite(d_hi):
                trial = _cubic_min(lo, f_lo, d_lo, hi, f_hi, d_hi)
            a_min, a_max = min(lo, hi), max(lo, hi)
            margin = 0.1 * abs(width)
            if trial is None or not (a_min + margin <= trial <= a_max - margin):
                trial = lo + 0.5 * width
            if abs(trial - lo) <= 1e-16 * max(1.0, abs(lo)):
                break
            f, g, d = phi(trial)
            if f > f0 + c1 * trial * d0 + tol or f >= f_lo + tol:
                hi, f_hi, d_hi = trial, f, d
            else:
                if abs(d) <= -c2 * d0:
                    return trial, f, g
                if d * (hi - lo) >= 0:
                    hi, f_hi, d_hi = lo, f_lo, d_lo
                lo, f_lo, d_lo, g_lo = trial, f, d, g
        return None, None, None

    def polish(a, f, g):
        if a is None or not refine or evals >= max_evals:
            return a, f, g
        d = float(np.dot(g, p))
        if abs(d) <= 1e-10 * abs(d0):
            return a, f, g
        t = _cubic_min(0.0, f0, d0, a, f, d)
        if t is None or t <= 0 or abs(t - a) <= 1e-12 * a:
            return a, f, g
        f2, g2, d2 = phi(t)
        if f2 <= f + tol and f2 <= f0 + c1 * t * d0 + tol and abs(d2) <= min(abs(d), -c2 * d0):
            return t, f2, g2
        return a, f, g

    a_prev, f_prev, d_prev, g_prev = 0.0, f0, d0, g0
    a = alpha0
    first = True
    while evals < max_evals:
        f, g, d = phi(a)
        if f > f0 + c1 * a * d0 + tol or (not first and f >= f_prev + tol):
            res = zoom(a_prev, f_prev, d_prev, g_prev, a, f, d)
            return (*polish(*res), evals)
        if abs(d) <= -c2 * d0:
            return (*polish(a, f, g), evals)
        if d >= 0:
            res = zoom(a, f, d, g, a_prev, f_prev, d_prev)
            return (*polish(*res), evals)
        a_prev, f_prev, d_prev, g_prev = a, f, d, g
        a *= 2.0
        first = False
    return None, None, None, evals


def _bfgs_single(fg: Objective, x0: np.ndarray, opts: OptimOptions) -> OptimResult:
    x = np.array(x0, dtype=np.float64)
    f, g = fg(x)
    f = float(f)
    g = np.asarray(g, dtype=np.float64)
    if not _finite(f, g):
        raise DomainError("objective or gradient is not finite at the starting point")
    d = x.size
    eye = np.eye(d)
    H = eye.copy()
    scaled = False
    n_evals = 1
    steps: list[Step] = []
    termination = "max_iter"
    it = 0
    while True:
        gmax = float(np.max(np.abs(g))) if d else 0.0
        if gmax < opts.grad_tol * (1.0 + abs(f)):
            termination = "grad_tol"
            break
        if it >= opts.max_iter:
            break
        p = -H @ g
        if float(np.dot(g, p)) >= 0:
            H, scaled = eye.copy(), False
            p = -g
        alpha0 = 1.0 if scaled else min(1.0, 1.0 / float(np.linalg.norm(g)))
        alpha, f_new, g_new, ev = wolfe_line_search(
            fg, x, f, g, p, opts.c1, opts.c2, alpha0, opts.max_ls_evals, opts.refine
        )
        n_evals += ev
        if alpha is None and scaled:
            # curvature model may be stale; retry once along steepest descent
            H, scaled = eye.copy(), False
            p = -g
            alpha0 = min(1.0, 1.0 / float(np.linalg.norm(g)))
            alpha, f_new, g_new, ev = wolfe_line_search(
                fg, x, f, g, p, opts.c1, opts.c2, alpha0, opts.max_ls_evals, opts.refine
            )
            n_evals += ev
        if alpha is None:
            termination = "line_search_fail"
            break
        s = alpha * p
        y = g_new - g
        steps.append(Step(alpha, f, f_new, float(np.dot(g, p)), float(np.dot(g_new, p))))
        it += 1
        x = x + s
        f, g = f_new, g_new
        if float(np.max(np.abs(s))) < opts.step_tol * (1.0 + float(np.max(np.abs(x)))):
            termination = "step_tol"
            break
        ys = float(np.dot(y, s))
        if ys > 1e-10 * float(np.linalg.norm(y)) * float(np.linalg.norm(s)):
            if not scaled:
                H = (ys / float(np.dot(y, y))) * eye
                scaled = True
            rho = 1.0 / ys
            Hy = H @ y
            H = (
                H
                - rho * (np.outer(s, Hy) + np.outer(Hy, s))
                + (rho * rho * float(np.dot(y, Hy)) + rho) * np.outer(s, s)
            )
    return OptimResult(
        theta_star=x,
        objective=f,
        grad_norm=float(np.max(np.abs(g))) if d else 0.0,
        iterations=it,
        termination=termination,
        n_evals=n_evals,
        steps=steps,
    )


def bfgs_minimize(fg: Objective, x0, opts: OptimOptions | None = None, **overrides) -> OptimResult:
    """Minimise ``f`` given ``fg(x) -> (f(x), grad f(x))``.

    The inverse Hessian starts at the identity and is rescaled by
    ``y's / y'y`` before the first update; updates with ``y's`` not safely
    positive are skipped. With ``n_starts > 1`` extra runs start from
    ``x0`` plus seeded ``N(0, jitter^2)`` noise and the best result wins.
    """
    opts = opts or OptimOptions()
    if overrides:
        opts = OptimOptions(**{**opts.__dict__, **overrides})
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    if not np.all(np.isfinite(x0)):
        raise DomainError("starting point must be finite")
    best = _bfgs_single(fg, x0, opts)
    if opts.n_starts > 1:
        rng = np.random.default_rng(opts.seed)
        for _ in range(opts.n_starts - 1):
            start = x0 + rng.normal(0.0, opts.jitter, size=x0.size)
            try:
                res = _bfgs_single(fg, start, opts)
            except DomainError:
                continue
            if res.objective < best.objective:
                best = res
    return best
