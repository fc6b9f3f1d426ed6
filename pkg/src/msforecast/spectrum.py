"""Spectral detection of seasonal candidates.

The series is split into its ``floor(N/2)`` trigonometric components, each
frequency ``j`` gets the strength ``a_j**2 + b_j**2``, and the strongest
frequencies are mapped to periods ``round(N/j)`` around which blocks of
``tau`` consecutive lags are built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import DetectionError, DomainError, TimeSeries, _as_series

__all__ = [
    "Periodogram",
    "SeasonalLagSet",
    "periodogram",
    "top_candidates",
    "lag_set_from_period",
    "build_candidate_sets",
]


@dataclass(frozen=True)
class Periodogram:
    n: int
    freq: np.ndarray
    a: np.ndarray
    b: np.ndarray
    power: np.ndarray

    def __len__(self):
        return int(self.freq.size)

    def period(self, j: int) -> int:
        return _period(self.n, j)


@dataclass(frozen=True)
class SeasonalLagSet:
    """``tau`` consecutive lags around a candidate period ``center``.

    ``freq`` and ``power`` record where detection found the period; they are
    informational and ignored by equality.
    """

    center: int
    lags: tuple[int, ...]
    freq: int | None = field(default=None, compare=False)
    power: float | None = field(default=None, compare=False)

    def __post_init__(self):
        lags = tuple(int(k) for k in self.lags)
        if not lags or min(lags) < 1:
            raise DomainError(f"seasonal lags must be positive, got {lags}")
        if any(b - a != 1 for a, b in zip(lags, lags[1:])):
            raise DomainError(f"seasonal lags must be consecutive, got {lags}")
        object.__setattr__(self, "lags", lags)
        object.__setattr__(self, "center", int(self.center))

    @property
    def tau(self) -> int:
        return len(self.lags)

    @property
    def lo(self) -> int:
        return self.lags[0]

    @property
    def hi(self) -> int:
        return self.lags[-1]

    def overlaps(self, other: "SeasonalLagSet") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


def _period(n: int, j: int) -> int:
    # round half up; python's round() is banker's rounding
    return int(math.floor(n / j + 0.5))


def periodogram(series, method: str = "fft") -> Periodogram:
    """Fourier coefficients and power for ``j = 1..floor(N/2)``.

    ``a_j = (2/N) sum_t X_t cos(2 pi t j / N)`` and likewise ``b_j`` with
    ``sin``; ``t`` runs over ``1..N``. ``method="direct"`` evaluates the sums
    literally in O(N^2) and exists to cross-check the FFT path.
    """
    x = _as_series(series).values
    n = x.size
    if n < 4:
        raise DomainError(f"periodogram needs N >= 4, got {n}")
    m = n // 2
    j = np.arange(1, m + 1)
    if method == "fft":
        # t = N is congruent to 0 mod N, so X_N goes to slot 0
        spec = np.fft.rfft(np.roll(x, 1))[1 : m + 1]
        a = (2.0 / n) * spec.real
        b = -(2.0 / n) * spec.imag
    elif method == "direct":
        t = np.arange(1, n + 1)
        ang = 2.0 * np.pi * np.outer(j, t) / n
        a = (2.0 / n) * (np.cos(ang) @ x)
        b = (2.0 / n) * (np.sin(ang) @ x)
    else:
        raise DomainError(f"unknown periodogram method {method!r}")
    return Periodogram(n=n, freq=j, a=a, b=b, power=a * a + b * b)


def top_candidates(pg: Periodogram, count: int) -> list[int]:
    """Frequency indices of the ``count`` strongest components.

    Ordered by decreasing power, ties going to the smaller index.
    """
    if not 1 <= count <= len(pg):
        raise DomainError(f"count must lie in 1..{len(pg)}, got {count}")
    order = np.lexsort((pg.freq, -pg.power))
    return [int(pg.freq[k]) for k in order[:count]]


def lag_set_from_period(s: int, tau: int, min_lag: int = 0) -> SeasonalLagSet:
    """Lags ``s - floor((tau-1)/2) .. s + ceil((tau-1)/2)``, pushed above ``min_lag``.

    >>> lag_set_from_period(24, 6, 3).lags
    (22, 23, 24, 25, 26, 27)
    """
    if tau < 1 or s < 1:
        raise DomainError(f"need s >= 1 and tau >= 1, got s={s}, tau={tau}")
    lo = s - (tau - 1) // 2
    lo = max(lo, min_lag + 1, 1)
    return SeasonalLagSet(center=s, lags=tuple(range(lo, lo + tau)))


def build_candidate_sets(
    series,
    r: int,
    tau: int,
    min_lag: int = 0,
    max_lag: int | None = None,
) -> list[SeasonalLagSet]:
    """Up to ``r + 2`` disjoint seasonal lag sets, strongest period first.

    Frequencies are visited in decreasing power. A set is dropped when its
    largest lag exceeds ``max_lag`` (default ``floor(N/2)``) or when it
    overlaps a set already accepted.
    """
    series = _as_series(series)
    n = series.n
    if r < 1:
        raise DomainError(f"r must be >= 1, got {r}")
    if tau < 1:
        raise DomainError(f"tau must be >= 1, got {tau}")
    if max_lag is None:
        max_lag = n // 2
    if max_lag > n // 2:
        raise DomainError(f"max_lag {max_lag} exceeds floor(N/2) = {n // 2}")

    pg = periodogram(series)
    wanted = r + 2
    accepted: list[SeasonalLagSet] = []
    for j in top_candidates(pg, len(pg)):
        base = lag_set_from_period(pg.period(j), tau, min_lag)
        cand = SeasonalLagSet(base.center, base.lags, freq=j, power=float(pg.power[j - 1]))
        if cand.hi > max_lag:
            continue
        if any(cand.overlaps(other) for other in accepted):
            continue
        accepted.append(cand)
        if len(accepted) == wanted:
            break
    if not accepted:
        raise DetectionError(
            f"no seasonal lag set of length tau={tau} fits between lag "
            f"{min_lag + 1} and {max_lag}; try a shorter tau or a larger max_lag"
        )
    return accepted
