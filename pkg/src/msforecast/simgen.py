"""Seeded generators for the four synthetic seasonal setups.

All setups share the short-term noise

    Z_t = 0.8 Z_{t-1} - 0.3 Z_{t-2} + 0.5 e_{t-1} + e_t,   e_t ~ N(0, 2^2)

Random streams come from numpy's PCG64 keyed by ``(seed, stream)`` through
``SeedSequence``, so each sequence of a benchmark has its own reproducible
stream and the noise, ``A`` and ``B`` draws never share one.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.signal import lfilter

from .core import DomainError, TimeSeries

__all__ = [
    "SetupKind",
    "SimSetup",
    "Simulated",
    "ARMA_AR",
    "ARMA_MA",
    "NOISE_SIGMA",
    "WARMUP",
    "gen_arma_noise",
    "gen_setup",
]

ARMA_AR = (0.8, -0.3)
ARMA_MA = (0.5,)
NOISE_SIGMA = 2.0
WARMUP = 200
SEED_SEGMENT = 100  # repetition starts at t = 100


class SetupKind(str, enum.Enum):
    TRIG_SINGLE = "trig-single"
    TRIG_DOUBLE = "trig-double"
    NONTRIG_DOUBLE = "nontrig-double"
    MIXED = "mixed"

    @property
    def needs_seed_segment(self) -> bool:
        return self in (SetupKind.NONTRIG_DOUBLE, SetupKind.MIXED)


@dataclass(frozen=True)
class SimSetup:
    kind: SetupKind
    n: int
    seed: int = 0
    stream: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", SetupKind(self.kind))
        if self.n < 1:
            raise DomainError(f"length must be positive, got {self.n}")
        if self.kind.needs_seed_segment and self.n < 150:
            raise DomainError(f"{self.kind.value} needs N >= 150, got {self.n}")
        if self.seed < 0 or self.stream < 0:
            raise DomainError("seed and stream must be non-negative")


@dataclass(frozen=True)
class Simulated:
    series: TimeSeries
    components: dict[str, np.ndarray]


def _rngs(seed: int, stream: int, count: int) -> list[np.random.Generator]:
    ss = np.random.SeedSequence(seed, spawn_key=(stream,))
    return [np.random.Generator(np.random.PCG64(s)) for s in ss.spawn(count)]


def _arma_noise(n: int, rng: np.random.Generator) -> np.ndarray:
    eps = rng.standard_normal(n + WARMUP) * NOISE_SIGMA
    # zero initial state: Z_0 = Z_{-1} = 0, e_0 = 0
    z = lfilter([1.0, *ARMA_MA], [1.0, -ARMA_AR[0], -ARMA_AR[1]], eps)
    return z[WARMUP:]


def gen_arma_noise(n: int, seed: int = 0, stream: int = 0) -> np.ndarray:
    if n < 1:
        raise DomainError(f"length must be positive, got {n}")
    return _arma_noise(n, _rngs(seed, stream, 3)[0])


def _repeating(n: int, period: int, rng: np.random.Generator) -> np.ndarray:
    # 1-based: fresh N(0,1) for 0 < t < 100, then A_t = A_{t-period}
    out = np.empty(n)
    fresh = min(n, SEED_SEGMENT - 1)
    out[:fresh] = rng.standard_normal(fresh)
    for i in range(fresh, n):
        out[i] = out[i - period]
    return out


def gen_setup(setup: SimSetup) -> Simulated:
    kind, n = setup.kind, setup.n
    rz, ra, rb = _rngs(setup.seed, setup.stream, 3)
    t = np.arange(1, n + 1)
    comps: dict[str, np.ndarray] = {"Z": _arma_noise(n, rz)}
    if kind in (SetupKind.TRIG_SINGLE, SetupKind.TRIG_DOUBLE, SetupKind.MIXED):
        comps["S50"] = 10.0 * np.sin(2 * np.pi * t / 50)
    if kind in (SetupKind.TRIG_DOUBLE, SetupKind.MIXED):
        comps["S15"] = 5.0 * np.sin(2 * np.pi * t / 15)
    if kind.needs_seed_segment:
        comps["A"] = _repeating(n, 50, ra)
        comps["B"] = _repeating(n, 15, rb)
    x = np.sum(list(comps.values()), axis=0)
    for v in comps.values():
        v.setflags(write=False)
    return Simulated(series=TimeSeries(x), components=comps)
