"""Rolling-origin evaluation on the synthetic setups, and fit-time scaling.

Each benchmark cell is one (sequence, evaluation) pair: the model is selected
on the first ``train_start + train_step * (i - 1)`` observations of sequence
``s`` and forecasts the next ``horizon`` values; CMSE is recorded at every
report point.
"""

from __future__ import annotations

import json
import logging
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from .core import DomainError, MSError, cmse
from .forecast import predict
from .selection import MsConfig, fit_spec, select_model
from .model import ModelSpec
from .simgen import SetupKind, SimSetup, gen_setup
from .spectrum import lag_set_from_period

__all__ = [
    "BenchProtocol",
    "BenchReport",
    "run_benchmark",
    "runtime_scaling",
    "format_table",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class BenchProtocol:
    config: MsConfig
    sequences: int = 10
    evaluations: int = 10
    train_start: int = 650
    train_step: int = 25
    horizon: int = 100
    report_points: tuple[int, ...] = (1, 5, 15, 50, 100)
    length: int = 1000
    seed: int = 0

    def __post_init__(self):
        need = self.train_start + (self.evaluations - 1) * self.train_step + self.horizon
        if need > self.length:
            raise DomainError(
                f"protocol needs {need} observations but sequences have {self.length}"
            )
        if self.sequences < 1 or self.evaluations < 1 or self.horizon < 1:
            raise DomainError("sequences, evaluations and horizon must be positive")
        if any(n < 1 or n > self.horizon for n in self.report_points):
            raise DomainError(f"report points must lie in 1..{self.horizon}")

    @classmethod
    def full_scale(cls, config: MsConfig, seed: int = 0) -> "BenchProtocol":
        """30 sequences x 50 evaluations, training on 650 + 5 (i - 1) points."""
        return cls(config, sequences=30, evaluations=50, train_step=5, seed=seed)

    def train_length(self, i: int) -> int:
        """Training length for evaluation ``i`` (1-based)."""
        return self.train_start + self.train_step * (i - 1)


@dataclass
class BenchReport:
    kind: str
    label: str
    report_points: tuple[int, ...]
    raw: np.ndarray  # (sequences, evaluations, points); NaN marks a failed cell
    failures: list[str] = field(default_factory=list)

    def _values(self, k: int) -> np.ndarray:
        col = self.raw[:, :, k].ravel()
        return col[np.isfinite(col)]

    @property
    def n_missing(self) -> int:
        return int(np.isnan(self.raw[:, :, 0]).sum())

    @property
    def mean(self) -> dict[int, float]:
        return {n: float(np.mean(self._values(k))) for k, n in enumerate(self.report_points)}

    @property
    def se(self) -> dict[int, float]:
        """Standard error over all pooled cells, ``sd / sqrt(count)``."""
        out = {}
        for k, n in enumerate(self.report_points):
            v = self._values(k)
            out[n] = float(np.std(v, ddof=1) / np.sqrt(v.size)) if v.size > 1 else float("nan")
        return out

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "label": self.label,
            "report_points": list(self.report_points),
            "mean": {str(n): v for n, v in self.mean.items()},
            "se": {str(n): v for n, v in self.se.items()},
            "missing": self.n_missing,
            "failures": self.failures,
            "raw": [[[None if np.isnan(v) else float(v) for v in cell] for cell in row] for row in self.raw],
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "BenchReport":
        raw = np.array(
            [[[np.nan if v is None else v for v in cell] for cell in row] for row in doc["raw"]],
            dtype=np.float64,
        )
        return cls(doc["kind"], doc["label"], tuple(doc["report_points"]), raw, list(doc["failures"]))


def _cell(args):
    kind, protocol, s, i = args
    sim = gen_setup(SimSetup(kind, protocol.length, seed=protocol.seed, stream=s))
    n_train = protocol.train_length(i)
    train = sim.series.prefix(n_train)
    actual = sim.series.values[n_train : n_train + protocol.horizon]
    try:
        best, _ = select_model(train, protocol.config)
        pred = predict(train, best, protocol.horizon).predictions
    except (MSError, FloatingPointError) as exc:
        return s, i, None, f"sequence {s} evaluation {i}: {type(exc).__name__}: {exc}"
    scores = [cmse(actual[:n], pred[:n]) for n in protocol.report_points]
    return s, i, scores, None


def run_benchmark(kind, protocol: BenchProtocol, jobs: int = 1, label: str | None = None) -> BenchReport:
    """Evaluate ``protocol.config`` on every (sequence, evaluation) cell.

    Cells are keyed, so the report is identical for any ``jobs``.
    """
    kind = SetupKind(kind)
    if label is None:
        label = "ARMA" if protocol.config.r == 0 else f"MS(r={protocol.config.r})"
    tasks = [
        (kind, protocol, s, i)
        for s in range(protocol.sequences)
        for i in range(1, protocol.evaluations + 1)
    ]
    raw = np.full((protocol.sequences, protocol.evaluations, len(protocol.report_points)), np.nan)
    failures = []
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_cell, tasks))
    else:
        results = map(_cell, tasks)
    for s, i, scores, err in results:
        if err is not None:
            log.warning(err)
            failures.append(err)
        else:
            raw[s, i - 1] = scores
    return BenchReport(kind.value, label, tuple(protocol.report_points), raw, failures)


def format_table(reports: list[BenchReport]) -> str:
    """Mean CMSE with standard errors underneath, one column per method."""
    if not reports:
        return ""
    points = reports[0].report_points
    width = 14
    lines = [f"{'':8}" + "".join(f"{r.label:>{width}}" for r in reports)]
    for n in points:
        lines.append(f"{'n=' + str(n):8}" + "".join(f"{r.mean[n]:>{width}.6g}" for r in reports))
        lines.append(f"{'':8}" + "".join(f"{'(' + format(r.se[n], '.3g') + ')':>{width}}" for r in reports))
    return "\n".join(lines)


def reports_json(reports: list[BenchReport]) -> str:
    return json.dumps([r.to_dict() for r in reports], indent=1) + "\n"


def scaling_spec() -> ModelSpec:
    """Fixed spec timed by :func:`runtime_scaling`: p=2, q=1, one set around 50."""
    return ModelSpec(2, 1, (lag_set_from_period(50, 6, 2),))


def runtime_scaling(kind, lengths, repetitions: int = 5, seed: int = 0, spec: ModelSpec | None = None):
    """Median wall time of ``fit_spec`` at each series length.

    Repetition ``k`` fits the length-``N`` prefix of simulated stream ``k``,
    so the median smooths both timer noise and the series-to-series spread
    in iteration counts. Returns ``(N, seconds)`` pairs in input order.
    """
    lengths = [int(n) for n in lengths]
    if any(b <= a for a, b in zip(lengths, lengths[1:])):
        raise DomainError("lengths must be strictly increasing")
    if repetitions < 1:
        raise DomainError("repetitions must be positive")
    spec = spec or scaling_spec()
    sims = [gen_setup(SimSetup(kind, max(lengths), seed=seed, stream=k)).series for k in range(repetitions)]
    fit_spec(sims[0].prefix(min(lengths)), spec)  # compile kernels outside the timing
    out = []
    for n in lengths:
        times = []
        for series in sims:
            x = series.prefix(n)
            t0 = time.perf_counter()
            fit_spec(x, spec)
            times.append(time.perf_counter() - t0)
        out.append((n, statistics.median(times)))
    return out
