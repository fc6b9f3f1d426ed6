"""Time-series container, mean-centering, the CMSE metric and CSV ingestion.

Indexing convention
-------------------
The maths is written with 1-based time, ``t = 1..N``. Arrays are stored
0-based, so observation ``X_t`` lives at ``values[t - 1]``. Every module
follows this mapping; lags are always positive integers ``k`` meaning
``X_{t-k}``.
"""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

__all__ = [
    "MSError",
    "DomainError",
    "InsufficientDataError",
    "DetectionError",
    "CsvParseError",
    "TimeSeries",
    "ForecastResult",
    "center",
    "cmse",
    "read_csv",
    "write_csv",
]


class MSError(Exception):
    """Base class for every error raised by this package."""


class DomainError(MSError, ValueError):
    """Argument outside the domain of an operation."""


class InsufficientDataError(DomainError):
    """Series too short for the lags a model references."""


class DetectionError(MSError):
    """Spectral detection produced no usable seasonal candidate."""


class CsvParseError(DomainError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


def _frozen_array(values) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True).reshape(-1)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class TimeSeries:
    """Ordered, unit-spaced, finite real observations."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.size == 0:
            raise DomainError("time series must contain at least one observation")
        if not np.all(np.isfinite(arr)):
            bad = int(np.flatnonzero(~np.isfinite(arr))[0]) + 1
            raise DomainError(f"non-finite value at t={bad}")
        object.__setattr__(self, "values", arr)

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def prefix(self, length: int) -> "TimeSeries":
        """First ``length`` observations, X_1..X_length."""
        if not 1 <= length <= self.n:
            raise DomainError(f"prefix length {length} outside 1..{self.n}")
        return TimeSeries(self.values[:length])


@dataclass(frozen=True)
class ForecastResult:
    origin: int
    horizon: int
    predictions: np.ndarray = field(repr=False)

    def __post_init__(self):
        preds = _frozen_array(self.predictions)
        if self.horizon < 1 or preds.size != self.horizon:
            raise DomainError(
                f"expected {self.horizon} predictions, got {preds.size}"
            )
        if not np.all(np.isfinite(preds)):
            raise DomainError("forecast diverged to a non-finite value")
        object.__setattr__(self, "predictions", preds)


def _as_series(series: Union[TimeSeries, Sequence[float], np.ndarray]) -> TimeSeries:
    return series if isinstance(series, TimeSeries) else TimeSeries(series)


def center(series) -> tuple[TimeSeries, float]:
    """Subtract the sample mean; return the centered series and the mean."""
    series = _as_series(series)
    mean = float(np.mean(series.values))
    return TimeSeries(series.values - mean), mean


def cmse(actual, predicted) -> float:
    """Cumulative mean squared error ``(1/n) sum_j (actual_j - predicted_j)^2``."""
    a = np.asarray(actual, dtype=np.float64).reshape(-1)
    p = np.asarray(predicted, dtype=np.float64).reshape(-1)
    if a.size == 0 or a.size != p.size:
        raise DomainError(
            f"cmse needs equal positive lengths, got {a.size} and {p.size}"
        )
    d = a - p
    return float(np.dot(d, d) / d.size)


def _parse_rows(stream) -> np.ndarray:
    out = []
    reader = csv.reader(stream)
    for row in reader:
        lineno = reader.line_num
        cells = [c.strip() for c in row]
        if not any(cells):
            continue
        if len(cells) != 1:
            raise CsvParseError(lineno, f"expected one column, got {len(cells)}")
        text = cells[0]
        try:
            value = float(text)
        except ValueError:
            if lineno == 1 and not out:
                continue  # header
            raise CsvParseError(lineno, f"cannot parse {text!r} as a number") from None
        if not np.isfinite(value):
            raise CsvParseError(lineno, f"non-finite value {text!r}")
        out.append(value)
    if not out:
        raise CsvParseError(1, "no numeric data")
    return np.array(out)


def read_csv(source) -> TimeSeries:
    """Read a single-column CSV with an optional one-line header.

    ``source`` may be a path or a text stream. Missing values are rejected,
    not imputed.
    """
    if isinstance(source, (str, os.PathLike)):
        with open(source, "r", newline="") as fh:
            return TimeSeries(_parse_rows(fh))
    return TimeSeries(_parse_rows(source))


def write_csv(target, columns: dict[str, Sequence[float]]) -> None:
    """Write equal-length columns with a header row, LF line endings."""
    names = list(columns)
    data = [np.asarray(columns[k]).reshape(-1) for k in names]
    if len({d.size for d in data}) > 1:
        raise DomainError("columns must have equal length")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(names)
    writer.writerows([_fmt(v) for v in row] for row in zip(*data))
    if isinstance(target, (str, os.PathLike)):
        with open(target, "w", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        target.write(buf.getvalue())


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return repr(float(v))
