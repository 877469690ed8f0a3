"""Monthly time series container, CSV dialect, and descriptive tools.

Everything here works on a :class:`TimeSeries`: a start month plus a
gap-free sequence of monthly observations.  Values are stored as a
read-only float array so that series can be shared between threads.
"""

from __future__ import annotations

import hashlib
import io
import math
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Literal, Sequence, TextIO

import numpy as np

from .errors import (
    CalendarGapError,
    DegenerateSampleError,
    DuplicateMonthError,
    EmptyBodyError,
    HeaderError,
    InsufficientDataError,
    MalformedDateError,
    NonIntegerValueError,
)

PERIOD = 12
FIXTURES = ("patents", "trademarks")
CSV_HEADER = "date,value"

_DATE_RE = re.compile(r"^(\d{4})-(\d{2})$")
_INT_RE = re.compile(r"^[+-]?\d+$")


@dataclass(frozen=True, order=True)
class MonthStamp:
    year: int
    month: int

    def __post_init__(self) -> None:
        if not 1 <= self.month <= 12:
            raise ValueError(f"month must be in 1..12, got {self.month}")

    @classmethod
    def parse(cls, text: str) -> "MonthStamp":
        m = _DATE_RE.match(text.strip())
        if m is None:
            raise ValueError(f"expected YYYY-MM, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2)))

    def shift(self, months: int) -> "MonthStamp":
        k = self.year * 12 + (self.month - 1) + months
        return MonthStamp(k // 12, k % 12 + 1)

    def months_since(self, other: "MonthStamp") -> int:
        return (self.year - other.year) * 12 + (self.month - other.month)

    @property
    def decimal_year(self) -> float:
        return self.year + (self.month - 1) / 12.0

    def __str__(self) -> str:
        return f"{self.year:04d}-{self.month:02d}"


def _frozen_array(values: Iterable[float]) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("values must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TimeSeries:
    start: MonthStamp
    values: np.ndarray
    period: int = PERIOD

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", _frozen_array(self.values))
        if self.period != PERIOD:
            raise ValueError("only monthly series (period 12) are supported")

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TimeSeries):
            return NotImplemented
        return (
            self.start == other.start
            and self.period == other.period
            and np.array_equal(self.values, other.values)
        )

    def __hash__(self) -> int:
        return hash((self.start, self.values.tobytes()))

    @property
    def end(self) -> MonthStamp:
        return self.start.shift(len(self) - 1)

    def stamp(self, index: int) -> MonthStamp:
        if index < 0:
            index += len(self)
        return self.start.shift(index)

    def index_of(self, month: MonthStamp) -> int:
        i = month.months_since(self.start)
        if not 0 <= i < len(self):
            raise IndexError(f"{month} is outside {self.start}..{self.end}")
        return i

    def months(self) -> list[MonthStamp]:
        return [self.start.shift(i) for i in range(len(self))]

    def replace_values(self, values: Sequence[float], start: MonthStamp | None = None) -> "TimeSeries":
        return TimeSeries(start or self.start, values, self.period)

    def prefix(self, length: int) -> "TimeSeries":
        return TimeSeries(self.start, self.values[:length], self.period)


# --------------------------------------------------------------------------
# CSV dialect


def parse_csv(text: str | TextIO, *, allow_fractional: bool = False) -> TimeSeries:
    """Parse the ``date,value`` dialect into a :class:`TimeSeries`.

    Rows must be consecutive months.  Values must be integers unless
    ``allow_fractional`` is set (needed to read back repaired series,
    whose neighbour averages can end in ``.5``).
    """
    if not isinstance(text, str):
        text = text.read()
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise HeaderError(f"header must be exactly {CSV_HEADER!r}", line=1)

    start: MonthStamp | None = None
    prev: MonthStamp | None = None
    values: list[float] = []
    for lineno, raw in enumerate(lines[1:], start=2):
        row = raw.strip()
        if not row:
            continue
        parts = row.split(",")
        if len(parts) != 2:
            raise MalformedDateError(f"expected 2 fields, got {len(parts)}", line=lineno)
        date_txt, value_txt = parts[0].strip(), parts[1].strip()
        m = _DATE_RE.match(date_txt)
        if m is None or not 1 <= int(m.group(2)) <= 12:
            raise MalformedDateError(f"malformed date {date_txt!r}", line=lineno)
        stamp = MonthStamp(int(m.group(1)), int(m.group(2)))

        if _INT_RE.match(value_txt):
            value = float(int(value_txt))
        elif allow_fractional:
            try:
                value = float(value_txt)
            except ValueError:
                raise NonIntegerValueError(f"non-numeric value {value_txt!r}", line=lineno) from None
            if not math.isfinite(value):
                raise NonIntegerValueError(f"non-finite value {value_txt!r}", line=lineno)
        else:
            raise NonIntegerValueError(f"non-integer value {value_txt!r}", line=lineno)

        if prev is None:
            start = stamp
        else:
            step = stamp.months_since(prev)
            if step == 0 or step < 0:
                raise DuplicateMonthError(
                    f"{stamp} repeats or precedes previous month {prev}", line=lineno
                )
            if step > 1:
                raise CalendarGapError(f"gap between {prev} and {stamp}", line=lineno)
        prev = stamp
        values.append(value)

    if start is None:
        raise EmptyBodyError("no data rows", line=len(lines) + 1)
    return TimeSeries(start, values)


def _format_value(v: float) -> str:
    if float(v).is_integer():
        return str(int(v))
    return repr(float(v))


def to_csv(s: TimeSeries) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for stamp, v in zip(s.months(), s.values):
        buf.write(f"{stamp},{_format_value(v)}\n")
    return buf.getvalue()


def series_digest(s: TimeSeries) -> str:
    """SHA-256 of the canonical CSV serialisation."""
    return hashlib.sha256(to_csv(s).encode("utf-8")).hexdigest()


def fixture_text(name: str) -> str:
    if name not in FIXTURES:
        raise ValueError(f"unknown fixture {name!r}; choose from {FIXTURES}")
    return resources.files("chronohurst.data").joinpath(f"{name}.csv").read_text("utf-8")


def load_fixture(name: str) -> TimeSeries:
    return parse_csv(fixture_text(name))


def fixture_checksums() -> dict[str, str]:
    text = resources.files("chronohurst.data").joinpath("SHA256SUMS").read_text("utf-8")
    out = {}
    for line in text.splitlines():
        if line.strip():
            digest, fname = line.split()
            out[fname.removesuffix(".csv")] = digest
    return out


# --------------------------------------------------------------------------
# Descriptive statistics


@dataclass(frozen=True)
class DescriptiveStats:
    min: float
    q1: float
    median: float
    mean: float
    q3: float
    max: float
    sd: float
    # None marks "undefined" (zero variance)
    skewness: float | None
    kurtosis: float | None

    def as_dict(self) -> dict:
        return dict(self.__dict__)


def descriptive_stats(s: TimeSeries | Sequence[float]) -> DescriptiveStats:
    """Summary statistics in the conventions of R's ``summary``/``moments``.

    Quartiles use linear interpolation at h = (n-1)p + 1, the standard
    deviation uses the n-1 denominator, and skewness/kurtosis use
    population central moments (kurtosis is *not* excess kurtosis).
    """
    x = _as_array(s)
    n = len(x)
    if n < 2:
        raise InsufficientDataError(f"descriptive statistics need >= 2 points, got {n}")
    q1, med, q3 = np.quantile(x, [0.25, 0.5, 0.75], method="linear")
    mean = float(x.mean())
    d = x - mean
    m2 = float(np.mean(d**2))
    if m2 == 0.0:
        skew = kurt = None
    else:
        skew = float(np.mean(d**3) / m2**1.5)
        kurt = float(np.mean(d**4) / m2**2)
    return DescriptiveStats(
        min=float(x.min()),
        q1=float(q1),
        median=float(med),
        mean=mean,
        q3=float(q3),
        max=float(x.max()),
        sd=float(x.std(ddof=1)),
        skewness=skew,
        kurtosis=kurt,
    )


def difference(s: TimeSeries, order: int = 1) -> TimeSeries:
    if order < 1:
        raise ValueError("order must be >= 1")
    if len(s) <= order:
        raise InsufficientDataError(f"cannot difference {len(s)} points {order} time(s)")
    return TimeSeries(s.start.shift(order), np.diff(s.values, n=order))


# --------------------------------------------------------------------------
# Correlograms


def _as_array(s: TimeSeries | Sequence[float]) -> np.ndarray:
    if isinstance(s, TimeSeries):
        return s.values
    return np.asarray(s, dtype=float)


def acf(x: Sequence[float], max_lag: int) -> np.ndarray:
    """Biased sample autocorrelation (covariances divided by N), lags 0..max_lag."""
    x = np.asarray(x, dtype=float)
    d = x - x.mean()
    c0 = float(d @ d)
    if c0 == 0.0:
        raise DegenerateSampleError("autocorrelation of a constant series is undefined")
    n = len(d)
    out = np.empty(max_lag + 1)
    out[0] = 1.0
    for k in range(1, max_lag + 1):
        out[k] = float(d[k:] @ d[: n - k]) / c0
    return out


def durbin_levinson(rho: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Run the Durbin-Levinson recursion on autocorrelations ``rho[0..p]``.

    Returns ``(pacf, sigma2)`` where ``pacf[k-1]`` is the lag-k partial
    autocorrelation and ``sigma2[k]`` is the relative one-step prediction
    error variance of the order-k autoregression (``sigma2[0] == 1``).
    """
    p = len(rho) - 1
    pacf = np.zeros(p)
    sigma2 = np.ones(p + 1)
    phi = np.zeros(0)
    for k in range(1, p + 1):
        num = rho[k] - (phi @ rho[k - 1 : 0 : -1] if k > 1 else 0.0)
        a = num / sigma2[k - 1]
        phi = np.append(phi - a * phi[::-1], a)
        pacf[k - 1] = a
        sigma2[k] = sigma2[k - 1] * (1.0 - a * a)
    return pacf, sigma2


@dataclass(frozen=True)
class Correlogram:
    kind: Literal["acf", "pacf"]
    lags: np.ndarray
    coefficients: np.ndarray
    ci_bound: float

    def inside_band(self) -> np.ndarray:
        return np.abs(self.coefficients) <= self.ci_bound


def correlogram(s: TimeSeries | Sequence[float], kind: str = "acf", max_lag: int = 24) -> Correlogram:
    x = _as_array(s)
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    if len(x) < max_lag + 2:
        raise InsufficientDataError(f"need >= {max_lag + 2} points for {max_lag} lags")
    rho = acf(x, max_lag)
    bound = 1.96 / math.sqrt(len(x))
    if kind == "acf":
        return Correlogram("acf", np.arange(max_lag + 1), rho, bound)
    if kind == "pacf":
        pacf, _ = durbin_levinson(rho)
        return Correlogram("pacf", np.arange(1, max_lag + 1), np.clip(pacf, -1.0, 1.0), bound)
    raise ValueError(f"kind must be 'acf' or 'pacf', got {kind!r}")


# --------------------------------------------------------------------------
# Classical additive decomposition


@dataclass(frozen=True)
class Decomposition:
    """Trend/seasonal/remainder split; NaN marks the undefined trend edges."""

    trend: np.ndarray
    seasonal: np.ndarray
    remainder: np.ndarray
    # indexed by calendar month: seasonal_means[0] is January
    seasonal_means: np.ndarray = field(repr=False)

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.trend)


def centered_moving_average(x: np.ndarray, period: int = PERIOD) -> np.ndarray:
    """Centred 2x12 moving average; the first and last period/2 points are NaN."""
    n = len(x)
    half = period // 2
    # divide after summing so a constant input comes back exactly
    w = np.r_[0.5, np.ones(period - 1), 0.5]
    trend = np.full(n, np.nan)
    trend[half : n - half] = np.convolve(x, w, mode="valid") / period
    return trend


def decompose_additive(s: TimeSeries) -> Decomposition:
    x = s.values
    n = len(x)
    if n < 2 * PERIOD:
        raise InsufficientDataError(f"decomposition needs >= {2 * PERIOD} points, got {n}")
    trend = centered_moving_average(x)
    detrended = x - trend
    # calendar month (0 = January) of each observation
    month_of = (np.arange(n) + s.start.month - 1) % PERIOD
    means = np.array([np.nanmean(detrended[month_of == m]) for m in range(PERIOD)])
    means -= means.mean()
    seasonal = means[month_of]
    remainder = x - trend - seasonal
    for arr in (trend, seasonal, remainder, means):
        arr.setflags(write=False)
    return Decomposition(trend, seasonal, remainder, means)
