"""Seasonality tests on the first-differenced monthly series."""

from __future__ import annotations

import numpy as np
from scipy import stats

from ..errors import DegenerateSampleError, InsufficientDataError
from ..series import PERIOD, TimeSeries, acf
from .result import TestResult


def _differenced(s: TimeSeries) -> tuple[np.ndarray, np.ndarray]:
    """First differences plus the calendar month (0 = Jan) of each difference."""
    if len(s) < 3 * PERIOD:
        raise InsufficientDataError(f"seasonality tests need >= 3 full years, got {len(s)} months")
    y = np.diff(s.values)
    if np.ptp(y) == 0.0:
        raise DegenerateSampleError("differenced series is constant")
    month_of = (np.arange(1, len(s)) + s.start.month - 1) % PERIOD
    return y, month_of


def qs(s: TimeSeries) -> TestResult:
    """QS test: Ljung-Box-type statistic on the lag-12 and lag-24 autocorrelations.

    Negative seasonal autocorrelations carry no evidence of seasonality,
    so a non-positive lag-12 value gives QS = 0 and a negative lag-24
    value is dropped.
    """
    y, _ = _differenced(s)
    n = len(y)
    rho = acf(y, 2 * PERIOD)
    r1, r2 = rho[PERIOD], rho[2 * PERIOD]
    if r1 <= 0:
        stat = 0.0
    else:
        stat = n * (n + 2) * (r1**2 / (n - PERIOD) + max(0.0, r2) ** 2 / (n - 2 * PERIOD))
    p = float(stats.chi2.sf(stat, 2))
    return TestResult.from_p("qs", stat, p, None, rho12=float(r1), rho24=float(r2))


def friedman(s: TimeSeries) -> TestResult:
    """Friedman rank test: calendar years are blocks, months are treatments."""
    y, month_of = _differenced(s)
    first_jan = int(np.argmax(month_of == 0))
    years = (len(y) - first_jan) // PERIOD
    if years < 2:
        raise InsufficientDataError("need two complete calendar years of differences")
    block = y[first_jan : first_jan + years * PERIOD].reshape(years, PERIOD)
    stat, p = stats.friedmanchisquare(*block.T)
    return TestResult.from_p("friedman", stat, p, None, years=years)


def welch(s: TimeSeries) -> TestResult:
    """Welch's unequal-variance one-way ANOVA across calendar months."""
    y, month_of = _differenced(s)
    groups = [y[month_of == m] for m in range(PERIOD)]
    k = len(groups)
    n = np.array([len(g) for g in groups], dtype=float)
    means = np.array([g.mean() for g in groups])
    var = np.array([g.var(ddof=1) for g in groups])
    if np.any(var == 0):
        raise DegenerateSampleError("a month group has zero variance")
    w = n / var
    grand = np.sum(w * means) / np.sum(w)
    a = np.sum(w * (means - grand) ** 2) / (k - 1)
    lam = np.sum((1 - w / w.sum()) ** 2 / (n - 1))
    b = 1 + 2 * (k - 2) / (k**2 - 1) * lam
    stat = float(a / b)
    df2 = (k**2 - 1) / (3 * lam)
    p = float(stats.f.sf(stat, k - 1, df2))
    return TestResult.from_p("welch", stat, p, None, df1=k - 1, df2=float(df2))


def combined(s: TimeSeries) -> TestResult:
    """Seasonal iff at least two of QS, Friedman and Welch reject at 5%.

    The reported p-value is the second smallest component p-value, which
    is below 0.05 exactly when two or more components reject.
    """
    parts = [qs(s), friedman(s), welch(s)]
    ps = sorted(r.p_value for r in parts)
    votes = sum(r.reject_at_05 for r in parts)
    return TestResult.from_p(
        "combined",
        float(votes),
        ps[1],
        None,
        **{f"{r.name}_p": r.p_value for r in parts},
    )


_METHODS = {"qs": qs, "friedman": friedman, "welch": welch, "combined": combined}


def test_seasonality(s: TimeSeries, method: str = "combined") -> TestResult:
    try:
        fn = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown seasonality method {method!r}") from None
    return fn(s)


test_seasonality.__test__ = False  # type: ignore[attr-defined]
