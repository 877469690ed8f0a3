"""KPSS and augmented Dickey-Fuller tests, and the order of integration.

Two KPSS forms are available.  ``form="autoregressive"`` (the default for
:func:`test_stationarity`) applies the KPSS statistic to the residuals of
a regression of x[t] on x[t-1] plus the deterministic terms; this is what
R's ``aTSA::kpss.test`` reports for its three deterministic types.
``form="classic"`` is the textbook statistic on residuals from the
deterministic terms alone, used by :func:`integration_order` the way
``forecast::ndiffs`` uses it.
"""

from __future__ import annotations

import math
from typing import Literal

import numpy as np
from statsmodels.tsa.adfvalues import mackinnonp

from ..errors import DegenerateSampleError, InsufficientDataError
from ..series import TimeSeries
from .result import TestResult

Deterministic = Literal["none", "drift", "trend"]

KPSS_LAG = 5
MIN_LENGTH = 30

_P_LEVELS = np.array([0.10, 0.05, 0.025, 0.01])
# upper-tail critical values of the KPSS limit distributions
KPSS_CRITICAL = {
    "none": np.array([1.196, 1.656, 2.135, 2.787]),  # integral of W^2
    "drift": np.array([0.347, 0.463, 0.574, 0.739]),
    "trend": np.array([0.119, 0.146, 0.176, 0.216]),
}


def _check(x: np.ndarray) -> None:
    if len(x) < MIN_LENGTH:
        raise InsufficientDataError(f"stationarity tests need >= {MIN_LENGTH} points, got {len(x)}")
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("stationarity test on a constant series")


def _deterministic_columns(n: int, kind: Deterministic, t0: int = 1) -> np.ndarray:
    cols = []
    if kind in ("drift", "trend"):
        cols.append(np.ones(n))
    if kind == "trend":
        cols.append(np.arange(t0, t0 + n, dtype=float))
    return np.column_stack(cols) if cols else np.empty((n, 0))


def _residuals(y: np.ndarray, X: np.ndarray) -> np.ndarray:
    if X.shape[1] == 0:
        return y.copy()
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return y - X @ beta


def bartlett_lrv(e: np.ndarray, lag: int) -> float:
    n = len(e)
    s2 = float(e @ e) / n
    for j in range(1, lag + 1):
        s2 += 2.0 * (1.0 - j / (lag + 1.0)) * float(e[j:] @ e[:-j]) / n
    return s2


def kpss_p_value(stat: float, kind: Deterministic) -> tuple[float, str | None]:
    """Interpolate in the critical-value table; clamp to [0.01, 0.10]."""
    crit = KPSS_CRITICAL[kind]
    if stat <= crit[0]:
        return 0.10, "upper"
    if stat >= crit[-1]:
        return 0.01, "lower"
    return float(np.interp(stat, crit, _P_LEVELS)), None


def kpss(
    x,
    deterministic: Deterministic = "drift",
    lag: int = KPSS_LAG,
    form: Literal["autoregressive", "classic"] = "autoregressive",
) -> TestResult:
    x = np.asarray(x, dtype=float)
    _check(x)
    if form == "autoregressive":
        y = x[1:]
        X = np.column_stack([_deterministic_columns(len(y), deterministic, t0=2), x[:-1]])
    elif form == "classic":
        y = x
        X = _deterministic_columns(len(y), deterministic)
    else:
        raise ValueError(f"unknown KPSS form {form!r}")
    e = _residuals(y, X)
    n = len(e)
    s2 = bartlett_lrv(e, lag)
    if s2 <= 0.0:
        raise DegenerateSampleError("non-positive long-run variance")
    partial = np.cumsum(e)
    stat = float(partial @ partial) / (n * n * s2)
    p, clamp = kpss_p_value(stat, deterministic)
    return TestResult.from_p("kpss", stat, p, clamp, lag=lag, deterministic=deterministic, form=form)


def adf_lag(n: int) -> int:
    return int(math.floor((n - 1) ** (1.0 / 3.0)))


def adf(x, deterministic: Deterministic = "drift", lags: int | None = None) -> TestResult:
    """Augmented Dickey-Fuller t-test with a fixed lag order.

    P-values come from MacKinnon's response-surface approximation.
    """
    x = np.asarray(x, dtype=float)
    _check(x)
    p = adf_lag(len(x)) if lags is None else lags
    dx = np.diff(x)
    y = dx[p:]
    m = len(y)
    cols = [x[p:-1]]
    for j in range(1, p + 1):
        cols.append(dx[p - j : len(dx) - j])
    X = np.column_stack([_deterministic_columns(m, deterministic)] + [c[:, None] for c in cols])
    k = X.shape[1]
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    sigma2 = float(resid @ resid) / (m - k)
    cov = sigma2 * np.linalg.inv(X.T @ X)
    gamma_pos = 0 if deterministic == "none" else (1 if deterministic == "drift" else 2)
    se = math.sqrt(cov[gamma_pos, gamma_pos])
    if se == 0.0:
        raise DegenerateSampleError("ADF regression is singular")
    stat = float(beta[gamma_pos] / se)
    regression = {"none": "n", "drift": "c", "trend": "ct"}[deterministic]
    pval = float(mackinnonp(stat, regression=regression, N=1))
    return TestResult.from_p("adf", stat, pval, None, lags=p, deterministic=deterministic)


def test_stationarity(s, method: str = "kpss", deterministic: Deterministic = "drift", **kw) -> TestResult:
    x = getattr(s, "values", s)
    if method == "kpss":
        return kpss(x, deterministic, **kw)
    if method == "adf":
        return adf(x, deterministic, **kw)
    raise ValueError(f"unknown stationarity method {method!r}")


test_stationarity.__test__ = False  # type: ignore[attr-defined]


def looks_stationary(x, method: str) -> bool:
    if method == "kpss":
        return not kpss(x, "drift", form="classic").reject_at_05
    if method == "adf":
        return adf(x, "drift").reject_at_05
    raise ValueError(f"unknown stationarity method {method!r}")


def integration_order(s: TimeSeries | np.ndarray, method: str = "kpss", max_order: int = 2) -> int:
    """Smallest number of differences (capped at ``max_order``) that passes the test at 5%."""
    x = np.asarray(getattr(s, "values", s), dtype=float)
    _check(x)
    for k in range(max_order):
        if looks_stationary(x, method):
            return k
        x = np.diff(x)
        if len(x) < MIN_LENGTH or np.ptp(x) == 0.0:
            return k + 1
    return max_order
