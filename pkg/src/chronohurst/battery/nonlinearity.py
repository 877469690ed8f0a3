"""Tests of linearity in mean (Teraesvirta, Keenan, Tsay) and McLeod-Li."""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from ..errors import DegenerateSampleError, InsufficientDataError
from ..series import acf, durbin_levinson
from .result import TestResult

MIN_LENGTH = 50
MAX_AR_ORDER = 12
MCLEOD_LI_LAGS = 24


def _prepare(x) -> np.ndarray:
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if len(x) < MIN_LENGTH:
        raise InsufficientDataError(f"nonlinearity tests need >= {MIN_LENGTH} points, got {len(x)}")
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("nonlinearity test on a constant series")
    return x


def _lagmatrix(x: np.ndarray, order: int) -> tuple[np.ndarray, np.ndarray]:
    """Response x[order:] and the matrix of lags 1..order."""
    n = len(x)
    lags = np.column_stack([x[order - j : n - j] for j in range(1, order + 1)])
    return x[order:], lags


def _ols_resid(y: np.ndarray, X: np.ndarray) -> np.ndarray:
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    return y - X @ beta


def _with_const(X: np.ndarray) -> np.ndarray:
    return np.column_stack([np.ones(len(X)), X])


def select_ar_order(x, max_order: int = MAX_AR_ORDER) -> int:
    """AR order minimising the Yule-Walker AIC, n*log(sigma2_k) + 2k, over 1..max_order."""
    x = np.asarray(x, dtype=float)
    max_order = min(max_order, len(x) // 4)
    _, sigma2 = durbin_levinson(acf(x, max_order))
    n = len(x)
    aic = n * np.log(np.maximum(sigma2[1:], 1e-300)) + 2 * np.arange(1, max_order + 1)
    return int(np.argmin(aic)) + 1


def teraesvirta(x, lag: int = 1) -> TestResult:
    """Teraesvirta's neural-network LM test, Taylor (Volterra) form, chi-square version."""
    x = _prepare(x)
    z = (x - x.mean()) / x.std(ddof=1)
    y, lags = _lagmatrix(z, lag)
    base = _with_const(lags)
    u = _ols_resid(y, base)
    ssr0 = float(u @ u)
    extra = []
    for i in range(lag):
        for j in range(i, lag):
            extra.append(lags[:, i] * lags[:, j])
    for i in range(lag):
        for j in range(i, lag):
            for k in range(j, lag):
                extra.append(lags[:, i] * lags[:, j] * lags[:, k])
    v = _ols_resid(u, np.column_stack([base] + [e[:, None] for e in extra]))
    ssr1 = float(v @ v)
    df = len(extra)
    stat = len(y) * math.log(ssr0 / ssr1)
    return TestResult.from_p("teraesvirta", stat, stats.chi2.sf(stat, df), None, lag=lag, df=df)


def keenan(x, order: int | None = None) -> TestResult:
    """Keenan's one-degree-of-freedom test for a quadratic departure from AR(order)."""
    x = _prepare(x)
    m = select_ar_order(x) if order is None else order
    y, lags = _lagmatrix(x, m)
    X = _with_const(lags)
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    fitted = X @ beta
    res1 = y - fitted
    res2 = _ols_resid(fitted**2, X)
    ss2 = float(res2 @ res2)
    eta = float(res1 @ res2) / ss2
    df2 = len(x) - 2 * m - 2
    stat = eta**2 * ss2 * df2 / (float(res1 @ res1) - eta**2 * ss2)
    return TestResult.from_p("keenan", stat, stats.f.sf(stat, 1, df2), None, order=m)


def tsay(x, order: int | None = None) -> TestResult:
    """Tsay's F test using all second-order cross products of the lags."""
    x = _prepare(x)
    m = select_ar_order(x) if order is None else order
    y, lags = _lagmatrix(x, m)
    X = _with_const(lags)
    res1 = _ols_resid(y, X)
    cross = np.column_stack([lags[:, i] * lags[:, j] for i in range(m) for j in range(i, m)])
    k = cross.shape[1]
    beta, *_ = np.linalg.lstsq(X, cross, rcond=None)
    res2 = cross - X @ beta
    res3 = _ols_resid(res1, res2)
    ss1, ss3 = float(res1 @ res1), float(res3 @ res3)
    df2 = len(y) - m - k - 1
    stat = ((ss1 - ss3) / k) / (ss3 / df2)
    return TestResult.from_p("tsay", stat, stats.f.sf(stat, k, df2), None, order=m, df1=k, df2=df2)


def mcleod_li(x, max_lag: int = MCLEOD_LI_LAGS) -> TestResult:
    """Ljung-Box on squared demeaned observations; reports the largest p over lags 1..max_lag."""
    x = _prepare(x)
    sq = (x - x.mean()) ** 2
    if np.ptp(sq) == 0.0:
        raise DegenerateSampleError("squared series is constant")
    n = len(sq)
    rho = acf(sq, max_lag)[1:]
    q = n * (n + 2) * np.cumsum(rho**2 / (n - np.arange(1, max_lag + 1)))
    pvals = stats.chi2.sf(q, np.arange(1, max_lag + 1))
    return TestResult.from_p(
        "mcleod_li", float(q[-1]), float(pvals.max()), None, max_lag=max_lag
    )


_METHODS = {"teraesvirta": teraesvirta, "keenan": keenan, "mcleod_li": mcleod_li, "tsay": tsay}
METHODS = tuple(_METHODS)


def test_nonlinearity(s, method: str = "teraesvirta") -> TestResult:
    try:
        fn = _METHODS[method]
    except KeyError:
        raise ValueError(f"unknown nonlinearity method {method!r}") from None
    return fn(s)


test_nonlinearity.__test__ = False  # type: ignore[attr-defined]
