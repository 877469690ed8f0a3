"""Composite normality tests (mean and sd estimated from the sample).

P-values follow the piecewise approximations of Stephens / D'Agostino
as used by the R ``nortest`` package.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import stats

from ..errors import DegenerateSampleError, InsufficientDataError
from .result import TestResult

P_FLOOR = 2.2e-16


def _standardized(x: np.ndarray) -> np.ndarray:
    if len(x) < 8:
        raise InsufficientDataError(f"normality tests need >= 8 points, got {len(x)}")
    sd = x.std(ddof=1)
    if sd == 0.0:
        raise DegenerateSampleError("normality test on a constant sample")
    return np.sort((x - x.mean()) / sd)


def _floor(p: float) -> tuple[float, str | None]:
    if p < P_FLOOR:
        return P_FLOOR, "lower"
    return p, None


def anderson_darling(x) -> TestResult:
    x = np.asarray(x, dtype=float)
    z = _standardized(x)
    n = len(z)
    i = np.arange(1, n + 1)
    h = (2 * i - 1) * (stats.norm.logcdf(z) + stats.norm.logsf(z[::-1]))
    a = float(-n - h.mean())
    aa = (1 + 0.75 / n + 2.25 / n**2) * a
    if aa < 0.2:
        p = 1 - math.exp(-13.436 + 101.14 * aa - 223.73 * aa**2)
    elif aa < 0.34:
        p = 1 - math.exp(-8.318 + 42.796 * aa - 59.938 * aa**2)
    elif aa < 0.6:
        p = math.exp(0.9177 - 4.279 * aa - 1.38 * aa**2)
    elif aa < 10:
        p = math.exp(1.2937 - 5.709 * aa + 0.0186 * aa**2)
    else:
        p = 3.7e-24
    p, clamp = _floor(p)
    return TestResult.from_p("anderson_darling", a, p, clamp, adjusted=aa)


def cramer_von_mises(x) -> TestResult:
    x = np.asarray(x, dtype=float)
    z = _standardized(x)
    n = len(z)
    i = np.arange(1, n + 1)
    w = float(1 / (12 * n) + np.sum((stats.norm.cdf(z) - (2 * i - 1) / (2 * n)) ** 2))
    ww = (1 + 0.5 / n) * w
    clamp = None
    if ww < 0.0275:
        p = 1 - math.exp(-13.953 + 775.5 * ww - 12542.61 * ww**2)
    elif ww < 0.051:
        p = 1 - math.exp(-5.903 + 179.546 * ww - 1515.29 * ww**2)
    elif ww < 0.092:
        p = math.exp(0.886 - 31.62 * ww + 10.897 * ww**2)
    elif ww < 1.1:
        p = math.exp(1.111 - 34.242 * ww + 12.832 * ww**2)
    else:
        # the approximation is not valid this far out; report its bound
        p, clamp = 7.37e-10, "lower"
    if p < P_FLOOR:
        p, clamp = P_FLOOR, "lower"
    return TestResult.from_p("cramer_von_mises", w, p, clamp, adjusted=ww)


def test_normality(s, method: str = "anderson_darling") -> TestResult:
    x = getattr(s, "values", s)
    if method == "anderson_darling":
        return anderson_darling(x)
    if method == "cramer_von_mises":
        return cramer_von_mises(x)
    raise ValueError(f"unknown normality method {method!r}")


test_normality.__test__ = False  # type: ignore[attr-defined]
