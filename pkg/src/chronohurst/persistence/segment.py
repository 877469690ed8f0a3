"""Three-period segmentation of a CHE curve by a four-parameter logistic fit.

The curve is modelled as ``L1 + (L2 - L1) / (1 + exp(-k (t - t0)))`` with
t in decimal years.  For a fixed (t0, k) the levels enter linearly, so
they are solved in closed form and only (t0, k) is searched: first on a
fixed grid, then by a Nelder-Mead polish from the best grid point.

Period 1 ends where the fitted curve has covered 10% of the rise and
Period 2 ends at 90%.  Only fits whose two crossings fall inside the
curve's own time span are admissible.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from ..errors import InsufficientDataError, NoTransitionError
from ..series import MonthStamp
from .che import CheCurve

MIN_CURVE = 24
MIN_RISE = 0.05
# 10%..90% of a logistic spans 2*ln(9)/k
_HALF_WIDTH = math.log(9.0)
T0_GRID = 241
K_GRID = 121
# narrowest admissible transition: two months between the crossings
MIN_WIDTH_YEARS = 2.0 / 12.0


@dataclass(frozen=True)
class LogisticFit:
    lower: float
    upper: float
    midpoint: float
    rate: float

    def __call__(self, t) -> np.ndarray:
        return _logistic(np.asarray(t, dtype=float), self.lower, self.upper, self.midpoint, self.rate)

    def crossing(self, fraction: float) -> float:
        """Decimal year where the curve has covered ``fraction`` of its rise."""
        return self.midpoint + math.log(fraction / (1.0 - fraction)) / self.rate


@dataclass(frozen=True)
class ChePeriods:
    p1_end: MonthStamp
    p2_end: MonthStamp
    p1_level: float
    p3_level: float
    p2_slope: float  # Hurst units per year
    fit: LogisticFit
    sse: float

    def as_dict(self) -> dict:
        return {
            "p1_end": str(self.p1_end),
            "p2_end": str(self.p2_end),
            "p1_level": self.p1_level,
            "p3_level": self.p3_level,
            "p2_slope": self.p2_slope,
            "fit": {
                "lower": self.fit.lower,
                "upper": self.fit.upper,
                "midpoint": self.fit.midpoint,
                "rate": self.fit.rate,
            },
            "sse": self.sse,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def _logistic(t, lower, upper, t0, k):
    z = np.clip(-k * (t - t0), -500.0, 500.0)
    return lower + (upper - lower) / (1.0 + np.exp(z))


def _profile(t: np.ndarray, h: np.ndarray, t0: float, k: float) -> tuple[float, float, float]:
    """Least-squares levels for fixed (t0, k); returns (sse, lower, upper)."""
    g = 1.0 / (1.0 + np.exp(np.clip(-k * (t - t0), -500.0, 500.0)))
    A = np.column_stack([1.0 - g, g])
    coef, *_ = np.linalg.lstsq(A, h, rcond=None)
    r = h - A @ coef
    return float(r @ r), float(coef[0]), float(coef[1])


def _profile_many(t: np.ndarray, h: np.ndarray, t0: float, ks: np.ndarray):
    """Vectorised :func:`_profile` over several rates at one midpoint."""
    g = 1.0 / (1.0 + np.exp(np.clip(-np.outer(ks, t - t0), -500.0, 500.0)))
    f = 1.0 - g
    a, b, d = (f * f).sum(1), (f * g).sum(1), (g * g).sum(1)
    u, v = f @ h, g @ h
    det = a * d - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        lower = (d * u - b * v) / det
        upper = (a * v - b * u) / det
    resid = h[None, :] - lower[:, None] * f - upper[:, None] * g
    sse = (resid**2).sum(1)
    bad = ~np.isfinite(sse) | (np.abs(det) < 1e-12 * a * d)
    sse[bad] = np.inf
    return sse, lower, upper


def _admissible(t0: float, k: float, lo: float, hi: float) -> bool:
    if k <= 0:
        return False
    w = _HALF_WIDTH / k
    return t0 - w >= lo and t0 + w <= hi and 2 * w >= MIN_WIDTH_YEARS


def fit_logistic(t: np.ndarray, h: np.ndarray) -> tuple[LogisticFit, float]:
    t = np.asarray(t, dtype=float)
    h = np.asarray(h, dtype=float)
    lo, hi = float(t[0]), float(t[-1])
    span = hi - lo
    k_min = 2 * _HALF_WIDTH / span
    k_max = 2 * _HALF_WIDTH / MIN_WIDTH_YEARS
    ks = np.geomspace(k_min, k_max, K_GRID)
    best = None
    for t0 in np.linspace(lo, hi, T0_GRID):
        ok = np.array([_admissible(t0, k, lo, hi) for k in ks])
        if not ok.any():
            continue
        sse, lower, upper = _profile_many(t, h, t0, ks[ok])
        sse = np.where(upper > lower, sse, np.inf)
        i = int(np.argmin(sse))
        if np.isfinite(sse[i]) and (best is None or sse[i] < best[0]):
            best = (float(sse[i]), float(t0), float(ks[ok][i]))
    if best is None:
        raise NoTransitionError("no increasing logistic fits inside the curve span")

    def objective(p: np.ndarray) -> float:
        t0, logk = p
        k = math.exp(logk)
        if not _admissible(t0, k, lo, hi):
            return math.inf
        sse, lower, upper = _profile(t, h, t0, k)
        return sse if upper > lower else math.inf

    res = minimize(
        objective,
        x0=np.array([best[1], math.log(best[2])]),
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-12, "maxiter": 2000},
    )
    t0, logk = (res.x if res.fun <= best[0] else (best[1], math.log(best[2])))
    k = math.exp(logk)
    sse, lower, upper = _profile(t, h, t0, k)
    return LogisticFit(lower, upper, float(t0), k), sse


def _to_month(decimal_year: float) -> MonthStamp:
    k = int(round(decimal_year * 12.0))
    return MonthStamp(k // 12, k % 12 + 1)


def segment_che(c: CheCurve) -> ChePeriods:
    if len(c) < MIN_CURVE:
        raise InsufficientDataError(f"segmentation needs >= {MIN_CURVE} curve points, got {len(c)}")
    fit, sse = fit_logistic(c.decimal_years, c.h_values)
    rise = fit.upper - fit.lower
    if rise < MIN_RISE:
        raise NoTransitionError(f"fitted rise {rise:.3f} is below {MIN_RISE}")
    t10, t90 = fit.crossing(0.1), fit.crossing(0.9)
    p1, p2 = _to_month(t10), _to_month(t90)
    if p2 <= p1:
        p2 = p1.shift(1)
    return ChePeriods(
        p1_end=p1,
        p2_end=p2,
        p1_level=fit.lower,
        p3_level=fit.upper,
        p2_slope=0.8 * rise / (t90 - t10),
        fit=fit,
        sse=sse,
    )
