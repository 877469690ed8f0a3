"""Hurst exponent estimators: classical rescaled range and DFA-1.

Both estimators evaluate a per-block statistic on a geometric grid of
block sizes and take the least-squares slope of its logarithm against
log(block size).  Blocks are laid out backwards from the most recent
observation, so the leftover ``N mod size`` points are dropped from the
start of the series.  That way an estimate for a prefix always uses the
prefix's final month, which matters when estimates over expanding
prefixes are compared month by month.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from ..errors import DegenerateSampleError, InsufficientDataError

MIN_LENGTH = 16
MIN_BLOCK = 8
MIN_SIZES = 4
GRID_RATIO = 2 ** 0.25


@dataclass(frozen=True)
class HurstEstimate:
    h: float
    method: Literal["rs", "dfa"]
    points: tuple[tuple[int, float], ...]
    slope_stderr: float
    r_squared: float

    def as_dict(self) -> dict:
        return {
            "h": self.h,
            "method": self.method,
            "points": [[t, v] for t, v in self.points],
            "slope_stderr": self.slope_stderr,
            "r_squared": self.r_squared,
        }


def block_sizes(n: int) -> np.ndarray:
    """Geometric grid of block sizes from 8 up to floor(n/2), ratio about 2**0.25.

    Both ends are always included.  Short inputs (n < 24) cannot fit four
    distinct sizes starting at 8, so the lower end drops just far enough
    to leave four.
    """
    hi = n // 2
    lo = min(MIN_BLOCK, hi - (MIN_SIZES - 1))
    if lo < 2:
        raise InsufficientDataError(f"too short for a block-size grid: {n}")
    count = max(MIN_SIZES, int(math.floor(math.log(hi / lo) / math.log(GRID_RATIO))) + 1)
    sizes = np.unique(np.round(np.geomspace(lo, hi, count)).astype(int))
    if len(sizes) < MIN_SIZES:
        sizes = np.arange(hi - MIN_SIZES + 1, hi + 1)
    return sizes


def _blocks(x: np.ndarray, size: int) -> np.ndarray:
    k = len(x) // size
    return x[len(x) - k * size :].reshape(k, size)


def _check(x: np.ndarray) -> np.ndarray:
    x = np.asarray(getattr(x, "values", x), dtype=float)
    if x.ndim != 1:
        raise ValueError("expected a one-dimensional series")
    if len(x) < MIN_LENGTH:
        raise InsufficientDataError(f"Hurst estimation needs >= {MIN_LENGTH} points, got {len(x)}")
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("Hurst exponent of a constant series is undefined")
    return x


def _loglog_fit(sizes: Sequence[int], stat: Sequence[float]) -> tuple[float, float, float]:
    lx = np.log(np.asarray(sizes, dtype=float))
    ly = np.log(np.asarray(stat, dtype=float))
    X = np.column_stack([np.ones_like(lx), lx])
    beta, *_ = np.linalg.lstsq(X, ly, rcond=None)
    resid = ly - X @ beta
    ss_res = float(resid @ resid)
    ss_tot = float(((ly - ly.mean()) ** 2).sum())
    dof = len(lx) - 2
    sxx = float(((lx - lx.mean()) ** 2).sum())
    stderr = math.sqrt(ss_res / dof / sxx) if dof > 0 else float("nan")
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    return float(beta[1]), stderr, r2


def rescaled_range(block: np.ndarray) -> np.ndarray:
    """R/S for each row: range of mean-adjusted partial sums over the population sd.

    Rows with zero sd come back as NaN.
    """
    dev = block - block.mean(axis=1, keepdims=True)
    z = np.cumsum(dev, axis=1)
    r = z.max(axis=1) - z.min(axis=1)
    s = block.std(axis=1)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(s > 0, r / np.where(s > 0, s, 1.0), np.nan)


def hurst_rs(x) -> HurstEstimate:
    x = _check(x)
    points = []
    for size in block_sizes(len(x)):
        rs = rescaled_range(_blocks(x, int(size)))
        rs = rs[~np.isnan(rs)]
        if len(rs) and rs.mean() > 0:
            points.append((int(size), float(rs.mean())))
    if len(points) < MIN_SIZES:
        raise DegenerateSampleError("too few block sizes with non-zero spread")
    sizes, stat = zip(*points)
    h, se, r2 = _loglog_fit(sizes, stat)
    return HurstEstimate(h, "rs", tuple(points), se, r2)


def dfa_fluctuation(profile_blocks: np.ndarray) -> float:
    """RMS residual of a per-block straight-line fit, pooled over blocks."""
    size = profile_blocks.shape[1]
    t = np.arange(size, dtype=float)
    tc = t - t.mean()
    ybar = profile_blocks.mean(axis=1, keepdims=True)
    slope = ((profile_blocks - ybar) @ tc) / float(tc @ tc)
    resid = profile_blocks - ybar - slope[:, None] * tc
    return float(np.sqrt(np.mean(resid**2)))


def hurst_dfa(x) -> HurstEstimate:
    x = _check(x)
    profile = np.cumsum(x - x.mean())
    points = []
    for size in block_sizes(len(x)):
        f = dfa_fluctuation(_blocks(profile, int(size)))
        if f > 0:
            points.append((int(size), f))
    if len(points) < MIN_SIZES:
        raise DegenerateSampleError("too few block sizes with non-zero fluctuation")
    sizes, stat = zip(*points)
    h, se, r2 = _loglog_fit(sizes, stat)
    return HurstEstimate(h, "dfa", tuple(points), se, r2)


ESTIMATORS = {"rs": hurst_rs, "dfa": hurst_dfa}


def estimate_hurst(x, method: str = "rs") -> HurstEstimate:
    try:
        return ESTIMATORS[method](x)
    except KeyError:
        raise ValueError(f"unknown Hurst method {method!r}") from None
