from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSampleError, InsufficientDataError


@dataclass(frozen=True)
class GphEstimate:
    d: float
    std_err: float
    bandwidth: int

    def as_dict(self) -> dict:
        return {"d": self.d, "std_err": self.std_err, "bandwidth": self.bandwidth}


def estimate_gph(s, bandwidth: int | None = None) -> GphEstimate:
    """Geweke/Porter-Hudak log-periodogram estimate of the differencing order d.

    Regresses log I(lambda_j) on -log(4 sin^2(lambda_j / 2)) over the
    first ``bandwidth`` Fourier frequencies (default floor(sqrt(N))).
    """
    x = np.asarray(getattr(s, "values", s), dtype=float)
    n = len(x)
    if n < 64:
        raise InsufficientDataError(f"GPH needs >= 64 points, got {n}")
    if np.ptp(x) == 0.0:
        raise DegenerateSampleError("GPH on a constant series")
    m = int(math.floor(math.sqrt(n))) if bandwidth is None else bandwidth
    m = max(4, min(m, n // 2))
    dft = np.fft.fft(x - x.mean())[1 : m + 1]
    periodogram = np.abs(dft) ** 2 / (2 * math.pi * n)
    lam = 2 * math.pi * np.arange(1, m + 1) / n
    reg = -np.log(4 * np.sin(lam / 2) ** 2)
    X = np.column_stack([np.ones(m), reg])
    y = np.log(periodogram)
    beta, *_ = np.linalg.lstsq(X, y, rcond=None)
    resid = y - X @ beta
    sigma2 = float(resid @ resid) / (m - 2)
    se = math.sqrt(sigma2 / float(((reg - reg.mean()) ** 2).sum()))
    return GphEstimate(d=float(beta[1]), std_err=se, bandwidth=m)
