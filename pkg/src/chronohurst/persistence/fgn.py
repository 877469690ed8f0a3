"""Exact fractional Gaussian noise by circulant embedding (Davies-Harte)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import SynthesisError, UnsupportedSizeError

NEGATIVE_EIGEN_TOL = -1e-9


@dataclass(frozen=True)
class FgnSpec:
    h: float
    n: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 < self.h < 1.0:
            raise ValueError(f"Hurst exponent must lie strictly inside (0, 1), got {self.h}")
        if self.n < 64 or self.n & (self.n - 1):
            raise UnsupportedSizeError(f"n must be a power of two >= 64, got {self.n}")


def fgn_autocovariance(h: float, k) -> np.ndarray:
    """gamma(k) = (|k+1|^2H - 2|k|^2H + |k-1|^2H) / 2 for unit-variance fGn."""
    k = np.abs(np.asarray(k, dtype=float))
    e = 2.0 * h
    return 0.5 * (np.abs(k + 1) ** e - 2.0 * k**e + np.abs(k - 1) ** e)


def _embedding_eigenvalues(h: float, m: int) -> np.ndarray:
    gamma = fgn_autocovariance(h, np.arange(m + 1))
    row = np.concatenate([gamma, gamma[-2:0:-1]])
    return np.fft.fft(row).real


def _synthesize(h: float, m: int, rng: np.random.Generator) -> np.ndarray | None:
    lam = _embedding_eigenvalues(h, m)
    if lam.min() < NEGATIVE_EIGEN_TOL:
        return None
    lam = np.clip(lam, 0.0, None)
    size = 2 * m
    a = rng.standard_normal(size)
    b = rng.standard_normal(size)
    w = np.zeros(size, dtype=complex)
    w[0] = np.sqrt(lam[0] / size) * a[0]
    w[m] = np.sqrt(lam[m] / size) * a[m]
    j = np.arange(1, m)
    w[j] = np.sqrt(lam[j] / (2 * size)) * (a[j] + 1j * b[j])
    w[size - j] = np.conj(w[j])
    return np.fft.fft(w).real


def simulate_fgn(spec: FgnSpec) -> np.ndarray:
    """Unit-variance fGn of length ``spec.n``; identical output for identical specs.

    If the embedding of size 2n is not non-negative definite the
    embedding is doubled once before giving up.
    """
    rng = np.random.default_rng(spec.seed)
    for m in (spec.n, 2 * spec.n):
        out = _synthesize(spec.h, m, rng)
        if out is not None:
            return out[: spec.n]
    raise SynthesisError(f"circulant embedding failed for H={spec.h}, n={spec.n}")
