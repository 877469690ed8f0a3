"""Hurst estimators, chronological Hurst curves, segmentation, and fGn synthesis."""

from .che import CheCurve, che
from .fgn import FgnSpec, fgn_autocovariance, simulate_fgn
from .hurst import HurstEstimate, block_sizes, estimate_hurst, hurst_dfa, hurst_rs
from .segment import ChePeriods, LogisticFit, fit_logistic, segment_che

__all__ = [
    "CheCurve",
    "ChePeriods",
    "FgnSpec",
    "HurstEstimate",
    "LogisticFit",
    "block_sizes",
    "che",
    "estimate_hurst",
    "fgn_autocovariance",
    "fit_logistic",
    "hurst_dfa",
    "hurst_rs",
    "segment_che",
    "simulate_fgn",
]
