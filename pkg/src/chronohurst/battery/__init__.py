"""Intrinsic-property test battery: normality, stationarity, seasonality, nonlinearity."""

from __future__ import annotations

from dataclasses import dataclass

from ..series import TimeSeries, difference
from .longmemory import GphEstimate, estimate_gph
from .nonlinearity import METHODS as NONLINEARITY_METHODS
from .nonlinearity import test_nonlinearity
from .normality import test_normality
from .result import TestResult
from .seasonality import test_seasonality
from .stationarity import integration_order, test_stationarity

__all__ = [
    "BatteryReport",
    "GphEstimate",
    "TestResult",
    "estimate_gph",
    "integration_order",
    "run_battery",
    "test_nonlinearity",
    "test_normality",
    "test_seasonality",
    "test_stationarity",
]

# at least this many of the four nonlinearity tests must reject
NONLINEAR_VOTES = 2


@dataclass(frozen=True)
class BatteryReport:
    normality: tuple[TestResult, ...]
    stationarity: tuple[TestResult, ...]
    seasonality: tuple[TestResult, ...]
    nonlinearity: tuple[TestResult, ...]
    integration_order: int
    long_memory: GphEstimate | None
    non_normal: bool
    non_stationary: bool
    seasonal: bool
    non_linear: bool

    @property
    def verdicts(self) -> dict[str, bool]:
        return {
            "non_normal": self.non_normal,
            "non_stationary": self.non_stationary,
            "seasonal": self.seasonal,
            "non_linear": self.non_linear,
        }

    def as_dict(self) -> dict:
        return {
            "normality": [r.as_dict() for r in self.normality],
            "stationarity": [r.as_dict() for r in self.stationarity],
            "seasonality": [r.as_dict() for r in self.seasonality],
            "nonlinearity": [r.as_dict() for r in self.nonlinearity],
            "integration_order": self.integration_order,
            "long_memory": None if self.long_memory is None else self.long_memory.as_dict(),
            "verdicts": self.verdicts,
        }


def run_battery(s: TimeSeries) -> BatteryReport:
    """Run every test family and derive the four verdicts.

    non_normal: Anderson-Darling or Cramer-von Mises rejects.
    non_stationary: KPSS-based order of integration is at least 1.
    seasonal: the combined 2-of-3 seasonality test rejects.
    non_linear: at least two of the four nonlinearity tests reject.
    """
    normality = tuple(test_normality(s, m) for m in ("anderson_darling", "cramer_von_mises"))
    stationarity = (
        test_stationarity(s, "kpss", "drift"),
        test_stationarity(s, "kpss", "trend"),
        test_stationarity(s, "adf", "drift"),
    )
    seas = tuple(test_seasonality(s, m) for m in ("qs", "friedman", "welch", "combined"))
    nonlin = tuple(test_nonlinearity(s, m) for m in NONLINEARITY_METHODS)
    order = integration_order(s, "kpss")
    gph = None
    if len(s) >= 65:
        gph = estimate_gph(difference(s))
    return BatteryReport(
        normality=normality,
        stationarity=stationarity,
        seasonality=seas,
        nonlinearity=nonlin,
        integration_order=order,
        long_memory=gph,
        non_normal=any(r.reject_at_05 for r in normality),
        non_stationary=order >= 1,
        seasonal=seas[-1].reject_at_05,
        non_linear=sum(r.reject_at_05 for r in nonlin) >= NONLINEAR_VOTES,
    )
