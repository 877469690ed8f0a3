from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Literal

ALPHA = 0.05


@dataclass(frozen=True)
class TestResult:
    """Outcome of one hypothesis test.

    ``reject_at_05`` refers to the test's own null hypothesis (normality
    for AD/CvM, stationarity for KPSS, a unit root for ADF, no
    seasonality, linearity).  ``clamped`` is ``"lower"`` or ``"upper"``
    when ``p_value`` is only a bound.
    """

    __test__ = False  # keep pytest from collecting this class

    name: str
    statistic: float
    p_value: float
    reject_at_05: bool
    params: dict[str, Any] = field(default_factory=dict)
    clamped: Literal["lower", "upper"] | None = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.p_value <= 1.0 or math.isnan(self.p_value):
            raise ValueError(f"{self.name}: p-value {self.p_value} outside [0, 1]")

    @classmethod
    def from_p(cls, name: str, statistic: float, p_value: float, clamped=None, **params) -> "TestResult":
        p = min(1.0, max(0.0, float(p_value)))
        return cls(name, float(statistic), p, p < ALPHA, params, clamped)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statistic": self.statistic,
            "p_value": self.p_value,
            "reject_at_05": self.reject_at_05,
            "clamped": self.clamped,
            "params": dict(self.params),
        }
