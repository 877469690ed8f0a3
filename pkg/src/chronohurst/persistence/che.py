"""Chronological Hurst exponent: Hurst estimates over expanding prefixes."""

from __future__ import annotations

import io
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import InsufficientDataError
from ..series import MonthStamp, TimeSeries, series_digest
from .hurst import MIN_LENGTH, estimate_hurst

DEFAULT_MIN_WINDOW = 24


@dataclass(frozen=True, eq=False)
class CheCurve:
    prefix_end: tuple[MonthStamp, ...]
    h_values: np.ndarray
    min_window: int
    step: int
    method: Literal["rs", "dfa"]
    source_digest: str

    def __post_init__(self) -> None:
        arr = np.array(self.h_values, dtype=float)
        arr.setflags(write=False)
        object.__setattr__(self, "h_values", arr)
        if len(arr) != len(self.prefix_end):
            raise ValueError("h_values and prefix_end must align")

    def __len__(self) -> int:
        return len(self.h_values)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CheCurve):
            return NotImplemented
        return (
            self.prefix_end == other.prefix_end
            and np.array_equal(self.h_values, other.h_values)
            and (self.min_window, self.step, self.method, self.source_digest)
            == (other.min_window, other.step, other.method, other.source_digest)
        )

    @property
    def decimal_years(self) -> np.ndarray:
        return np.array([m.decimal_year for m in self.prefix_end])

    def value_at(self, month: MonthStamp) -> float:
        return float(self.h_values[self.prefix_end.index(month)])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("prefix_end,h\n")
        for m, h in zip(self.prefix_end, self.h_values):
            buf.write(f"{m},{float(h)!r}\n")
        return buf.getvalue()

    def as_dict(self) -> dict:
        return {
            "method": self.method,
            "min_window": self.min_window,
            "step": self.step,
            "source_digest": self.source_digest,
            "prefix_end": [str(m) for m in self.prefix_end],
            "h_values": [float(h) for h in self.h_values],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    @classmethod
    def from_dict(cls, d: dict) -> "CheCurve":
        return cls(
            prefix_end=tuple(MonthStamp.parse(m) for m in d["prefix_end"]),
            h_values=np.array(d["h_values"], dtype=float),
            min_window=int(d["min_window"]),
            step=int(d["step"]),
            method=d["method"],
            source_digest=d["source_digest"],
        )


def che(
    s: TimeSeries,
    method: str = "rs",
    min_window: int = DEFAULT_MIN_WINDOW,
    step: int = 1,
    workers: int | None = None,
) -> CheCurve:
    """Hurst exponent of every prefix of ``s`` from ``min_window`` months, growing by ``step``.

    With ``workers`` > 1 the prefixes are estimated on a thread pool;
    results are placed by prefix index, so the curve is identical to the
    serial one.
    """
    if min_window < MIN_LENGTH:
        raise ValueError(f"min_window must be >= {MIN_LENGTH}")
    if step < 1:
        raise ValueError("step must be >= 1")
    if len(s) < min_window:
        raise InsufficientDataError(f"series of {len(s)} months is shorter than min_window={min_window}")
    ends = list(range(min_window, len(s) + 1, step))
    x = s.values

    def one(length: int) -> float:
        return estimate_hurst(x[:length], method).h

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            h = list(pool.map(one, ends))
    else:
        h = [one(length) for length in ends]
    return CheCurve(
        prefix_end=tuple(s.stamp(length - 1) for length in ends),
        h_values=np.array(h),
        min_window=min_window,
        step=step,
        method=method,  # type: ignore[arg-type]
        source_digest=series_digest(s),
    )
