"""Outlier detection and neighbour-average repair.

Detection works on the remainder of the classical additive
decomposition.  Each pass flags the single most extreme remainder (in
robust z units, i.e. distance from the median over 1.4826 * MAD),
repairs it in a working copy, and decomposes again, so one large spike
cannot mask a smaller one by inflating the moving-average trend around
it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import (
    DegenerateSampleError,
    InsufficientDataError,
    UnsupportedConfigurationError,
    WrongFixtureError,
)
from .series import (
    PERIOD,
    MonthStamp,
    TimeSeries,
    decompose_additive,
    fixture_checksums,
    series_digest,
)

MAD_SCALE = 1.4826
DEFAULT_THRESHOLD = 7.0
# months compared on each side of a flagged point for the level-shift check
SHIFT_WINDOW = 12

PAPER_OUTLIERS: dict[str, tuple[MonthStamp, ...]] = {
    "trademarks": (MonthStamp(1982, 9), MonthStamp(1989, 11), MonthStamp(1999, 6)),
    "patents": (
        MonthStamp(1982, 9),
        MonthStamp(1995, 6),
        MonthStamp(2007, 10),
        MonthStamp(2013, 3),
    ),
}


@dataclass(frozen=True)
class OutlierEvent:
    index: int
    month: MonthStamp
    kind: Literal["additive", "level_shift"]
    magnitude: float
    score: float

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "month": str(self.month),
            "kind": self.kind,
            "magnitude": self.magnitude,
            "score": self.score,
        }


@dataclass(frozen=True)
class CleanReport:
    source_digest: str
    events: tuple[OutlierEvent, ...]
    repaired: TimeSeries
    rule: Literal["neighbor_average", "forced_list"]

    @property
    def repaired_indices(self) -> list[int]:
        return [e.index for e in self.events if e.kind == "additive"]

    def as_dict(self) -> dict:
        return {
            "source_digest": self.source_digest,
            "rule": self.rule,
            "events": [e.as_dict() for e in self.events],
            "repaired_digest": series_digest(self.repaired),
            "repaired_start": str(self.repaired.start),
            "repaired_values": [float(v) for v in self.repaired.values],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)


def _robust_scores(remainder: np.ndarray) -> tuple[np.ndarray, float]:
    ok = ~np.isnan(remainder)
    r = remainder[ok]
    med = np.median(r)
    mad = MAD_SCALE * np.median(np.abs(r - med))
    if mad == 0.0:
        raise DegenerateSampleError("remainder has zero median absolute deviation")
    z = np.zeros_like(remainder)
    z[ok] = (remainder[ok] - med) / mad
    return z, float(mad)


def _neighbour_fill(x: np.ndarray, i: int) -> float:
    if i == 0:
        return float(x[1])
    if i == len(x) - 1:
        return float(x[-2])
    return float((x[i - 1] + x[i + 1]) / 2.0)


def detect_outliers(s: TimeSeries, threshold: float = DEFAULT_THRESHOLD) -> list[OutlierEvent]:
    """Flag months whose decomposition remainder exceeds ``threshold`` robust z.

    A flagged month is classed as ``level_shift`` when the median remainder
    over the following year differs from the median over the preceding
    year by more than ``threshold`` MADs; otherwise it is ``additive``.
    Events come back sorted by index.
    """
    if len(s) < 2 * PERIOD:
        raise InsufficientDataError(f"outlier detection needs >= {2 * PERIOD} points, got {len(s)}")
    work = np.array(s.values, dtype=float)
    flagged: dict[int, OutlierEvent] = {}
    while True:
        dec = decompose_additive(s.replace_values(work))
        z, mad = _robust_scores(np.asarray(dec.remainder))
        z_abs = np.abs(z)
        for i in flagged:
            z_abs[i] = 0.0
        i = int(np.argmax(z_abs))
        # strict inequality keeps the loop finite on ties at the threshold
        if not z_abs[i] > threshold:
            break
        rem = dec.remainder
        before = rem[max(0, i - SHIFT_WINDOW) : i]
        after = rem[i + 1 : i + 1 + SHIFT_WINDOW]
        before, after = before[~np.isnan(before)], after[~np.isnan(after)]
        kind: Literal["additive", "level_shift"] = "additive"
        if len(before) and len(after) and abs(np.median(after) - np.median(before)) > threshold * mad:
            kind = "level_shift"
        flagged[i] = OutlierEvent(
            index=i,
            month=s.stamp(i),
            kind=kind,
            magnitude=float(rem[i]),
            score=float(z_abs[i]),
        )
        work[i] = _neighbour_fill(work, i)
    return [flagged[i] for i in sorted(flagged)]


def repair_outliers(
    s: TimeSeries,
    targets: Iterable[int],
    *,
    events: Sequence[OutlierEvent] | None = None,
    rule: Literal["neighbor_average", "forced_list"] = "neighbor_average",
) -> CleanReport:
    """Replace each target by the mean of its two neighbours.

    A target on the first or last month takes its single neighbour.
    Neighbours are always read from the unrepaired source, which is why
    adjacent targets are rejected.
    """
    if len(s) == 0:
        raise InsufficientDataError("cannot repair an empty series")
    idx = sorted(set(int(t) for t in targets))
    for t in idx:
        if not 0 <= t < len(s):
            raise IndexError(f"target {t} outside series of length {len(s)}")
    for a, b in zip(idx, idx[1:]):
        if b - a == 1:
            raise UnsupportedConfigurationError(f"adjacent repair targets {a} and {b}")
    if idx and len(s) < 2:
        raise InsufficientDataError("a single observation has no neighbour to borrow")

    src = s.values
    out = np.array(src, dtype=float)
    for t in idx:
        out[t] = _neighbour_fill(src, t)

    if events is None:
        events = [
            OutlierEvent(t, s.stamp(t), "additive", float(src[t] - out[t]), float("nan"))
            for t in idx
        ]
    return CleanReport(
        source_digest=series_digest(s),
        events=tuple(sorted(events, key=lambda e: e.index)),
        repaired=s.replace_values(out),
        rule=rule,
    )


def auto_clean(s: TimeSeries, threshold: float = DEFAULT_THRESHOLD) -> CleanReport:
    """Detect, then repair every additive event.

    When two additive events touch, only the higher-scoring one is
    repaired; the other stays in the report.
    """
    events = detect_outliers(s, threshold)
    chosen: list[int] = []
    for e in sorted((e for e in events if e.kind == "additive"), key=lambda e: -e.score):
        if all(abs(e.index - c) > 1 for c in chosen):
            chosen.append(e.index)
    kept = [e for e in events if e.kind != "additive" or e.index in chosen]
    report = repair_outliers(s, chosen, events=kept)
    return report


def clean_like_paper(s: TimeSeries, which: Literal["patents", "trademarks"]) -> CleanReport:
    """Repair exactly the months listed for the bundled fixture.

    The series must be the unmodified fixture (or the already-repaired
    output of this function, which makes the call idempotent).
    """
    if which not in PAPER_OUTLIERS:
        raise ValueError(f"unknown fixture {which!r}")
    digest = series_digest(s)
    if digest != fixture_checksums()[which] and not _is_listed_repair(s, which):
        raise WrongFixtureError(f"series digest {digest[:12]}... is not the bundled {which} fixture")
    targets = [s.index_of(m) for m in PAPER_OUTLIERS[which]]
    src = s.values
    events = []
    for t in targets:
        fill = _neighbour_fill(src, t)
        events.append(OutlierEvent(t, s.stamp(t), "additive", float(src[t] - fill), float("nan")))
    return repair_outliers(s, targets, events=events, rule="forced_list")


def _is_listed_repair(s: TimeSeries, which: str) -> bool:
    from .series import load_fixture

    return s == clean_like_paper(load_fixture(which), which).repaired  # type: ignore[arg-type]


def parse_month_list(text: str) -> list[MonthStamp]:
    """Parse a comma-separated ``YYYY-MM`` list as accepted on the command line."""
    return [MonthStamp.parse(tok) for tok in text.split(",") if tok.strip()]
