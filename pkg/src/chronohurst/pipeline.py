"""End-to-end analysis: parse, clean, describe, test, estimate, segment."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Literal

import numpy as np

from . import __version__
from .battery import run_battery
from .errors import ChronoHurstError, NoTransitionError, WrongFixtureError
from .persistence import che, estimate_hurst, segment_che
from .preclean import DEFAULT_THRESHOLD, CleanReport, auto_clean, clean_like_paper, repair_outliers
from .series import (
    FIXTURES,
    MonthStamp,
    TimeSeries,
    descriptive_stats,
    fixture_checksums,
    fixture_text,
    parse_csv,
    series_digest,
    to_csv,
)

CleanMode = Literal["auto", "paper_list", "off"]


class StageError(ChronoHurstError):
    """A pipeline stage failed; ``stage`` names it and ``__cause__`` holds the original error."""

    def __init__(self, stage: str, cause: Exception) -> None:
        self.stage = stage
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")


@dataclass
class PipelineConfig:
    input_path: str | None = None
    fixture: str | None = None
    clean_mode: CleanMode = "paper_list"
    hurst_method: Literal["rs", "dfa"] = "rs"
    min_window: int = 24
    step: int = 1
    output_dir: str = "out"
    seed: int = 0
    threshold: float = DEFAULT_THRESHOLD
    workers: int | None = None

    def __post_init__(self) -> None:
        if (self.input_path is None) == (self.fixture is None):
            raise ValueError("exactly one of input_path and fixture must be given")
        if self.fixture is not None and self.fixture not in FIXTURES:
            raise ValueError(f"unknown fixture {self.fixture!r}")
        if self.clean_mode not in ("auto", "paper_list", "off"):
            raise ValueError(f"unknown clean mode {self.clean_mode!r}")
        if self.hurst_method not in ("rs", "dfa"):
            raise ValueError(f"unknown Hurst method {self.hurst_method!r}")
        if self.min_window < 16:
            raise ValueError("min_window must be >= 16")
        if self.step < 1:
            raise ValueError("step must be >= 1")

    @property
    def label(self) -> str:
        if self.fixture:
            return self.fixture
        return Path(self.input_path or "series").stem

    def echo(self) -> dict:
        # output_dir and workers do not affect results, so they stay out of the report
        d = asdict(self)
        d.pop("output_dir")
        d.pop("workers")
        return d


REPORT_KEYS = ("meta", "descriptive", "outliers", "battery", "hurst", "che", "periods")


@dataclass
class ReportDocument:
    meta: dict
    descriptive: dict
    outliers: dict
    battery: dict
    hurst: dict
    che: dict
    periods: dict

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in REPORT_KEYS}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "ReportDocument":
        return cls(**{k: d[k] for k in REPORT_KEYS})

    @classmethod
    def from_json(cls, text: str) -> "ReportDocument":
        return cls.from_dict(json.loads(text))

    @property
    def label(self) -> str:
        return self.meta["label"]

    def cleaned_series(self) -> TimeSeries:
        return TimeSeries(MonthStamp.parse(self.outliers["repaired_start"]), self.outliers["repaired_values"])


def _finite(obj: Any) -> Any:
    """Recursively convert numpy scalars to Python and non-finite floats to None."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        f = float(obj)
        return f if math.isfinite(f) else None
    return obj


def _read_input(config: PipelineConfig) -> tuple[str, bytes]:
    if config.fixture:
        text = fixture_text(config.fixture)
        return text, text.encode("utf-8")
    raw = Path(config.input_path).read_bytes()  # type: ignore[arg-type]
    return raw.decode("utf-8"), raw


def _which_fixture(config: PipelineConfig, s: TimeSeries) -> str:
    if config.fixture:
        return config.fixture
    digest = series_digest(s)
    for name, known in fixture_checksums().items():
        if digest == known:
            return name
    raise WrongFixtureError("clean mode 'paper_list' only applies to the bundled fixtures")


@dataclass
class Prepared:
    """Outcome of the parse and clean stages."""

    raw: bytes
    series: TimeSeries
    clean: CleanReport

    @property
    def cleaned(self) -> TimeSeries:
        return self.clean.repaired


def prepare(config: PipelineConfig, forced: list[MonthStamp] | None = None) -> Prepared:
    """Parse and clean; ``forced`` months override ``clean_mode`` when given."""
    stage = "parse"
    try:
        text, raw = _read_input(config)
        series = parse_csv(text)
        stage = "clean"
        if forced is not None:
            report = repair_outliers(series, [series.index_of(m) for m in forced], rule="forced_list")
        elif config.clean_mode == "paper_list":
            report = clean_like_paper(series, _which_fixture(config, series))  # type: ignore[arg-type]
        elif config.clean_mode == "auto":
            report = auto_clean(series, config.threshold)
        else:
            report = repair_outliers(series, [])
    except (ChronoHurstError, OSError, UnicodeDecodeError, IndexError) as exc:
        raise StageError(stage, exc) from exc
    return Prepared(raw, series, report)


def run_stage(stage: str, fn, *args, **kwargs):
    """Call ``fn`` and tag any data error with ``stage``."""
    try:
        return fn(*args, **kwargs)
    except ChronoHurstError as exc:
        raise StageError(stage, exc) from exc


def segment_or_none(curve) -> dict:
    try:
        return {"transition": True, **segment_che(curve).as_dict()}
    except NoTransitionError as exc:
        return {"transition": False, "reason": str(exc)}


def run_pipeline(config: PipelineConfig) -> ReportDocument:
    """Parse, clean, describe, run the battery, estimate H, build the CHE curve and segment it."""
    prep = prepare(config)
    cleaned = prep.cleaned
    desc = run_stage("descriptive", descriptive_stats, cleaned)
    battery = run_stage("battery", run_battery, cleaned)
    full = run_stage("hurst", estimate_hurst, cleaned.values, config.hurst_method)
    curve = run_stage(
        "che", che, cleaned, config.hurst_method, config.min_window, config.step, workers=config.workers
    )
    periods = run_stage("segment", segment_or_none, curve)

    meta = {
        "tool": "chronohurst",
        "version": __version__,
        "label": config.label,
        "input_digest": hashlib.sha256(prep.raw).hexdigest(),
        "config": config.echo(),
    }
    return ReportDocument(
        meta=_finite(meta),
        descriptive=_finite(desc.as_dict()),
        outliers=_finite(prep.clean.as_dict()),
        battery=_finite(battery.as_dict()),
        hurst=_finite(full.as_dict()),
        che=_finite(curve.as_dict()),
        periods=_finite(periods),
    )


def emit_report(doc: ReportDocument, directory: str | Path) -> list[Path]:
    """Write report.json, che.csv and clean.csv into ``directory`` (created if needed)."""
    out = Path(directory)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = [out / "report.json", out / "che.csv", out / "clean.csv"]
        paths[0].write_text(doc.to_json(), encoding="utf-8")
        rows = ["prefix_end,h"] + [
            f"{m},{h!r}" for m, h in zip(doc.che["prefix_end"], doc.che["h_values"])
        ]
        paths[1].write_text("\n".join(rows) + "\n", encoding="utf-8")
        paths[2].write_text(to_csv(doc.cleaned_series()), encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write report to {out}: {exc.strerror or exc}") from exc
    return paths


def load_report(path: str | Path) -> ReportDocument:
    return ReportDocument.from_json(Path(path).read_text(encoding="utf-8"))
