"""Command-line entry point.

Exit codes: 0 on success, 1 for usage errors (bad flags, bad config
file, invalid settings), 2 when the data or a pipeline stage fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from . import __version__
from .battery import run_battery
from .errors import ChronoHurstError
from .persistence import FgnSpec, che, estimate_hurst, simulate_fgn
from .pipeline import (
    _finite,
    PipelineConfig,
    StageError,
    emit_report,
    load_report,
    prepare,
    run_pipeline,
    run_stage,
    segment_or_none,
)
from .preclean import DEFAULT_THRESHOLD, parse_month_list
from .series import descriptive_stats, to_csv
from .svg import emit_figures

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

# built-in defaults; the config file and then the command line override them
DEFAULTS = {
    "input": None,
    "fixture": None,
    "clean": None,
    "method": "rs",
    "min_window": 24,
    "step": 1,
    "out": "out",
    "seed": 0,
    "threshold": DEFAULT_THRESHOLD,
    "workers": None,
}
_CONVERT = {
    "min_window": int,
    "step": int,
    "seed": int,
    "threshold": float,
    "workers": int,
}
_CLEAN_MODES = {"auto": "auto", "paper": "paper_list", "paper_list": "paper_list", "off": "off"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse exits with 2 by default
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def read_config(path: str | Path) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment, dashes in keys act as underscores."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc.strerror or exc}") from None
    out: dict = {}
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if not sep or not key:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        if key not in DEFAULTS:
            raise UsageError(f"{path}:{n}: unknown key {key!r}")
        try:
            out[key] = _CONVERT.get(key, str)(value)
        except ValueError:
            raise UsageError(f"{path}:{n}: bad value for {key}: {value!r}") from None
    return out


def resolve(args: argparse.Namespace) -> dict:
    settings = dict(DEFAULTS)
    if getattr(args, "config", None):
        settings.update(read_config(args.config))
    for key in DEFAULTS:
        v = getattr(args, key, None)
        if v is not None:
            settings[key] = v
    # an explicit source on the command line replaces one from the config file
    if getattr(args, "input", None) is not None:
        settings["fixture"] = None
    elif getattr(args, "fixture", None) is not None:
        settings["input"] = None
    return settings


def build_config(settings: dict) -> PipelineConfig:
    clean = settings["clean"]
    if clean is None:
        clean = "paper" if settings["fixture"] else "auto"
    if clean not in _CLEAN_MODES:
        raise UsageError(f"unknown clean mode {clean!r}")
    try:
        return PipelineConfig(
            input_path=settings["input"],
            fixture=settings["fixture"],
            clean_mode=_CLEAN_MODES[clean],  # type: ignore[arg-type]
            hurst_method=settings["method"],
            min_window=settings["min_window"],
            step=settings["step"],
            output_dir=settings["out"],
            seed=settings["seed"],
            threshold=settings["threshold"],
            workers=settings["workers"],
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _print_json(obj) -> None:
    print(json.dumps(_finite(obj), indent=2, allow_nan=False))


def cmd_stats(cfg: PipelineConfig, args) -> None:
    prep = prepare(cfg)
    _print_json(run_stage("descriptive", descriptive_stats, prep.cleaned).as_dict())


def cmd_clean(cfg: PipelineConfig, args) -> None:
    forced = None
    if args.months:
        try:
            forced = parse_month_list(args.months)
        except ValueError as exc:
            raise UsageError(f"--months: {exc}") from None
    prep = prepare(cfg, forced)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "clean.csv").write_text(to_csv(prep.cleaned), encoding="utf-8")
    summary = prep.clean.as_dict()
    for key in ("repaired_start", "repaired_values"):
        summary.pop(key)
    _print_json(summary)


def cmd_battery(cfg: PipelineConfig, args) -> None:
    prep = prepare(cfg)
    _print_json(run_stage("battery", run_battery, prep.cleaned).as_dict())


def cmd_hurst(cfg: PipelineConfig, args) -> None:
    prep = prepare(cfg)
    _print_json(run_stage("hurst", estimate_hurst, prep.cleaned.values, cfg.hurst_method).as_dict())


def _curve(cfg: PipelineConfig):
    prep = prepare(cfg)
    return run_stage("che", che, prep.cleaned, cfg.hurst_method, cfg.min_window, cfg.step, workers=cfg.workers)


def cmd_che(cfg: PipelineConfig, args) -> None:
    curve = _curve(cfg)
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / "che.csv"
    path.write_text(curve.to_csv(), encoding="utf-8")
    _print_json({"path": str(path), "points": len(curve), "first": curve.h_values[0], "last": curve.h_values[-1]})


def cmd_segment(cfg: PipelineConfig, args) -> None:
    _print_json(run_stage("segment", segment_or_none, _curve(cfg)))


def cmd_report(cfg: PipelineConfig, args) -> None:
    doc = run_pipeline(cfg)
    paths = emit_report(doc, cfg.output_dir)
    if not args.no_figures:
        paths += emit_figures([doc], cfg.output_dir)
    for p in paths:
        print(p)


def cmd_figures(args) -> None:
    if args.compare and len(args.reports) < 2:
        raise UsageError("--compare needs two report files")
    docs = []
    for path in args.reports:
        try:
            docs.append(load_report(path))
        except (OSError, ValueError, KeyError) as exc:
            raise StageError("figures", ChronoHurstError(f"cannot load {path}: {exc}")) from exc
    out = args.out or DEFAULTS["out"]
    for p in emit_figures(docs, out, compare=True if args.compare else None):
        print(p)


def cmd_simulate(args) -> None:
    try:
        spec = FgnSpec(args.hurst, args.n, args.seed if args.seed is not None else 0)
    except (ValueError, ChronoHurstError) as exc:
        raise UsageError(str(exc)) from None
    x = simulate_fgn(spec)
    text = "t,value\n" + "".join(f"{i},{v!r}\n" for i, v in enumerate(x.tolist()))
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
        print(args.out)
    else:
        sys.stdout.write(text)


def _add_common(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", metavar="PATH", help="monthly CSV with a 'date,value' header")
    src.add_argument("--fixture", choices=["patents", "trademarks"], help="bundled series")
    p.add_argument("--clean", choices=["auto", "paper", "off"], help="outlier handling (default: paper for fixtures, auto otherwise)")
    p.add_argument("--method", choices=["rs", "dfa"], help="Hurst estimator (default rs)")
    p.add_argument("--min-window", dest="min_window", type=int, metavar="N", help="shortest CHE prefix (default 24)")
    p.add_argument("--step", type=int, metavar="N", help="CHE prefix step in months (default 1)")
    p.add_argument("--out", metavar="DIR", help="output directory (default ./out)")
    p.add_argument("--seed", type=int, metavar="N", help="random seed (default 0)")
    p.add_argument("--threshold", type=float, metavar="Z", help=f"robust z cut-off for auto cleaning (default {DEFAULT_THRESHOLD:g})")
    p.add_argument("--workers", type=int, metavar="N", help="threads for the CHE curve")
    p.add_argument("--config", metavar="PATH", help="flat 'key = value' settings file")


SERIES_COMMANDS = {
    "stats": (cmd_stats, "descriptive statistics of the cleaned series"),
    "clean": (cmd_clean, "detect and repair outliers, write clean.csv"),
    "battery": (cmd_battery, "normality, stationarity, seasonality and nonlinearity tests"),
    "hurst": (cmd_hurst, "Hurst exponent of the full cleaned series"),
    "che": (cmd_che, "chronological Hurst curve, written to che.csv"),
    "segment": (cmd_segment, "split the chronological Hurst curve into three periods"),
    "report": (cmd_report, "run everything and write report.json, CSVs and figures"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="chronohurst", description="Chronological Hurst exponent analysis of monthly counts.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in SERIES_COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text)
        _add_common(p)
        if name == "clean":
            p.add_argument("--months", metavar="YYYY-MM,...", help="repair exactly these months")
        if name == "report":
            p.add_argument("--no-figures", action="store_true", help="skip the SVG figures")

    p = sub.add_parser("figures", help="SVG figures from one or two report.json files")
    p.add_argument("reports", nargs="+", metavar="REPORT")
    p.add_argument("--compare", action="store_true", help="require the comparison figure")
    p.add_argument("--out", metavar="DIR")

    p = sub.add_parser("simulate-fgn", help="write fractional Gaussian noise as CSV")
    p.add_argument("--hurst", type=float, required=True, metavar="H")
    p.add_argument("--n", type=int, default=1024, metavar="N", help="length, a power of two >= 64")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--out", metavar="FILE")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "figures":
            cmd_figures(args)
        elif args.command == "simulate-fgn":
            cmd_simulate(args)
        else:
            settings = resolve(args)
            if settings["input"] is None and settings["fixture"] is None:
                raise UsageError("one of --input or --fixture is required")
            cfg = build_config(settings)
            SERIES_COMMANDS[args.command][0](cfg, args)
    except UsageError as exc:
        print(f"chronohurst: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except StageError as exc:
        print(f"chronohurst: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (ChronoHurstError, OSError, ValueError) as exc:
        print(f"chronohurst: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
