"""Hand-written SVG figures: series + CHE panels, and a CHE comparison.

Output is plain SVG 1.1 with no scripts, fonts or external references,
and every coordinate is printed with a fixed precision so that repeated
runs produce byte-identical files.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

from .pipeline import ReportDocument
from .series import MonthStamp

WIDTH, HEIGHT = 960, 640
MARGIN_LEFT, MARGIN_RIGHT = 80, 30
PALETTE = ("#1f5fa8", "#c0392b")


def _f(v: float) -> str:
    return f"{v:.2f}"


def _nice_ticks(lo: float, hi: float, target: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = min((m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw), default=10 * mag)
    first = math.ceil(lo / step) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(round(v, 10))
        v += step
    return ticks


def _fmt_tick(v: float) -> str:
    if abs(v) >= 1000:
        return f"{v:,.0f}"
    if float(v).is_integer():
        return f"{v:.0f}"
    return f"{v:g}"


class _Panel:
    def __init__(self, top: float, height: float, xlo: float, xhi: float, ylo: float, yhi: float):
        self.top, self.height = top, height
        self.left, self.right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
        self.xlo, self.xhi = xlo, xhi
        pad = 0.05 * (yhi - ylo or 1.0)
        self.ylo, self.yhi = ylo - pad, yhi + pad

    def x(self, v: float) -> float:
        return self.left + (v - self.xlo) / (self.xhi - self.xlo) * (self.right - self.left)

    def y(self, v: float) -> float:
        return self.top + self.height - (v - self.ylo) / (self.yhi - self.ylo) * self.height

    def path(self, xs: Sequence[float], ys: Sequence[float], colour: str, label: str) -> str:
        pts = " L".join(f"{_f(self.x(a))},{_f(self.y(b))}" for a, b in zip(xs, ys))
        return (
            f'<path d="M{pts}" fill="none" stroke="{colour}" stroke-width="1.4">'
            f"<title>{escape(label)}</title></path>"
        )

    def axes(self, ylabel: str, show_x_labels: bool) -> list[str]:
        bottom = self.top + self.height
        out = [
            f'<rect x="{_f(self.left)}" y="{_f(self.top)}" width="{_f(self.right - self.left)}" '
            f'height="{_f(self.height)}" fill="none" stroke="#444" stroke-width="1"/>'
        ]
        for v in _nice_ticks(self.ylo, self.yhi):
            y = self.y(v)
            out.append(f'<line x1="{_f(self.left - 5)}" y1="{_f(y)}" x2="{_f(self.left)}" y2="{_f(y)}" stroke="#444"/>')
            out.append(
                f'<text x="{_f(self.left - 8)}" y="{_f(y + 4)}" text-anchor="end" font-size="11">{_fmt_tick(v)}</text>'
            )
        first = int(math.ceil(self.xlo / 5.0) * 5)
        for year in range(first, int(self.xhi) + 1, 5):
            x = self.x(year)
            out.append(f'<line x1="{_f(x)}" y1="{_f(bottom)}" x2="{_f(x)}" y2="{_f(bottom + 5)}" stroke="#444"/>')
            out.append(f'<line x1="{_f(x)}" y1="{_f(self.top)}" x2="{_f(x)}" y2="{_f(bottom)}" stroke="#ddd"/>')
            if show_x_labels:
                out.append(f'<text x="{_f(x)}" y="{_f(bottom + 18)}" text-anchor="middle" font-size="11">{year}</text>')
        mid = self.top + self.height / 2
        out.append(
            f'<text x="18" y="{_f(mid)}" transform="rotate(-90 18 {_f(mid)})" '
            f'text-anchor="middle" font-size="12">{escape(ylabel)}</text>'
        )
        return out


def _document(body: list[str], title: str) -> str:
    head = (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">\n'
        f"<title>{escape(title)}</title>\n"
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>\n'
    )
    return head + "\n".join(body) + "\n</svg>\n"


def _che_xy(doc: ReportDocument) -> tuple[list[float], list[float]]:
    xs = [MonthStamp.parse(m).decimal_year for m in doc.che["prefix_end"]]
    ys = [float("nan") if h is None else h for h in doc.che["h_values"]]
    return xs, ys


def series_figure(doc: ReportDocument) -> str:
    """Counts on top, chronological Hurst values below, one shared time axis."""
    s = doc.cleaned_series()
    xs = [m.decimal_year for m in s.months()]
    cx, cy = _che_xy(doc)
    xlo, xhi = xs[0], xs[-1] + 1 / 12
    top = _Panel(40, 250, xlo, xhi, float(np.min(s.values)), float(np.max(s.values)))
    bottom = _Panel(330, 250, xlo, xhi, min(0.3, float(np.nanmin(cy))), max(1.1, float(np.nanmax(cy))))
    body = [
        f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" font-size="15">{escape(doc.label)}</text>',
        *top.axes("monthly count", show_x_labels=False),
        top.path(xs, s.values, PALETTE[0], doc.label),
        *bottom.axes("chronological Hurst", show_x_labels=True),
        bottom.path(cx, cy, PALETTE[0], f"{doc.label} CHE"),
    ]
    for level in (0.5, 1.0):
        y = bottom.y(level)
        body.append(
            f'<line x1="{_f(bottom.left)}" y1="{_f(y)}" x2="{_f(bottom.right)}" y2="{_f(y)}" '
            'stroke="#888" stroke-dasharray="4 3"/>'
        )
    return _document(body, f"{doc.label}: series and chronological Hurst exponent")


def comparison_figure(docs: Sequence[ReportDocument]) -> str:
    curves = [_che_xy(d) for d in docs]
    xlo = min(c[0][0] for c in curves)
    xhi = max(c[0][-1] for c in curves) + 1 / 12
    ylo = min(0.3, min(float(np.nanmin(c[1])) for c in curves))
    yhi = max(1.1, max(float(np.nanmax(c[1])) for c in curves))
    panel = _Panel(50, 520, xlo, xhi, ylo, yhi)
    body = [
        '<text x="480" y="28" text-anchor="middle" font-size="15">Chronological Hurst exponent</text>',
        *panel.axes("chronological Hurst", show_x_labels=True),
    ]
    for i, (doc, (x, y)) in enumerate(zip(docs, curves)):
        colour = PALETTE[i % len(PALETTE)]
        body.append(panel.path(x, y, colour, doc.label))
        ly = 70 + 20 * i
        body.append(f'<line x1="{WIDTH - 200}" y1="{ly}" x2="{WIDTH - 170}" y2="{ly}" stroke="{colour}" stroke-width="2"/>')
        body.append(f'<text x="{WIDTH - 162}" y="{ly + 4}" font-size="12">{escape(doc.label)}</text>')
    return _document(body, "Comparison of chronological Hurst curves")


def emit_figures(docs: Sequence[ReportDocument], directory: str | Path, compare: bool | None = None) -> list[Path]:
    """Write ``fig_<label>.svg`` per document, plus ``fig_compare.svg`` for two documents.

    ``compare=True`` with a single document raises ``ValueError``.
    """
    if not docs:
        raise ValueError("at least one report is required")
    if compare is None:
        compare = len(docs) >= 2
    if compare and len(docs) < 2:
        raise ValueError("the comparison figure needs a second report")
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for doc in docs:
        p = out / f"fig_{doc.label}.svg"
        p.write_text(series_figure(doc), encoding="utf-8")
        written.append(p)
    if compare:
        p = out / "fig_compare.svg"
        p.write_text(comparison_figure(docs[:2]), encoding="utf-8")
        written.append(p)
    return written
