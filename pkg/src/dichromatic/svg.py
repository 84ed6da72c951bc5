"""Deterministic SVG line plots for the standard plots.

Fixed 800x600 canvas, numeric tick labels, one polyline per series.
Non-finite y values split a series into separate polylines, which is how
infinite-velocity rows and jump discontinuities show up as gaps.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence
from xml.sax.saxutils import escape

from .errors import EmptyTable

WIDTH, HEIGHT = 800, 600
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 80, 30, 40, 60
PALETTE = ("#1f4e9c", "#b22222", "#2e8b57", "#8a2be2", "#d2691e", "#008b8b",
           "#696969", "#c71585", "#556b2f", "#4682b4", "#a0522d")


@dataclass
class Series:
    x: Sequence[float]
    y: Sequence[float]
    label: str = ""
    dashed: bool = False
    markers: bool = False
    color: str | None = None


@dataclass
class Figure:
    title: str
    xlabel: str
    ylabel: str
    series: list[Series] = field(default_factory=list)
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None


def nice_ticks(lo: float, hi: float, target: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / target
    mag = 10 ** math.floor(math.log10(raw))
    step = next(m * mag for m in (1, 2, 2.5, 5, 10) if m * mag >= raw)
    first = math.ceil(lo / step - 1e-9) * step
    ticks = []
    v = first
    while v <= hi + 1e-9 * step:
        ticks.append(0.0 if abs(v) < 1e-12 * step else v)
        v = first + len(ticks) * step
    return ticks


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _tick_label(v: float) -> str:
    return format(v, ".6g")


def _segments(xs, ys):
    seg = []
    for x, y in zip(xs, ys):
        if math.isfinite(x) and math.isfinite(y):
            seg.append((x, y))
        elif seg:
            yield seg
            seg = []
    if seg:
        yield seg


def _bounds(values: list[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = abs(lo) * 0.1 or 1.0
        return lo - pad, hi + pad
    return lo, hi


def render(fig: Figure) -> str:
    xs = [x for s in fig.series for x, y in zip(s.x, s.y) if math.isfinite(x) and math.isfinite(y)]
    ys = [y for s in fig.series for x, y in zip(s.x, s.y) if math.isfinite(x) and math.isfinite(y)]
    if not xs:
        raise EmptyTable(f"nothing to plot for {fig.title!r}")
    x0, x1 = fig.xlim or _bounds(xs)
    y0, y1 = fig.ylim or _bounds(ys)
    pw = WIDTH - MARGIN_L - MARGIN_R
    ph = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return MARGIN_T + (y1 - y) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        '<defs><clipPath id="plot"><rect '
        f'x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}"/></clipPath></defs>',
        f'<text x="{WIDTH / 2:.0f}" y="24" text-anchor="middle" font-size="16">'
        f'{escape(fig.title)}</text>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" '
        'fill="none" stroke="black"/>',
    ]
    for t in nice_ticks(x0, x1):
        if x0 - 1e-12 <= t <= x1 + 1e-12:
            px = _fmt(sx(t))
            out.append(f'<line x1="{px}" y1="{MARGIN_T + ph}" x2="{px}" y2="{MARGIN_T + ph + 5}" stroke="black"/>')
            out.append(f'<text x="{px}" y="{MARGIN_T + ph + 20}" text-anchor="middle" '
                       f'font-size="12">{_tick_label(t)}</text>')
    for t in nice_ticks(y0, y1):
        if y0 - 1e-12 <= t <= y1 + 1e-12:
            py = _fmt(sy(t))
            out.append(f'<line x1="{MARGIN_L - 5}" y1="{py}" x2="{MARGIN_L}" y2="{py}" stroke="black"/>')
            out.append(f'<text x="{MARGIN_L - 8}" y="{py}" text-anchor="end" '
                       f'dominant-baseline="middle" font-size="12">{_tick_label(t)}</text>')
    out.append(f'<text x="{MARGIN_L + pw / 2:.0f}" y="{HEIGHT - 15}" text-anchor="middle" '
               f'font-size="14">{escape(fig.xlabel)}</text>')
    out.append(f'<text x="20" y="{MARGIN_T + ph / 2:.0f}" text-anchor="middle" font-size="14" '
               f'transform="rotate(-90 20 {MARGIN_T + ph / 2:.0f})">{escape(fig.ylabel)}</text>')

    out.append('<g clip-path="url(#plot)">')
    for i, s in enumerate(fig.series):
        color = s.color or PALETTE[i % len(PALETTE)]
        dash = ' stroke-dasharray="8 5"' if s.dashed else ""
        label = f' data-label="{escape(s.label)}"' if s.label else ""
        for seg in _segments(s.x, s.y):
            if s.markers:
                for x, y in seg:
                    out.append(f'<circle cx="{_fmt(sx(x))}" cy="{_fmt(sy(y))}" r="3" '
                               f'fill="{color}"{label}/>')
            elif len(seg) > 1:
                pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in seg)
                out.append(f'<polyline points="{pts}" fill="none" stroke="{color}" '
                           f'stroke-width="1.5"{dash}{label}/>')
    out.append("</g>")

    labelled = [s for s in fig.series if s.label]
    for i, s in enumerate(labelled[:12]):
        color = s.color or PALETTE[fig.series.index(s) % len(PALETTE)]
        y = MARGIN_T + 16 + 16 * i
        dash = ' stroke-dasharray="8 5"' if s.dashed else ""
        out.append(f'<line x1="{MARGIN_L + pw - 130}" y1="{y}" x2="{MARGIN_L + pw - 100}" '
                   f'y2="{y}" stroke="{color}" stroke-width="1.5"{dash}/>')
        out.append(f'<text x="{MARGIN_L + pw - 95}" y="{y}" dominant-baseline="middle" '
                   f'font-size="11">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def break_on_sign_flip(xs: Sequence[float], ys: Sequence[float]) -> tuple[list[float], list[float]]:
    """Insert a gap wherever y jumps across zero between samples.

    Used for the transformed velocity, which only changes sign through
    an infinite jump.
    """
    ox, oy = [], []
    prev = None
    for x, y in zip(xs, ys):
        if prev is not None and math.isfinite(y) and math.isfinite(prev) and prev * y < 0:
            ox.append(math.nan)
            oy.append(math.nan)
        ox.append(x)
        oy.append(y)
        prev = y
    return ox, oy
