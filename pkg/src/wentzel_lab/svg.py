"""Minimal log-log line plots written as plain SVG text (byte-stable)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from xml.sax.saxutils import escape

__all__ = ["Series", "loglog_svg"]

WIDTH, HEIGHT = 640, 420
MARGIN = 60
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


@dataclass(frozen=True)
class Series:
    label: str
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    dashed: bool = False


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _decades(lo: float, hi: float) -> list[int]:
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def loglog_svg(series: list[Series], title: str, xlabel: str = "k", ylabel: str = "eigenvalue") -> str:
    """Draw each series as a polyline on log10 axes; nonpositive points are dropped."""
    pts = []
    for s in series:
        pts.append([(math.log10(x), math.log10(y)) for x, y in zip(s.xs, s.ys) if x > 0 and y > 0])
    allp = [p for ps in pts for p in ps]
    if not allp:
        raise ValueError("nothing to plot: no positive data")
    x0, x1 = min(p[0] for p in allp), max(p[0] for p in allp)
    y0, y1 = min(p[1] for p in allp), max(p[1] for p in allp)
    if x1 == x0:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 == y0:
        y0, y1 = y0 - 0.5, y1 + 0.5
    pw, ph = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN

    def sx(x):
        return MARGIN + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return HEIGHT - MARGIN - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{WIDTH // 2}" y="24" text-anchor="middle" font-family="sans-serif" font-size="15">{escape(title)}</text>',
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for d in _decades(x0, x1):
        if x0 <= d <= x1:
            out.append(f'<line x1="{_fmt(sx(d))}" y1="{MARGIN}" x2="{_fmt(sx(d))}" y2="{HEIGHT - MARGIN}" stroke="#ddd"/>')
            out.append(
                f'<text x="{_fmt(sx(d))}" y="{HEIGHT - MARGIN + 16}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">1e{d}</text>'
            )
    for d in _decades(y0, y1):
        if y0 <= d <= y1:
            out.append(f'<line x1="{MARGIN}" y1="{_fmt(sy(d))}" x2="{WIDTH - MARGIN}" y2="{_fmt(sy(d))}" stroke="#ddd"/>')
            out.append(
                f'<text x="{MARGIN - 6}" y="{_fmt(sy(d) + 4)}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">1e{d}</text>'
            )
    out.append(
        f'<text x="{WIDTH // 2}" y="{HEIGHT - 18}" text-anchor="middle" font-family="sans-serif" font-size="12">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="16" y="{HEIGHT // 2}" text-anchor="middle" font-family="sans-serif" font-size="12" '
        f'transform="rotate(-90 16 {HEIGHT // 2})">{escape(ylabel)}</text>'
    )
    for i, (s, ps) in enumerate(zip(series, pts)):
        color = PALETTE[i % len(PALETTE)]
        if ps:
            coords = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in ps)
            dash = ' stroke-dasharray="6 4"' if s.dashed else ""
            out.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"{dash}/>')
        ly = MARGIN + 16 + 16 * i
        out.append(f'<line x1="{MARGIN + 10}" y1="{ly - 4}" x2="{MARGIN + 34}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{MARGIN + 40}" y="{ly}" font-family="sans-serif" font-size="11">{escape(s.label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
