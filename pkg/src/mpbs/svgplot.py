"""Minimal native SVG plotting, no external plotting dependency.

Produces deterministic, self-contained SVG strings: fixed canvas, fixed
palette, `%.6g` coordinate formatting.  Only the two chart kinds the CLI
needs are supported: polyline series and dot scatter, both with linear
axes, ticks, and a small legend.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

WIDTH = 720
HEIGHT = 480
MARGIN_LEFT = 72
MARGIN_RIGHT = 24
MARGIN_TOP = 42
MARGIN_BOTTOM = 56
PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


@dataclass(frozen=True, eq=False)
class PlotGroup:
    """One plotted series: kind is 'line' or 'dots'."""

    xs: np.ndarray
    ys: np.ndarray
    label: str
    kind: str = "line"
    dashed: bool = field(default=False)


def _fmt(value: float) -> str:
    return format(float(value) + 0.0, ".6g")


def _axis_range(values: list[float]) -> tuple[float, float]:
    lo = min(values)
    hi = max(values)
    if hi == lo:
        pad = 1.0 if hi == 0.0 else abs(hi) * 0.1
        return lo - pad, hi + pad
    pad = (hi - lo) * 0.06
    return lo - pad, hi + pad


def render_plot(groups: list[PlotGroup], xlabel: str, ylabel: str,
                title: str) -> str:
    """Render series groups to an SVG document string."""
    if not groups:
        raise ValueError("nothing to plot")
    xlo, xhi = _axis_range(
        [float(np.min(g.xs)) for g in groups]
        + [float(np.max(g.xs)) for g in groups])
    ylo, yhi = _axis_range(
        [float(np.min(g.ys)) for g in groups]
        + [float(np.max(g.ys)) for g in groups])
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - xlo) / (xhi - xlo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + (yhi - y) / (yhi - ylo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:g}" y="24" font-size="15" '
        f'text-anchor="middle" font-family="sans-serif">{title}</text>',
    ]
    # Frame and ticks.
    parts.append(
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#444" stroke-width="1"/>')
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = xlo + frac * (xhi - xlo)
        yv = ylo + frac * (yhi - ylo)
        xp = px(xv)
        yp = py(yv)
        parts.append(
            f'<line x1="{xp:g}" y1="{MARGIN_TOP + plot_h}" x2="{xp:g}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="#444"/>')
        parts.append(
            f'<text x="{xp:g}" y="{MARGIN_TOP + plot_h + 18}" '
            f'font-size="11" text-anchor="middle" '
            f'font-family="sans-serif">{_fmt(xv)}</text>')
        parts.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{yp:g}" x2="{MARGIN_LEFT}" '
            f'y2="{yp:g}" stroke="#444"/>')
        parts.append(
            f'<text x="{MARGIN_LEFT - 8}" y="{yp + 4:g}" font-size="11" '
            f'text-anchor="end" font-family="sans-serif">{_fmt(yv)}</text>')
    parts.append(
        f'<text x="{MARGIN_LEFT + plot_w / 2:g}" y="{HEIGHT - 14}" '
        f'font-size="13" text-anchor="middle" '
        f'font-family="sans-serif">{xlabel}</text>')
    parts.append(
        f'<text x="20" y="{MARGIN_TOP + plot_h / 2:g}" font-size="13" '
        f'text-anchor="middle" font-family="sans-serif" '
        f'transform="rotate(-90 20 {MARGIN_TOP + plot_h / 2:g})">'
        f'{ylabel}</text>')

    for idx, group in enumerate(groups):
        color = PALETTE[idx % len(PALETTE)]
        xs = np.asarray(group.xs, dtype=float)
        ys = np.asarray(group.ys, dtype=float)
        if group.kind == "dots":
            for xv, yv in zip(xs, ys):
                parts.append(
                    f'<circle cx="{px(xv):.6g}" cy="{py(yv):.6g}" r="2.5" '
                    f'fill="{color}" fill-opacity="0.75"/>')
        else:
            coords = " ".join(
                f"{px(xv):.6g},{py(yv):.6g}" for xv, yv in zip(xs, ys))
            dash = ' stroke-dasharray="6 4"' if group.dashed else ""
            parts.append(
                f'<polyline points="{coords}" fill="none" '
                f'stroke="{color}" stroke-width="1.6"{dash}/>')
        legend_y = MARGIN_TOP + 14 + 16 * idx
        parts.append(
            f'<rect x="{WIDTH - MARGIN_RIGHT - 130}" y="{legend_y - 9}" '
            f'width="10" height="10" fill="{color}"/>')
        parts.append(
            f'<text x="{WIDTH - MARGIN_RIGHT - 115}" y="{legend_y}" '
            f'font-size="11" font-family="sans-serif">{group.label}</text>')

    parts.append("</svg>")
    return "\n".join(parts) + "\n"
