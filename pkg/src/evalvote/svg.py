"""Minimal static SVG rendering for histograms and scatter plots.

Pure string building, no plotting dependency: axes, bars, and points are
enough to eyeball a distribution shape from the CLI.
"""

from __future__ import annotations

import numpy as np

from .analysis import HistogramData

_W, _H = 480, 320
_MARGIN = 40


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.0f}" y="18" text-anchor="middle" '
        f'font-family="sans-serif" font-size="13">{title}</text>',
    ]


def _axes() -> list[str]:
    x0, y0 = _MARGIN, _H - _MARGIN
    x1, y1 = _W - _MARGIN, _MARGIN
    return [
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{x0}" y="{y0 + 16}" font-family="sans-serif" font-size="10">0</text>',
        f'<text x="{x1 - 6}" y="{y0 + 16}" font-family="sans-serif" font-size="10">1</text>',
    ]


def histogram_svg(hist: HistogramData, title: str = "") -> str:
    """Render interior bars in gray and the endpoint atoms in red."""
    plot_w = _W - 2 * _MARGIN
    plot_h = _H - 2 * _MARGIN
    peak = max([*hist.bin_counts, hist.zero_count, hist.one_count, 1])

    def bar(x_frac: float, w_frac: float, count: int, color: str) -> str:
        h = plot_h * count / peak
        x = _MARGIN + x_frac * plot_w
        y = _H - _MARGIN - h
        return (
            f'<rect x="{x:.1f}" y="{y:.1f}" width="{w_frac * plot_w:.1f}" '
            f'height="{h:.1f}" fill="{color}" stroke="none"/>'
        )

    parts = _header(title or f"candidate {hist.candidate + 1}")
    atom_w = 0.5 / max(len(hist.bin_counts), 1)
    parts.append(bar(0.0, atom_w, hist.zero_count, "#c0392b"))
    for k, count in enumerate(hist.bin_counts):
        lo, hi = hist.bin_edges[k], hist.bin_edges[k + 1]
        parts.append(bar(lo, hi - lo, count, "#7f8c8d"))
    parts.append(bar(1.0 - atom_w, atom_w, hist.one_count, "#c0392b"))
    parts.extend(_axes())
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def scatter_svg(pairs: np.ndarray, title: str = "") -> str:
    """Render one dot per voter on the unit square."""
    plot_w = _W - 2 * _MARGIN
    plot_h = _H - 2 * _MARGIN
    parts = _header(title or "cross evaluations")
    for a, b in np.asarray(pairs, dtype=float):
        x = _MARGIN + a * plot_w
        y = _H - _MARGIN - b * plot_h
        parts.append(f'<circle cx="{x:.1f}" cy="{y:.1f}" r="1.5" fill="#2c3e50"/>')
    parts.extend(_axes())
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
