"""Dependency-free SVG scatter plots of roots in the complex plane."""

from __future__ import annotations

import math
from typing import Iterable, Optional, Sequence
from xml.sax.saxutils import escape

__all__ = ["point_radius", "auto_bounds", "render_svg"]

_SIZE = 640
_MARGIN = 48


def point_radius(count: int) -> float:
    return max(0.5, 40.0 / math.sqrt(count)) if count else 0.5


def auto_bounds(points: Sequence[complex], pad: float = 0.05) -> tuple:
    """Square ``(xmin, xmax, ymin, ymax)`` window around the points."""
    if not points:
        return (-1.0, 1.0, -1.0, 1.0)
    xs = [p.real for p in points]
    ys = [p.imag for p in points]
    cx = (min(xs) + max(xs)) / 2
    cy = (min(ys) + max(ys)) / 2
    half = max(max(xs) - min(xs), max(ys) - min(ys)) / 2
    half = half * (1 + 2 * pad) if half > 0 else 1.0
    return (cx - half, cx + half, cy - half, cy + half)


def _fmt(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_svg(points: Iterable[complex], bounds: Optional[tuple] = None, title: str = "") -> str:
    """SVG scatter with equal aspect; one ``<circle class="root">`` per point.

    ``bounds`` is ``(xmin, xmax, ymin, ymax)``.  A non-square window is
    widened along its short side so units are equal on both axes.
    """
    pts = [complex(p) for p in points]
    xmin, xmax, ymin, ymax = bounds if bounds is not None else auto_bounds(pts)
    if not (xmax > xmin and ymax > ymin):
        raise ValueError(f"degenerate bounds {bounds!r}")
    span = max(xmax - xmin, ymax - ymin)
    cx, cy = (xmin + xmax) / 2, (ymin + ymax) / 2
    xmin, xmax, ymin, ymax = cx - span / 2, cx + span / 2, cy - span / 2, cy + span / 2
    inner = _SIZE - 2 * _MARGIN
    scale = inner / span

    def px(z: complex) -> tuple:
        return _MARGIN + (z.real - xmin) * scale, _MARGIN + (ymax - z.imag) * scale

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{inner}" height="{inner}" '
        'fill="none" stroke="#888" stroke-width="1"/>',
    ]
    if title:
        out.append(
            f'<text x="{_SIZE / 2}" y="{_MARGIN / 2}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{escape(title)}</text>'
        )
    g = '<g stroke="#bbb" stroke-width="1">'
    if xmin <= 0 <= xmax:
        x0, _ = px(0j)
        g += f'<line class="axis" x1="{_fmt(x0)}" y1="{_MARGIN}" x2="{_fmt(x0)}" y2="{_MARGIN + inner}"/>'
    if ymin <= 0 <= ymax:
        _, y0 = px(0j)
        g += f'<line class="axis" x1="{_MARGIN}" y1="{_fmt(y0)}" x2="{_MARGIN + inner}" y2="{_fmt(y0)}"/>'
    out.append(g + "</g>")
    label = 'font-family="sans-serif" font-size="11" fill="#444"'
    out.append(f'<text x="{_MARGIN}" y="{_SIZE - _MARGIN / 3}" {label}>{_fmt(xmin)}</text>')
    out.append(
        f'<text x="{_MARGIN + inner}" y="{_SIZE - _MARGIN / 3}" text-anchor="end" {label}>{_fmt(xmax)}</text>'
    )
    out.append(f'<text x="4" y="{_MARGIN + inner}" {label}>{_fmt(ymin)}i</text>')
    out.append(f'<text x="4" y="{_MARGIN + 10}" {label}>{_fmt(ymax)}i</text>')
    r = _fmt(point_radius(len(pts)))
    out.append('<g fill="#1f3b73" fill-opacity="0.8">')
    for z in pts:
        x, y = px(z)
        out.append(f'<circle class="root" cx="{_fmt(x)}" cy="{_fmt(y)}" r="{r}"/>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
