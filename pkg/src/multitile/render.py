"""Deterministic SVG drawings of tiling patches.

Coordinates are rounded to six decimals only here; the output depends on
nothing but the patch and the style, so identical inputs give identical bytes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .wheels import Patch


@dataclass(frozen=True)
class SvgStyle:
    fill: str = "#3b6ea5"
    fill_opacity: str = "0.12"
    stroke: str = "#1d2b3a"
    stroke_width: str = "0.02"
    mark_lattice: bool = False
    point_radius: str = "0.05"


def _num(x: Fraction) -> str:
    s = f"{float(x):.6f}"
    return "0.000000" if s == "-0.000000" else s


def render_svg(patch: Patch, style: SvgStyle = SvgStyle()) -> str:
    """One ``<path>`` per translate; the y axis points up as in the plane."""
    w = patch.window
    width, height = w.xmax - w.xmin, w.ymax - w.ymin
    # flip y: an SVG point (x, -y) inside viewBox starting at (xmin, -ymax)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        (
            '<svg xmlns="http://www.w3.org/2000/svg" '
            f'viewBox="{_num(w.xmin)} {_num(-w.ymax)} {_num(width)} {_num(height)}" '
            f'width="{_num(width * 100)}" height="{_num(height * 100)}">'
        ),
        (
            f'<g fill="{style.fill}" fill-opacity="{style.fill_opacity}" '
            f'stroke="{style.stroke}" stroke-width="{style.stroke_width}" stroke-linejoin="round">'
        ),
    ]
    for t in patch.translations:
        pts = [p + t for p in patch.polygon.vertices]
        d = "M " + " L ".join(f"{_num(p.x)} {_num(-p.y)}" for p in pts) + " Z"
        lines.append(f'<path d="{d}"/>')
    lines.append("</g>")
    if style.mark_lattice:
        lines.append(f'<g fill="{style.stroke}">')
        for t in patch.translations:
            lines.append(f'<circle cx="{_num(t.x)}" cy="{_num(-t.y)}" r="{style.point_radius}"/>')
        lines.append("</g>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
