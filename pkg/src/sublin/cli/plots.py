"""SVG overlays of region boundaries and witness points."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..geometry import Mask

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
SIZE = 512


def _edges(mask: Mask) -> list[tuple[float, float, float, float]]:
    """Unit segments between in and out cells, in cell coordinates (off-grid is out)."""
    b = np.pad(mask.bits, 1, constant_values=False)
    segs = []
    vert = np.argwhere(b[1:-1, 1:] != b[1:-1, :-1])  # between columns i-1 and i
    for j, i in vert:
        segs.append((float(i), float(j), float(i), float(j + 1)))
    horiz = np.argwhere(b[1:, 1:-1] != b[:-1, 1:-1])  # between rows j-1 and j
    for j, i in horiz:
        segs.append((float(i), float(j), float(i + 1), float(j)))
    return segs


def overlay_svg(
    masks: Sequence[tuple[str, Mask]],
    points: Iterable[tuple[str, tuple[float, float]]] = (),
    title: str = "",
) -> str:
    """Boundaries of each mask in its own colour, points as labelled dots."""
    if not masks:
        raise ValueError("nothing to draw")
    grid = masks[0][1].grid
    n = grid.resolution
    scale = SIZE / n
    x0, y0 = float(grid.bbox.x1min), float(grid.bbox.x2min)
    dx, dy = float(grid.dx), float(grid.dy)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE + 24}" '
        f'viewBox="0 0 {SIZE} {SIZE + 24}">',
        f'<rect width="{SIZE}" height="{SIZE}" fill="white" stroke="#999"/>',
    ]
    if title:
        out.append(f'<text x="4" y="{SIZE + 18}" font-size="14" font-family="monospace">{title}</text>')
    for k, (name, m) in enumerate(masks):
        colour = PALETTE[k % len(PALETTE)]
        path = "".join(
            f"M{a * scale:.2f},{SIZE - b * scale:.2f}L{c * scale:.2f},{SIZE - d * scale:.2f}"
            for a, b, c, d in _edges(m)
        )
        out.append(f'<path d="{path}" stroke="{colour}" stroke-width="1.5" fill="none"><title>{name}</title></path>')
    for label, (x, y) in points:
        px = (x - x0) / dx * scale
        py = SIZE - (y - y0) / dy * scale
        out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="4" fill="black"><title>{label}</title></circle>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
