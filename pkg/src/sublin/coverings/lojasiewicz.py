"""Fit of the Lojasiewicz-type inequality d(x, M \\ U)^N <= C max_i d(x, M \\ U_i)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import InconclusiveError, PreconditionError
from ..geometry import Grid, Region, distance_to_complement, union_all
from .regularity import DEFAULT_LADDER, uses_frame

BAND_FRACTION = 0.2
FLOOR_CELLS = 2.0
MIN_SAMPLES = 20
BINS_PER_OCTAVE = 4


@dataclass(frozen=True)
class LojasiewiczFit:
    exponent: float
    constant: float
    r2: float
    points: tuple[tuple[float, float], ...]

    def to_json(self):
        return {
            "N": self.exponent,
            "C": self.constant,
            "r2": self.r2,
            "envelope": [list(p) for p in self.points],
        }


def _envelope(d, m, lo, hi, floor) -> dict[int, tuple[float, float]]:
    """Worst sample (least m/d) per geometric bin of d, as an actual (d, m) pair.

    Bins whose worst sample sits within ``floor`` of zero are dropped.
    """
    keep = (d > lo) & (d < hi)
    d, m = d[keep], m[keep]
    if d.size == 0:
        return {}
    idx = np.floor(np.log2(d) * BINS_PER_OCTAVE).astype(int)
    out = {}
    for b in np.unique(idx):
        sel = np.nonzero(idx == b)[0]
        k = sel[np.argmin(m[sel] / d[sel])]
        if m[k] >= floor:
            out[int(b)] = (float(d[k]), float(m[k]))
    return out


def fit_lojasiewicz(
    members: Sequence[Region],
    ambient: Region,
    resolutions: Sequence[int] = DEFAULT_LADDER,
) -> LojasiewiczFit:
    """Least-squares slope N of log m against log d, m = max_i d(x, M \\ U_i), d = d(x, M \\ U).

    The slope of the worst-case envelope is the exponent itself (m ~ d^N).
    Distances lose half a cell (midpoint correction); in each geometric bin of d
    the sample with least m/d is kept, bins whose kept m lies within
    ``FLOOR_CELLS`` cells of zero are dropped, and bins are pooled across
    resolutions by the same least-ratio rule.  C is the smallest constant with
    d^N <= C m on every pooled sample.
    """
    bbox = ambient.bbox
    pooled: dict[int, tuple[float, float]] = {}
    samples = 0
    for n in sorted(resolutions):
        grid = Grid(bbox, n)
        amb = ambient.rasterize(grid)
        masks = [m.rasterize(grid) for m in members]
        union = union_all(masks, grid)
        if union != amb:
            raise PreconditionError("members do not cover the ambient set")
        frame = uses_frame(amb)
        h = grid.cell_width
        du = distance_to_complement(union, frame).corrected()
        dm = np.max([distance_to_complement(m, frame).corrected() for m in masks], axis=0)
        sel = union.bits
        hi = BAND_FRACTION * bbox.diameter
        env = _envelope(du[sel], dm[sel], h, hi, FLOOR_CELLS * h)
        samples += int((sel & (du > h) & (du < hi) & (dm >= FLOOR_CELLS * h)).sum())
        for b, (dv, mv) in env.items():
            if b not in pooled or mv / dv < pooled[b][1] / pooled[b][0]:
                pooled[b] = (dv, mv)
    if samples < MIN_SAMPLES or len(pooled) < 3:
        raise InconclusiveError(f"only {samples} usable samples in {len(pooled)} bins")
    bins = sorted(pooled)
    logd = np.log([pooled[b][0] for b in bins])
    logm = np.log([pooled[b][1] for b in bins])
    pts = tuple(pooled[b] for b in bins)
    if all(d == m for d, m in pts):
        # a single member, or members one of which is the union: exact identity
        return LojasiewiczFit(1.0, 1.0, 1.0, pts)
    slope, icpt = np.polyfit(logd, logm, 1)
    resid = logm - (slope * logd + icpt)
    ss = float(((logm - logm.mean()) ** 2).sum())
    r2 = 1.0 - float((resid**2).sum()) / ss if ss > 0 else 1.0
    # C making d^N <= C m hold on every pooled bin
    const = float(np.max(np.exp(slope * logd - logm)))
    return LojasiewiczFit(float(slope), const, r2, pts)
