"""Empirical 1-regularity: sup over cells of d(x, M \\ U) / max_i d(x, M \\ U_i)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import DomainError
from ..geometry import Grid, Mask, Region, distance_to_complement, union_all
from ..geometry.grid import BBox

BOUNDED_GROWTH = 1.25
DIVERGING_GROWTH = 1.6
DEFAULT_LADDER = (64, 128, 256)


class Kind(str, enum.Enum):
    BOUNDED = "Bounded"
    DIVERGING = "Diverging"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Witness:
    resolution: int
    point: tuple[float, float]
    ratio: float
    boundary_distance: float

    def to_json(self):
        return {
            "resolution": self.resolution,
            "point": list(self.point),
            "ratio": self.ratio,
            "boundary_distance": self.boundary_distance,
        }


@dataclass(frozen=True)
class RegularityVerdict:
    kind: Kind
    c_estimates: tuple[tuple[int, float], ...]
    witnesses: tuple[Witness, ...]
    growth: float | None
    exponent_fit: dict | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def c_est(self) -> float:
        return self.c_estimates[-1][1]

    def to_json(self):
        return {
            "kind": self.kind.value,
            "c_estimates": [{"resolution": n, "sup_ratio": c} for n, c in self.c_estimates],
            "witnesses": [w.to_json() for w in self.witnesses],
            "growth": self.growth,
            "exponent_fit": self.exponent_fit,
            "notes": list(self.notes),
        }


@dataclass(frozen=True, eq=False)
class RegularityProfile:
    """Cellwise data behind a sup-ratio: only in-union cells with max_i d_i > 0."""

    grid: Grid
    cells: np.ndarray  # (k, 2) of (j, i)
    ratios: np.ndarray
    d_union: np.ndarray
    d_max: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.grid.xs[self.cells[:, 1]], self.grid.ys[self.cells[:, 0]]])

    def __iter__(self):
        for p, r in zip(self.points, self.ratios):
            yield (float(p[0]), float(p[1])), float(r)

    def __len__(self):
        return len(self.ratios)

    def sup(self) -> Witness:
        k = int(np.argmax(self.ratios))
        x, y = self.points[k]
        return Witness(self.grid.resolution, (float(x), float(y)), float(self.ratios[k]), float(self.d_union[k]))


def uses_frame(ambient: Mask) -> bool:
    """Cells outside the bbox count as complement only when the ambient fills the bbox."""
    return ambient.is_full()


def profile_from_masks(members: Sequence[Mask], frame: bool) -> RegularityProfile:
    grid = members[0].grid
    union = union_all(members, grid)
    if union.is_empty():
        raise DomainError("the union of the members is empty")
    d_union = distance_to_complement(union, frame).values
    d_max = np.zeros(grid.shape)
    for m in members:
        np.maximum(d_max, distance_to_complement(m, frame).values, out=d_max)
    sel = union.bits & (d_max > 0)
    cells = np.argwhere(sel)
    du, dm = d_union[sel], d_max[sel]
    return RegularityProfile(grid, cells, du / dm, du, dm)


def regularity_profile(members: Sequence[Region], ambient: Region, grid: Grid) -> RegularityProfile:
    masks = [m.rasterize(grid) for m in members]
    return profile_from_masks(masks, uses_frame(ambient.rasterize(grid)))


def _normalised_growth(sups: list[float], resolutions: list[int]) -> float | None:
    """Growth of the sup-ratio over the last two doublings, rescaled to a 4x span."""
    if len(sups) < 2:
        return None
    window = [k for k in range(len(resolutions)) if resolutions[k] * 4 >= resolutions[-1]]
    first = window[0] if len(window) > 1 else len(resolutions) - 2
    span = resolutions[-1] / resolutions[first]
    if sups[first] <= 0:
        return math.inf if sups[-1] > 0 else 1.0
    return (sups[-1] / sups[first]) ** (math.log(4) / math.log(span))


def classify(
    sups: list[float],
    resolutions: list[int],
    witnesses: list[Witness] | None = None,
    bounded: float = BOUNDED_GROWTH,
    diverging: float = DIVERGING_GROWTH,
) -> tuple[Kind, float | None]:
    growth = _normalised_growth(sups, resolutions)
    if growth is None:
        return Kind.INCONCLUSIVE, None
    if growth < bounded:
        return Kind.BOUNDED, growth
    if growth > diverging:
        if witnesses is None:
            return Kind.DIVERGING, growth
        tail = [w.boundary_distance for w in witnesses if w.resolution * 4 >= resolutions[-1]]
        if len(tail) >= 2 and all(b < a for a, b in zip(tail, tail[1:])):
            return Kind.DIVERGING, growth
    return Kind.INCONCLUSIVE, growth


def judge_masks(per_resolution: Sequence[Sequence[Mask]], frames: Sequence[bool]) -> RegularityVerdict:
    """Judge from member masks given at each resolution of a ladder (ascending)."""
    sups, wits, res = [], [], []
    for masks, frame in zip(per_resolution, frames):
        w = profile_from_masks(masks, frame).sup()
        res.append(w.resolution)
        sups.append(w.ratio)
        wits.append(w)
    kind, growth = classify(sups, res, wits)
    return RegularityVerdict(kind, tuple(zip(res, sups)), tuple(wits), growth)


def vacuous_verdict(resolutions: Sequence[int]) -> RegularityVerdict:
    return RegularityVerdict(
        Kind.BOUNDED, tuple((int(n), 1.0) for n in resolutions), (), 1.0,
        notes=("all members empty: bounded vacuously",),
    )


def judge_one_regular(
    members: Sequence[Region],
    ambient: Region,
    resolutions: Sequence[int] = DEFAULT_LADDER,
    *,
    vacuous_ok: bool = False,
) -> RegularityVerdict:
    resolutions = sorted(int(n) for n in resolutions)
    bbox: BBox = ambient.bbox
    per, frames = [], []
    for n in resolutions:
        grid = Grid(bbox, n)
        masks = [m.rasterize(grid) for m in members]
        if vacuous_ok and all(m.is_empty() for m in masks):
            return vacuous_verdict(resolutions)
        per.append(masks)
        frames.append(uses_frame(ambient.rasterize(grid)))
    return judge_masks(per, frames)


def line_distances(mask: Mask, x2: float, frame: bool = False) -> np.ndarray:
    """Distance from each point (xs[i], x2) on a horizontal line to the complement cells of ``mask``."""
    grid = mask.grid
    comp = ~mask.bits
    gap = np.where(comp, np.abs(grid.ys - x2)[:, None], np.inf).min(axis=0)
    if frame:
        below, above = float(grid.bbox.x2min) - 0.5 * float(grid.dy), float(grid.bbox.x2max) + 0.5 * float(grid.dy)
        gap = np.minimum(gap, min(abs(x2 - below), abs(above - x2)))
    d2 = (grid.xs[:, None] - grid.xs[None, :]) ** 2 + gap[None, :] ** 2
    out = np.sqrt(d2.min(axis=1))
    if frame:
        left = grid.xs - (float(grid.bbox.x1min) - 0.5 * float(grid.dx))
        right = (float(grid.bbox.x1max) + 0.5 * float(grid.dx)) - grid.xs
        out = np.minimum(out, np.minimum(left, right))
    if not np.isfinite(out).all():
        out = np.where(np.isfinite(out), out, grid.bbox.empty_convention)
    return out


@dataclass(frozen=True)
class AxisProfile:
    x1: np.ndarray
    ratio: np.ndarray
    slope: float | None
    window: tuple[float, float]

    def to_json(self):
        return {"slope": self.slope, "window": list(self.window), "samples": int(len(self.x1))}


def axis_ratio_profile(members: Sequence[Region], ambient: Region, grid: Grid, x2: float = 0.0) -> AxisProfile:
    """Regularity ratio at true points of the line {x2 = const}, with half-cell corrected distances.

    The slope is fitted on log ratio against log x1 over the resolved band
    2*sqrt(h) < x1 < 0.2 * diameter, where a parabolic gap spans at least four cells.
    """
    masks = [m.rasterize(grid) for m in members]
    frame = uses_frame(ambient.rasterize(grid))
    h = grid.cell_width
    union = union_all(masks, grid)
    du = line_distances(union, x2, frame) - 0.5 * h
    dm = np.max([line_distances(m, x2, frame) for m in masks], axis=0) - 0.5 * h
    keep = (du > 0) & (dm > 0) & (grid.xs > 0)
    x1, ratio = grid.xs[keep], du[keep] / dm[keep]
    lo, hi = 2 * math.sqrt(h), 0.2 * grid.bbox.diameter
    band = (x1 > lo) & (x1 < hi)
    slope = None
    if band.sum() >= 3:
        slope = float(np.polyfit(np.log(x1[band]), np.log(ratio[band]), 1)[0])
    return AxisProfile(x1, ratio, slope, (lo, hi))
