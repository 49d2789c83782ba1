"""Regular coverings, restrictions, and the f-regularity test along the x1 axis."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import PreconditionError
from ..fixtures import Covering
from ..geometry import BBox, Grid, Region, union_all
from .regularity import (
    DEFAULT_LADDER,
    Kind,
    RegularityVerdict,
    Witness,
    classify,
    judge_one_regular,
    line_distances,
    vacuous_verdict,
)


@dataclass(frozen=True)
class RegularCoveringReport:
    regular: bool
    prefixes: tuple[RegularityVerdict, ...]

    def __bool__(self):
        return self.regular

    def to_json(self):
        return {"regular": self.regular, "prefixes": [v.to_json() for v in self.prefixes]}


def check_resolutions(resolutions: Sequence[int]) -> list[int]:
    res = [int(n) for n in resolutions]
    if len(res) < 3 or any(b <= a for a, b in zip(res, res[1:])):
        raise PreconditionError("resolutions must be strictly increasing with at least three entries")
    return res


def check_regular_covering(
    ordered: Sequence[Region], ambient: Region, resolutions: Sequence[int] = DEFAULT_LADDER
) -> RegularCoveringReport:
    """Judge every prefix {U_1..U_k}; regular iff all are Bounded."""
    res = check_resolutions(resolutions)
    verdicts = tuple(judge_one_regular(ordered[:k], ambient, res) for k in range(1, len(ordered) + 1))
    return RegularCoveringReport(all(v.kind is Kind.BOUNDED for v in verdicts), verdicts)


def restrict_covering(v: Region, covering: Covering) -> Covering:
    members = tuple((v & m).labelled(f"{v.label}&{m.label}") if v.label and m.label else v & m for m in covering.members)
    return Covering(members, v & covering.ambient, f"{covering.name}|{v.label or 'V'}")


def judge_covering(covering: Covering, resolutions: Sequence[int] = DEFAULT_LADDER) -> RegularityVerdict:
    return judge_one_regular(covering.members, covering.ambient, check_resolutions(resolutions), vacuous_ok=True)


def closure_covering_restrict(
    v: Region, cover_of_closure: Sequence[Region], resolutions: Sequence[int] = DEFAULT_LADDER
) -> RegularityVerdict:
    """Judge {V & U_i} after checking that the one-cell closure of V lies in the union of the U_i."""
    res = check_resolutions(resolutions)
    for n in res:
        grid = Grid(v.bbox, n)
        closure = v.rasterize(grid).dilate()
        union = union_all([u.rasterize(grid) for u in cover_of_closure], grid)
        if not closure.subset_of(union):
            j, i = np.argwhere(closure.bits & ~union.bits)[0]
            raise PreconditionError(
                f"closure of v is not covered at resolution {n}; first uncovered cell {grid.center(int(j), int(i))}"
            )
    return judge_one_regular([v & u for u in cover_of_closure], v, res, vacuous_ok=True)


def _axis_ratios(v: Region, grid: Grid):
    inside = np.array([v.contains((x, 0)) for x in grid.xs_exact])
    if not inside.any():
        return None
    xs = grid.xs
    out_pts = xs[~inside]
    if out_pts.size:
        d_axis = np.abs(xs[:, None] - out_pts[None, :]).min(axis=1)
    else:
        d_axis = np.full(xs.shape, grid.bbox.empty_convention)
    d_cells = line_distances(v.rasterize(grid), 0.0)
    if out_pts.size:
        d_cells = np.minimum(d_cells, d_axis)
    d_axis, d_cells = _refine_near(v, grid, inside, d_axis, d_cells)
    keep = inside & (d_cells > 0)
    return xs[keep], d_axis[keep] / d_cells[keep], d_cells[keep]


REFINE_CELLS = 2


def _refine_near(v: Region, grid: Grid, inside: np.ndarray, d_axis: np.ndarray, d: np.ndarray):
    """Both distances again, on a local lattice, at axis points within REFINE_CELLS cells of N \\ V.

    Cell centres cannot see a gap thinner than half a cell.  The local lattice has
    spacing of order h^2 and a row on the axis, so a gap that closes polynomially
    at the axis is measured rather than rounded up to the grid.
    """
    step = min(grid.dx, grid.dy)
    half = (REFINE_CELLS + 1) * step
    cells = 2 * (REFINE_CELLS + 1) * max(grid.resolution // 8, 4) + 1  # odd: a row and a column through x
    d_axis, d = d_axis.copy(), d.copy()
    box = v.bbox
    for i in np.nonzero(inside & (d <= REFINE_CELLS * grid.cell_width))[0]:
        x = grid.xs_exact[i]
        lo1, hi1 = max(x - half, box.x1min), min(x + half, box.x1max)
        window = Grid(BBox(lo1, hi1, max(-half, box.x2min), min(half, box.x2max)), cells)
        outside = ~Region(v.predicate, window.bbox).rasterize(window).bits
        if not outside.any():
            continue
        xx, yy = window.mesh
        d[i] = min(d[i], float(np.hypot(xx[outside] - float(x), yy[outside]).min()))
        row = int(np.argmin(np.abs(window.ys)))
        if window.ys[row] == 0 and outside[row].any():
            d_axis[i] = min(d_axis[i], float(np.abs(window.xs[outside[row]] - float(x)).min()))
    return d_axis, d


def f_regular_test(v: Region, resolutions: Sequence[int] = DEFAULT_LADDER) -> RegularityVerdict:
    """Ratio d_axis(x, axis \\ V) / d(x, N \\ V) at sample points x of the axis {x2 = 0} inside V.

    N \\ V is sampled by the complement cells together with the axis samples outside V,
    so that a slit along the axis is seen by the grid.
    """
    res = check_resolutions(resolutions)
    sups, wits = [], []
    for n in res:
        grid = Grid(v.bbox, n)
        data = _axis_ratios(v, grid)
        if data is None:
            return vacuous_verdict(res)
        xs, ratio, dn = data
        k = int(np.argmax(ratio))
        sups.append(float(ratio[k]))
        wits.append(Witness(n, (float(xs[k]), 0.0), float(ratio[k]), float(dn[k])))
    kind, growth = classify(sups, res, wits)
    return RegularityVerdict(kind, tuple(zip(res, sups)), tuple(wits), growth)
