"""Cone-condition certificates: gamma-openness of U near boundary points, across resolutions.

U is gamma-open in W when W & ((U & W) + gamma) lies in U.  On a grid this reads:
no cell y of U & W has a cone step v with y + v in W \\ U.  Cells outside the grid
count as complement.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import ndimage

from ..errors import ConfigurationError
from ..geometry import Grid, Mask
from .cones import RADIUS_DIAGONALS, ConeSpec, cone_steps, default_fan, default_radius

DEFAULT_RESOLUTIONS = (64, 128, 256)
DEFAULT_SAMPLES = 48


class Verdict(str, enum.Enum):
    CERTIFIED = "Certified"
    REFUTED = "ConeConditionRefuted"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True, eq=False)
class _Patches:
    """Square windows around each point: U bits (off-grid False) and the ball W."""

    inside: np.ndarray  # (P, H, W) bool
    ball: np.ndarray  # (P, H, W) bool


def _mask_of(u, grid: Grid) -> Mask:
    return u if isinstance(u, Mask) else u.rasterize(grid)


def _patches(mask: Mask, points: np.ndarray, radius) -> _Patches:
    """``radius`` is a scalar or one radius per point."""
    grid = mask.grid
    dx, dy = float(grid.dx), float(grid.dy)
    radius = np.broadcast_to(np.asarray(radius, dtype=float), (len(points),))
    top = float(radius.max()) if len(points) else 0.0
    hi, hj = int(math.ceil(top / dx)) + 1, int(math.ceil(top / dy)) + 1
    x0, y0 = float(grid.bbox.x1min), float(grid.bbox.x2min)
    ci = np.floor((points[:, 0] - x0) / dx).astype(int)
    cj = np.floor((points[:, 1] - y0) / dy).astype(int)
    oi, oj = np.arange(-hi, hi + 1), np.arange(-hj, hj + 1)
    ii = ci[:, None, None] + oi[None, None, :]
    jj = cj[:, None, None] + oj[None, :, None]
    ny, nx = grid.shape
    on_grid = (ii >= 0) & (ii < nx) & (jj >= 0) & (jj < ny)
    bits = mask.bits[np.clip(jj, 0, ny - 1), np.clip(ii, 0, nx - 1)] & on_grid
    cx = x0 + (ii + 0.5) * dx
    cy = y0 + (jj + 0.5) * dy
    ball = (cx - points[:, 0, None, None]) ** 2 + (cy - points[:, 1, None, None]) ** 2 <= radius[:, None, None] ** 2
    return _Patches(bits, ball)


def _open_in_patches(p: _Patches, steps: np.ndarray) -> np.ndarray:
    """Per patch: True when no in-U cell of W steps along the cone onto W \\ U."""
    bad = p.ball & ~p.inside
    if len(steps) == 0:
        return np.ones(len(bad), dtype=bool)
    reach = int(np.abs(steps).max())
    struct = np.zeros((1, 2 * reach + 1, 2 * reach + 1), dtype=bool)
    # dilation by -S marks y whenever bad[y + v] for a step v in S
    struct[0, reach - steps[:, 1], reach - steps[:, 0]] = True
    hit = ndimage.binary_dilation(bad, structure=struct)
    return ~(hit & p.inside & p.ball).any(axis=(1, 2))


def gamma_open_at(u, x, gamma: ConeSpec, neighborhood_radius: float | None, grid: Grid) -> bool:
    """W ∩ ((U ∩ W) + gamma) inside U, for W = B(x, radius).

    The default radius is the certificate's: 8 cell diagonals plus the distance
    from x to the raster.
    """
    mask = _mask_of(u, grid)
    pt = np.array([[float(x[0]), float(x[1])]])
    if neighborhood_radius is None:
        radius = default_radius(grid) + float(_gap(mask, pt)[0])
    else:
        radius = float(neighborhood_radius)
    p = _patches(mask, pt, radius)
    return bool(_open_in_patches(p, cone_steps(gamma, grid, 2 * radius))[0])


def gamma_open_batch(mask: Mask, points: np.ndarray, gamma: ConeSpec, radius: float) -> np.ndarray:
    return _open_in_patches(_patches(mask, points, radius), cone_steps(gamma, mask.grid, 2 * radius))


def boundary_cells(mask: Mask) -> np.ndarray:
    """(j, i) of cells of the mask with an 8-neighbour outside it (off-grid included)."""
    padded = np.pad(mask.bits, 1, constant_values=False)
    eroded = ndimage.binary_erosion(padded, structure=np.ones((3, 3), bool), border_value=0)[1:-1, 1:-1]
    return np.argwhere(mask.bits & ~eroded)


def sample_boundary(mask: Mask, count: int) -> np.ndarray:
    """Up to ``count`` boundary cell centres, evenly spaced in raster order."""
    cells = boundary_cells(mask)
    if len(cells) == 0:
        return np.zeros((0, 2))
    if len(cells) > count:
        cells = cells[np.linspace(0, len(cells) - 1, count).round().astype(int)]
    g = mask.grid
    return np.column_stack([g.xs[cells[:, 1]], g.ys[cells[:, 0]]])


@dataclass(frozen=True)
class PointRecord:
    point: tuple[float, float]
    status: Verdict
    cone: ConeSpec | None  # widest passing cone, when certified
    failing_resolutions: tuple[int, ...] = ()

    def to_json(self):
        return {
            "point": list(self.point),
            "status": self.status.value,
            "cone": self.cone.to_json() if self.cone else None,
            "failing_resolutions": list(self.failing_resolutions),
        }


@dataclass(frozen=True)
class LipschitzCertificate:
    verdict: Verdict
    records: tuple[PointRecord, ...]
    resolutions: tuple[int, ...]
    method: str = "ConeCondition"
    notes: tuple[str, ...] = field(default=())

    def refuted_at(self, point, tol: float = 1e-12) -> bool:
        return any(
            r.status is Verdict.REFUTED and math.dist(r.point, point) <= tol for r in self.records
        )

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "method": self.method,
            "resolutions": list(self.resolutions),
            "records": [r.to_json() for r in self.records],
            "notes": list(self.notes),
        }


def _group_fan(fan: Sequence[ConeSpec]) -> dict[tuple[float, float], list[float]]:
    groups: dict[tuple[float, float], list[float]] = {}
    for c in fan:
        key = (round(c.direction[0], 12), round(c.direction[1], 12))
        groups.setdefault(key, []).append(c.half_angle)
    return {k: sorted(v) for k, v in groups.items()}


def lipschitz_certificate(
    u,
    boundary_sample_count: int = DEFAULT_SAMPLES,
    cone_fan: Sequence[ConeSpec] | None = None,
    resolutions: Sequence[int] = DEFAULT_RESOLUTIONS,
    *,
    points: Sequence | None = None,
    neighborhood_diagonals: float | None = None,
) -> LipschitzCertificate:
    """Search the fan for a cone at every sampled boundary point, at every resolution.

    ``u`` is anything with ``bbox`` and ``rasterize(grid)``.  Boundary points are
    cell centres of the coarsest raster; ``points`` adds further points.
    Existence is settled by the narrowest cone of each direction (a wider cone
    contains it), then the first passing direction is widened as far as the fan allows.
    The neighbourhood W has radius 8 cell diagonals plus the distance from the
    point to the raster, so that a point the raster has not yet reached (the tip
    of a cusp) is judged on cells that are actually there.
    """
    res = sorted(int(n) for n in resolutions)
    if not res:
        raise ConfigurationError("need at least one resolution")
    fan = list(cone_fan) if cone_fan is not None else default_fan()
    groups = _group_fan(fan)
    grids = [Grid(u.bbox, n) for n in res]
    masks = [_mask_of(u, g) for g in grids]
    if all(m.is_empty() for m in masks):
        return LipschitzCertificate(Verdict.CERTIFIED, (), tuple(res), notes=("empty set",))
    pts = sample_boundary(masks[0], boundary_sample_count)
    if points is not None:
        pts = np.vstack([pts, np.asarray(points, dtype=float).reshape(-1, 2)])
    base = RADIUS_DIAGONALS if neighborhood_diagonals is None else float(neighborhood_diagonals)
    radii = [base * g.cell_diagonal + _gap(m, pts) for g, m in zip(grids, masks)]
    patches = [_patches(m, pts, rad) for m, rad in zip(masks, radii)]

    def open_everywhere(cone: ConeSpec, which: np.ndarray) -> np.ndarray:
        ok = np.ones(len(which), dtype=bool)
        for g, p, rad in zip(grids, patches, radii):
            sub = _Patches(p.inside[which], p.ball[which])
            ok &= _open_in_patches(sub, cone_steps(cone, g, 2 * float(rad[which].max())))
        return ok

    dirs = list(groups)
    everyone = np.arange(len(pts))
    # passes[r, k, q]: the narrowest cone of direction k is open at point q on resolution r
    passes = np.zeros((len(res), len(dirs), len(pts)), dtype=bool)
    for r, (g, p, rad) in enumerate(zip(grids, patches, radii)):
        for k, d in enumerate(dirs):
            passes[r, k] = _open_in_patches(p, cone_steps(ConeSpec(d, groups[d][0]), g, 2 * float(rad.max())))
    everywhere = passes.all(axis=0)  # (dirs, points)

    # widen, per direction, the points whose first passing direction it is
    first = np.where(everywhere.any(axis=0), everywhere.argmax(axis=0), -1)
    widest = {q: groups[dirs[first[q]]][0] for q in everyone if first[q] >= 0}
    for k, d in enumerate(dirs):
        live = everyone[first == k]
        for a in groups[d][1:]:
            if len(live) == 0:
                break
            ok = open_everywhere(ConeSpec(d, a), live)
            for q in live[ok]:
                widest[int(q)] = a
            live = live[ok]

    records = []
    for q, pt in enumerate(pts):
        point = (float(pt[0]), float(pt[1]))
        if first[q] >= 0:
            records.append(PointRecord(point, Verdict.CERTIFIED, ConeSpec(dirs[first[q]], widest[q])))
        else:
            failing = tuple(n for r, n in enumerate(res) if not passes[r, :, q].any())
            status = Verdict.REFUTED if _persists(failing, res) else Verdict.INCONCLUSIVE
            records.append(PointRecord(point, status, None, failing))
    statuses = {r.status for r in records}
    if Verdict.REFUTED in statuses:
        verdict = Verdict.REFUTED
    elif statuses <= {Verdict.CERTIFIED}:
        verdict = Verdict.CERTIFIED
    else:
        verdict = Verdict.INCONCLUSIVE
    return LipschitzCertificate(verdict, tuple(records), tuple(res))


def _persists(failing: tuple[int, ...], res: list[int]) -> bool:
    """Failure on every rung from some resolution up to the finest, two rungs at least."""
    tail = 0
    for n in reversed(res):
        if n not in failing:
            break
        tail += 1
    return tail >= min(2, len(res))


def _gap(mask: Mask, points: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest cell centre of the mask (0 on the mask)."""
    g = mask.grid
    cells = mask.cells()
    if len(cells) == 0 or len(points) == 0:
        return np.zeros(len(points))
    cx, cy = g.xs[cells[:, 1]], g.ys[cells[:, 0]]
    out = np.empty(len(points))
    for q, (x, y) in enumerate(points):
        out[q] = np.sqrt(((cx - x) ** 2 + (cy - y) ** 2).min())
    out[out < 1e-12] = 0.0
    return out
