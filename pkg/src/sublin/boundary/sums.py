"""Minkowski sums U + gamma on a grid, and the weakly Lipschitz check."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Sequence

import numpy as np

from ..errors import PreconditionError
from ..geometry import BBox, Grid, Mask, Region, components, union_all
from .certificate import DEFAULT_RESOLUTIONS, DEFAULT_SAMPLES, LipschitzCertificate, Verdict, lipschitz_certificate
from .cones import ConeSpec

_TOL = 1e-12


def cone_sum_mask(mask: Mask, gamma: ConeSpec) -> Mask:
    """Cells z with z - y in gamma for some cell y of the mask.

    With n1, n2 the inward normals of gamma this is a dominance query: some y has
    <y, n1> <= <z, n1> and <y, n2> <= <z, n2>.  Sorting the mask cells by the first
    key and taking running minima of the second answers it for every z at once.
    """
    grid = mask.grid
    if mask.is_empty():
        return Mask.empty(grid)
    (a1, b1), (a2, b2) = gamma.inward_normals()
    xx, yy = grid.mesh
    k1, k2 = a1 * xx + b1 * yy, a2 * xx + b2 * yy
    src1, src2 = k1[mask.bits], k2[mask.bits]
    order = np.argsort(src1, kind="stable")
    s1, running = src1[order], np.minimum.accumulate(src2[order])
    idx = np.searchsorted(s1, k1 + _TOL, side="right")
    found = idx > 0
    best = np.where(found, running[np.maximum(idx - 1, 0)], np.inf)
    return Mask(grid, found & (best <= k2 + _TOL))


@dataclass(frozen=True)
class ConeSum:
    """The open set (U + gamma) & bbox, rasterized on demand."""

    base: object  # anything with bbox and rasterize
    gamma: ConeSpec

    @property
    def bbox(self) -> BBox:
        return self.base.bbox

    def rasterize(self, grid: Grid) -> Mask:
        return cone_sum_mask(self.base.rasterize(grid), self.gamma)


def cone_sum(u, gamma: ConeSpec, grid: Grid) -> Mask:
    return cone_sum_mask(u if isinstance(u, Mask) else u.rasterize(grid), gamma)


@dataclass(frozen=True)
class _Component:
    """One 4-connected component of a region, followed across resolutions by an anchor point."""

    region: Region
    anchor: tuple[float, float]

    @property
    def bbox(self) -> BBox:
        return self.region.bbox

    def rasterize(self, grid: Grid) -> Mask:
        m = self.region.rasterize(grid)
        lab = components(m, connectivity=4)
        j, i = grid.cell_of(self.anchor)
        k = int(lab.labels[j, i])
        if k == 0:
            return Mask.empty(grid)
        return lab.component(k)


@dataclass(frozen=True)
class WeaklyLipschitzReport:
    verdict: Verdict
    pieces: tuple[tuple[tuple[int, ...], int, LipschitzCertificate], ...]  # (J, component, certificate)

    def to_json(self):
        return {
            "verdict": self.verdict.value,
            "pieces": [
                {"J": list(j), "component": c, "certificate": cert.verdict.value} for j, c, cert in self.pieces
            ],
        }


def weakly_lipschitz_check(
    u: Region,
    decomposition: Sequence[Region],
    grid: Grid,
    *,
    resolutions: Sequence[int] | None = None,
    boundary_sample_count: int = DEFAULT_SAMPLES,
) -> WeaklyLipschitzReport:
    """Certify every component of every nonempty intersection U_J of the decomposition.

    Components are taken with 4-connectivity, so pieces meeting at a corner
    stay apart.  The ladder defaults to (n/4, n/2, n) for the grid's resolution n.
    """
    n = grid.resolution
    res = sorted(resolutions) if resolutions else [n // 4, n // 2, n]
    if not res or res[0] < 8:
        res = list(DEFAULT_RESOLUTIONS)
    if union_all([d.rasterize(grid) for d in decomposition], grid) != u.rasterize(grid):
        raise PreconditionError("the decomposition does not reproduce u at mask level")
    pieces = []
    for size in range(1, len(decomposition) + 1):
        for J in combinations(range(len(decomposition)), size):
            inter = decomposition[J[0]]
            for k in J[1:]:
                inter = inter & decomposition[k]
            m = inter.rasterize(grid)
            if m.is_empty():
                continue
            lab = components(m, connectivity=4)
            for c in range(1, lab.count + 1):
                j, i = np.argwhere(lab.labels == c)[0]
                anchor = grid.center(int(j), int(i))
                shape = _Component(inter, (float(anchor[0]), float(anchor[1])))
                cert = lipschitz_certificate(shape, boundary_sample_count, resolutions=res)
                pieces.append((J, c, cert))
    verdicts = {cert.verdict for _, _, cert in pieces}
    if verdicts <= {Verdict.CERTIFIED}:
        verdict = Verdict.CERTIFIED
    elif Verdict.REFUTED in verdicts:
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.INCONCLUSIVE
    return WeaklyLipschitzReport(verdict, tuple(pieces))
