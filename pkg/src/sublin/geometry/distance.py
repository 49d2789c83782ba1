"""Exact squared Euclidean distance transform on anisotropic cell grids.

Separable two-pass scheme (column scan, then lower envelope of parabolas per
row, after Felzenszwalb and Huttenlocher).  All arithmetic is in integers: a
squared distance is stored in units u with dx^2 = wx*u and dy^2 = wy*u.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np

from .grid import Grid
from .region import Mask

INF = np.int64(2**62)


def _column_pass(target: np.ndarray, wy: int) -> np.ndarray:
    rows = target.shape[0]
    idx = np.arange(rows, dtype=np.int64)[:, None]
    big = np.int64(4 * rows + 4)
    above = np.maximum.accumulate(np.where(target, idx, -big), axis=0)
    below = np.minimum.accumulate(np.where(target, idx, big)[::-1], axis=0)[::-1]
    gap = np.minimum(idx - above, below - idx)
    return np.where(gap < big, wy * gap * gap, INF)


def _envelope_rows(f: np.ndarray, wx: int) -> np.ndarray:
    """Row-wise min_q wx*(j-q)^2 + f[q], skipping entries equal to INF."""
    rows, cols = f.shape
    finite = f < INF
    v = np.zeros((rows, cols), dtype=np.int64)
    zn = np.zeros((rows, cols + 1), dtype=np.int64)
    zd = np.ones((rows, cols + 1), dtype=np.int64)
    k = np.full(rows, -1, dtype=np.int64)
    base = f.copy()
    base[~finite] = 0
    for q in range(cols):
        live = np.nonzero(finite[:, q])[0]
        if live.size == 0:
            continue
        started = k[live] >= 0
        fresh, pending = live[~started], live[started]
        k[fresh] = 0
        v[fresh, 0] = q
        fq = base[pending, q] + wx * q * q
        while pending.size:
            kk = k[pending]
            vk = v[pending, kk]
            num = fq - (base[pending, vk] + wx * vk * vk)
            den = 2 * wx * (q - vk)
            pop = (kk >= 1) & (num * zd[pending, kk] <= zn[pending, kk] * den)
            done = ~pop
            if done.any():
                r, kd = pending[done], kk[done] + 1
                k[r] = kd
                v[r, kd] = q
                zn[r, kd] = num[done]
                zd[r, kd] = den[done]
            k[pending[pop]] -= 1
            pending, fq = pending[pop], fq[pop]
    out = np.full((rows, cols), INF, dtype=np.int64)
    has = np.nonzero(k >= 0)[0]
    if has.size == 0:
        return out
    count = k[has] + 1
    cur = np.zeros(has.size, dtype=np.int64)
    for j in range(cols):
        while True:
            nxt = cur + 1
            ok = nxt < count
            sel = np.nonzero(ok)[0]
            adv = sel[zn[has[sel], nxt[sel]] < j * zd[has[sel], nxt[sel]]]
            if adv.size == 0:
                break
            cur[adv] += 1
        vk = v[has, cur]
        out[has, j] = wx * (j - vk) ** 2 + base[has, vk]
    return out


def squared_edt(target: np.ndarray, wx: int = 1, wy: int = 1, frame: bool = False) -> np.ndarray | None:
    """Squared distance (in units) from every cell to the nearest ``target`` cell.

    With ``frame`` the ring of virtual cells just outside the array also counts as
    target.  Returns None when there is no target at all.
    """
    target = np.asarray(target, dtype=bool)
    if frame:
        target = np.pad(target, 1, constant_values=True)
    if not target.any():
        return None
    n = max(target.shape)
    if 4 * (wx + wy) * max(wx, wy) * (n + 2) ** 3 >= 2**62:
        raise OverflowError("grid too large for int64 distance arithmetic")
    out = _envelope_rows(_column_pass(target, wy), wx)
    return out[1:-1, 1:-1] if frame else out


def squared_edt_bruteforce(target: np.ndarray, wx: int = 1, wy: int = 1, frame: bool = False):
    """Quadratic-time reference used as the oracle for :func:`squared_edt`."""
    target = np.asarray(target, dtype=bool)
    if frame:
        target = np.pad(target, 1, constant_values=True)
    pts = np.argwhere(target)
    if len(pts) == 0:
        return None
    jj, ii = np.indices(target.shape)
    best = np.full(target.shape, INF, dtype=np.int64)
    for pj, pi in pts:
        best = np.minimum(best, wy * (jj - pj) ** 2 + wx * (ii - pi) ** 2)
    return best[1:-1, 1:-1] if frame else best


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Distances from cell centres to a target set of cell centres.

    ``squared`` holds exact integers (units of ``grid.edt_weights[2]``) or is None
    when the target was empty; the float view then takes the empty convention.
    """

    grid: Grid
    squared: np.ndarray | None

    @property
    def empty(self) -> bool:
        return self.squared is None

    @property
    def values(self) -> np.ndarray:
        if self.squared is None:
            return np.full(self.grid.shape, self.grid.bbox.empty_convention)
        return np.sqrt(self.squared.astype(float) * self.grid.edt_weights[2])

    def corrected(self) -> np.ndarray:
        """Distances to the continuous boundary: positive values lose half a cell width."""
        vals = self.values
        if self.squared is None:
            return vals
        return np.where(vals > 0, vals - 0.5 * self.grid.cell_width, 0.0)

    def at(self, j: int, i: int) -> float:
        if self.squared is None:
            return self.grid.bbox.empty_convention
        return sqrt(float(self.squared[j, i]) * self.grid.edt_weights[2])


def _field(grid: Grid, target: np.ndarray, frame: bool) -> DistanceField:
    wx, wy, _ = grid.edt_weights
    return DistanceField(grid, squared_edt(target, wx, wy, frame))


def distance_to_complement(mask: Mask, frame: bool = False) -> DistanceField:
    """d(x, M \\ V) for every cell; with ``frame`` cells outside the bbox count as complement."""
    return _field(mask.grid, ~mask.bits, frame)


def distance_to_set(mask: Mask, frame: bool = False) -> DistanceField:
    return _field(mask.grid, mask.bits, frame)
