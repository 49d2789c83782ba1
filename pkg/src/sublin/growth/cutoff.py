"""A cutoff psi that vanishes near Z1 \\ Z2 and equals 1 near Z2 \\ Z1.

psi = chi(d1 / (d1 + d2)) with d_i = d(x, Z_i) and chi a septic smoothstep from 0
on [0, 1/3] to 1 on [2/3, 1].  This quotient is not a regularized-distance
construction; the report checks the properties a cutoff must have, not how it was built.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np

from ..coverings.enlarge import additive_constant, separated_shrink
from ..coverings.regularity import DIVERGING_GROWTH
from ..errors import ConfigurationError, InconclusiveError, PreconditionError
from ..geometry import BBox, Grid, Mask, Region, distance_to_set
from .classes import GrowthReport, temperate_order_estimate
from .functions import FieldFunction

RESOLVED_DIAGONALS = 4.0
DERIVATIVE_SLACK = 1.3
_QUANTUM = 2.0**53


def smoothstep(t: np.ndarray) -> np.ndarray:
    """0 for t <= 0, 1 for t >= 1, C^3 in between."""
    t = np.clip(t, 0.0, 1.0)
    return t**4 * (35 - 84 * t + 70 * t**2 - 20 * t**3)


def chi(q: np.ndarray) -> np.ndarray:
    return smoothstep(3 * np.asarray(q, dtype=float) - 1)


ClosedSet = Region | Mask | Callable[[Grid], Mask]


def _closed(z: ClosedSet, grid: Grid) -> Mask:
    if isinstance(z, Mask):
        if z.grid != grid:
            raise ConfigurationError("a mask input only exists on its own grid")
        return z
    if isinstance(z, Region):
        return z.rasterize(grid)
    return z(grid)


def cutoff_field(z1: Mask, z2: Mask) -> np.ndarray:
    """psi on every cell, nan on Z1 & Z2.

    Distances are planar: Z1 and Z2 are given closed sets, so the bbox edge is no
    part of either.

    The smaller of the two quotients feeds chi and is snapped to multiples of
    2^-53, so that swapping Z1 and Z2 gives exactly 1 - psi.
    """
    d1 = distance_to_set(z1).values
    d2 = distance_to_set(z2).values
    total = d1 + d2
    both = z1.bits & z2.bits
    with np.errstate(all="ignore"):
        small = chi(np.minimum(d1, d2) / np.where(both, 1.0, total))
    small = np.round(small * _QUANTUM) / _QUANTUM
    psi = np.where(d1 <= d2, small, 1.0 - small)
    return np.where(both, np.nan, psi)


@dataclass(frozen=True)
class CutoffReport:
    additive_constant: float
    zero_plateau: bool
    one_plateau: bool
    growth: GrowthReport | None
    exponent_bounds: bool
    notes: tuple[str, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.zero_plateau and self.one_plateau and self.exponent_bounds

    def to_json(self):
        return {
            "passed": self.passed,
            "additive_constant": self.additive_constant,
            "zero_plateau": self.zero_plateau,
            "one_plateau": self.one_plateau,
            "exponent_bounds": self.exponent_bounds,
            "growth": self.growth.to_json() if self.growth else None,
            "notes": list(self.notes),
        }


def _plateau(psi: np.ndarray, own: Mask, other: Mask, value: float) -> bool:
    """psi == value on own \\ other, and on one-cell neighbourhoods of its resolved part.

    A point of own \\ other closer to the other set than a few cells has a
    plateau narrower than a cell, so only the point itself is checked there.
    """
    grid = own.grid
    core = own - other
    far = distance_to_set(other).values >= RESOLVED_DIAGONALS * grid.cell_diagonal
    resolved = Mask(grid, core.bits & far)
    region = (core | resolved.dilate()).bits & ~(own.bits & other.bits)
    return bool(np.all(psi[region] == value))


@dataclass(frozen=True, eq=False)
class _Domain:
    """M \\ (Z1 & Z2), rasterized per grid."""

    z1: ClosedSet
    z2: ClosedSet
    ambient: Region

    @property
    def bbox(self) -> BBox:
        return self.ambient.bbox

    def rasterize(self, grid: Grid) -> Mask:
        both = _closed(self.z1, grid) & _closed(self.z2, grid)
        return self.ambient.rasterize(grid) - both


def cutoff(
    z1: ClosedSet,
    z2: ClosedSet,
    u_ambient: Region,
    grid: Grid,
    *,
    resolutions: Sequence[int] | None = None,
    max_deriv: int = 3,
) -> tuple[np.ndarray, CutoffReport]:
    """psi on ``grid`` and a report on its plateaus and derivative growth.

    The report passes when psi is 0 and 1 on the two plateaus and every fitted
    exponent e_alpha stays within |alpha| + DERIVATIVE_SLACK.  The temperate class
    of psi is reported alongside; the distances have kinks on medial axes, so high
    derivatives may grow with refinement away from Z1 & Z2.

    Derivative growth needs the closed sets on a ladder (default n/4, n/2, n),
    so it is skipped for plain mask inputs.  On one grid the additive constant
    of d(x, Z1 & Z2) <= C (d1 + d2) is always finite; the inequality fails when
    C grows by more than the divergence factor at every step of the ladder, and
    then a PreconditionError names the worst cell.
    """
    m1, m2 = _closed(z1, grid), _closed(z2, grid)
    const, cell = additive_constant(m1, m2)
    on_ladder = not (isinstance(z1, Mask) or isinstance(z2, Mask))
    n = grid.resolution
    ladder = sorted(resolutions) if resolutions else [n // 4, n // 2, n]
    if on_ladder:
        grids = [Grid(u_ambient.bbox, r) for r in ladder]
        consts = [additive_constant(_closed(z1, g), _closed(z2, g))[0] for g in grids]
        if len(consts) > 1 and all(b > DIVERGING_GROWTH * a for a, b in zip(consts, consts[1:])):
            raise PreconditionError(
                f"additive constant grows along the ladder {[round(c, 3) for c in consts]}; "
                f"worst cell {grid.center(*cell) if cell else None}"
            )
    psi = cutoff_field(m1, m2)
    zero = _plateau(psi, m1, m2, 0.0)
    one = _plateau(psi, m2, m1, 1.0)
    notes = []
    growth = None
    bounds = True
    if m1 == m2:
        notes.append("Z1 = Z2: psi is 1/2 wherever it is defined")
    elif not on_ladder:
        notes.append("derivative growth needs the sets on a ladder; skipped for mask inputs")
    else:
        domain = _Domain(z1, z2, u_ambient)
        field_ = FieldFunction(
            lambda g: cutoff_field(_closed(z1, g), _closed(z2, g)),
            name="psi",
        )
        if any(domain.rasterize(g).is_empty() for g in grids):
            notes.append("Z1 & Z2 covers the ambient set; nothing to check")
        else:
            try:
                growth = temperate_order_estimate(field_, domain, max_deriv, ladder)
            except InconclusiveError as exc:
                notes.append(str(exc))
                bounds = False
            else:
                bounds = all(e.exponent <= sum(e.alpha) + DERIVATIVE_SLACK for e in growth.exponents)
    return psi, CutoffReport(const, zero, one, growth, bounds, tuple(notes))


def separated_closed_sets(u1: Region, u2: Region, ambient: Region | None = None):
    """Z_i = (M \\ U) | U_i' from the 1/3-separation of (u1, u2), as per-grid builders."""
    amb = ambient if ambient is not None else (u1 | u2)

    @lru_cache(maxsize=8)
    def pair(grid: Grid) -> tuple[Mask, Mask]:
        s1, s2, _ = separated_shrink(u1, u2, grid, ambient=amb, check_precondition=False)
        outside = ~(u1.rasterize(grid) | u2.rasterize(grid))
        return outside | s1, outside | s2

    return (lambda g: pair(g)[0]), (lambda g: pair(g)[1])
