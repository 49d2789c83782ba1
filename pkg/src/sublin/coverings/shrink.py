"""Inductive shrinking of a linear covering into a regular one, with a cellwise certificate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import CertificateError, PreconditionError
from ..geometry import Grid, Mask, Region, distance_to_complement, union_all
from .enlarge import enlarge, strictly_less
from .regularity import Kind, RegularityVerdict, judge_masks, judge_one_regular, uses_frame


@dataclass(frozen=True)
class ShrinkParams:
    """C bounds the regularity constant, D > C, and eps*D < 1 - eps."""

    C: Fraction
    D: Fraction
    epsilon: Fraction = Fraction(1, 3)
    delta: Fraction = Fraction(1, 3)

    def __post_init__(self):
        for name in ("C", "D", "epsilon", "delta"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.C < 1:
            raise PreconditionError("C must be at least 1")
        if self.D <= self.C:
            raise PreconditionError("D must exceed C")
        if self.epsilon <= 0 or self.epsilon * self.D >= 1 - self.epsilon:
            raise PreconditionError("need 0 < eps and eps*D < 1 - eps")

    @classmethod
    def from_estimate(cls, c_est: float) -> ShrinkParams:
        """C = 1.5 C_est rounded up to eighths, D = C + 1, eps = 1/(2(D+1))."""
        c = max(Fraction(math.ceil(1.5 * c_est * 8), 8), Fraction(1))
        d = c + 1
        return cls(c, d, 1 / (2 * (d + 1)))

    def to_json(self):
        return {k: str(getattr(self, k)) for k in ("C", "D", "epsilon", "delta")}


@dataclass(frozen=True, eq=False)
class ShrinkResult:
    shrunk: tuple[Mask, ...]
    cores: tuple[Mask, ...]  # the U^0_i
    partial_unions: tuple[Mask, ...]  # the V_i
    params: ShrinkParams
    prefix_verdicts: tuple[RegularityVerdict, ...] = field(default=())

    def certificate_json(self):
        return {
            "params": self.params.to_json(),
            "union_equal": True,
            "contained": True,
            "prefix_unions_equal": True,
            "prefixes": [v.to_json() for v in self.prefix_verdicts],
        }


def _first_cell(bits: np.ndarray, grid: Grid):
    j, i = np.argwhere(bits)[0]
    return grid.center(int(j), int(i))


def shrink_masks(members: Sequence[Mask], params: ShrinkParams, frame: bool) -> ShrinkResult:
    """The three inductive formulas, evaluated exactly on one grid, then certified."""
    grid = members[0].grid
    u0, v, out = [members[0]], [members[0]], [members[0]]
    for ui in members[1:]:
        prev = v[-1]
        near = distance_to_complement(ui | prev, frame)
        inner = distance_to_complement(ui, frame)
        core = ui & Mask(grid, strictly_less(near, inner, params.D))
        vi = prev | core
        u0.append(core)
        v.append(vi)
        out.append(enlarge(core, vi, params.epsilon, grid, frame))
    union = union_all(members, grid)
    if v[-1] != union:
        raise CertificateError(
            "V_N differs from the union", step=len(members),
            witness=_first_cell((v[-1].bits ^ union.bits), grid),
        )
    for k, (a, b) in enumerate(zip(out, members), start=1):
        if not a.subset_of(b):
            raise CertificateError(f"U'_{k} leaves U_{k}", step=k, witness=_first_cell(a.bits & ~b.bits, grid))
    for k in range(1, len(out) + 1):
        pre = union_all(out[:k], grid)
        if pre != v[k - 1]:
            raise CertificateError(
                f"V_{k} is not the union of the first {k} shrunk sets", step=k,
                witness=_first_cell(pre.bits ^ v[k - 1].bits, grid),
            )
    return ShrinkResult(tuple(out), tuple(u0), tuple(v), params)


def shrink_to_regular(
    members: Sequence[Region],
    params: ShrinkParams | None,
    grid: Grid,
    *,
    ambient: Region | None = None,
    resolutions: Sequence[int] | None = None,
) -> ShrinkResult:
    """Shrink ``members`` on ``grid``; prefixes are re-judged over ``resolutions``.

    The ladder defaults to (n/4, n/2, n) for the grid's resolution n.  The
    construction is rerun at every rung so that each prefix verdict is judged
    on masks produced by the same formulas.
    """
    amb = ambient if ambient is not None else _union_region(members)
    n = grid.resolution
    ladder = sorted(resolutions) if resolutions else [n // 4, n // 2, n]
    if n not in ladder:
        ladder = sorted(set(ladder) | {n})
    verdict = judge_one_regular(members, amb, ladder)
    if verdict.kind is not Kind.BOUNDED:
        raise PreconditionError(f"members are not judged linear ({verdict.kind.value})")
    if params is None:
        params = ShrinkParams.from_estimate(verdict.c_est)
    elif verdict.c_est > params.C:
        raise PreconditionError(f"C_est = {verdict.c_est:.3f} exceeds C = {params.C}")

    runs = {}
    for m in ladder:
        g = Grid(grid.bbox, m)
        masks = [r.rasterize(g) for r in members]
        runs[m] = shrink_masks(masks, params, uses_frame(amb.rasterize(g)))
    result = runs[n]
    frames = [uses_frame(amb.rasterize(Grid(grid.bbox, m))) for m in ladder]
    verdicts = []
    for k in range(1, len(members) + 1):
        per = [runs[m].shrunk[:k] for m in ladder]
        if all(all(x.is_empty() for x in masks) for masks in per):
            raise CertificateError(f"prefix {k} is empty", step=k)
        vk = judge_masks(per, frames)
        if vk.kind is not Kind.BOUNDED:
            w = vk.witnesses[-1].point if vk.witnesses else None
            raise CertificateError(f"prefix {k} is judged {vk.kind.value}", step=k, witness=w)
        verdicts.append(vk)
    return ShrinkResult(result.shrunk, result.cores, result.partial_unions, params, tuple(verdicts))


def _union_region(members: Sequence[Region]) -> Region:
    out = members[0]
    for m in members[1:]:
        out = out | m
    return out
