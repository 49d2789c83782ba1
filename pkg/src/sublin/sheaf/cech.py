"""Čech complexes of finite coverings, their cohomology over Q, and Mayer-Vietoris checks."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

import numpy as np

from ..errors import ConfigurationError
from ..fixtures import Covering
from ..geometry import Grid, Mask, Region
from . import linalg
from .sections import ConstructibleSheaf, SectionSpace, restriction_between, sections

MAX_MEMBERS = 12


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """Degrees 0..N-1; degree k holds the sections over the (k+1)-fold intersections."""

    dims: tuple[int, ...]
    differentials: tuple[np.ndarray, ...]  # d^k has shape (dims[k+1], dims[k])
    index_sets: tuple[tuple[tuple[int, ...], ...], ...] = ()

    def __post_init__(self):
        for k, d in enumerate(self.differentials):
            if d.shape != (self.dims[k + 1], self.dims[k]):
                raise ConfigurationError(f"d^{k} has shape {d.shape}, expected {(self.dims[k + 1], self.dims[k])}")

    @property
    def length(self) -> int:
        return len(self.dims)

    def d(self, k: int) -> np.ndarray:
        """d^k, with zero maps outside the stored range."""
        if 0 <= k < len(self.differentials):
            return self.differentials[k]
        rows = self.dims[k + 1] if 0 <= k + 1 < self.length else 0
        cols = self.dims[k] if 0 <= k < self.length else 0
        return linalg.zeros(rows, cols)

    def squares_vanish(self) -> bool:
        return all(
            linalg.is_zero(linalg.matmul(b, a)) for a, b in zip(self.differentials, self.differentials[1:])
        )

    @classmethod
    def zero(cls, length: int = 1) -> CochainComplex:
        return cls(tuple([0] * length), tuple(linalg.zeros(0, 0) for _ in range(length - 1)))

    def to_json(self):
        return {
            "dims": list(self.dims),
            "differentials": [linalg.to_strings(d) for d in self.differentials],
            "index_sets": [[list(j) for j in js] for js in self.index_sets],
        }


@dataclass(frozen=True, eq=False)
class CohomologyReport:
    ranks: tuple[int, ...]
    witnesses: tuple[tuple[np.ndarray, ...], ...]

    def to_json(self):
        return {
            "h": list(self.ranks),
            "witnesses": [[[str(x) for x in v] for v in ws] for ws in self.witnesses],
        }


def _intersection(members: Sequence[Mask], subset: tuple[int, ...]) -> Mask:
    out = members[subset[0]]
    for k in subset[1:]:
        out = out & members[k]
    return out


def _sign(i: int, subset: tuple[int, ...]) -> int:
    """e_i ^ e_J written with indices in increasing order."""
    return -1 if sum(1 for j in subset if j < i) % 2 else 1


def cech_complex(covering: Covering | Sequence[Region], F: ConstructibleSheaf, grid: Grid) -> CochainComplex:
    members = covering.members if isinstance(covering, Covering) else tuple(covering)
    n = len(members)
    if n == 0:
        raise ConfigurationError("empty covering")
    if n > MAX_MEMBERS:
        raise ConfigurationError(f"coverings are limited to {MAX_MEMBERS} members, got {n}")
    masks = [m.rasterize(grid) for m in members]
    subsets = [list(combinations(range(n), k + 1)) for k in range(n)]
    spaces: list[dict[tuple[int, ...], SectionSpace]] = [
        {j: sections(F, _intersection(masks, j), grid) for j in level} for level in subsets
    ]
    offsets = []
    for level, sp in zip(subsets, spaces):
        off, acc = {}, 0
        for j in level:
            off[j] = acc
            acc += sp[j].dimension
        offsets.append((off, acc))
    diffs = []
    for k in range(n - 1):
        (src_off, src_dim), (dst_off, dst_dim) = offsets[k], offsets[k + 1]
        d = linalg.zeros(dst_dim, src_dim)
        for j in subsets[k]:
            for i in range(n):
                if i in j:
                    continue
                big = tuple(sorted(j + (i,)))
                block = restriction_between(spaces[k][j], spaces[k + 1][big])
                if block.size:
                    r0, c0 = dst_off[big], src_off[j]
                    d[r0:r0 + block.shape[0], c0:c0 + block.shape[1]] += _sign(i, j) * block
        diffs.append(d)
    complex_ = CochainComplex(
        tuple(acc for _, acc in offsets), tuple(diffs), tuple(tuple(level) for level in subsets)
    )
    if not complex_.squares_vanish():
        raise ArithmeticError("d o d is not zero")
    return complex_


def cohomology(c: CochainComplex) -> CohomologyReport:
    ranks, witnesses = [], []
    for k in range(c.length):
        dk, prev = c.d(k), c.d(k - 1)
        kernel = linalg.nullspace(dk) if c.dims[k] else []
        image = linalg.column_space(prev)
        classes = linalg.extend_independent(image, kernel, c.dims[k])
        h = c.dims[k] - linalg.rank(dk) - linalg.rank(prev)
        assert h == len(classes)
        ranks.append(h)
        witnesses.append(tuple(classes))
    return CohomologyReport(tuple(ranks), tuple(witnesses))


# Mayer-Vietoris ---------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class MVReport:
    dims: tuple[int, int, int]  # left, middle, right
    left_map: np.ndarray
    right_map: np.ndarray
    exact_left: bool
    exact_middle: bool
    surjective_right: bool
    coker_rank: int

    @property
    def fully_exact(self) -> bool:
        return self.exact_left and self.exact_middle and self.surjective_right

    def to_json(self):
        return {
            "dims": list(self.dims),
            "exact_left": self.exact_left,
            "exact_middle": self.exact_middle,
            "surjective_right": self.surjective_right,
            "coker_rank": self.coker_rank,
            "left_map": linalg.to_strings(self.left_map),
            "right_map": linalg.to_strings(self.right_map),
        }


def _report(alpha: np.ndarray, beta: np.ndarray, dims: tuple[int, int, int]) -> MVReport:
    ra, rb = linalg.rank(alpha), linalg.rank(beta)
    composite_zero = linalg.is_zero(linalg.matmul(beta, alpha)) if alpha.size and beta.size else True
    return MVReport(
        dims, alpha, beta,
        exact_left=ra == dims[0],
        exact_middle=composite_zero and dims[1] - rb == ra,
        surjective_right=rb == dims[2],
        coker_rank=dims[2] - rb,
    )


def mv_check(u1: Region, u2: Region, F: ConstructibleSheaf, grid: Grid, over: Region | None = None) -> MVReport:
    """0 -> F(W & U) -> F(W & U1) + F(W & U2) -> F(W & U12) -> 0 with W = ``over`` (default: everything)."""
    w = over.rasterize(grid) if over is not None else Mask.full(grid)
    m1, m2 = u1.rasterize(grid) & w, u2.rasterize(grid) & w
    s = sections(F, m1 | m2, grid)
    s1, s2, s12 = sections(F, m1, grid), sections(F, m2, grid), sections(F, m1 & m2, grid)
    alpha = np.vstack([restriction_between(s, s1), restriction_between(s, s2)])
    beta = np.hstack([restriction_between(s1, s12), -restriction_between(s2, s12)])
    return _report(alpha, beta, (s.dimension, s1.dimension + s2.dimension, s12.dimension))


def inclusion_map(source: SectionSpace, target: SectionSpace) -> np.ndarray:
    """Sections over one open W of k_{V1} -> k_{V2} for V1 inside V2 (both single summands)."""
    if source.open != target.open:
        raise ConfigurationError("inclusion maps compare sections over the same open")
    out = linalg.zeros(target.dimension, source.dimension)
    rows = {(b.copy, b.label): r for r, b in enumerate(target.basis)}
    labels = target.pieces[0].labels
    for col, b in enumerate(source.basis):
        j, i = b.first_cell
        row = rows.get((b.copy, int(labels[j, i])))
        if row is not None:
            out[row, col] = Fraction(1)
    return out


def sheaf_mv_check(u1: Region, u2: Region, v: Region, grid: Grid) -> MVReport:
    """Sections over V of 0 -> k_{U12} -> k_{U1} + k_{U2} -> k_{U1 | U2} -> 0."""
    u = u1 | u2
    u12 = u1 & u2
    wm = v.rasterize(grid)
    s12 = sections(ConstructibleSheaf.k(u12), wm, grid)
    s1 = sections(ConstructibleSheaf.k(u1), wm, grid)
    s2 = sections(ConstructibleSheaf.k(u2), wm, grid)
    su = sections(ConstructibleSheaf.k(u), wm, grid)
    alpha = np.vstack([inclusion_map(s12, s1), inclusion_map(s12, s2)])
    beta = np.hstack([inclusion_map(s1, su), -inclusion_map(s2, su)])
    return _report(alpha, beta, (s12.dimension, s1.dimension + s2.dimension, su.dimension))
