"""Sheaves k_V, their sections over an open W, and restriction matrices.

Sections of k_V over W are spanned by the connected components of W & V that
are closed in W; closedness is judged at grid scale by a one-cell dilation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ..errors import ConfigurationError, PreconditionError
from ..geometry import Grid, Mask, Region, component_closed_in, components
from . import linalg


@dataclass(frozen=True)
class ConstructibleSheaf:
    """A finite direct sum of sheaves k_V with multiplicities, over Q."""

    summands: tuple[tuple[Region, int], ...]

    def __post_init__(self):
        summands = tuple((r, int(m)) for r, m in self.summands)
        if not summands:
            raise ConfigurationError("a sheaf needs at least one summand")
        if any(m < 1 for _, m in summands):
            raise ConfigurationError("multiplicities must be positive")
        if len({r.bbox for r, _ in summands}) != 1:
            raise ConfigurationError("summands use different bboxes")
        object.__setattr__(self, "summands", summands)

    @classmethod
    def k(cls, v: Region, multiplicity: int = 1) -> ConstructibleSheaf:
        return cls(((v, multiplicity),))

    @classmethod
    def direct_sum(cls, *parts: ConstructibleSheaf) -> ConstructibleSheaf:
        return cls(tuple(s for p in parts for s in p.summands))

    @property
    def bbox(self):
        return self.summands[0][0].bbox

    def describe(self) -> str:
        names = [f"k_{r.label or 'V'}" + (f"^{m}" if m > 1 else "") for r, m in self.summands]
        return " + ".join(names)


@dataclass(frozen=True)
class BasisElement:
    summand: int
    copy: int
    label: int  # component label of W & V_m
    first_cell: tuple[int, int]

    def to_json(self):
        return {"summand": self.summand, "copy": self.copy, "component": self.label, "first_cell": list(self.first_cell)}


@dataclass(frozen=True, eq=False)
class _Pieces:
    """Component labelling of W & V_m together with the closed flags."""

    mask: Mask
    labels: np.ndarray
    closed: tuple[bool, ...]


@dataclass(frozen=True, eq=False)
class SectionSpace:
    open: Mask
    basis: tuple[BasisElement, ...]
    pieces: tuple[_Pieces, ...]
    multiplicities: tuple[int, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def to_json(self):
        return {"dimension": self.dimension, "basis": [b.to_json() for b in self.basis]}


def _as_mask(w, grid: Grid) -> Mask:
    if isinstance(w, Mask):
        if w.grid != grid:
            raise ConfigurationError("mask lives on another grid")
        return w
    return w.rasterize(grid)


def _pieces(w: Mask, v: Mask) -> _Pieces:
    lab = components(w & v)
    closed = tuple(component_closed_in(lab, k, w) for k in range(1, lab.count + 1))
    return _Pieces(w & v, lab.labels, closed)


def sections(F: ConstructibleSheaf, w, grid: Grid) -> SectionSpace:
    """Basis of F(W): (summand, copy, closed component) in that order, components by raster order."""
    if grid.bbox != F.bbox:
        raise ConfigurationError("open and sheaf use different bboxes")
    wm = _as_mask(w, grid)
    pieces, basis = [], []
    for s, (v, mult) in enumerate(F.summands):
        p = _pieces(wm, v.rasterize(grid))
        pieces.append(p)
        for c in range(mult):
            for k, ok in enumerate(p.closed, start=1):
                if ok:
                    j, i = np.argwhere(p.labels == k)[0]
                    basis.append(BasisElement(s, c, k, (int(j), int(i))))
    return SectionSpace(wm, tuple(basis), tuple(pieces), tuple(m for _, m in F.summands))


def restriction_between(source: SectionSpace, target: SectionSpace) -> np.ndarray:
    """Matrix (target dim x source dim) of the restriction F(W) -> F(W')."""
    if not target.open.subset_of(source.open):
        j, i = np.argwhere(target.open.bits & ~source.open.bits)[0]
        raise PreconditionError(f"restriction needs w_sub inside w; cell {(int(j), int(i))} escapes")
    out = linalg.zeros(target.dimension, source.dimension)
    index = {(b.summand, b.copy, b.label): col for col, b in enumerate(source.basis)}
    for row, b in enumerate(target.basis):
        j, i = b.first_cell
        parent = int(source.pieces[b.summand].labels[j, i])
        col = index.get((b.summand, b.copy, parent))
        if col is not None:  # a non-closed parent carries no section
            out[row, col] = Fraction(1)
    return out


def restriction(F: ConstructibleSheaf, w, w_sub, grid: Grid) -> np.ndarray:
    return restriction_between(sections(F, w, grid), sections(F, w_sub, grid))


def section_dims(F: ConstructibleSheaf, opens: Sequence, grid: Grid) -> list[int]:
    return [sections(F, w, grid).dimension for w in opens]
