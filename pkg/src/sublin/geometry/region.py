"""Semialgebraic regions (boolean combinations of strict polynomial inequalities) and masks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy import ndimage

from ..errors import ConfigurationError
from .grid import BBox, Grid
from .polynomial import X1, X2, Polynomial


# predicates -----------------------------------------------------------------
class Predicate:
    def holds(self, x1: Fraction, x2: Fraction) -> bool:
        raise NotImplementedError

    def raster(self, grid: Grid) -> np.ndarray:
        raise NotImplementedError


@dataclass(frozen=True)
class Positive(Predicate):
    """p > 0."""

    poly: Polynomial

    def holds(self, x1, x2):
        return self.poly(x1, x2) > 0

    def raster(self, grid):
        return _atom_raster(self.poly, grid)

    def to_json(self):
        return {"atom": self.poly.to_json()}


@dataclass(frozen=True)
class Const(Predicate):
    value: bool

    def holds(self, x1, x2):
        return self.value

    def raster(self, grid):
        return np.full(grid.shape, self.value)

    def to_json(self):
        return {"const": self.value}


@dataclass(frozen=True)
class All(Predicate):
    parts: tuple[Predicate, ...]

    def holds(self, x1, x2):
        return all(p.holds(x1, x2) for p in self.parts)

    def raster(self, grid):
        out = np.ones(grid.shape, dtype=bool)
        for p in self.parts:
            out &= p.raster(grid)
        return out

    def to_json(self):
        return {"and": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class Any(Predicate):
    parts: tuple[Predicate, ...]

    def holds(self, x1, x2):
        return any(p.holds(x1, x2) for p in self.parts)

    def raster(self, grid):
        out = np.zeros(grid.shape, dtype=bool)
        for p in self.parts:
            out |= p.raster(grid)
        return out

    def to_json(self):
        return {"or": [p.to_json() for p in self.parts]}


@dataclass(frozen=True)
class Negation(Predicate):
    part: Predicate

    def holds(self, x1, x2):
        return not self.part.holds(x1, x2)

    def raster(self, grid):
        return ~self.part.raster(grid)

    def to_json(self):
        return {"not": self.part.to_json()}


@lru_cache(maxsize=512)
def _atom_raster(poly: Polynomial, grid: Grid) -> np.ndarray:
    out = poly.sign_on_lattice(grid.xs_exact, grid.ys_exact) > 0
    out.setflags(write=False)
    return out


def gt(p: Polynomial) -> Predicate:
    return Positive(p)


def lt(p: Polynomial) -> Predicate:
    return Positive(-p)


def predicate_from_json(node) -> Predicate:
    if not isinstance(node, dict) or len(node) != 1:
        raise ConfigurationError(f"bad predicate node {node!r}")
    (kind, body), = node.items()
    if kind == "atom":
        if not isinstance(body, dict):
            raise ConfigurationError("atom body must be a coefficient map")
        return Positive(Polynomial.from_terms(body))
    if kind == "const":
        return Const(bool(body))
    if kind in ("and", "or"):
        if not isinstance(body, list) or not body:
            raise ConfigurationError(f"{kind!r} needs a nonempty list")
        parts = tuple(predicate_from_json(b) for b in body)
        return All(parts) if kind == "and" else Any(parts)
    if kind == "not":
        return Negation(predicate_from_json(body))
    raise ConfigurationError(f"unknown predicate kind {kind!r}")


# masks ----------------------------------------------------------------------
@dataclass(frozen=True, eq=False)
class Mask:
    """Cell membership bits over a grid; bits[j, i] refers to the cell (xs[i], ys[j])."""

    grid: Grid
    bits: np.ndarray

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        if bits.shape != self.grid.shape:
            raise ConfigurationError(f"mask shape {bits.shape} does not match grid {self.grid.shape}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @classmethod
    def empty(cls, grid: Grid) -> Mask:
        return cls(grid, np.zeros(grid.shape, dtype=bool))

    @classmethod
    def full(cls, grid: Grid) -> Mask:
        return cls(grid, np.ones(grid.shape, dtype=bool))

    def _check(self, other: Mask):
        if other.grid != self.grid:
            raise ConfigurationError("masks live on different grids")

    def __and__(self, other):
        self._check(other)
        return Mask(self.grid, self.bits & other.bits)

    def __or__(self, other):
        self._check(other)
        return Mask(self.grid, self.bits | other.bits)

    def __sub__(self, other):
        self._check(other)
        return Mask(self.grid, self.bits & ~other.bits)

    def __invert__(self):
        return Mask(self.grid, ~self.bits)

    def __eq__(self, other):
        return isinstance(other, Mask) and other.grid == self.grid and np.array_equal(self.bits, other.bits)

    __hash__ = None

    def subset_of(self, other: Mask) -> bool:
        self._check(other)
        return not (self.bits & ~other.bits).any()

    def count(self) -> int:
        return int(self.bits.sum())

    def is_empty(self) -> bool:
        return not self.bits.any()

    def is_full(self) -> bool:
        return bool(self.bits.all())

    def dilate(self, steps: int = 1) -> Mask:
        """One-cell (8-neighbourhood) dilation, repeated ``steps`` times."""
        out = ndimage.binary_dilation(self.bits, structure=np.ones((3, 3), bool), iterations=steps)
        return Mask(self.grid, out)

    def rasterize(self, grid: Grid) -> Mask:
        if grid != self.grid:
            raise ConfigurationError("a mask can only be read back on its own grid")
        return self

    def cells(self) -> np.ndarray:
        """(k, 2) array of (j, i) indices in raster order."""
        return np.argwhere(self.bits)


def union_all(masks, grid: Grid) -> Mask:
    out = np.zeros(grid.shape, dtype=bool)
    for m in masks:
        out |= m.bits
    return Mask(grid, out)


# regions --------------------------------------------------------------------
@dataclass(frozen=True)
class Region:
    """An open semialgebraic subset of a bbox, given by a predicate tree.

    ``label`` tags catalog members (used by operations restricted to a catalog);
    it does not take part in equality.
    """

    predicate: Predicate
    bbox: BBox
    label: str | None = field(default=None, compare=False)

    def contains(self, point) -> bool:
        x1, x2 = (Fraction(p) for p in point)
        inside = self.bbox.x1min < x1 < self.bbox.x1max and self.bbox.x2min < x2 < self.bbox.x2max
        return inside and self.predicate.holds(x1, x2)

    def rasterize(self, grid: Grid) -> Mask:
        if grid.bbox != self.bbox:
            raise ConfigurationError("region and grid use different bboxes")
        return Mask(grid, self.predicate.raster(grid))

    def _combine(self, other: Region, cls) -> Region:
        if other.bbox != self.bbox:
            raise ConfigurationError("regions use different bboxes")
        label = None
        if self.label and other.label:
            label = f"({self.label} {cls.__name__.lower()} {other.label})"
        return Region(cls((self.predicate, other.predicate)), self.bbox, label)

    def __and__(self, other):
        return self._combine(other, All)

    def __or__(self, other):
        return self._combine(other, Any)

    def __sub__(self, other):
        return self & Region(Negation(other.predicate), self.bbox, other.label and f"not {other.label}")

    def complement(self) -> Region:
        return Region(Negation(self.predicate), self.bbox)

    def labelled(self, label: str) -> Region:
        return Region(self.predicate, self.bbox, label)

    def to_json(self):
        return {"bbox": self.bbox.to_json(), "predicate": self.predicate.to_json(), "label": self.label}

    @classmethod
    def full(cls, bbox: BBox, label: str | None = None) -> Region:
        return cls(Const(True), bbox, label)

    @classmethod
    def empty(cls, bbox: BBox) -> Region:
        return cls(Const(False), bbox, "empty")

    @classmethod
    def where(cls, bbox: BBox, *parts: Predicate, label: str | None = None) -> Region:
        if not parts:
            return cls.full(bbox, label)
        return cls(parts[0] if len(parts) == 1 else All(tuple(parts)), bbox, label)


def region_algebra(op: str, a: Region, b: Region) -> Region:
    if op == "union":
        return a | b
    if op == "intersection":
        return a & b
    if op == "difference":
        return a - b
    raise ConfigurationError(f"unknown region operation {op!r}")


def disk(center, radius) -> Predicate:
    c1, c2 = (Fraction(c) for c in center)
    r = Fraction(radius)
    return lt((X1 - c1) ** 2 + (X2 - c2) ** 2 - r * r)


def half_plane(a, b, c) -> Predicate:
    """a*x1 + b*x2 + c > 0."""
    return gt(Fraction(a) * X1 + Fraction(b) * X2 + Fraction(c))
