from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, hypot

import numpy as np

from ..errors import ConfigurationError

MIN_RESOLUTION = 8


@dataclass(frozen=True)
class BBox:
    """Axis-aligned window [x1min, x1max] x [x2min, x2max] with rational corners."""

    x1min: Fraction
    x1max: Fraction
    x2min: Fraction
    x2max: Fraction

    def __post_init__(self):
        for name in ("x1min", "x1max", "x2min", "x2max"):
            v = getattr(self, name)
            if isinstance(v, float):
                raise ConfigurationError("bbox corners must be exact rationals")
            object.__setattr__(self, name, Fraction(v))
        if not (self.x1min < self.x1max and self.x2min < self.x2max):
            raise ConfigurationError("degenerate bbox")

    @classmethod
    def square(cls, half) -> BBox:
        h = Fraction(half)
        return cls(-h, h, -h, h)

    @property
    def diameter(self) -> float:
        return hypot(float(self.x1max - self.x1min), float(self.x2max - self.x2min))

    @property
    def empty_convention(self) -> float:
        """Value used for d(x, empty set): the window diameter plus one."""
        return self.diameter + 1.0

    def to_json(self) -> list[str]:
        return [str(self.x1min), str(self.x1max), str(self.x2min), str(self.x2max)]


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centred sampling of a bbox; arrays are indexed [j, i] = [x2, x1]."""

    bbox: BBox
    resolution: int

    def __post_init__(self):
        if int(self.resolution) != self.resolution or self.resolution < MIN_RESOLUTION:
            raise ConfigurationError(f"resolution must be an integer >= {MIN_RESOLUTION}")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.resolution, self.resolution)

    @property
    def dx(self) -> Fraction:
        return (self.bbox.x1max - self.bbox.x1min) / self.resolution

    @property
    def dy(self) -> Fraction:
        return (self.bbox.x2max - self.bbox.x2min) / self.resolution

    @property
    def cell_width(self) -> float:
        return float(min(self.dx, self.dy))

    @property
    def cell_diagonal(self) -> float:
        return hypot(float(self.dx), float(self.dy))

    @cached_property
    def xs_exact(self) -> list[Fraction]:
        return [self.bbox.x1min + (2 * i + 1) * self.dx / 2 for i in range(self.resolution)]

    @cached_property
    def ys_exact(self) -> list[Fraction]:
        return [self.bbox.x2min + (2 * j + 1) * self.dy / 2 for j in range(self.resolution)]

    @cached_property
    def xs(self) -> np.ndarray:
        return np.array([float(x) for x in self.xs_exact])

    @cached_property
    def ys(self) -> np.ndarray:
        return np.array([float(y) for y in self.ys_exact])

    @cached_property
    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xs, self.ys, indexing="xy")

    def center(self, j: int, i: int) -> tuple[float, float]:
        return float(self.xs[i]), float(self.ys[j])

    def cell_of(self, point) -> tuple[int, int]:
        """Index (j, i) of the cell containing ``point``, clipped to the grid."""
        x1, x2 = (Fraction(p) if not isinstance(p, float) else p for p in point)
        i = int((x1 - self.bbox.x1min) / self.dx)
        j = int((x2 - self.bbox.x2min) / self.dy)
        n = self.resolution
        return min(max(j, 0), n - 1), min(max(i, 0), n - 1)

    @cached_property
    def edt_weights(self) -> tuple[int, int, float]:
        """Integers (wx, wy) and unit u with dx^2 = wx*u, dy^2 = wy*u."""
        ratio = (self.dx / self.dy) ** 2
        wx, wy = ratio.numerator, ratio.denominator
        g = gcd(wx, wy)
        wx, wy = wx // g, wy // g
        unit = float(self.dx) ** 2 / wx
        return wx, wy, unit

    def with_resolution(self, n: int) -> Grid:
        return Grid(self.bbox, n)


def ladder(bbox: BBox, resolutions) -> list[Grid]:
    return [Grid(bbox, int(n)) for n in resolutions]


