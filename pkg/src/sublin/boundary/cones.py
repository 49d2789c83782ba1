"""Closed convex cones of the plane and their discretization into grid steps."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ..errors import ConfigurationError
from ..geometry import Grid

DEFAULT_ANGLES = (math.pi / 12, math.pi / 8, math.pi / 6, math.pi / 4, math.pi / 3)
DEFAULT_DIRECTIONS = 16
RADIUS_DIAGONALS = 8.0
_TOL = 1e-12


@dataclass(frozen=True)
class ConeSpec:
    """gamma = {v : <v, d> >= |v| cos(half_angle)} around the unit vector d."""

    direction: tuple[float, float]
    half_angle: float

    def __post_init__(self):
        dx, dy = (float(c) for c in self.direction)
        norm = math.hypot(dx, dy)
        if norm == 0:
            raise ConfigurationError("cone direction must be nonzero")
        if not 0 < self.half_angle < math.pi / 2:
            raise ConfigurationError("half_angle must lie in (0, pi/2)")
        object.__setattr__(self, "direction", (dx / norm, dy / norm))
        object.__setattr__(self, "half_angle", float(self.half_angle))

    @classmethod
    def at_angle(cls, theta: float, half_angle: float) -> ConeSpec:
        return cls((math.cos(theta), math.sin(theta)), half_angle)

    @property
    def theta(self) -> float:
        return math.atan2(self.direction[1], self.direction[0])

    def contains(self, v) -> bool:
        x, y = v
        r = math.hypot(x, y)
        return x * self.direction[0] + y * self.direction[1] >= r * math.cos(self.half_angle) - _TOL

    def inward_normals(self) -> tuple[tuple[float, float], tuple[float, float]]:
        """Normals n1, n2 with gamma = {v : <v, n1> >= 0 and <v, n2> >= 0}."""
        t, a = self.theta, self.half_angle
        # each edge direction rotated a quarter turn towards the axis
        return (
            (math.cos(t - a + math.pi / 2), math.sin(t - a + math.pi / 2)),
            (math.cos(t + a - math.pi / 2), math.sin(t + a - math.pi / 2)),
        )

    def widened(self, half_angle: float) -> ConeSpec:
        return ConeSpec(self.direction, half_angle)

    def to_json(self):
        return {"direction": list(self.direction), "half_angle": self.half_angle}


def default_fan(directions: int = DEFAULT_DIRECTIONS, angles=DEFAULT_ANGLES) -> list[ConeSpec]:
    return [ConeSpec.at_angle(2 * math.pi * k / directions, a) for k in range(directions) for a in angles]


def fan_directions(fan) -> list[float]:
    return sorted({round(c.theta, 12) for c in fan})


def default_radius(grid: Grid) -> float:
    return RADIUS_DIAGONALS * grid.cell_diagonal


@lru_cache(maxsize=512)
def _steps(direction: tuple[float, float], half_angle: float, dx: float, dy: float, reach: float) -> np.ndarray:
    ni, nj = int(math.ceil(reach / dx)), int(math.ceil(reach / dy))
    di, dj = np.meshgrid(np.arange(-ni, ni + 1), np.arange(-nj, nj + 1))
    vx, vy = di * dx, dj * dy
    r = np.hypot(vx, vy)
    inside = (vx * direction[0] + vy * direction[1] >= r * math.cos(half_angle) - _TOL) & (r <= reach) & (r > 0)
    out = np.column_stack([di[inside], dj[inside]])
    out.setflags(write=False)
    return out


def cone_steps(cone: ConeSpec, grid: Grid, reach: float) -> np.ndarray:
    """Integer offsets (di, dj) whose physical vector lies in the cone, with 0 < length <= reach."""
    return _steps(cone.direction, cone.half_angle, float(grid.dx), float(grid.dy), float(reach))
