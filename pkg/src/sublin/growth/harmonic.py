"""The estimate ||D^a phi||^{s+|a|} <= C (||phi||^s + ||Lap D^a phi||^{s+|a|+2}), measured."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConfigurationError
from .classes import DEFAULT_LADDER, _ladder, _mask_of
from .functions import boundary_distance, derivative, evaluate_on, laplacian, stencil_inside

BOUNDED_SPREAD = 2.0


@dataclass(frozen=True)
class HarmonicRow:
    resolution: int
    lhs: float
    phi_norm: float
    laplacian_norm: float

    @property
    def c_hat(self) -> float:
        rhs = self.phi_norm + self.laplacian_norm
        if self.lhs == 0:
            return 0.0
        return math.inf if rhs == 0 else self.lhs / rhs

    def to_json(self):
        return {
            "resolution": self.resolution,
            "lhs": self.lhs,
            "phi_norm": self.phi_norm,
            "laplacian_norm": self.laplacian_norm,
            "c_hat": self.c_hat if math.isfinite(self.c_hat) else "inf",
        }


@dataclass(frozen=True)
class HarmonicReport:
    rows: tuple[HarmonicRow, ...]
    verdict: str  # "Bounded" | "Unbounded"

    @property
    def c_hat(self) -> tuple[float, ...]:
        return tuple(r.c_hat for r in self.rows)

    def to_json(self):
        return {"verdict": self.verdict, "rows": [r.to_json() for r in self.rows]}


def _norm(values: np.ndarray, d: np.ndarray, valid: np.ndarray, weight: float) -> float:
    if not valid.any():
        return 0.0
    with np.errstate(all="ignore"):
        w = d[valid] ** weight * np.abs(values[valid])
    return float(np.max(w))


def harmonic_estimate_check(
    phi,
    u,
    s: float,
    alpha: tuple[int, int],
    resolutions: Sequence[int] = DEFAULT_LADDER,
) -> HarmonicReport:
    """C_hat = LHS / RHS per resolution; Bounded when the C_hat spread is under 2x.

    Each norm is a sup over the cells where its own stencil stays inside u.
    """
    if s < 0:
        raise ConfigurationError("s must be nonnegative")
    alpha = (int(alpha[0]), int(alpha[1]))
    k = sum(alpha)
    order = getattr(phi, "stencil_order", 2)
    rows = []
    for g in _ladder(u.bbox, resolutions):
        m = _mask_of(u, g)
        d = boundary_distance(m)
        base = evaluate_on(phi, g, d)
        da, reach = derivative(base, g, alpha, order)
        lap, lreach = laplacian(da, g, order)
        total = (reach[0] + lreach[0], reach[1] + lreach[1])
        rows.append(
            HarmonicRow(
                g.resolution,
                lhs=_norm(da, d, stencil_inside(m, reach), s + k),
                phi_norm=_norm(base, d, m.bits, s),
                laplacian_norm=_norm(lap, d, stencil_inside(m, total), s + k + 2),
            )
        )
    c = [r.c_hat for r in rows]
    finite = all(math.isfinite(x) for x in c)
    positive = [x for x in c if x > 0]
    spread = max(positive) / min(positive) if positive else 1.0
    bounded = finite and (len(positive) in (0, len(c))) and spread < BOUNDED_SPREAD
    return HarmonicReport(tuple(rows), "Bounded" if bounded else "Unbounded")
