"""Weighted sup-norms, temperate order and Gevrey membership, estimated across a grid ladder.

Exponents come from how sup |D^alpha f| grows under refinement: if |D^alpha f| ~ d^-k
near the boundary, the sup over in-U cells grows like n^k, since the nearest cells
sit at distance ~ 1/n.  A bounded function gives k = 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ConfigurationError, InconclusiveError
from ..geometry import BBox, Grid, Mask
from .functions import boundary_distance, derivative, evaluate_on, multi_indices, stencil_inside

MARGIN = 0.25
RATIO_BAND = (0.5, 2.0)
MAX_EXCLUDED = 0.2
DEFAULT_LADDER = (64, 128, 256)
DEFAULT_H_LADDER = (0.1, 1.0, 10.0)
_NOISE = 64 * np.finfo(float).eps


def _mask_of(u, grid: Grid) -> Mask:
    return u if isinstance(u, Mask) else u.rasterize(grid)


def weighted_sup_norm(f, u, s: float, grid: Grid) -> float:
    """max over in-U cells of d^s |f|, d the corrected distance to the complement."""
    m = _mask_of(u, grid)
    if m.is_empty():
        return 0.0
    d = boundary_distance(m)
    vals = evaluate_on(f, grid, d)[m.bits]
    with np.errstate(all="ignore"):
        w = d[m.bits] ** float(s) * np.abs(vals)
    if np.isnan(w).any():
        raise ConfigurationError("the function is not evaluable at every cell of u")
    return float(w.max())


@dataclass(frozen=True, eq=False)
class _Sample:
    """Values of one derivative on the cells where its stencil stays in U."""

    n: int
    d: np.ndarray
    values: np.ndarray
    excluded: float  # fraction of in-U cells dropped
    noise: float  # log of the roundoff level of this stencil


def _ladder(bbox: BBox, resolutions) -> list[Grid]:
    grids = sorted((r if isinstance(r, Grid) else Grid(bbox, int(r)) for r in resolutions), key=lambda g: g.resolution)
    if len(grids) < 2:
        raise ConfigurationError("growth estimates need at least two resolutions")
    return grids


def _samples(f, u, grids: Sequence[Grid], alphas, order: int) -> dict[tuple[int, int], list[_Sample]]:
    out: dict[tuple[int, int], list[_Sample]] = {a: [] for a in alphas}
    for g in grids:
        m = _mask_of(u, g)
        if m.is_empty():
            raise ConfigurationError("u is empty on the grid")
        d = boundary_distance(m)
        base = evaluate_on(f, g, d)
        if np.isnan(base[m.bits]).any():
            raise ConfigurationError("the function is not evaluable at every cell of u")
        total = m.count()
        with np.errstate(all="ignore"):
            top = float(np.nanmax(np.abs(np.where(np.isfinite(base), base, np.nan)[m.bits]), initial=0.0))
        for a in alphas:
            vals, reach = derivative(base, g, a, order)
            valid = stencil_inside(m, reach)
            noise = math.log(_NOISE * (top or 1.0)) - sum(a) * math.log(float(g.cell_width))
            out[a].append(_Sample(g.resolution, d[valid], vals[valid], 1 - valid.sum() / total, noise))
    return out


def _log_sup(sample: _Sample, log_weight: np.ndarray) -> float:
    """log of sup weight * |values|, -inf when the values vanish."""
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = log_weight + np.log(np.abs(sample.values))
    if logs.size == 0:
        return -math.inf
    if np.isnan(logs).any():
        return math.inf
    return float(logs.max())


def _bounded(log_sups: Sequence[float]) -> bool:
    """Finite and every consecutive ratio within the band."""
    if any(math.isinf(v) and v > 0 for v in log_sups):
        return False
    lo, hi = (math.log(r) for r in RATIO_BAND)
    for a, b in zip(log_sups, log_sups[1:]):
        if math.isinf(a) and math.isinf(b):
            continue
        if math.isinf(a) or math.isinf(b) or not lo <= b - a <= hi:
            return False
    return True


@dataclass(frozen=True)
class ExponentFit:
    alpha: tuple[int, int]
    exponent: float
    per_refinement: tuple[float, ...]
    log_sups: tuple[float, ...]
    r2: float
    bounded: bool

    def to_json(self):
        return {
            "alpha": list(self.alpha),
            "exponent": self.exponent,
            "per_refinement": list(self.per_refinement),
            "log_sups": [_jsonable(v) for v in self.log_sups],
            "r2": self.r2,
            "bounded": self.bounded,
        }


@dataclass(frozen=True)
class GevreyCheck:
    h: float
    passed: bool
    log_sups: tuple[tuple[float, ...], ...]  # per alpha, per resolution

    def to_json(self):
        return {"h": self.h, "passed": self.passed, "log_sups": [[_jsonable(v) for v in row] for row in self.log_sups]}


@dataclass(frozen=True)
class GrowthReport:
    kind: str  # "Temperate" | "Gevrey" | "Unbounded"
    resolutions: tuple[int, ...]
    t_hat: float | None = None
    exponents: tuple[ExponentFit, ...] = ()
    s: float | None = None
    h: float | None = None
    gevrey_kind: str | None = None  # "(s)" | "{s}"
    checks: tuple[GevreyCheck, ...] = ()
    excluded: float = 0.0
    notes: tuple[str, ...] = field(default=())

    @property
    def r2(self) -> float:
        return min((e.r2 for e in self.exponents), default=1.0)

    def exponent(self, alpha) -> float:
        return next(e.exponent for e in self.exponents if e.alpha == tuple(alpha))

    def to_json(self):
        return {
            "class": self.kind,
            "t_hat": self.t_hat,
            "s": self.s,
            "h": self.h,
            "gevrey_kind": self.gevrey_kind,
            "resolutions": list(self.resolutions),
            "r2": self.r2,
            "excluded_fraction": self.excluded,
            "exponents": [e.to_json() for e in self.exponents],
            "checks": [c.to_json() for c in self.checks],
            "notes": list(self.notes),
        }


def _jsonable(v: float):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


def _check_exclusion(samples) -> float:
    worst = max(s[0].excluded for s in samples.values())
    if worst > MAX_EXCLUDED:
        raise InconclusiveError(
            f"derivative stencils leave u for {worst:.0%} of its cells at the coarsest resolution"
        )
    return worst


def _fit_exponent(alpha, samples: list[_Sample]) -> ExponentFit:
    ns = np.array([s.n for s in samples], dtype=float)
    floor = np.array([s.noise for s in samples])
    raw = np.array([_log_sup(s, np.zeros(len(s.d))) for s in samples])
    logs = np.where(raw <= floor, -np.inf, raw)
    if np.isposinf(logs).any():
        return ExponentFit(tuple(alpha), math.inf, (), tuple(logs), 0.0, False)
    if np.isneginf(logs).all():
        return ExponentFit(tuple(alpha), 0.0, (0.0,) * (len(ns) - 1), tuple(logs), 1.0, True)
    logs = np.where(np.isneginf(logs), floor, logs)
    ln = np.log(ns)
    steps = tuple(float(v) for v in np.diff(logs) / np.diff(ln))
    slope, r2 = _regress(ln, logs)
    # growth slower than n^margin is grid quantization, not a singularity
    e = 0.0 if max(steps) <= MARGIN else max(0.0, steps[-1])
    weighted = [_log_sup(s, (e + MARGIN) * np.log(s.d)) for s in samples]
    stable = e == 0.0 or max(steps) - min(steps) <= 2 * MARGIN
    return ExponentFit(tuple(alpha), e, steps, tuple(float(v) for v in logs), r2, stable and _bounded(weighted))


def _regress(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    slope, icpt = np.polyfit(x, y, 1)
    resid = y - (slope * x + icpt)
    tot = float(((y - y.mean()) ** 2).sum())
    return float(slope), 1.0 if tot == 0 else 1.0 - float((resid**2).sum()) / tot


def temperate_order_estimate(f, u, max_deriv: int = 2, resolutions=DEFAULT_LADDER) -> GrowthReport:
    """Fit e_alpha for |alpha| <= max_deriv; t_hat = max(e_alpha - |alpha|).

    e_alpha is the growth rate of sup |D^alpha f| on the last refinement.  A fit
    counts as stable when the per-refinement rates agree within twice the margin
    and sup d^(e_alpha + margin) |D^alpha f| stays within a factor 2 across the ladder.
    """
    grids = _ladder(u.bbox, resolutions)
    order = getattr(f, "stencil_order", 2)
    alphas = multi_indices(max_deriv)
    samples = _samples(f, u, grids, alphas, order)
    excluded = _check_exclusion(samples)
    fits = tuple(_fit_exponent(a, samples[a]) for a in alphas)
    res = tuple(g.resolution for g in grids)
    if not all(e.bounded for e in fits):
        bad = [list(e.alpha) for e in fits if not e.bounded]
        return GrowthReport("Unbounded", res, exponents=fits, excluded=excluded,
                            notes=(f"no polynomial weight bounds D^alpha f for alpha in {bad}",))
    t_hat = round(max(e.exponent - sum(e.alpha) for e in fits), 9)
    return GrowthReport("Temperate", res, t_hat=max(0.0, t_hat), exponents=fits, excluded=excluded)


def gevrey_membership(
    f,
    u,
    s: float,
    h_ladder: Sequence[float] = DEFAULT_H_LADDER,
    resolutions=DEFAULT_LADDER,
    max_deriv: int = 0,
) -> GrowthReport:
    """Boundedness of exp(-h d^(1-s)) |D^alpha f| across the ladder, for each h.

    The same (s, h) bounds every derivative.  Kind (s) needs every h of the
    ladder to pass, kind {s} some h.
    """
    if not s > 1:
        raise ConfigurationError("Gevrey order s must exceed 1")
    hs = sorted(float(h) for h in h_ladder)
    if not hs or hs[0] <= 0:
        raise ConfigurationError("h ladder must be positive")
    grids = _ladder(u.bbox, resolutions)
    alphas = multi_indices(max_deriv)
    samples = _samples(f, u, grids, alphas, getattr(f, "stencil_order", 2))
    excluded = _check_exclusion(samples)
    checks = []
    for h in hs:
        rows = tuple(tuple(_log_sup(x, -h * x.d ** (1.0 - s)) for x in samples[a]) for a in alphas)
        checks.append(GevreyCheck(h, all(_bounded(r) for r in rows), rows))
    passing = [c.h for c in checks if c.passed]
    res = tuple(g.resolution for g in grids)
    if not passing:
        return GrowthReport("Unbounded", res, s=float(s), checks=tuple(checks), excluded=excluded,
                            notes=("no h of the ladder bounds the Gevrey weight",))
    kind = "(s)" if len(passing) == len(checks) else "{s}"
    return GrowthReport("Gevrey", res, s=float(s), h=passing[0], gevrey_kind=kind, checks=tuple(checks), excluded=excluded)
