"""The presheaf F of germs of cusps at the origin, and its subsheaf N.

F(V) = k when V contains U_{A,eps} = {0 < x1 < eps, |x2| < A x1^2} for every A
and some eps = eps(A); N(V) = 0 when V contains the origin and N(V) = F(V) otherwise.
Containment is tested on rasters, so the operations only accept catalog regions
on which those tests are known to settle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from ..errors import InconclusiveError
from ..fixtures import cusp_open, germ_catalog
from ..geometry import All, Any, Const, Grid, Positive, Region

DEFAULT_A_LADDER = (Fraction(1), Fraction(2), Fraction(4))
GERM_LADDER = (64, 128, 256)
EPS_START = Fraction(1, 4)


@dataclass(frozen=True)
class GermEvidence:
    A: Fraction
    epsilon: Fraction | None  # largest eps of the ladder with containment, if any
    tried: tuple[Fraction, ...]

    def to_json(self):
        return {
            "A": str(self.A),
            "epsilon": None if self.epsilon is None else str(self.epsilon),
            "tried": [str(e) for e in self.tried],
        }


@dataclass(frozen=True)
class GermVerdict:
    rank: int
    evidence: tuple[GermEvidence, ...]
    per_resolution: tuple[tuple[int, int], ...] = field(default=())

    @property
    def stable(self) -> bool:
        return all(r == self.rank for _, r in self.per_resolution)

    def to_json(self):
        return {
            "rank": self.rank,
            "stable": self.stable,
            "per_resolution": [{"resolution": n, "rank": r} for n, r in self.per_resolution],
            "evidence": [e.to_json() for e in self.evidence],
        }


def cusp_parameters(v: Region) -> tuple[Fraction, Fraction] | None:
    """(A, eps) when v is exactly U_{A,eps} on its bbox, read off the predicate."""
    pred = v.predicate
    if not isinstance(pred, All) or len(pred.parts) != 4 or not all(isinstance(p, Positive) for p in pred.parts):
        return None
    a = pred.parts[3].poly.as_dict().get((2, 0))
    eps = pred.parts[1].poly.as_dict().get((0, 0))
    if a is None or eps is None or a <= 0 or eps <= 0:
        return None
    return (a, eps) if cusp_open(a, eps, v.bbox) == v else None


def in_catalog(v: Region) -> bool:
    """Catalog entries on v's bbox, cusps U_{A,eps}, the empty set, and finite unions of those."""
    if v.predicate == Const(False) or cusp_parameters(v) is not None:
        return True
    if any(v == entry for entry, _, _ in germ_catalog(v.bbox)):
        return True
    if isinstance(v.predicate, Any):
        return all(in_catalog(Region(p, v.bbox)) for p in v.predicate.parts)
    return False


def _apertures(v: Region) -> list[Fraction]:
    """Apertures A of the cusps U_{A,eps} that make up v."""
    params = cusp_parameters(v)
    if params is not None:
        return [params[0]]
    if isinstance(v.predicate, Any):
        return [a for p in v.predicate.parts for a in _apertures(Region(p, v.bbox))]
    return []


def effective_ladder(v: Region, A_ladder: Sequence) -> list[Fraction]:
    """The A ladder, extended past the aperture of every cusp in v so that the test can fail."""
    ladder = sorted({Fraction(a) for a in A_ladder})
    for a0 in _apertures(v):
        if a0 >= ladder[-1]:
            ladder.append(2 * a0)
    return sorted(set(ladder))


def _eps_ladder(a: Fraction, grid: Grid) -> list[Fraction]:
    """eps = 1/4, 1/8, ... while U_{A,eps} still has cells on ``grid``."""
    out, eps = [], EPS_START
    while cusp_open(a, eps, grid.bbox).rasterize(grid).count() > 0:
        out.append(eps)
        eps /= 2
    return out


def _contained(a: Fraction, eps: Fraction, v: Region, grids: Sequence[Grid]) -> bool:
    cusp = cusp_open(a, eps, v.bbox)
    return all(cusp.rasterize(g).subset_of(v.rasterize(g)) for g in grids)


def _rank_on(v: Region, a_ladder, grids: Sequence[Grid]) -> tuple[int, list[GermEvidence]]:
    evidence = []
    for a in a_ladder:
        tried = _eps_ladder(a, grids[0])
        hit = next((e for e in tried if _contained(a, e, v, grids)), None)
        evidence.append(GermEvidence(a, hit, tuple(tried)))
    return int(all(e.epsilon is not None for e in evidence)), evidence


def germ_cusp_F(
    v: Region,
    A_ladder: Sequence = DEFAULT_A_LADDER,
    resolutions: Sequence[int] = GERM_LADDER,
) -> GermVerdict:
    if not in_catalog(v):
        raise InconclusiveError(
            "germ containment is only decided for catalog regions; "
            "asymptotic containment cannot be read off finitely many samples"
        )
    a_ladder = effective_ladder(v, A_ladder)
    grids = sorted((Grid(v.bbox, n) for n in resolutions), key=lambda g: g.resolution)
    rank, evidence = _rank_on(v, a_ladder, grids)
    per = tuple((g.resolution, _rank_on(v, a_ladder, [g])[0]) for g in grids)
    return GermVerdict(rank, tuple(evidence), per)


def sheaf_N_sections(
    v: Region,
    A_ladder: Sequence = DEFAULT_A_LADDER,
    resolutions: Sequence[int] = GERM_LADDER,
) -> int:
    """0 if the origin lies in v (exact point test), else the rank of F(v)."""
    if v.contains((0, 0)):
        return 0
    return germ_cusp_F(v, A_ladder, resolutions).rank
