"""Named regions and coverings used throughout the tests, the acceptance gate and the CLI."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .geometry import X1, X2, BBox, Region, disk, gt, lt

F = Fraction
UNIT = BBox.square(1)
HALF = BBox.square(F(1, 2))


@dataclass(frozen=True)
class Covering:
    """Ordered family of open members covering ``ambient`` (which fixes the frame policy)."""

    members: tuple[Region, ...]
    ambient: Region
    name: str = ""

    @property
    def bbox(self) -> BBox:
        return self.ambient.bbox

    def union(self) -> Region:
        out = self.members[0]
        for m in self.members[1:]:
            out = out | m
        return out


# cusp pair (two horn-shaped sets whose union is a half plane) ------------------------
def cusp_pair(bbox: BBox = HALF) -> Covering:
    right = gt(X1)
    u1 = Region.where(bbox, right, gt(X2 + X1**2), label="cusp_upper")
    u2 = Region.where(bbox, right, lt(X2 - X1**2), label="cusp_lower")
    return Covering((u1, u2), Region.where(bbox, right, label="right_half"), "cusp-pair")


def u1_u3(bbox: BBox = UNIT) -> Covering:
    """{x2 > -x1^2, x1 > 0} and {x1 > -x2^2, x2 > 0}: a linear pair."""
    u1 = Region.where(bbox, gt(X1), gt(X2 + X1**2), label="u1")
    u3 = Region.where(bbox, gt(X2), gt(X1 + X2**2), label="u3")
    amb = (u1 | u3).labelled("u1_or_u3")
    return Covering((u1, u3), amb, "u1-u3")


# two horns inside a half ball ---------------------------------------------------------
U12_RADIUS = F(2, 5)


def u12_family(bbox: BBox = HALF, radius=U12_RADIUS) -> dict[str, Region]:
    ball = disk((0, 0), radius)
    right = gt(X1)
    u1 = Region.where(bbox, ball, right, lt(X2 - X1**2), label="U1")
    u2 = Region.where(bbox, ball, right, gt(X2 + X1**2), label="U2")
    u = Region.where(bbox, ball, right, label="half_disk")
    return {"U1": u1, "U2": u2, "U12": (u1 & u2).labelled("U12"), "U": u}


def u12_covering(bbox: BBox = HALF) -> Covering:
    fam = u12_family(bbox)
    return Covering((fam["U1"], fam["U2"]), fam["U"], "u12")


def cusp_open(a, eps, bbox: BBox = HALF) -> Region:
    """U_{A,eps} = {0 < x1 < eps, |x2| < A x1^2}."""
    a, eps = F(a), F(eps)
    return Region.where(
        bbox, gt(X1), lt(X1 - eps), lt(X2 - a * X1**2), gt(X2 + a * X1**2),
        label=f"cusp(A={a},eps={eps})",
    )


# plain shapes -------------------------------------------------------------------------
def half_plane_region(bbox: BBox = UNIT) -> Region:
    return Region.where(bbox, gt(X1), label="half_plane")


def half_disk(bbox: BBox = UNIT, radius=F(3, 4)) -> Region:
    return Region.where(bbox, gt(X1), disk((0, 0), radius), label="half_disk")


def lens(bbox: BBox = UNIT) -> Region:
    """Intersection of two disks, with corners on the x2 axis."""
    return Region.where(bbox, disk((F(-2, 5), 0), F(4, 5)), disk((F(2, 5), 0), F(4, 5)), label="lens")


def wedge(bbox: BBox = UNIT) -> Region:
    """{x2 > |x1|}."""
    return Region.where(bbox, gt(X2 - X1), gt(X2 + X1), label="wedge")


def square(bbox: BBox = UNIT, half=F(1, 2)) -> Region:
    h = F(half)
    return Region.where(bbox, lt(X1 - h), gt(X1 + h), lt(X2 - h), gt(X2 + h), label="square")


def ball(center, radius, bbox: BBox = UNIT, label: str | None = None) -> Region:
    return Region.where(bbox, disk(center, radius), label=label or f"ball({center},{radius})")


def disks_trio(bbox: BBox = UNIT) -> Covering:
    """Three overlapping disks, cut down to a big disk they cover."""
    big = disk((0, 0), F(4, 5))
    centers = [(0, F(9, 20)), (F(-39, 100), F(-9, 40)), (F(39, 100), F(-9, 40))]
    members = tuple(
        Region.where(bbox, big, disk(c, F(3, 4)), label=f"disk{k}") for k, c in enumerate(centers)
    )
    return Covering(members, Region.where(bbox, big, label="big_disk"), "disks-trio")


def quadrant_halves(bbox: BBox = UNIT) -> dict[str, Region]:
    """The four open half squares whose union is the punctured square."""
    sq = square(bbox)
    out = {}
    for name, pred in (("x1>0", gt(X1)), ("x1<0", lt(X1)), ("x2>0", gt(X2)), ("x2<0", lt(X2))):
        out[name] = (sq & Region.where(bbox, pred)).labelled(f"square[{name}]")
    return out


def germ_catalog(bbox: BBox = HALF) -> list[tuple[Region, int, int]]:
    """Catalog entries (region, F-rank, N-rank) for the germ-of-cusps sheaves.

    F(V) = k exactly when V swallows a cusp U_{A,eps} for every A, and N(V) = F(V)
    unless V contains the origin, in which case N(V) = 0.
    """
    right = gt(X1)
    entries = [
        (cusp_open(1, F(1, 4), bbox), 0, 0),
        (cusp_open(2, F(1, 4), bbox), 0, 0),
        (Region.where(bbox, right, label="half_plane"), 1, 1),
        (Region.where(bbox, gt(X1**3 - X2**2), label="sharp_cusp"), 1, 1),
        (Region.where(bbox, right, lt(X2 - X1**2), label="below_parabola"), 0, 0),
        (Region.where(bbox, right, gt(X2 + X1**2), label="above_parabola"), 0, 0),
        (Region.where(bbox, right, gt(X2), label="quadrant"), 0, 0),
        (ball((0, 0), F(1, 4), bbox, "ball_at_origin"), 1, 0),
        (Region.full(bbox, "whole_window"), 1, 0),
        (ball((F(1, 4), 0), F(1, 4), bbox, "ball_touching_origin"), 1, 1),
        (ball((F(1, 4), F(1, 8)), F(1, 8), bbox, "ball_off_axis"), 0, 0),
        (
            (Region.where(bbox, right, gt(X2 + 2 * X1**2), label="horn_up")
             | Region.where(bbox, right, lt(X2 - 2 * X1**2), label="horn_down")),
            1, 1,
        ),
    ]
    return entries


FIXTURE_REGIONS = {
    "half-plane": half_plane_region,
    "half-disk": half_disk,
    "lens": lens,
    "wedge": wedge,
    "square": square,
}

FIXTURE_COVERINGS = {
    "cusp-pair": cusp_pair,
    "u1-u3": u1_u3,
    "u12": u12_covering,
    "disks-trio": disks_trio,
}
