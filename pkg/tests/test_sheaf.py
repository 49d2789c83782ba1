import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import modular_rank, random_rational_matrix
from sublin.errors import ConfigurationError, InconclusiveError, PreconditionError
from sublin.fixtures import HALF, UNIT, ball, cusp_open, disks_trio, germ_catalog, half_disk, lens, u12_family
from sublin.geometry import X1, X2, Grid, Region, gt, lt
from sublin.sheaf import (
    CochainComplex,
    ConstructibleSheaf,
    cech_complex,
    cohomology,
    germ_cusp_F,
    mv_check,
    restriction,
    sections,
    sheaf_mv_check,
    sheaf_N_sections,
)
from sublin.sheaf import linalg

k = ConstructibleSheaf.k


@pytest.fixture(scope="module")
def fam():
    return u12_family()


@pytest.fixture(scope="module")
def g128():
    return Grid(HALF, 128)


# exact linear algebra ---------------------------------------------------------------
def test_ranks_agree_with_modular_oracle():
    rng = random.Random(20)
    for _ in range(50):
        rows, cols = rng.randint(1, 40), rng.randint(1, 40)
        m = random_rational_matrix(rng, rows, cols, rank=rng.randint(0, min(rows, cols)))
        assert linalg.rank(linalg.qmatrix(m)) == modular_rank(m)


@given(st.lists(st.lists(st.fractions(-5, 5, max_denominator=7), min_size=4, max_size=4), min_size=1, max_size=5))
def test_nullspace_is_annihilated(rows):
    a = linalg.qmatrix(rows)
    null = linalg.nullspace(a)
    assert len(null) == a.shape[1] - linalg.rank(a)
    for v in null:
        assert all(x == 0 for x in linalg.matmul(a, v.reshape(-1, 1)).flat)


def test_empty_matrix_rank():
    assert linalg.rank(linalg.qmatrix([], shape=(0, 3))) == 0


# sections ---------------------------------------------------------------------------
def test_sections_count_components():
    grid = Grid(UNIT, 64)
    w = ball((-F(1, 2), 0), F(1, 4), UNIT) | ball((F(1, 2), 0), F(1, 4), UNIT)
    assert sections(k(w), w, grid).dimension == 2


def test_multiplicity_scales_dimension():
    grid = Grid(UNIT, 64)
    h, l = half_disk(), lens()
    assert sections(ConstructibleSheaf.direct_sum(k(h, 3), k(l)), h & l, grid).dimension == 3 + 1
    # the lens part of the half disk reaches the arc boundary inside the disk, so it is not closed there
    assert sections(k(l), h, grid).dimension == 0


@pytest.mark.parametrize("n", [64, 128, 256])
@pytest.mark.parametrize("a", [2, 4])
def test_horn_not_closed_in_sharp_cusp(fam, n, a):
    v = cusp_open(a, F(1, 4))
    assert sections(k(fam["U1"]), v, Grid(HALF, n)).dimension == 0


@pytest.mark.parametrize("a", [1, 2, 4])
def test_half_disk_sections_over_cusp(fam, g128, a):
    assert sections(k(fam["U"]), cusp_open(a, F(1, 4)), g128).dimension == 1


def test_bbox_mismatch_rejected(fam):
    with pytest.raises(ConfigurationError):
        sections(k(fam["U"]), fam["U"], Grid(UNIT, 32))


def test_sheaf_needs_positive_multiplicity():
    with pytest.raises(ConfigurationError):
        ConstructibleSheaf(((half_disk(), 0),))


# restriction ------------------------------------------------------------------------
def test_restriction_to_itself_is_identity(fam, g128):
    F_ = ConstructibleSheaf.direct_sum(k(fam["U1"]), k(fam["U2"], 2))
    r = restriction(F_, fam["U"], fam["U"], g128)
    assert np.array_equal(r, linalg.identity(r.shape[0]))


def test_restriction_between_connected_opens():
    grid = Grid(UNIT, 64)
    h = half_disk()
    r = restriction(k(h), h, ball((F(1, 3), 0), F(1, 6), UNIT), grid)
    assert r.shape == (1, 1) and r[0, 0] == 1


def test_restriction_horn_to_half_disk(fam, g128):
    # U1 is not closed in U (the arc x2 = x1^2 lies in U) but is closed in itself
    r = restriction(k(fam["U1"]), fam["U"], fam["U1"], g128)
    assert r.shape == (1, 0)


def test_restriction_needs_containment(fam, g128):
    with pytest.raises(PreconditionError):
        restriction(k(fam["U"]), fam["U1"], fam["U"], g128)


# Čech complexes -----------------------------------------------------------------------
def test_single_member_complex(fam, g128):
    c = cech_complex([fam["U"]], k(fam["U"]), g128)
    assert c.dims == (1,) and c.differentials == ()
    assert cohomology(c).ranks == (1,)


def test_two_member_complex_shape(fam, g128):
    c = cech_complex([fam["U1"], fam["U2"]], k(fam["U"]), g128)
    assert c.dims == (2, 1)
    assert [list(map(int, row)) for row in c.d(0)] == [[-1, 1]]


def test_trio_complex_squares_vanish():
    trio = disks_trio()
    c = cech_complex(trio, k(trio.ambient), Grid(UNIT, 64))
    assert c.length == 3 and c.squares_vanish()
    assert cohomology(c).ranks == (1, 0, 0)


def test_strips_over_disk():
    d = ball((0, 0), F(1, 2), UNIT)
    strips = [Region.where(UNIT, lt(X1 - F(1, 4))) & d, Region.where(UNIT, gt(X1 + F(1, 4))) & d]
    rep = cohomology(cech_complex(strips, k(d), Grid(UNIT, 64)))
    assert rep.ranks == (1, 0)
    assert len(rep.witnesses[0]) == 1


def test_zero_complex():
    assert cohomology(CochainComplex.zero(3)).ranks == (0, 0, 0)


def test_cusp_pair_companion_complex(fam, g128):
    """k_U over the horns glues; the sum k_U1 + k_U2 does not reach k_U over a sharp cusp."""
    assert cohomology(cech_complex([fam["U1"], fam["U2"]], k(fam["U"]), g128)).ranks == (1, 0)
    v = cusp_open(2, F(1, 4))
    dims = [sections(k(fam[n]), v, g128).dimension for n in ("U1", "U2", "U")]
    assert dims == [0, 0, 1]


def test_member_limit():
    many = [ball((0, 0), F(1, 2), UNIT)] * 13
    with pytest.raises(ConfigurationError):
        cech_complex(many, k(many[0]), Grid(UNIT, 16))


def test_h0_equals_global_sections():
    trio = disks_trio()
    grid = Grid(UNIT, 64)
    F_ = k(trio.ambient, 2)
    assert cohomology(cech_complex(trio, F_, grid)).ranks[0] == sections(F_, trio.ambient, grid).dimension


def test_refinement_keeps_cohomology():
    d = ball((0, 0), F(3, 4), UNIT)
    grid = Grid(UNIT, 64)
    coarse = [Region.where(UNIT, lt(X1 - F(1, 4))) & d, Region.where(UNIT, gt(X1 + F(1, 4))) & d]
    fine = [p & q for p in coarse for q in (Region.where(UNIT, lt(X2 - F(1, 4))), Region.where(UNIT, gt(X2 + F(1, 4))))]
    assert cohomology(cech_complex(coarse, k(d), grid)).ranks[:2] == cohomology(cech_complex(fine, k(d), grid)).ranks[:2]


# Mayer-Vietoris ---------------------------------------------------------------------
def test_lens_pair_is_exact():
    grid = Grid(UNIT, 64)
    u1, u2 = ball((-F(1, 5), 0), F(1, 2), UNIT), ball((F(1, 5), 0), F(1, 2), UNIT)
    rep = mv_check(u1, u2, k(u1 | u2), grid)
    assert rep.fully_exact and rep.coker_rank == 0


def test_equal_members_are_exact():
    h = half_disk()
    assert mv_check(h, h, k(h), Grid(UNIT, 64)).fully_exact


@pytest.mark.parametrize("over", ["ball", "cusp"])
def test_middle_exactness_over_test_opens(fam, g128, over):
    w = ball((F(1, 4), 0), F(1, 8), HALF) if over == "ball" else cusp_open(4, F(1, 4))
    rep = mv_check(fam["U1"], fam["U2"], k(fam["U"]), g128, over=w)
    assert rep.exact_left and rep.exact_middle


def test_cusp_battery_cokernel(fam, g128):
    cokers = [sheaf_mv_check(fam["U1"], fam["U2"], cusp_open(a, F(1, 4)), g128).coker_rank for a in (1, 2, 4)]
    # V = U_{1,1/4} sits inside U12, so only the sharper cusps leave a cokernel
    assert cokers == [0, 1, 1]


# germs of cusps ---------------------------------------------------------------------
@pytest.mark.parametrize("entry", range(12))
def test_germ_catalog(entry):
    region, f_rank, n_rank = germ_catalog()[entry]
    verdict = germ_cusp_F(region)
    assert verdict.rank == f_rank and verdict.stable
    assert sheaf_N_sections(region) == n_rank


def test_germ_outside_catalog():
    with pytest.raises(InconclusiveError):
        germ_cusp_F(ball((F(1, 3), F(1, 3)), F(1, 9), HALF))


def test_germ_sharp_cusp_evidence():
    v = Region.where(HALF, gt(X1**3 - X2**2))
    verdict = germ_cusp_F(v)
    assert all(e.epsilon is not None for e in verdict.evidence)
    for e in verdict.evidence:
        assert e.epsilon <= 1 / e.A**2 or e.epsilon == F(1, 4)


def test_empty_set_has_no_sections():
    assert sheaf_N_sections(Region.empty(HALF)) == 0
