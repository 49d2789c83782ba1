from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from oracles import brute_squared_distances, poly_sign, same_partition, union_find_labels
from sublin.errors import ConfigurationError
from sublin.fixtures import HALF, UNIT, cusp_open, u12_family
from sublin.geometry import (
    X1,
    X2,
    BBox,
    Grid,
    Mask,
    Polynomial,
    Region,
    component_closed_in,
    components,
    distance_to_complement,
    distance_to_set,
    gt,
    lt,
    mask_to_json,
    pgm_bytes,
    predicate_from_json,
    read_pgm,
    region_algebra,
    write_pgm,
)

masks32 = arrays(bool, (32, 32))


def test_half_plane_splits_even_grid():
    m = Region.where(UNIT, gt(X1)).rasterize(Grid(UNIT, 16))
    assert m.bits[:, 8:].all() and not m.bits[:, :8].any()


def test_full_region_sets_every_bit():
    assert Region.full(UNIT).rasterize(Grid(UNIT, 16)).is_full()


def test_parabola_raster_matches_pointwise_sign():
    grid = Grid(UNIT, 64)
    region = Region.where(UNIT, lt(X2 - X1**2), gt(X1))
    m = region.rasterize(grid)
    for j, y in enumerate(grid.ys_exact):
        for i, x in enumerate(grid.xs_exact):
            want = poly_sign({(2, 0): F(1), (0, 1): F(-1)}, x, y) > 0 and x > 0
            assert m.bits[j, i] == want


def test_rasterize_rejects_other_bbox():
    with pytest.raises(ConfigurationError):
        Region.full(UNIT).rasterize(Grid(HALF, 16))


@pytest.mark.parametrize("bad", [{"x1^9": "1"}, {"x1^1": str(2**65)}, {"y^1": "1"}])
def test_polynomial_caps(bad):
    with pytest.raises(ConfigurationError):
        Polynomial.from_terms(bad)


def test_predicate_json_round_trip():
    region = Region.where(UNIT, gt(X1), lt(X2 - F(1, 3) * X1**2))
    again = Region(predicate_from_json(region.predicate.to_json()), UNIT)
    grid = Grid(UNIT, 32)
    assert again.rasterize(grid) == region.rasterize(grid)


def test_all_set_mask_takes_empty_convention():
    d = distance_to_complement(Mask.full(Grid(UNIT, 16)))
    assert d.empty and np.all(d.values == UNIT.diameter + 1)


def test_empty_set_distance_takes_empty_convention():
    d = distance_to_set(Mask.empty(Grid(UNIT, 16)))
    assert np.all(d.values == UNIT.empty_convention)


def test_distance_to_wall():
    grid = Grid(UNIT, 64)
    m = Region.where(UNIT, gt(X1)).rasterize(grid)
    j, i = grid.cell_of((F(1, 2) + F(1, 128), F(1, 128)))
    assert abs(distance_to_complement(m).at(j, i) - 0.5) <= grid.cell_diagonal


def test_single_cell_distance():
    grid = Grid(UNIT, 17)
    bits = np.zeros(grid.shape, bool)
    bits[8, 8] = True
    xx, yy = grid.mesh
    want = np.hypot(xx - grid.xs[8], yy - grid.ys[8])
    assert np.allclose(distance_to_set(Mask(grid, bits)).values, want, atol=1e-12)


@given(masks32)
def test_edt_matches_brute_force(bits):
    grid = Grid(UNIT, 32)
    m = Mask(grid, bits)
    for field, target in ((distance_to_complement(m), ~bits), (distance_to_set(m), bits)):
        want = brute_squared_distances(target)
        if want is None:
            assert field.empty
        else:
            # square cells: unit = cell width squared
            assert np.array_equal(field.squared, want)


def test_anisotropic_edt_is_exact():
    bbox = BBox(0, 2, 0, 1)
    grid = Grid(bbox, 16)
    rng = np.random.default_rng(3)
    bits = rng.random(grid.shape) < 0.1
    field = distance_to_set(Mask(grid, bits))
    xx, yy = grid.mesh
    pts = np.argwhere(bits)
    want = np.min([(xx - grid.xs[i]) ** 2 + (yy - grid.ys[j]) ** 2 for j, i in pts], axis=0)
    assert np.allclose(field.values**2, want, rtol=0, atol=1e-12)


@given(masks32, masks32)
def test_distance_monotone_under_inclusion(a, b):
    grid = Grid(UNIT, 32)
    small, big = Mask(grid, a & b), Mask(grid, a | b)
    assert np.all(distance_to_complement(small).values <= distance_to_complement(big).values)


def test_two_squares_two_components():
    bits = np.zeros((16, 16), bool)
    bits[2:5, 2:5] = bits[9:12, 9:12] = True
    assert components(Mask(Grid(UNIT, 16), bits)).count == 2


@pytest.mark.parametrize("n", [64, 128, 256])
def test_cusp_is_one_component(n):
    m = cusp_open(2, F(1, 4)).rasterize(Grid(HALF, n))
    assert components(m).count == 1


@pytest.mark.parametrize("connectivity", [4, 8])
@given(bits=arrays(bool, (24, 24), elements=st.booleans()))
def test_components_match_union_find(connectivity, bits):
    lab = components(Mask(Grid(UNIT, 24), bits), connectivity)
    assert same_partition(lab.labels, union_find_labels(bits, connectivity))
    assert lab.count == len(set(union_find_labels(bits, connectivity)[bits].tolist()))


def test_components_ordered_by_raster_scan():
    bits = np.zeros((16, 16), bool)
    bits[10, 1] = bits[0, 12] = True
    lab = components(Mask(Grid(UNIT, 16), bits))
    assert lab.labels[0, 12] == 1 and lab.labels[10, 1] == 2


def test_closed_interval_inside_larger_interval():
    grid = Grid(UNIT, 32)
    ambient = Mask(grid, np.ones(grid.shape, bool))
    inner = np.zeros(grid.shape, bool)
    inner[:, 10:20] = True
    # the inner strip has neighbours in the ambient: not closed there
    lab = components(Mask(grid, inner))
    assert not component_closed_in(lab, 1, ambient)
    # but it is closed in itself
    assert component_closed_in(lab, 1, Mask(grid, inner))


def test_half_open_strip_not_closed():
    grid = Grid(UNIT, 32)
    ambient = np.zeros(grid.shape, bool)
    ambient[:, 4:28] = True
    strip = ambient.copy()
    strip[:, 16:] = False
    lab = components(Mask(grid, strip))
    assert not component_closed_in(lab, 1, Mask(grid, ambient))


@pytest.mark.parametrize("n", [64, 128, 256])
def test_v_cap_u1_not_closed_in_cusp(n):
    grid = Grid(HALF, n)
    v = cusp_open(2, F(1, 4)).rasterize(grid)
    piece = v & u12_family()["U1"].rasterize(grid)
    lab = components(piece)
    assert lab.count >= 1
    assert not any(component_closed_in(lab, k, v) for k in range(1, lab.count + 1))


def test_closed_in_requires_subset():
    grid = Grid(UNIT, 16)
    lab = components(Mask.full(grid))
    with pytest.raises(ConfigurationError):
        component_closed_in(lab, 1, Mask.empty(grid))


def test_intersection_with_full_is_identity():
    grid = Grid(UNIT, 64)
    u = u12_family(UNIT)["U1"]
    assert region_algebra("intersection", u, Region.full(UNIT)).rasterize(grid) == u.rasterize(grid)


def test_u12_is_the_double_cusp():
    grid = Grid(HALF, 128)
    fam = u12_family()
    want = Region.where(HALF, gt(X1), lt(X2 - X1**2), gt(X2 + X1**2), lt(X1**2 + X2**2 - F(4, 25)))
    assert fam["U12"].rasterize(grid) == want.rasterize(grid)


coeff = st.fractions(min_value=-3, max_value=3, max_denominator=4)
monomial = st.tuples(st.integers(0, 2), st.integers(0, 2))
polys = st.dictionaries(monomial, coeff, min_size=1, max_size=4).map(
    lambda d: Polynomial.from_terms({f"x1^{a} x2^{b}": str(c) for (a, b), c in d.items()})
)


@pytest.mark.parametrize("op,combine", [
    ("union", np.logical_or), ("intersection", np.logical_and), ("difference", lambda a, b: a & ~b),
])
@given(p=polys, q=polys)
def test_compose_then_rasterize(op, combine, p, q):
    grid = Grid(UNIT, 16)
    a, b = Region(gt(p), UNIT), Region(gt(q), UNIT)
    composed = region_algebra(op, a, b).rasterize(grid).bits
    assert np.array_equal(composed, combine(a.rasterize(grid).bits, b.rasterize(grid).bits))


def test_pgm_round_trip_puts_top_row_at_max_x2(tmp_path):
    grid = Grid(UNIT, 16)
    m = Region.where(UNIT, gt(X2)).rasterize(grid)
    raw = pgm_bytes(m)
    assert raw.startswith(b"P5\n16 16\n255\n")
    assert raw[len(b"P5\n16 16\n255\n")] == 255  # first stored pixel is the top-left cell
    back = read_pgm(write_pgm(m, tmp_path / "m.pgm"))
    assert np.array_equal(back == 255, m.bits)


def test_mask_json_rows():
    grid = Grid(UNIT, 8)
    doc = mask_to_json(Region.where(UNIT, gt(X1)).rasterize(grid))
    assert doc["rows"][0] == "00001111" and doc["resolution"] == 8


def test_grid_minimum_resolution():
    with pytest.raises(ConfigurationError):
        Grid(UNIT, 4)
