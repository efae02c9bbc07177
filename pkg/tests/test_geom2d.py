from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from tropdisks.geom2d import (
    FULLPLANE,
    Cell,
    DegenerateSweep,
    NonGenericPath,
    ZeroVector,
    contains,
    det2,
    intersect,
    parse_point,
    point_cell,
    primitive,
    ray_cell,
    region,
    scalar,
    segment_cell,
    segment_crossings,
    sweep,
)

# region {x <= y <= 0}
WEDGE = region([((-1, 1), 0), ((0, -1), 0)])


@pytest.mark.parametrize("v,w,d", [((1, 0), (0, 1), 1), ((1, 0), (-1, -1), -1), ((2, 4), (1, 2), 0)])
def test_det2(v, w, d):
    assert det2(v, w) == d


@pytest.mark.parametrize("v,out", [((2, 4), ((1, 2), 2)), ((1, 1), ((1, 1), 1)), ((0, -3), ((0, -1), 3))])
def test_primitive(v, out):
    assert primitive(v) == out


def test_primitive_zero():
    with pytest.raises(ZeroVector):
        primitive((0, 0))


def test_scalar_parsing():
    assert scalar("3/6") == F(1, 2)
    assert scalar("-4") == -4
    assert parse_point("1/2,-3") == (F(1, 2), F(-3))
    for bad in ("0.5", "1e3", ""):
        with pytest.raises(ValueError):
            scalar(bad)
    with pytest.raises(TypeError):
        scalar(0.5)


def test_intersect_rays_meet():
    cell, tv = intersect(ray_cell((0, 0), (-1, 0)), ray_cell((-1, 2), (0, -1)))
    assert cell.dim == 0 and cell.vertex == (-1, 0) and tv


def test_intersect_parallel_disjoint():
    assert intersect(ray_cell((0, 0), (1, 0)), ray_cell((0, 1), (1, 0))) is None


def test_intersect_fullplane():
    r = ray_cell((0, 0), (-1, 0))
    assert intersect(FULLPLANE, r) == (r, True)


def test_sweep_point():
    assert sweep(point_cell((0, 0)), (1, 0)) == ray_cell((0, 0), (-1, 0))
    assert sweep(point_cell((-1, 0)), (1, 1)) == ray_cell((-1, 0), (-1, -1))


def test_sweep_ray_gives_wedge():
    assert sweep(ray_cell((0, 0), (-1, 0)), (1, 1)) == WEDGE


def test_sweep_degenerate():
    with pytest.raises(DegenerateSweep):
        sweep(segment_cell((0, 0), (1, 0)), (1, 0))
    with pytest.raises(DegenerateSweep):
        sweep(WEDGE, (1, 0))
    with pytest.raises(ZeroVector):
        sweep(point_cell((0, 0)), (0, 0))


def test_contains_examples():
    assert contains(WEDGE, (-2, -1), strict=True)
    assert not contains(WEDGE, (-1, -1), strict=True)
    assert contains(WEDGE, (-1, -1))
    assert not contains(ray_cell((0, 0), (-1, 0)), (1, 0))


def test_segment_crossings_examples():
    west = ray_cell((0, 0), (-1, 0))
    (tau, x), = segment_crossings((-2, 1), (-1, -2), west)
    assert tau == F(1, 3) and x == (F(-5, 3), 0)
    assert segment_crossings((1, 1), (2, 2), west) == []
    with pytest.raises(NonGenericPath):
        segment_crossings((-3, 0), (-1, 0), west)
    with pytest.raises(NonGenericPath):
        segment_crossings((1, 1), (-1, -1), west)


def test_cell_json_round_trip():
    for c in (WEDGE, FULLPLANE, point_cell((F(1, 3), -2)), segment_cell((0, 0), (F(3, 2), 1)),
              ray_cell((1, 1), (2, -4))):
        assert Cell.from_json(c.to_json()) == c


# ---------------------------------------------------------------------------
# properties

small = st.fractions(min_value=-6, max_value=6, max_denominator=6)
points = st.tuples(small, small)
vecs = st.tuples(st.integers(-4, 4), st.integers(-4, 4)).filter(lambda v: v != (0, 0))


@st.composite
def one_cells(draw):
    a = draw(points)
    if draw(st.booleans()):
        return ray_cell(a, draw(vecs))
    b = draw(points)
    assume(a != b)
    return segment_cell(a, b)


@st.composite
def cells(draw):
    kind = draw(st.sampled_from(["point", "one", "wedge", "full"]))
    if kind == "point":
        return point_cell(draw(points))
    if kind == "one":
        return draw(one_cells())
    if kind == "full":
        return FULLPLANE
    c = draw(one_cells())
    d = draw(vecs)
    assume(det2(c.t, d) != 0)
    return sweep(c, d)


GRID = [(F(x, 2), F(y, 2)) for x in range(-14, 15, 3) for y in range(-14, 15, 3)]


def _probe(c: Cell):
    pts = list(GRID)
    if c.dim < 2:
        pts += list(c.endpoints())
    return pts


def same_set(c1, c2) -> bool:
    if c1 is None or c2 is None:
        return c1 is c2
    if c1.dim != c2.dim:
        return False
    probes = _probe(c1) + _probe(c2)
    return all(contains(c1, p) == contains(c2, p) and contains(c1, p, True) == contains(c2, p, True)
               for p in probes)


@settings(max_examples=100, deadline=None)
@given(cells(), cells())
def test_intersect_commutes(c1, c2):
    h1, h2 = intersect(c1, c2), intersect(c2, c1)
    assert same_set(h1 and h1[0], h2 and h2[0])
    if h1:
        assert h1[1] == h2[1]


@settings(max_examples=100, deadline=None)
@given(cells())
def test_intersect_fullplane_identity(c):
    assert intersect(c, FULLPLANE)[0] == c


@settings(max_examples=100, deadline=None)
@given(cells(), cells())
def test_intersection_points_lie_in_both(c1, c2):
    hit = intersect(c1, c2)
    assume(hit is not None)
    for p in _probe(hit[0]):
        if contains(hit[0], p):
            assert contains(c1, p) and contains(c2, p)
    for p in GRID:
        if contains(c1, p) and contains(c2, p):
            assert contains(hit[0], p)


@settings(max_examples=100, deadline=None)
@given(points, vecs)
def test_sweep_idempotent(p, d):
    once = sweep(point_cell(p), d)
    assert same_set(sweep(once, d), once)


@settings(max_examples=100, deadline=None)
@given(cells())
def test_json_round_trip(c):
    assert Cell.from_json(c.to_json()) == c


@settings(max_examples=100, deadline=None)
@given(points, points, one_cells())
def test_segment_crossings_reversal(a, b, c):
    assume(a != b)
    try:
        fwd = segment_crossings(a, b, c)
    except NonGenericPath:
        with pytest.raises(NonGenericPath):
            segment_crossings(b, a, c)
        return
    back = segment_crossings(b, a, c)
    taus = [t for t, _ in fwd]
    assert taus == sorted(set(taus)) and all(0 < t < 1 for t in taus)
    assert [1 - t for t, _ in reversed(back)] == taus
    assert [x for _, x in reversed(back)] == [x for _, x in fwd]
