import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanrot.lattice import (
    AXES,
    Cone,
    Fan,
    InvalidFan,
    Ray,
    Sector,
    ccw_compare,
    cross,
    primitive_generator,
    smallest_containing_cone,
    validate_fan,
)

from conftest import primitive_vectors


@pytest.mark.parametrize("v, expected", [((4, -6), (2, -3)), ((0, 5), (0, 1)), ((7, 3), (7, 3)), ((-3, 0), (-1, 0))])
def test_primitive_generator(v, expected):
    assert primitive_generator(v) == expected


def test_zero_vector_has_no_ray():
    with pytest.raises(ValueError, match="zero vector has no ray"):
        primitive_generator((0, 0))


@pytest.mark.parametrize(
    "a, b, cut, expected",
    [
        ((1, 1), (0, 1), (1, 0), -1),
        ((0, -1), (1, 1), (1, 0), 1),
        ((1, 0), (-1, 0), (1, 0), -1),
        ((1, 0), (1, 0), (1, 0), 0),
        ((1, 0), (0, -1), (0, 1), 1),
    ],
)
def test_ccw_compare(a, b, cut, expected):
    assert ccw_compare(a, b, cut) == expected


def _angle(v, cut):
    return (math.atan2(v[1], v[0]) - math.atan2(cut[1], cut[0])) % (2 * math.pi)


small = st.tuples(st.integers(-30, 30), st.integers(-30, 30)).filter(lambda v: v != (0, 0)).map(primitive_generator)


@given(small, small, small)
def test_ccw_compare_matches_angles(a, b, cut):
    # float angles are exact enough to separate distinct directions at this height
    expected = 0 if a == b else (-1 if _angle(a, cut) < _angle(b, cut) else 1)
    if a == cut:
        expected = 0 if b == cut else -1
    elif b == cut:
        expected = 1
    assert ccw_compare(a, b, cut) == expected


@given(st.lists(small, min_size=3, max_size=8, unique=True), small, small)
def test_cut_change_rotates_order(rays, cut1, cut2):
    import functools

    k1 = sorted(rays, key=functools.cmp_to_key(lambda a, b: ccw_compare(a, b, cut1)))
    k2 = sorted(rays, key=functools.cmp_to_key(lambda a, b: ccw_compare(a, b, cut2)))
    s = k1.index(k2[0])
    assert k1[s:] + k1[:s] == k2


def test_smallest_containing_cone_examples(quadrants):
    assert smallest_containing_cone(quadrants, Ray(2, 3)) == Cone("sector", 0)
    assert smallest_containing_cone(quadrants, Ray(0, 5)) == Cone("ray", 1)
    assert smallest_containing_cone(quadrants, Sector(Ray(1, 1), Ray(-1, 0))) is None
    assert smallest_containing_cone(quadrants, Sector(Ray(1, 2), Ray(0, 1))) == Cone("sector", 0)
    assert smallest_containing_cone(quadrants, Sector(Ray(1, -1), Ray(1, 0))) == Cone("sector", 3)


def test_validate_fan_examples():
    assert validate_fan([(1, 0), (0, 1), (-1, 0), (0, -1)]).d == 4
    with pytest.raises(InvalidFan):
        validate_fan([(1, 0), (-1, 0)])
    with pytest.raises(InvalidFan):
        validate_fan([(1, 0), (-1, 0), (0, 1)])
    with pytest.raises(InvalidFan, match="duplicate"):
        validate_fan([(1, 0), (2, 0), (0, 1), (-1, -1)])
    # winding twice
    with pytest.raises(InvalidFan):
        validate_fan([(1, 0), (0, 1), (-1, 0), (0, -1)] * 2)


def test_validate_fan_normalizes_and_canonicalizes():
    f = validate_fan([(0, 3), (-2, 0), (0, -1), (5, 0)])
    assert f.rays == AXES
    assert f == Fan(AXES)


FANS = [
    Fan(AXES),
    Fan(((1, 0), (0, 1), (-1, -1))),
    Fan(((2, 1), (-1, 3), (-5, -2), (1, -4))),
    Fan(((1, 0), (3, 1), (1, 1), (0, 1), (-1, 2), (-1, 0), (-2, -7), (1, -1))),
]


@pytest.mark.parametrize("fan", FANS, ids=repr)
def test_every_primitive_vector_in_exactly_one_cone(fan):
    for v in primitive_vectors(20):
        on_rays = [j for j, r in enumerate(fan.rays) if r == v]
        in_sectors = [j for j, s in enumerate(fan.sectors()) if cross(s.lo, v) > 0 and cross(v, s.hi) > 0]
        assert len(on_rays) + len(in_sectors) == 1
        got = smallest_containing_cone(fan, Ray(*v))
        assert got == (Cone("ray", on_rays[0]) if on_rays else Cone("sector", in_sectors[0]))
