import math
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanrot.lattice import AXES, Fan, InvalidFan, Ray, Sector, cross, in_open_sector
from fanrot.refine import (
    SplitStep,
    apply_splits,
    common_refinement,
    regularize_fan,
    regularize_sector,
    simple_merge,
    simple_split,
    split_sequence,
    unit_complement,
)


def interior_primitive_points(s):
    """Brute force: primitive points strictly inside the sector, within the parallelogram."""
    pts = []
    xs = sorted([0, s.lo[0], s.hi[0], s.lo[0] + s.hi[0]])
    ys = sorted([0, s.lo[1], s.hi[1], s.lo[1] + s.hi[1]])
    D = cross(s.lo, s.hi)
    for x in range(xs[0], xs[-1] + 1):
        for y in range(ys[0], ys[-1] + 1):
            a, b = cross((x, y), s.hi), cross(s.lo, (x, y))  # D * coordinates
            if 0 < a <= D and 0 < b <= D and math.gcd(x, y) == 1 and (a, b) != (D, D):
                pts.append((x, y))
    return pts


def test_regularize_sector_examples():
    assert regularize_sector(Sector(Ray(1, 0), Ray(1, 3))) == [(1, 1), (1, 2)]
    assert regularize_sector(Sector(Ray(1, 0), Ray(0, 1))) == []
    assert regularize_sector(Sector(Ray(1, 0), Ray(1, 2))) == [(1, 1)]


def test_oracle_agrees_on_examples():
    assert interior_primitive_points(Sector(Ray(1, 0), Ray(1, 2))) == [(1, 1)]
    assert sorted(interior_primitive_points(Sector(Ray(1, 0), Ray(1, 3)))) == [(1, 1), (1, 2)]


@given(st.integers(-5, 5), st.integers(-5, 5), st.integers(2, 16), st.integers(-16, 32))
def test_regularize_sector_against_brute_force(x, y, D, c):
    if (x, y) == (0, 0) or math.gcd(x, y) != 1 or math.gcd(c, D) != 1:
        return
    lo = Ray(x, y)
    h = unit_complement(lo)
    hi = Ray(c * x + D * h[0], c * y + D * h[1])
    s = Sector(lo, hi)
    out = regularize_sector(s)
    chain = [lo] + out + [hi]
    assert all(cross(a, b) == 1 for a, b in zip(chain, chain[1:]))
    assert len(out) <= D - 1
    assert all(in_open_sector(w, lo, hi) for w in out)
    # the first ray peeled off is the unique interior point at lattice height one over lo
    assert [p for p in interior_primitive_points(s) if cross(lo, p) == 1] == [out[0]]
    # cross strictly decreases for the remaining sector
    dets = [cross(w, hi) for w in [lo] + out]
    assert all(a > b for a, b in zip(dets, dets[1:]))


def test_regularize_fan_examples():
    f = Fan(((1, 0), (1, 3), (-1, 0), (-1, -3)))
    g = regularize_fan(f)
    assert g.is_regular and g.refines(f)
    assert {(1, 1), (1, 2), (-1, -1), (-1, -2)} <= set(g.rays)
    assert regularize_fan(Fan(AXES)) == Fan(AXES)
    g = regularize_fan(Fan(((1, 0), (0, 1), (-2, -1))))
    assert g.is_regular and set(g.rays) >= {(1, 0), (0, 1), (-2, -1)}
    # only one sector has cross 2, so exactly one ray is added
    assert g == Fan(((1, 0), (0, 1), (-1, 0), (-2, -1)))


def random_fan(rng, k=6, size=9):
    rays = set()
    while len(rays) < k:
        v = (rng.randint(-size, size), rng.randint(-size, size))
        if v != (0, 0):
            g = math.gcd(*v)
            rays.add((v[0] // g, v[1] // g))
    try:
        return Fan(Fan(AXES).with_rays(rays).rays) if rng.random() < 0.5 else Fan(AXES).with_rays(rays)
    except InvalidFan:
        return None


@given(st.integers(0, 10**6))
def test_regularize_fan_properties(seed):
    f = random_fan(random.Random(seed))
    g = regularize_fan(f)
    assert g.is_regular
    assert g.refines(f)
    assert regularize_fan(g) == g


def test_simple_split_examples(quadrants):
    assert simple_split(quadrants, 0) == Fan(((1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)))
    five = Fan(((1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)))
    assert set(simple_split(five, 0).rays) - set(five.rays) == {(2, 1)}
    assert set(simple_split(quadrants, 2).rays) - set(quadrants.rays) == {(-1, -1)}


def test_simple_merge_examples(quadrants):
    five = Fan(((1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)))
    assert simple_merge(five, 1) == quadrants
    with pytest.raises(InvalidFan, match="not mergeable"):
        simple_merge(quadrants, 1)
    for j in range(4):
        split = simple_split(quadrants, j)
        new = (set(split.rays) - set(quadrants.rays)).pop()
        assert simple_merge(split, split.ray_index[new]) == quadrants


def test_split_sequence_examples(quadrants):
    fine1 = quadrants.with_rays([(1, 1)])
    assert split_sequence(quadrants, fine1) == [SplitStep(0, (1, 1))]
    assert split_sequence(quadrants, quadrants) == []
    fine2 = quadrants.with_rays([(1, 1), (2, 1)])
    steps = split_sequence(quadrants, fine2)
    assert [s.new_ray for s in steps] == [(1, 1), (2, 1)]
    assert apply_splits(quadrants, steps) == fine2


def test_split_sequence_rejects_non_refinements(quadrants):
    with pytest.raises(InvalidFan):
        split_sequence(quadrants.with_rays([(1, 1)]), quadrants)
    with pytest.raises(InvalidFan):
        split_sequence(quadrants, Fan(((1, 0), (1, 1), (-1, 0), (-1, -1))))


@given(st.integers(0, 10**6))
def test_split_sequence_replay(seed):
    rng = random.Random(seed)
    coarse = Fan(AXES)
    for _ in range(rng.randint(0, 6)):
        coarse = simple_split(coarse, rng.randrange(coarse.d))
    fine = coarse
    for _ in range(rng.randint(0, 10)):
        fine = simple_split(fine, rng.randrange(fine.d))
    assert apply_splits(coarse, split_sequence(coarse, fine)) == fine


def test_common_refinement_examples(quadrants):
    diag = Fan(((1, 1), (-1, 1), (-1, -1), (1, -1)))
    out = common_refinement(quadrants, diag)
    assert out.d == 8 and out.is_regular
    assert common_refinement(diag, diag) == regularize_fan(diag)
    other = Fan(((1, 0), (1, 1), (-1, 0), (-1, -1)))
    assert common_refinement(quadrants, other) == Fan(((1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)))


@given(st.integers(0, 10**6), st.integers(0, 10**6))
def test_common_refinement_properties(s1, s2):
    a, b = random_fan(random.Random(s1)), random_fan(random.Random(s2))
    c = common_refinement(a, b)
    assert c.is_regular and c.refines(a) and c.refines(b)
    assert c == common_refinement(b, a)
