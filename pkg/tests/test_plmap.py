import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fanrot.lattice import AXES, Fan
from fanrot.plmap import (
    IDENTITY,
    ROT90,
    SHEAR,
    InvalidElement,
    Matrix,
    apply_vector,
    compose,
    construct_rotation,
    from_json,
    generators,
    identity,
    image_fan,
    inverse,
    linear,
    power,
    random_element,
    to_json,
    validate_pl,
)
from fanrot.refine import simple_split

from conftest import primitive_vectors

QUADRANTS = [(1, 0), (0, 1), (-1, 0), (0, -1)]
PRIMS = primitive_vectors(30)

elements = st.builds(random_element, st.integers(0, 10**6), st.integers(1, 5))


def test_validate_pl_identity():
    F = validate_pl(QUADRANTS, [[[1, 0], [0, 1]]] * 4)
    assert F == identity()


def test_validate_pl_rejects_determinant():
    with pytest.raises(InvalidElement, match="determinant 25"):
        validate_pl(QUADRANTS, [[[4, -3], [3, 4]]] * 4)


def test_validate_pl_rejects_discontinuity():
    with pytest.raises(InvalidElement, match=r"continuity fails on ray \(0,1\)"):
        validate_pl(QUADRANTS, [[[1, 1], [0, 1]]] + [[[1, 0], [0, 1]]] * 3)


def test_validate_pl_rejects_folding():
    # continuous and det 1 piecewise, but the images wrap twice
    with pytest.raises(InvalidElement):
        validate_pl([(1, 0), (0, 1), (-1, -1)], [[[0, -1], [1, -1]], [[-1, 1], [-1, 0]], [[0, -1], [1, -1]]])


def test_apply_vector_examples():
    assert apply_vector(identity(), (3, 5)) == (3, 5)
    assert apply_vector(linear(ROT90), (1, 0)) == (0, 1)
    assert apply_vector(linear(SHEAR), (0, 1)) == (1, 1)
    assert apply_vector(linear(SHEAR), (0, 0)) == (0, 0)


def test_image_fan_examples():
    assert image_fan(identity()) == Fan(AXES)
    assert image_fan(linear(SHEAR)) == Fan(((1, 0), (1, 1), (-1, 0), (-1, -1)))
    assert set(image_fan(linear(ROT90)).rays) == set(AXES)


def test_compose_examples():
    R = linear(ROT90)
    assert compose(R, R) == linear(Matrix(-1, 0, 0, -1))
    # G o F: F acts first, so the matrix is SHEAR @ ROT90
    assert compose(linear(SHEAR), R) == linear(SHEAR @ ROT90)
    assert compose(linear(SHEAR), R) == linear(Matrix(1, -1, 1, 0))
    assert compose(R, linear(SHEAR)) == linear(Matrix(0, -1, 1, 1))


def test_inverse_examples():
    assert inverse(identity()) == identity()
    assert inverse(linear(ROT90)) == linear(Matrix(0, 1, -1, 0))


def test_construct_rotation_examples():
    assert construct_rotation(1, 4) == linear(ROT90)
    assert construct_rotation(0, 4) == identity()
    F = construct_rotation(1, 5)
    assert F.fan == Fan(((1, 0), (1, 1), (0, 1), (-1, 0), (0, -1)))
    assert not F.is_linear()
    assert power(F, 5) == identity()
    assert all(power(F, k) != identity() for k in range(1, 5))


@pytest.mark.parametrize("q", range(3, 13))
def test_construct_rotation_orders(q):
    for p in range(q):
        F = construct_rotation(p, q)
        assert power(F, q // math.gcd(p, q)) == identity()


def test_random_element_reproducible():
    assert random_element(1, 1) in [g for g in generators()]
    assert random_element(42, 6) == random_element(42, 6)
    F = random_element(7, 4)
    assert validate_pl(F.fan.rays, F.matrices) == F


def test_equality_is_functional():
    F = linear(SHEAR)
    finer = F.on_fan(simple_split(F.fan, 2))
    assert finer.fan != F.fan
    assert finer == F and hash(finer) == hash(F)
    assert F != linear(IDENTITY)


def test_json_round_trip():
    F = random_element(3, 5)
    doc = to_json(F)
    assert all(isinstance(x, str) for r in doc["rays"] for x in r)
    assert from_json(doc) == F


@given(elements)
def test_apply_vector_is_bijective(F):
    Finv = inverse(F)
    images = set()
    for v in PRIMS[::7]:
        w = F(v)
        assert math.gcd(*w) == 1
        assert Finv(w) == v
        images.add(w)
    assert len(images) == len(PRIMS[::7])


@given(elements, elements, elements)
def test_compose_associative(F, G, H):
    assert compose(H, compose(G, F)) == compose(compose(H, G), F)


@given(elements, elements)
def test_compose_agrees_pointwise(F, G):
    GF = compose(G, F)
    for v in PRIMS[::11]:
        assert GF(v) == G(F(v))


@given(elements)
def test_compose_with_inverse(F):
    assert compose(F, inverse(F)) == identity()
    assert compose(inverse(F), F) == identity()


@given(elements)
def test_image_of_regular_fan_is_regular(F):
    G = F.regular()
    assert image_fan(G).is_regular


@given(elements, st.integers(0, 50))
def test_refining_the_fan_keeps_the_function(F, j):
    G = F.regular()
    finer = G.on_fan(simple_split(G.fan, j % G.fan.d))
    assert finer == G
    for v in PRIMS:
        assert finer(v) == G(v)
