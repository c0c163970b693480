import math

import pytest
from hypothesis import settings

from fanrot.lattice import AXES, Fan

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def primitive_vectors(height):
    return [
        (x, y)
        for x in range(-height, height + 1)
        for y in range(-height, height + 1)
        if math.gcd(x, y) == 1
    ]


@pytest.fixture
def quadrants():
    return Fan(AXES)
