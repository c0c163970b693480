"""Exact integer primitives: rays, sectors and complete fans in Z^2.

Everything here is decided with integer cross products; no floating point is
involved anywhere.  Fans are stored as a cyclic sequence of rays in
counterclockwise order, rotated so that the first ray is the first one met
when sweeping counterclockwise from the positive x-axis.
"""

from __future__ import annotations

import bisect
import functools
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union


class InvalidFan(ValueError):
    pass


class Ray(NamedTuple):
    """A rational ray, identified with its primitive generator."""

    x: int
    y: int

    def __add__(self, other):  # type: ignore[override]
        return Ray(self.x + other[0], self.y + other[1])

    def __repr__(self):
        return f"({self.x},{self.y})"


# Unnormalized integer vectors use the same tuple shape.
IntVector = Ray

X_AXIS = Ray(1, 0)
AXES = (Ray(1, 0), Ray(0, 1), Ray(-1, 0), Ray(0, -1))


def cross(u, v) -> int:
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v) -> int:
    return u[0] * v[0] + u[1] * v[1]


def primitive_generator(v) -> Ray:
    x, y = int(v[0]), int(v[1])
    g = math.gcd(x, y)
    if g == 0:
        raise ValueError("zero vector has no ray")
    return Ray(x // g, y // g)


def is_primitive(v) -> bool:
    return math.gcd(v[0], v[1]) == 1


def _half(v, cut) -> int:
    # 0 for angles in [0, pi) measured from cut, 1 for [pi, 2pi)
    c = cross(cut, v)
    if c > 0 or (c == 0 and dot(cut, v) > 0):
        return 0
    return 1


def ccw_less(a, b, cut=X_AXIS) -> bool:
    """True when `a` comes strictly before `b` sweeping ccw from `cut`."""
    ha, hb = _half(a, cut), _half(b, cut)
    if ha != hb:
        return ha < hb
    return cross(a, b) > 0


def ccw_compare(a, b, cut=X_AXIS) -> int:
    """Three-way comparison of directions by ccw angle starting at `cut`.

    Returns -1, 0 or 1.  Directions are compared, so (2, 0) and (1, 0) tie.
    """
    if ccw_less(a, b, cut):
        return -1
    if ccw_less(b, a, cut):
        return 1
    return 0


def ccw_key(cut=X_AXIS):
    return functools.cmp_to_key(lambda a, b: ccw_compare(a, b, cut))


def in_closed_sector(v, lo, hi) -> bool:
    # valid because every sector spans less than a half turn
    return cross(lo, v) >= 0 and cross(v, hi) >= 0


def in_open_sector(v, lo, hi) -> bool:
    return cross(lo, v) > 0 and cross(v, hi) > 0


def same_direction(u, v) -> bool:
    return cross(u, v) == 0 and dot(u, v) > 0


@dataclass(frozen=True)
class Sector:
    lo: Ray
    hi: Ray

    def __post_init__(self):
        if cross(self.lo, self.hi) <= 0:
            raise ValueError(f"sector facets {self.lo}, {self.hi} are not ccw independent")

    @property
    def det(self) -> int:
        return cross(self.lo, self.hi)

    @property
    def regular(self) -> bool:
        return self.det == 1

    @property
    def mediant(self) -> Ray:
        return primitive_generator(self.lo + self.hi)

    def contains(self, v) -> bool:
        return in_closed_sector(v, self.lo, self.hi)


class Cone(NamedTuple):
    """Reference to a cone of a fan: ('ray', j), ('sector', j) or ('origin', 0).

    Sector j is bounded by rays j and j+1 (cyclically).
    """

    kind: str
    index: int = 0

    def __repr__(self):
        if self.kind == "origin":
            return "origin"
        return f"{self.kind}[{self.index}]"


ORIGIN = Cone("origin", 0)


def _canonical_rotation(rays: Sequence[Ray]) -> int:
    best = 0
    for j in range(1, len(rays)):
        if ccw_less(rays[j], rays[best]):
            best = j
    return best


@dataclass(frozen=True)
class Fan:
    """A complete fan, stored as primitive rays in ccw order.

    Construction validates and rotates into canonical orientation; use
    :func:`validate_fan` to also normalize non-primitive input.
    """

    rays: tuple

    def __post_init__(self):
        rays = tuple(Ray(int(r[0]), int(r[1])) for r in self.rays)
        d = len(rays)
        if d < 3:
            raise InvalidFan(f"a complete fan needs at least 3 rays, got {d}")
        for r in rays:
            if not is_primitive(r):
                raise InvalidFan(f"ray generator {r} is not primitive")
        if len(set(rays)) != d:
            raise InvalidFan("duplicate ray")
        for j in range(d):
            a, b = rays[j], rays[(j + 1) % d]
            if cross(a, b) <= 0:
                raise InvalidFan(f"consecutive rays {a}, {b} have cross {cross(a, b)} <= 0")
        cut = rays[0]
        for j in range(1, d - 1):
            if not ccw_less(rays[j], rays[j + 1], cut):
                raise InvalidFan("rays do not wind once counterclockwise")
        s = _canonical_rotation(rays)
        object.__setattr__(self, "rays", rays[s:] + rays[:s])

    def __len__(self):
        return len(self.rays)

    def __repr__(self):
        return "Fan[" + " ".join(map(repr, self.rays)) + "]"

    @property
    def d(self) -> int:
        return len(self.rays)

    def sector(self, j: int) -> Sector:
        d = len(self.rays)
        return Sector(self.rays[j % d], self.rays[(j + 1) % d])

    def sectors(self) -> list:
        return [self.sector(j) for j in range(len(self.rays))]

    def cones(self) -> list:
        d = len(self.rays)
        return [Cone("ray", j) for j in range(d)] + [Cone("sector", j) for j in range(d)]

    @functools.cached_property
    def ray_index(self) -> dict:
        return {r: j for j, r in enumerate(self.rays)}

    @functools.cached_property
    def _sort_keys(self) -> list:
        key = ccw_key()
        return [key(r) for r in self.rays]

    @property
    def is_regular(self) -> bool:
        return all(s.det == 1 for s in self.sectors())

    def refines(self, other: "Fan") -> bool:
        return set(other.rays) <= set(self.rays)

    def locate(self, v) -> Cone:
        """The ray equal to v, or the sector whose interior contains v."""
        if v[0] == 0 and v[1] == 0:
            return ORIGIN
        r = primitive_generator(v)
        j = self.ray_index.get(r)
        if j is not None:
            return Cone("ray", j)
        pos = bisect.bisect_right(self._sort_keys, ccw_key()(r))
        # before the first ray or after the last: the wrapping sector
        return Cone("sector", (pos - 1) % len(self.rays))

    def with_rays(self, extra: Iterable) -> "Fan":
        """Fan on the union of this fan's rays and `extra`."""
        rays = set(self.rays)
        rays.update(primitive_generator(v) for v in extra)
        return Fan(tuple(sorted(rays, key=ccw_key())))


def sort_rays(rays: Iterable) -> tuple:
    return tuple(sorted({primitive_generator(v) for v in rays}, key=ccw_key()))


def validate_fan(rays: Sequence) -> Fan:
    """Normalize generators to primitive form and validate as a fan."""
    norm = []
    for v in rays:
        if len(v) != 2:
            raise InvalidFan(f"ray {v!r} is not a 2-vector")
        try:
            norm.append(primitive_generator(v))
        except ValueError as exc:
            raise InvalidFan(str(exc)) from None
    return Fan(tuple(norm))


QUADRANT_FAN = Fan(AXES)

ConeLike = Union[Sector, Ray]


def smallest_containing_cone(fan: Fan, c) -> Cone | None:
    """Smallest cone of `fan` containing a ray or a sector, else None."""
    if isinstance(c, Sector):
        return _containing_sector(fan, c.lo, c.hi)
    return fan.locate(c)


def _containing_sector(fan: Fan, lo, hi) -> Cone | None:
    at = fan.locate(lo)
    j = at.index
    s = fan.sector(j)
    if in_closed_sector(hi, s.lo, s.hi) and cross(lo, hi) > 0:
        return Cone("sector", j)
    return None


def smallest_cone_of_image(fan: Fan, lo, hi) -> Cone | None:
    """Like smallest_containing_cone for the sector spanned by vectors lo, hi."""
    return _containing_sector(fan, lo, hi)
