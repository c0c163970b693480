"""Piecewise linear automorphisms of Z^2: a fan plus one SL(2,Z) matrix per sector."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .lattice import (
    AXES,
    Fan,
    InvalidFan,
    Ray,
    primitive_generator,
)
from .refine import regularize_fan, simple_split


class InvalidElement(ValueError):
    pass


class Matrix(NamedTuple):
    """Row-major 2x2 integer matrix [[a, b], [c, d]]."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def from_rows(cls, rows) -> "Matrix":
        (a, b), (c, d) = rows
        return cls(int(a), int(b), int(c), int(d))

    @classmethod
    def from_columns(cls, u, v) -> "Matrix":
        return cls(u[0], v[0], u[1], v[1])

    def rows(self):
        return [[self.a, self.b], [self.c, self.d]]

    @property
    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return Matrix(
                self.a * other.a + self.b * other.c,
                self.a * other.b + self.b * other.d,
                self.c * other.a + self.d * other.c,
                self.c * other.b + self.d * other.d,
            )
        x, y = other
        return Ray(self.a * x + self.b * y, self.c * x + self.d * y)

    def inverse(self) -> "Matrix":
        if self.det != 1:
            raise ValueError("only unimodular matrices are inverted exactly")
        return Matrix(self.d, -self.b, -self.c, self.a)

    def __repr__(self):
        return f"[[{self.a},{self.b}],[{self.c},{self.d}]]"


IDENTITY = Matrix(1, 0, 0, 1)
ROT90 = Matrix(0, -1, 1, 0)
SHEAR = Matrix(1, 1, 0, 1)


def sector_map(src_lo, src_hi, dst_lo, dst_hi) -> Matrix:
    """The linear map with src_lo -> dst_lo and src_hi -> dst_hi (src regular)."""
    s = Matrix.from_columns(src_lo, src_hi)
    if s.det != 1:
        raise InvalidFan("source sector is not regular")
    return Matrix.from_columns(dst_lo, dst_hi) @ s.inverse()


@dataclass(frozen=True, eq=False)
class PLAutomorphism:
    """An element of Thompson's group T acting on Z^2.

    ``matrices[j]`` acts on sector j of ``fan`` (between rays j and j+1).
    Equality is equality as functions.
    """

    fan: Fan
    matrices: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        _check(self.fan, self.matrices)

    def __repr__(self):
        return f"PLAutomorphism({self.fan!r}, {list(self.matrices)!r})"

    def matrix_at(self, v) -> Matrix:
        cone = self.fan.locate(v)
        return self.matrices[cone.index]

    def __call__(self, v) -> Ray:
        if v[0] == 0 and v[1] == 0:
            return Ray(0, 0)
        return self.matrix_at(v) @ v

    def image_rays(self) -> tuple:
        return tuple(m @ r for m, r in zip(self.matrices, self.fan.rays))

    def breakpoints(self) -> tuple:
        d = self.fan.d
        return tuple(
            self.fan.rays[j]
            for j in range(d)
            if self.matrices[j - 1] != self.matrices[j]
        )

    def is_linear(self) -> bool:
        return len(set(self.matrices)) == 1

    def on_fan(self, fan: Fan) -> "PLAutomorphism":
        """The same function expressed on a compatible fan."""
        if not set(self.breakpoints()) <= set(fan.rays):
            raise InvalidElement("fan is not compatible with the element")
        mats = [self.matrix_at(s.lo + s.hi) for s in fan.sectors()]
        return PLAutomorphism(fan, tuple(mats))

    def canonical(self) -> "PLAutomorphism":
        """Coarsest compatible fan: the breakpoints, padded with the axes
        when they alone do not form a fan."""
        bps = self.breakpoints()
        try:
            fan = Fan(bps)
        except InvalidFan:
            fan = Fan(AXES).with_rays(bps)
        if fan == self.fan:
            return self
        return self.on_fan(fan)

    def key(self):
        c = self.canonical()
        return (c.fan.rays, c.matrices)

    def __eq__(self, other):
        if not isinstance(other, PLAutomorphism):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def regular(self) -> "PLAutomorphism":
        if self.fan.is_regular:
            return self
        return self.on_fan(regularize_fan(self.fan))

    def __matmul__(self, other):
        return compose(self, other)

    def __pow__(self, k: int):
        return power(self, k)


def _check(fan: Fan, matrices: Sequence[Matrix]):
    d = fan.d
    if len(matrices) != d:
        raise InvalidElement(f"{len(matrices)} matrices for {d} sectors")
    for j, m in enumerate(matrices):
        if m.det != 1:
            raise InvalidElement(f"determinant {m.det} ≠ 1 on sector {j}")
    for j in range(d):
        r = fan.rays[j]
        if matrices[j - 1] @ r != matrices[j] @ r:
            raise InvalidElement(f"continuity fails on ray {r}")
    images = [m @ r for m, r in zip(matrices, fan.rays)]
    try:
        Fan(tuple(images))
    except InvalidFan as exc:
        raise InvalidElement(f"image rays do not form a fan: {exc}") from None


def validate_pl(rays: Sequence, matrices: Sequence) -> PLAutomorphism:
    """Build an element from user data; matrices follow the given ray order."""
    try:
        rays = [primitive_generator(r) for r in rays]
    except ValueError as exc:
        raise InvalidElement(str(exc)) from None
    mats = [m if isinstance(m, Matrix) else Matrix.from_rows(m) for m in matrices]
    if len(mats) != len(rays):
        raise InvalidElement(f"{len(mats)} matrices for {len(rays)} sectors")
    try:
        fan = Fan(tuple(rays))
    except InvalidFan as exc:
        raise InvalidElement(str(exc)) from None
    shift = rays.index(fan.rays[0])
    return PLAutomorphism(fan, tuple(mats[shift:] + mats[:shift]))


def from_pieces(rays: Sequence[Ray], matrices: Sequence[Matrix]) -> PLAutomorphism:
    """Internal constructor for ccw-ordered rays in any rotation."""
    return validate_pl(rays, matrices)


def linear(m, fan: Fan | None = None) -> PLAutomorphism:
    if not isinstance(m, Matrix):
        m = Matrix.from_rows(m)
    fan = fan or Fan(AXES)
    return PLAutomorphism(fan, (m,) * fan.d)


def identity(fan: Fan | None = None) -> PLAutomorphism:
    return linear(IDENTITY, fan)


def apply_vector(F: PLAutomorphism, v) -> Ray:
    return F(v)


def image_fan(F: PLAutomorphism) -> Fan:
    return Fan(F.image_rays())


def inverse(F: PLAutomorphism) -> PLAutomorphism:
    return from_pieces(F.image_rays(), [m.inverse() for m in F.matrices])


def preimage(F: PLAutomorphism, v) -> Ray:
    return inverse(F)(v)


def compose(G: PLAutomorphism, F: PLAutomorphism) -> PLAutomorphism:
    """G after F, returned in canonical form."""
    Finv = inverse(F)
    pulled = [primitive_generator(Finv(r)) for r in G.breakpoints()]
    fan = Fan(F.canonical().fan.rays).with_rays(pulled + list(F.breakpoints()))
    mats = []
    for s in fan.sectors():
        v = s.lo + s.hi
        mf = F.matrix_at(v)
        mats.append(G.matrix_at(mf @ v) @ mf)
    return PLAutomorphism(fan, tuple(mats)).canonical()


def power(F: PLAutomorphism, k: int) -> PLAutomorphism:
    if k < 0:
        return power(inverse(F), -k)
    result = identity()
    base = F
    while k:
        if k & 1:
            result = compose(base, result)
        k >>= 1
        if k:
            base = compose(base, base)
    return result


BASE_TRIANGLE = (Ray(1, 0), Ray(0, 1), Ray(-1, -1))


def rotation_fan(q: int) -> Fan:
    """Regular fan with q sectors.

    q == 3 is the triangle fan, q >= 4 starts from the quadrant fan and
    splits sectors breadth-first in ccw order.
    """
    if q < 3:
        raise ValueError("rotation fans need q >= 3")
    if q == 3:
        return Fan(BASE_TRIANGLE)
    fan = Fan(AXES)
    level = list(fan.sectors())
    while fan.d < q:
        nxt = []
        for s in level:
            if fan.d == q:
                break
            fan = simple_split(fan, fan.ray_index[s.lo])
            m = s.lo + s.hi
            nxt.extend([type(s)(s.lo, m), type(s)(m, s.hi)])
        level = nxt
    return fan


def construct_rotation(p: int, q: int) -> PLAutomorphism:
    """Element rotating the q sectors of a regular fan by p positions."""
    if q < 3:
        raise ValueError(f"q must be at least 3, got {q}")
    if not 0 <= p < q:
        raise ValueError(f"need 0 <= p < q, got p={p}, q={q}")
    fan = rotation_fan(q)
    rays = fan.rays
    mats = []
    for j in range(q):
        mats.append(
            sector_map(rays[j], rays[(j + 1) % q], rays[(j + p) % q], rays[(j + p + 1) % q])
        )
    return PLAutomorphism(fan, tuple(mats))


def generators() -> list:
    gens = [construct_rotation(1, q) for q in (3, 4, 5)]
    return gens + [inverse(g) for g in gens]


def random_word(seed, length: int) -> list:
    rng = random.Random(seed)
    return [rng.randrange(6) for _ in range(length)]


def random_element(seed, length: int) -> PLAutomorphism:
    """Product of `length` generators drawn reproducibly from `seed`."""
    if length < 1:
        raise ValueError("length must be >= 1")
    gens = generators()
    word = random_word(seed, length)
    F = gens[word[0]]
    for w in word[1:]:
        F = compose(gens[w], F)
    return F


def to_json(F: PLAutomorphism) -> dict:
    return {
        "rays": [[str(x), str(y)] for x, y in F.fan.rays],
        "matrices": [[[str(v) for v in row] for row in m.rows()] for m in F.matrices],
    }


def from_json(obj: dict) -> PLAutomorphism:
    try:
        rays = [[int(c) for c in r] for r in obj["rays"]]
        mats = [Matrix.from_rows([[int(v) for v in row] for row in m]) for m in obj["matrices"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed element JSON: {exc}") from None
    for r in rays:
        if len(r) != 2:
            raise ValueError(f"malformed ray {r}")
        if r == [0, 0]:
            raise InvalidElement("zero vector has no ray")
    return validate_pl(rays, mats)
