"""Conversion between Z^2 automorphisms and dyadic PL circle maps.

Rays of a regular sector correspond to dyadic points of a standard interval
by sending facets to endpoints and mediants to midpoints (Stern-Brocot
descent).  Globally the quadrant fan is matched with the quarter intervals:
(1,0) -> 0, (0,1) -> 1/4, (-1,0) -> 1/2, (0,-1) -> 3/4.
"""

from __future__ import annotations

import bisect
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .lattice import AXES, Ray, cross, in_closed_sector, primitive_generator
from .plmap import InvalidElement, PLAutomorphism, from_pieces, sector_map


class InvalidDyadicMap(ValueError):
    pass


def is_dyadic(x: Fraction) -> bool:
    den = Fraction(x).denominator
    return den & (den - 1) == 0


def is_power_of_two(x: Fraction) -> bool:
    x = Fraction(x)
    if x <= 0:
        return False
    n, d = x.numerator, x.denominator
    return n & (n - 1) == 0 and d & (d - 1) == 0


def dyadic_exponent(x: Fraction) -> int:
    return Fraction(x).denominator.bit_length() - 1


def format_dyadic(x: Fraction) -> str:
    x = Fraction(x)
    if not is_dyadic(x):
        raise ValueError(f"{x} is not dyadic")
    return f"{x.numerator}/2^{dyadic_exponent(x)}"


_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*2\s*\^\s*(\d+)\s*$")


def parse_dyadic(s) -> Fraction:
    if isinstance(s, (int, Fraction)):
        x = Fraction(s)
    else:
        m = _DYADIC_RE.match(str(s))
        if m:
            x = Fraction(int(m.group(1)), 2 ** int(m.group(2)))
        else:
            try:
                x = Fraction(str(s))
            except (ValueError, ZeroDivisionError):
                raise ValueError(f"malformed dyadic number {s!r}") from None
    if not is_dyadic(x):
        raise InvalidDyadicMap(f"{x} is not a dyadic rational")
    return x


class StandardDyadicInterval(NamedTuple):
    """[a / 2^k, (a + 1) / 2^k]."""

    a: int
    k: int

    @property
    def lo(self) -> Fraction:
        return Fraction(self.a, 2 ** self.k)

    @property
    def hi(self) -> Fraction:
        return Fraction(self.a + 1, 2 ** self.k)

    @classmethod
    def of(cls, lo: Fraction, hi: Fraction) -> "StandardDyadicInterval":
        if not is_standard(lo, hi):
            raise ValueError(f"[{lo}, {hi}] is not a standard dyadic interval")
        k = dyadic_exponent(hi - lo)
        return cls(int(lo * 2 ** k), k)


def is_standard(lo: Fraction, hi: Fraction) -> bool:
    length = hi - lo
    if length <= 0 or length.numerator != 1 or not is_power_of_two(length):
        return False
    return (lo / length).denominator == 1 and 0 <= lo and hi <= 1


UNIT = StandardDyadicInterval(0, 0)


def phi_forward(lo: Ray, hi: Ray, interval: StandardDyadicInterval, ray) -> Fraction:
    """Dyadic coordinate of `ray` inside the regular sector <lo, hi>."""
    if cross(lo, hi) != 1:
        raise ValueError("phi needs a regular sector")
    r = primitive_generator(ray)
    if not in_closed_sector(r, lo, hi):
        raise ValueError(f"ray {r} lies outside the sector")
    # coordinates in the basis (lo, hi); both nonnegative and coprime
    alpha, beta = cross(r, hi), cross(lo, r)
    left, right = interval.lo, interval.hi
    if beta == 0:
        return left
    if alpha == 0:
        return right
    while alpha != beta:
        if alpha > beta:
            # run of moves into the left half: hi <- lo + hi
            n = (alpha - 1) // beta
            alpha -= n * beta
            right = left + (right - left) / 2 ** n
        else:
            n = (beta - 1) // alpha
            beta -= n * alpha
            left = right - (right - left) / 2 ** n
    return (left + right) / 2


def phi_inverse(lo: Ray, hi: Ray, interval: StandardDyadicInterval, t) -> Ray:
    t = Fraction(t)
    if not interval.lo <= t <= interval.hi:
        raise ValueError(f"{t} lies outside [{interval.lo}, {interval.hi}]")
    if not is_dyadic(t):
        raise ValueError(f"{t} is not dyadic")
    s = (t - interval.lo) * 2 ** interval.k
    while True:
        if s == 0:
            return lo
        if s == 1:
            return hi
        m = lo + hi
        if s == Fraction(1, 2):
            return m
        if s < Fraction(1, 2):
            hi, s = m, 2 * s
        else:
            lo, s = m, 2 * s - 1


QUARTERS = [StandardDyadicInterval(i, 2) for i in range(4)]


def _quadrant(ray) -> int:
    for i in range(4):
        lo, hi = AXES[i], AXES[(i + 1) % 4]
        if in_closed_sector(ray, lo, hi) and cross(ray, hi) != 0:
            return i
    raise ValueError("zero vector")


def phi(ray) -> Fraction:
    """Global coordinate in [0, 1) of a rational ray."""
    r = primitive_generator(ray)
    i = _quadrant(r)
    return phi_forward(AXES[i], AXES[(i + 1) % 4], QUARTERS[i], r)


def phi_inv(t) -> Ray:
    t = Fraction(t) % 1
    i = int(t * 4)
    return phi_inverse(AXES[i], AXES[(i + 1) % 4], QUARTERS[i], t)


def question_mark_by_phi(x: Fraction) -> Fraction:
    """Minkowski ?(x) on [0, 1] via the sector <(1,0),(1,1)> parameterized by slope."""
    x = Fraction(x)
    return phi_forward(Ray(1, 0), Ray(1, 1), UNIT, (x.denominator, x.numerator))


@dataclass(frozen=True, eq=False)
class DyadicPLMap:
    """Degree-one PL circle map on [0, 1) given by breakpoints and images.

    Interpolation is affine between consecutive breakpoints, cyclically.
    """

    breakpoints: tuple
    images: tuple

    def __post_init__(self):
        bps = tuple(parse_dyadic(b) for b in self.breakpoints)
        ims = tuple(parse_dyadic(y) for y in self.images)
        if len(bps) != len(ims) or not bps:
            raise InvalidDyadicMap("need equally many (and at least one) breakpoints and images")
        for b in bps + ims:
            if not 0 <= b < 1:
                raise InvalidDyadicMap(f"{b} is outside [0, 1)")
        if any(b >= c for b, c in zip(bps, bps[1:])):
            raise InvalidDyadicMap("breakpoints must be strictly increasing")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "images", ims)
        rises = self.rises()
        if any(r <= 0 for r in rises) or sum(rises) != 1:
            raise InvalidDyadicMap("images do not wind once increasingly around the circle")
        for s in self.slopes():
            if not is_power_of_two(s):
                raise InvalidDyadicMap(f"slope {s} is not a power of 2")

    def lengths(self) -> list:
        b = self.breakpoints
        return [(b[(j + 1) % len(b)] - b[j]) % 1 or Fraction(1) for j in range(len(b))]

    def rises(self) -> list:
        y = self.images
        if len(y) == 1:
            return [Fraction(1)]
        return [(y[(j + 1) % len(y)] - y[j]) % 1 for j in range(len(y))]

    def slopes(self) -> list:
        return [r / l for r, l in zip(self.rises(), self.lengths())]

    def __call__(self, t) -> Fraction:
        t = Fraction(t) % 1
        b = self.breakpoints
        j = bisect.bisect_right(b, t) - 1  # -1 wraps to the last piece
        dt = (t - b[j]) % 1
        return (self.images[j] + self.slopes()[j] * dt) % 1

    def normalized(self) -> "DyadicPLMap":
        """0 present as a breakpoint, no breakpoint with equal slopes on both sides."""
        pts = {b: y for b, y in zip(self.breakpoints, self.images)}
        pts.setdefault(Fraction(0), self(0))
        bps = sorted(pts)
        f = DyadicPLMap(tuple(bps), tuple(pts[b] for b in bps))
        slopes = f.slopes()
        keep = [
            j for j in range(len(bps))
            if bps[j] == 0 or slopes[j - 1] != slopes[j]
        ]
        return DyadicPLMap(tuple(bps[j] for j in keep), tuple(pts[bps[j]] for j in keep))

    def __eq__(self, other):
        if not isinstance(other, DyadicPLMap):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.breakpoints == b.breakpoints and a.images == b.images

    def __hash__(self):
        n = self.normalized()
        return hash((n.breakpoints, n.images))

    def __repr__(self):
        return "DyadicPLMap(" + ", ".join(
            f"{format_dyadic(b)}->{format_dyadic(y)}" for b, y in zip(self.breakpoints, self.images)
        ) + ")"


def to_dyadic(F: PLAutomorphism) -> DyadicPLMap:
    from .plmap import inverse
    from .refine import regularize_fan

    Finv = inverse(F)
    fan = regularize_fan(F.fan.with_rays(list(AXES) + [Finv(a) for a in AXES]))
    bps = [phi(r) for r in fan.rays]
    ims = [phi(F(r)) for r in fan.rays]
    order = sorted(range(len(bps)), key=bps.__getitem__)
    return DyadicPLMap(tuple(bps[j] for j in order), tuple(ims[j] for j in order)).normalized()


def _standard_pieces(f: DyadicPLMap) -> list:
    """Split into pieces mapping standard intervals of length <= 1/4 onto such."""
    out = []
    quarter = Fraction(1, 4)
    b = list(f.breakpoints) + [Fraction(1)]
    slopes = f.slopes()
    stack = []
    for j in range(len(f.breakpoints)):
        stack.append((b[j], b[j + 1], f.images[j], slopes[j]))
    stack.reverse()
    while stack:
        s, e, u, slope = stack.pop()
        v = u + slope * (e - s)
        base = u - (u // 1)
        v_rel = base + (v - u)
        if e - s <= quarter and v - u <= quarter and is_standard(s, e) and is_standard(base, v_rel):
            out.append((s, e, base, v_rel))
            continue
        if is_standard(s, e):
            m = (s + e) / 2
        else:
            m = _simplest_dyadic_between(s, e)
        stack.append((m, e, u + slope * (m - s), slope))
        stack.append((s, m, u, slope))
    return out


def _simplest_dyadic_between(s: Fraction, e: Fraction) -> Fraction:
    k = 0
    while True:
        step = Fraction(1, 2 ** k)
        m = (s // step + 1) * step
        if m < e:
            return m
        k += 1


def from_dyadic(f: DyadicPLMap) -> PLAutomorphism:
    rays, mats = [], []
    for s, e, u, v in _standard_pieces(f):
        lo, hi = phi_inv(s), phi_inv(e)
        lo2, hi2 = phi_inv(u), phi_inv(v)
        rays.append(lo)
        mats.append(sector_map(lo, hi, lo2, hi2))
    try:
        return from_pieces(rays, mats).canonical()
    except InvalidElement as exc:  # pragma: no cover - guarded by DyadicPLMap validation
        raise InvalidDyadicMap(str(exc)) from None


def to_json(f: DyadicPLMap) -> dict:
    return {
        "breakpoints": [format_dyadic(b) for b in f.breakpoints],
        "images": [format_dyadic(y) for y in f.images],
    }


def from_json(obj: dict) -> DyadicPLMap:
    try:
        return DyadicPLMap(tuple(obj["breakpoints"]), tuple(obj["images"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed dyadic map JSON: {exc}") from None
