"""Exact rotation numbers, finite order, and a floating-point estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .lattice import X_AXIS, Cone, Ray, ccw_less
from .plmap import PLAutomorphism, compose, identity
from .sharp import SharpMap, _orbit, deterministic_refinement


class LiftedRay(NamedTuple):
    ray: Ray
    revolutions: int


@dataclass(frozen=True, order=True)
class RotationNumber:
    numerator: int
    denominator: int

    def __post_init__(self):
        if self.denominator <= 0:
            raise ValueError("denominator must be positive")
        f = Fraction(self.numerator, self.denominator) % 1
        object.__setattr__(self, "numerator", f.numerator)
        object.__setattr__(self, "denominator", f.denominator)

    @classmethod
    def of(cls, x) -> "RotationNumber":
        f = Fraction(x)
        return cls(f.numerator, f.denominator)

    @classmethod
    def parse(cls, s: str) -> "RotationNumber":
        return cls.of(Fraction(s))

    def as_fraction(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def __float__(self):
        return self.numerator / self.denominator

    def __add__(self, other):
        return RotationNumber.of(self.as_fraction() + Fraction(other.as_fraction() if isinstance(other, RotationNumber) else other))

    def __neg__(self):
        return RotationNumber.of(-self.as_fraction())

    def __mul__(self, k: int):
        return RotationNumber.of(self.as_fraction() * k)

    __rmul__ = __mul__

    def __str__(self):
        return f"{self.numerator}/{self.denominator}"


def wrap_step(F: PLAutomorphism, w, ref=X_AXIS) -> int:
    """Revolution increment of the canonical lift at ray w.

    The lift fixes the branch by sending (ref, 0) to (F(ref), 0).
    """
    return 1 if ccw_less(F(w), F(ref), ref) else 0


def lift_apply(F: PLAutomorphism, x: LiftedRay, ref=X_AXIS) -> LiftedRay:
    return LiftedRay(F(x.ray), x.revolutions + wrap_step(F, x.ray, ref))


@dataclass(frozen=True)
class RotationAnalysis:
    rotation: RotationNumber
    case: str  # "permutation" | "sector-cycle"
    fan: object
    period: int
    revolutions: int


def analyze(F: PLAutomorphism, ref=X_AXIS) -> RotationAnalysis:
    fan, G = deterministic_refinement(F)
    sharp = SharpMap(G, fan)
    statuses = [_orbit(sharp, Cone("ray", j)) for j in range(fan.d)]
    for st in statuses:
        if any(c.kind == "sector" for c in st.prefix):
            return _sector_cycle(G, fan, st, ref)
    # every ray maps to a ray: F permutes the rays of the fan
    st = statuses[0]
    p = st.period
    r = fan.rays[0]
    q = 0
    for _ in range(p):
        q += wrap_step(G, r, ref)
        r = G(r)
    return RotationAnalysis(RotationNumber(q, p), "permutation", fan, p, q)


def _sector_cycle(G, fan, status, ref) -> RotationAnalysis:
    cycle = status.cycle()
    p = len(cycle)
    lo = [fan.sector(c.index).lo for c in cycle]
    revs = 0
    for j in range(p):
        img = G(lo[j])
        nxt = lo[(j + 1) % p]
        revs += wrap_step(G, lo[j], ref)
        # snap the lifted image back to the lifted left facet of the next sector
        if ccw_less(img, nxt, ref):
            revs -= 1
    return RotationAnalysis(RotationNumber(revs, p), "sector-cycle", fan, p, revs)


def rotation_number(F: PLAutomorphism, ref=X_AXIS) -> RotationNumber:
    return analyze(F, ref).rotation


def finite_order(F: PLAutomorphism, cap: int = 64) -> Optional[int]:
    a = analyze(F)
    if a.case == "permutation":
        return a.period
    ident = identity()
    P = F
    for k in range(1, cap + 1):
        if P == ident:
            return k
        if k < cap:
            P = compose(F, P)
    return None


def _circle_data(F: PLAutomorphism):
    angles = np.array([math.atan2(r[1], r[0]) / (2 * math.pi) % 1.0 for r in F.fan.rays])
    mats = np.array([[[m.a, m.b], [m.c, m.d]] for m in F.matrices], dtype=float)
    return angles, mats


def estimate_rotation(F: PLAutomorphism, iterations: int, x0: float = 0.0) -> float:
    """Birkhoff average of the canonical lift in angle coordinates (turns)."""
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    angles, mats = _circle_data(F)
    return _estimate(angles, mats, int(iterations), float(x0))


def _circle_step(angles, mats, t):
    d = angles.shape[0]
    j = np.searchsorted(angles, t, side="right") - 1
    if j < 0:
        j = d - 1
    a = 2.0 * np.pi * t
    cx, cy = np.cos(a), np.sin(a)
    m = mats[j]
    x = m[0, 0] * cx + m[0, 1] * cy
    y = m[1, 0] * cx + m[1, 1] * cy
    return (np.arctan2(y, x) / (2.0 * np.pi)) % 1.0


def _estimate_py(angles, mats, n, x0):
    base = _circle_step(angles, mats, 0.0)
    x = x0
    eps = 1e-9
    for _ in range(n):
        fl = np.floor(x)
        t = x - fl
        s = _circle_step(angles, mats, t)
        r = (s - base) % 1.0
        # resolve rounding at the branch cut next to the reference ray
        if t < eps and r > 0.5:
            r -= 1.0
        elif t > 1.0 - eps and r < 0.5:
            r += 1.0
        x = fl + base + r
    return (x - x0) / n


try:
    from numba import njit

    _circle_step = njit(cache=True)(_circle_step)
    _estimate = njit(cache=True)(_estimate_py)
except ImportError:  # pragma: no cover
    _estimate = _estimate_py
