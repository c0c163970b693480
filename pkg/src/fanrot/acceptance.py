"""Acceptance checks, runnable from pytest and from ``fanrot selftest``.

Each check returns a :class:`Outcome`; nothing here asserts, so a failing
criterion is reported rather than aborting the run.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .dyadic import UNIT, from_dyadic, phi, phi_forward, phi_inv, to_dyadic
from .lattice import Fan, Ray, Sector, cross, primitive_generator
from .plmap import (
    InvalidElement,
    Matrix,
    compose,
    construct_rotation,
    inverse,
    linear,
    power,
    random_element,
    validate_pl,
)
from .refine import apply_splits, regularize_sector, simple_split, split_sequence, unit_complement
from .rotation import RotationNumber, estimate_rotation, finite_order, rotation_number
from .sharp import decompose_simple, deterministic_refinement, orbit_statuses, step_kind

ESTIMATE_ITERS = 10**5
ESTIMATE_TOL = 2 / ESTIMATE_ITERS + 1e-12


@dataclass
class Outcome:
    number: int
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number:2d}. {self.name}: {self.detail}"


TORSION_CASES = [
    # matrix, rotation number, order (None = infinite)
    ((0, -1, 1, 0), Fraction(1, 4), 4),
    ((0, -1, 1, 1), Fraction(1, 6), 6),
    ((2, 1, 1, 1), Fraction(0), None),
    ((1, 1, 0, 1), Fraction(0), None),
]


def random_corpus_params(count: int = 200):
    return [(seed, 1 + seed % 6) for seed in range(count)]


@lru_cache(maxsize=None)
def corpus():
    """(label, element) for every element of criteria 1-3."""
    out = []
    for q in range(3, 13):
        for p in range(q):
            out.append((f"rot:{p}/{q}", construct_rotation(p, q)))
    for m, _, _ in TORSION_CASES:
        out.append((f"lin:{','.join(map(str, m))}", linear(Matrix(*m))))
    for seed, length in random_corpus_params():
        out.append((f"random:{seed}:{length}", random_element(seed, length)))
    return tuple(out)


def circular_distance(a: float, b: float) -> float:
    d = (a - b) % 1.0
    return min(d, 1.0 - d)


def check_part_two() -> Outcome:
    t0 = time.perf_counter()
    bad = []
    for q in range(3, 13):
        for p in range(q):
            rho = rotation_number(construct_rotation(p, q))
            if rho.as_fraction() != Fraction(p, q):
                bad.append(f"{p}/{q}->{rho}")
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5.0
    return Outcome(1, "rotation of construct_rotation(p,q) is p/q, 3<=q<=12", ok,
                   f"75 elements in {dt:.2f}s (limit 5s)" + (f"; wrong: {bad[:5]}" if bad else ""))


def check_torsion() -> Outcome:
    bad = []
    for m, rho, order in TORSION_CASES:
        F = linear(Matrix(*m))
        got_rho = rotation_number(F).as_fraction()
        got_order = finite_order(F)
        if got_rho != rho or got_order != order:
            bad.append(f"{m}: rho={got_rho} order={got_order}")
    return Outcome(2, "torsion and infinite-order linear examples", not bad,
                   "4 matrices" + (f"; wrong: {bad}" if bad else ""))


def check_rationality() -> Outcome:
    t0 = time.perf_counter()
    bad = []
    for seed, length in random_corpus_params():
        rho = rotation_number(random_element(seed, length))
        if not (isinstance(rho, RotationNumber) and 0 <= rho.numerator < rho.denominator
                and Fraction(rho.numerator, rho.denominator).denominator == rho.denominator):
            bad.append(seed)
    dt = time.perf_counter() - t0
    return Outcome(3, "200 random words have reduced rational rotation numbers", not bad and dt < 60.0,
                   f"{dt:.2f}s (limit 60s)" + (f"; bad seeds {bad[:5]}" if bad else ""))


def check_oracle() -> Outcome:
    worst = 0.0
    bad = []
    for label, F in corpus():
        exact = float(rotation_number(F))
        est = estimate_rotation(F, ESTIMATE_ITERS)
        err = circular_distance(exact, est)
        worst = max(worst, err)
        if err > ESTIMATE_TOL:
            bad.append(label)
    return Outcome(4, "exact vs Birkhoff estimate, N=1e5", not bad,
                   f"{len(corpus())} elements, worst error {worst:.2e} (tol {ESTIMATE_TOL:.2e})"
                   + (f"; bad {bad[:5]}" if bad else ""))


def check_invariances(pairs: int = 50) -> Outcome:
    bad = []
    for s in range(pairs):
        F = random_element(1000 + s, 1 + s % 6)
        G = random_element(5000 + s, 1 + (7 * s) % 6)
        rho = rotation_number(F)
        for k in range(1, 6):
            if rotation_number(power(F, k)) != rho * k:
                bad.append(f"pair {s}: power {k}")
        if rotation_number(compose(compose(G, F), inverse(G))) != rho:
            bad.append(f"pair {s}: conjugation")
        if rotation_number(inverse(F)) != -rho:
            bad.append(f"pair {s}: inverse")
    return Outcome(5, "power, conjugation and inverse invariances", not bad,
                   f"{pairs} pairs" + (f"; failures {bad[:5]}" if bad else ""))


def check_decomposition() -> Outcome:
    bad = []
    for label, F in corpus():
        G = F.regular()
        steps = decompose_simple(G)
        if steps[0].source_fan != G.fan or steps[-1].target_fan != G.fan:
            bad.append(f"{label}: endpoints")
            continue
        prod = None
        for j, st in enumerate(steps):
            if j and st.source_fan != steps[j - 1].target_fan:
                bad.append(f"{label}: chain broken at {j}")
            if step_kind(st.map, st.source_fan, st.target_fan) != st.kind:
                bad.append(f"{label}: step {j} is not a {st.kind}")
            prod = st.map if prod is None else compose(st.map, prod)
        if prod != F:
            bad.append(f"{label}: product differs")
    return Outcome(6, "simple-map decomposition composes back to F", not bad,
                   f"{len(corpus())} elements" + (f"; failures {bad[:5]}" if bad else ""))


def check_deterministic() -> Outcome:
    bad = []
    for label, F in corpus():
        trace: list = []
        fan, G = deterministic_refinement(F, trace)
        if G != F or not fan.is_regular or not fan.refines(F.regular().fan):
            bad.append(f"{label}: output fan")
        for st in orbit_statuses(G, fan):
            if not st.is_cycle or len(st.prefix) > 2 * fan.d:
                bad.append(f"{label}: ray orbit {st.outcome}")
                break
        if any(b >= a for a, b in zip(trace, trace[1:])):
            bad.append(f"{label}: split count trace {trace}")
    return Outcome(7, "every ray of the deterministic fan has a cyclic orbit", not bad,
                   f"{len(corpus())} elements" + (f"; failures {bad[:5]}" if bad else ""))


def random_sector(rng: random.Random, max_det: int = 1000) -> Sector:
    while True:
        lo = Ray(rng.randint(-60, 60), rng.randint(-60, 60))
        if lo == (0, 0):
            continue
        lo = primitive_generator(lo)
        D = rng.randint(1, max_det)
        # hi = c*lo + D*h with cross(lo, h) = 1 is primitive iff gcd(c, D) = 1
        h = unit_complement(lo)
        c = rng.randint(-3 * D, 3 * D)
        hi = Ray(c * lo[0] + D * h[0], c * lo[1] + D * h[1])
        if hi != (0, 0) and primitive_generator(hi) == hi and cross(lo, hi) == D:
            return Sector(lo, hi)


def check_regularization(count: int = 100, seed: int = 8) -> Outcome:
    rng = random.Random(seed)
    bad = []
    for _ in range(count):
        s = random_sector(rng)
        rays = [s.lo] + regularize_sector(s) + [s.hi]
        if any(cross(a, b) != 1 for a, b in zip(rays, rays[1:])) or len(rays) - 2 > s.det - 1:
            bad.append(repr(s))
    return Outcome(8, "sector regularization, D <= 1000", not bad,
                   f"{count} sectors" + (f"; failures {bad[:3]}" if bad else ""))


def random_regular_fan(rng: random.Random, base: Fan, splits: int) -> Fan:
    fan = base
    for _ in range(splits):
        fan = simple_split(fan, rng.randrange(fan.d))
    return fan


def check_split_replay(count: int = 100, seed: int = 9) -> Outcome:
    rng = random.Random(seed)
    bad = 0
    for _ in range(count):
        coarse = random_regular_fan(rng, Fan(((1, 0), (0, 1), (-1, -1))), rng.randint(0, 8))
        fine = random_regular_fan(rng, coarse, rng.randint(0, 12))
        if apply_splits(coarse, split_sequence(coarse, fine)) != fine:
            bad += 1
    return Outcome(9, "split_sequence replay reproduces the fine fan", bad == 0,
                   f"{count} pairs, {bad} failures")


def question_mark_oracle(x: Fraction) -> Fraction:
    """Minkowski ? from the continued fraction [0; a1, a2, ...] of x in [0, 1]."""
    x = Fraction(x)
    if x in (0, 1):
        return x
    terms = []
    p, q = x.numerator, x.denominator
    while q:
        a, r = divmod(p, q)
        terms.append(a)
        p, q = q, r
    total, sign, acc = Fraction(0), 1, 0
    for a in terms[1:]:
        acc += a
        total += sign * Fraction(2, 2**acc)
        sign = -sign
    return total


def stern_brocot_slopes(depth: int) -> list:
    out = {Fraction(0), Fraction(1)}
    level = [((0, 1), (1, 1))]
    for _ in range(depth):
        nxt = []
        for (a, b), (c, d) in level:
            m = (a + c, b + d)
            out.add(Fraction(*m))
            nxt += [((a, b), m), (m, (c, d))]
        level = nxt
    return sorted(out)


def check_bridge(points: int = 100, seed: int = 10) -> Outcome:
    rng = random.Random(seed)
    bad = []
    for label, F in corpus():
        f = to_dyadic(F)
        for _ in range(points):
            k = rng.randint(0, 12)
            t = Fraction(rng.randrange(2**k), 2**k)
            if phi(F(phi_inv(t))) != f(t):
                bad.append(f"{label}: conjugacy at {t}")
                break
        if from_dyadic(f) != F:
            bad.append(f"{label}: from_dyadic(to_dyadic(F))")
        if to_dyadic(from_dyadic(f)) != f:
            bad.append(f"{label}: to_dyadic(from_dyadic(f))")
    for x in stern_brocot_slopes(5):
        got = phi_forward(Ray(1, 0), Ray(1, 1), UNIT, (x.denominator, x.numerator))
        if got != question_mark_oracle(x):
            bad.append(f"?({x})")
    return Outcome(10, "dyadic conjugacy, round trips and ?-function", not bad,
                   f"{len(corpus())} elements x {points} points"
                   + (f"; failures {bad[:5]}" if bad else ""))


def check_counterexample() -> Outcome:
    M = [[4, -3], [3, 4]]
    try:
        validate_pl([(1, 0), (0, 1), (-1, 0), (0, -1)], [M] * 4)
    except InvalidElement as exc:
        ok = "determinant 25" in str(exc)
        return Outcome(11, "[[4,-3],[3,4]] rejected", ok, str(exc))
    return Outcome(11, "[[4,-3],[3,4]] rejected", False, "accepted")


CHECKS = [
    check_part_two,
    check_torsion,
    check_rationality,
    check_oracle,
    check_invariances,
    check_decomposition,
    check_deterministic,
    check_regularization,
    check_split_replay,
    check_bridge,
    check_counterexample,
]


def run_all(report=print) -> bool:
    ok = True
    for check in CHECKS:
        out = check()
        report(out.line())
        ok &= out.passed
    return ok
