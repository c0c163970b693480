"""Regular refinements of fans, simple splits and merges."""

from __future__ import annotations

from typing import NamedTuple

from .lattice import Fan, InvalidFan, Ray, Sector, cross, in_open_sector


class SplitStep(NamedTuple):
    sector_index: int
    new_ray: Ray


def unit_complement(u: Ray) -> Ray:
    """Some h with cross(u, h) == 1 (extended Euclid)."""
    # x*hy - y*hx = 1
    old_r, r = u[0], -u[1]
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    # old_s*x + old_t*(-y) == old_r == +-1
    if old_r < 0:
        old_s, old_t = -old_s, -old_t
    return Ray(old_t, old_s)


def regularize_sector(s: Sector) -> list:
    """Interior rays, in ccw order, cutting `s` into regular sectors.

    Each step peels off the regular sector <u1, w> where w = m*u1 + h with
    cross(u1, h) == 1 and m the least integer putting w inside the sector.
    """
    out = []
    u1, u2 = s.lo, s.hi
    D = cross(u1, u2)
    while D > 1:
        h = unit_complement(u1)
        c = cross(u2, h)  # u2 == c*u1 + D*h
        m = c // D + 1
        w = Ray(m * u1[0] + h[0], m * u1[1] + h[1])
        out.append(w)
        u1 = w
        D = cross(u1, u2)
    return out


def regularize_fan(fan: Fan) -> Fan:
    if fan.is_regular:
        return fan
    rays = []
    for s in fan.sectors():
        rays.append(s.lo)
        rays.extend(regularize_sector(s))
    return Fan(tuple(rays))


def _insert(fan: Fan, j: int, ray: Ray) -> Fan:
    rays = list(fan.rays)
    rays.insert(j + 1, ray)
    return Fan(tuple(rays))


def simple_split(fan: Fan, sector_index: int) -> Fan:
    s = fan.sector(sector_index)
    if not s.regular:
        raise InvalidFan(f"sector {sector_index} is not regular")
    return _insert(fan, sector_index % fan.d, s.lo + s.hi)


def is_mergeable(fan: Fan, ray_index: int) -> bool:
    d = fan.d
    prev, r, nxt = fan.rays[(ray_index - 1) % d], fan.rays[ray_index % d], fan.rays[(ray_index + 1) % d]
    return (
        d > 3
        and prev + nxt == r
        and cross(prev, r) == 1
        and cross(r, nxt) == 1
    )


def simple_merge(fan: Fan, ray_index: int) -> Fan:
    if not is_mergeable(fan, ray_index):
        raise InvalidFan(f"ray {fan.rays[ray_index % fan.d]} is not mergeable")
    rays = list(fan.rays)
    del rays[ray_index % fan.d]
    return Fan(tuple(rays))


def _sector_splits(lo: Ray, hi: Ray, fine_rays: set, out: list):
    m = lo + hi
    if m in fine_rays:
        out.append((lo, m))
        _sector_splits(lo, m, fine_rays, out)
        _sector_splits(m, hi, fine_rays, out)
    elif any(in_open_sector(r, lo, hi) for r in fine_rays):
        raise InvalidFan("fine fan is not a regular refinement of the coarse fan")


def split_sequence(coarse: Fan, fine: Fan) -> list:
    """Simple splits turning `coarse` into `fine`, depth-first and ccw."""
    if not (coarse.is_regular and fine.is_regular):
        raise InvalidFan("split_sequence needs regular fans")
    if not fine.refines(coarse):
        raise InvalidFan("fine fan does not refine the coarse fan")
    fine_rays = set(fine.rays)
    planned = []
    for s in coarse.sectors():
        _sector_splits(s.lo, s.hi, fine_rays, planned)
    return _index_steps(coarse, planned)


def _index_steps(start: Fan, planned) -> list:
    steps = []
    fan = start
    for lo, m in planned:
        j = fan.ray_index[lo]
        steps.append(SplitStep(j, m))
        fan = _insert(fan, j, m)
    return steps


def sector_split_groups(coarse: Fan, fine: Fan) -> list:
    """Planned (lo, mediant) splits grouped by coarse sector, in ccw order."""
    fine_rays = set(fine.rays)
    groups = []
    for s in coarse.sectors():
        g = []
        _sector_splits(s.lo, s.hi, fine_rays, g)
        groups.append(g)
    return groups


def apply_splits(fan: Fan, steps) -> Fan:
    for st in steps:
        s = fan.sector(st.sector_index)
        if s.lo + s.hi != st.new_ray:
            raise InvalidFan(f"step {st} does not insert the mediant")
        fan = simple_split(fan, st.sector_index)
    return fan


def common_refinement(a: Fan, b: Fan) -> Fan:
    return regularize_fan(a.with_rays(b.rays))
