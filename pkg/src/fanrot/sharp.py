"""Approximate cone maps, orbit tracing and the deterministic refinement.

The refinement follows a periodic chain of simple maps
``F = f_{n-1} o ... o f_0`` between regular fans ``D_0, ..., D_{n-1}``
(indices mod n).  ``f_0`` is F itself and every other ``f_j`` is the
identity; only the fans are refined, one minimal split/merge chain per pass.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field
from typing import Optional

from .lattice import Cone, Fan, smallest_cone_of_image
from .plmap import PLAutomorphism, identity, image_fan
from .refine import (
    InvalidFan,
    common_refinement,
    sector_split_groups,
    split_sequence,
)

log = logging.getLogger(__name__)

MAX_PASSES_ENV = "FANROT_MAX_PASSES"


class RefinementError(RuntimeError):
    """Raised when the deterministic refinement breaks one of its invariants."""


@dataclass(frozen=True)
class SimpleMapStep:
    kind: str  # "isomorphism" | "split" | "merge"
    map: PLAutomorphism
    source_fan: Fan
    target_fan: Fan


@dataclass(frozen=True)
class OrbitStatus:
    prefix: tuple
    outcome: str  # "cycle" | "undefined"
    entry: int = 0
    period: int = 0
    step: int = 0

    @property
    def is_cycle(self) -> bool:
        return self.outcome == "cycle"

    def cycle(self) -> tuple:
        return self.prefix[self.entry:self.entry + self.period]


class SharpMap:
    """F_# from `source` to `target`; `source` must be compatible with F."""

    def __init__(self, F: PLAutomorphism, source: Fan, target: Optional[Fan] = None):
        self.F = F.on_fan(source) if F.fan != source else F
        self.source = source
        self.target = source if target is None else target
        self._memo: dict = {}

    def __call__(self, cone: Cone) -> Optional[Cone]:
        try:
            return self._memo[cone]
        except KeyError:
            pass
        out = self._image(cone)
        self._memo[cone] = out
        return out

    def _image(self, cone: Cone) -> Optional[Cone]:
        if cone.kind == "origin":
            return cone
        m = self.F.matrices[cone.index]
        if cone.kind == "ray":
            return self.target.locate(m @ self.source.rays[cone.index])
        s = self.source.sector(cone.index)
        return smallest_cone_of_image(self.target, m @ s.lo, m @ s.hi)

    def deterministic_cones(self) -> set:
        """Cones all of whose forward images are defined (self-map only)."""
        good: set = set()
        bad: set = set()
        for start in self.source.cones():
            path = []
            seen = set()
            c = start
            while True:
                if c is None or c in bad:
                    bad.update(path)
                    break
                if c in good or c in seen:
                    good.update(path)
                    break
                seen.add(c)
                path.append(c)
                c = self(c)
        return good


def sharp_image(F: PLAutomorphism, fan: Fan, c: Cone) -> Optional[Cone]:
    return SharpMap(F, fan)(c)


def _orbit(sharp: SharpMap, start: Cone) -> OrbitStatus:
    prefix: list = []
    seen: dict = {}
    c: Optional[Cone] = start
    while True:
        if c is None:
            return OrbitStatus(tuple(prefix), "undefined", step=len(prefix))
        if c in seen:
            e = seen[c]
            return OrbitStatus(tuple(prefix), "cycle", entry=e, period=len(prefix) - e)
        seen[c] = len(prefix)
        prefix.append(c)
        c = sharp(c)


def ray_orbit_status(F: PLAutomorphism, fan: Fan, ray_index: int) -> OrbitStatus:
    return _orbit(SharpMap(F, fan), Cone("ray", ray_index % fan.d))


def orbit_statuses(F: PLAutomorphism, fan: Fan) -> list:
    sharp = SharpMap(F, fan)
    return [_orbit(sharp, Cone("ray", j)) for j in range(fan.d)]


def step_kind(f: PLAutomorphism, source: Fan, target: Fan) -> Optional[str]:
    """Classify f as a simple map from source to target, or None."""
    image = {f(r) for r in source.rays}
    tgt = set(target.rays)
    if image == tgt:
        return "isomorphism"
    if image < tgt and len(tgt - image) == 1:
        return "split"
    if tgt < image and len(image - tgt) == 1:
        return "merge"
    return None


def decompose_simple(F: PLAutomorphism) -> list:
    """Simple maps f_0, ..., f_{n-1} with F = f_{n-1} o ... o f_0.

    f_0 is F as an isomorphism onto F(D); identity splits then refine F(D)
    to a common regular refinement, and identity merges coarsen back to D.
    """
    fan = F.fan
    if not fan.is_regular:
        raise InvalidFan("decompose_simple needs a regular compatible fan")
    img = image_fan(F)
    steps = [SimpleMapStep("isomorphism", F, fan, img)]
    if img == fan:
        return steps
    common = common_refinement(fan, img)
    cur = img
    for st in split_sequence(img, common):
        rays = list(cur.rays)
        rays.insert(st.sector_index + 1, st.new_ray)
        nxt = Fan(tuple(rays))
        steps.append(SimpleMapStep("split", identity(cur), cur, nxt))
        cur = nxt
    for group in sector_split_groups(fan, common):
        for _, m in reversed(group):
            rays = [r for r in cur.rays if r != m]
            nxt = Fan(tuple(rays))
            steps.append(SimpleMapStep("merge", identity(cur), cur, nxt))
            cur = nxt
    if cur != fan:
        raise RefinementError("merge sequence did not return to the starting fan")
    return steps


def _max_passes(initial_splits: int) -> int:
    env = os.environ.get(MAX_PASSES_ENV)
    if env:
        return int(env)
    return 10 * (initial_splits + 1)


@dataclass
class _Chain:
    """Periodic fans D_0..D_{n-1}; f_0 = F, the others are identities."""

    F: PLAutomorphism
    fans: list
    sharps: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.fans)

    def apply(self, j: int, v):
        return self.F(v) if j % self.n == 0 else v

    def sharp(self, j: int) -> SharpMap:
        j %= self.n
        s = self.sharps.get(j)
        if s is None:
            f = self.F if j == 0 else identity(self.fans[j])
            s = SharpMap(f, self.fans[j], self.fans[(j + 1) % self.n])
            self.sharps[j] = s
        return s

    def kinds(self) -> list:
        out = []
        for j in range(self.n):
            f = self.F if j == 0 else identity(self.fans[j])
            out.append(step_kind(f, self.fans[j], self.fans[(j + 1) % self.n]))
        return out

    def refine(self, additions: dict):
        for c, rays in additions.items():
            self.fans[c] = self.fans[c].with_rays(rays)
        self.sharps.clear()

    def _sector_run(self, j: int, cone: Cone, memo: dict) -> Optional[int]:
        """Steps from sector `cone` of D_j until an undefined image, or None."""
        path = []
        on_path = set()
        state = (j % self.n, cone)
        result: Optional[int] = None
        while True:
            if state in memo:
                result = memo[state]
                if result is not None:
                    result += 1
                break
            if state in on_path:
                result = None
                break
            on_path.add(state)
            path.append(state)
            c, s = state
            nxt = self.sharp(c)(s)
            if nxt is None:
                result = 0
                break
            state = ((c + 1) % self.n, nxt)
        for st in reversed(path):
            if result is not None:
                memo[st] = result
                result += 1
            else:
                memo[st] = None
        # result now counts from the first state on the path
        return memo[(j % self.n, cone)]

    def minimal_chain(self):
        """(length, class i, ray index) minimizing k - i, or None."""
        memo: dict = {}
        best = None
        for i in range(self.n):
            sh = self.sharp(i)
            for r in range(self.fans[i].d):
                img = sh(Cone("ray", r))
                if img.kind != "sector":
                    continue
                run = self._sector_run(i + 1, img, memo)
                if run is None:
                    continue
                cand = (run + 1, i, r)
                if best is None or cand < best:
                    best = cand
        return best

    def split_count(self) -> int:
        return sum(1 for k in self.kinds() if k == "split")


def deterministic_refinement(F: PLAutomorphism, trace: Optional[list] = None):
    """Regular refinement of F's fan on which every ray is F_#-deterministic.

    Returns ``(fan, F expressed on fan)``.  When `trace` is a list, the number
    of split-type maps in the maintained decomposition is appended before the
    first pass and after each pass.
    """
    G = F.regular()
    steps = decompose_simple(G)
    chain = _Chain(G, [s.source_fan for s in steps])
    splits = chain.split_count()
    if trace is not None:
        trace.append(splits)
    cap = _max_passes(splits)
    passes = 0
    while True:
        fan0 = chain.fans[0]
        sharp0 = SharpMap(G, fan0)
        det = sharp0.deterministic_cones()
        if all(Cone("ray", j) in det for j in range(fan0.d)):
            break
        if passes >= cap:
            raise RefinementError(f"deterministic refinement exceeded {cap} passes")
        best = chain.minimal_chain()
        if best is None:
            raise RefinementError("non-deterministic ray but no split/merge chain found")
        length, i, r = best
        k = i + length
        additions: dict = {}
        v = chain.apply(i, chain.fans[i].rays[r])
        sigma = chain.sharp(i)(Cone("ray", r))
        for p in range(i + 1, k + 1):
            c = p % chain.n
            s = chain.fans[c].sector(sigma.index)
            if s.lo + s.hi != v:
                raise RefinementError(f"transported ray {v} does not split {s} regularly")
            additions.setdefault(c, []).append(v)
            if p < k:
                sigma = chain.sharp(c)(sigma)
            v = chain.apply(c, v)
        if v not in chain.fans[(k + 1) % chain.n].ray_index:
            raise RefinementError(f"chain end {v} is not a ray of the next fan")
        chain.refine(additions)
        passes += 1
        kinds = chain.kinds()
        if None in kinds or not all(f.is_regular for f in chain.fans):
            raise RefinementError("a map stopped being simple after refinement")
        new_splits = kinds.count("split")
        if new_splits >= splits:
            raise RefinementError("split count did not decrease")
        splits = new_splits
        if trace is not None:
            trace.append(splits)
        log.debug("pass %d: chain length %d from class %d, %d splits left", passes, length, i, splits)
    fan0 = chain.fans[0]
    return fan0, G.on_fan(fan0)
