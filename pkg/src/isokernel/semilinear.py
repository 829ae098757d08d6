"""Semilinear subsets of the integers: a finite set plus half-infinite progressions.

Every public operation returns sets in a canonical form that depends only
on membership, so ``==`` between two results is extensional equality:

* positive rays ``base + step*t`` use the minimal eventual period towards
  ``+inf`` and start at the least point from which the residue class stays
  inside the set.  A class that is full in both directions starts at its
  least nonnegative element;
* negative rays are computed the same way on what the positive rays leave;
* the finite part holds the remaining members.
"""
from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, NamedTuple, Optional, Tuple

import numpy as np


class Ray(NamedTuple):
    """``{base + direction*step*t : t >= 0}``."""

    base: int
    step: int
    direction: int

    def __contains__(self, x):
        offset = (x - self.base) * self.direction
        return offset >= 0 and offset % self.step == 0

    def negated(self) -> "Ray":
        return Ray(-self.base, self.step, -self.direction)

    def render(self) -> str:
        sign = "+" if self.direction > 0 else "-"
        return f"({self.base}{sign}{self.step}t, t≥0)"


def _lcm(values):
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


@dataclass(frozen=True)
class SemilinearSet:
    """``finite ∪ rays``; build through :func:`make` to get canonical form."""

    finite: Tuple[int, ...] = ()
    rays: Tuple[Ray, ...] = ()

    def __contains__(self, x) -> bool:
        i = bisect.bisect_left(self.finite, x)
        if i < len(self.finite) and self.finite[i] == x:
            return True
        return any(x in ray for ray in self.rays)

    def __or__(self, other):
        return union(self, other)

    def __add__(self, other):
        return sumset(self, other)

    def __neg__(self):
        return make([-x for x in self.finite], [r.negated() for r in self.rays])

    def __bool__(self):
        return bool(self.finite or self.rays)

    def __str__(self):
        parts = []
        if self.finite or not self.rays:
            parts.append("{" + ",".join(map(str, self.finite)) + "}" if self.finite else "∅")
        parts.extend(r.render() for r in self.rays)
        return " ∪ ".join(parts)

    def to_json(self) -> dict:
        return {"finite": list(self.finite),
                "rays": [[r.base, r.step, r.direction] for r in self.rays],
                "text": str(self)}

    @classmethod
    def from_json(cls, doc) -> "SemilinearSet":
        return make(doc.get("finite", ()), [Ray(*r) for r in doc.get("rays", ())])


EMPTY = SemilinearSet()


def make(finite: Iterable[int] = (), rays: Iterable = ()) -> SemilinearSet:
    """Canonical set from raw pieces; rays may be tuples ``(base, step, direction)``."""
    rays = [Ray(int(b), int(s), int(d)) for b, s, d in rays]
    for ray in rays:
        if ray.step < 1 or ray.direction not in (1, -1):
            raise ValueError(f"malformed ray {tuple(ray)}")
    finite = {int(x) for x in finite}
    if not rays:
        return SemilinearSet(tuple(sorted(finite)), ())
    members = set(finite)

    def member(x):
        return x in members or any(x in r for r in rays)

    anchors = list(finite) + [r.base for r in rays]
    return _canonical(member, min(anchors), max(anchors), _lcm(r.step for r in rays))


def full_line(residue: int, modulus: int) -> SemilinearSet:
    """``modulus*Z + residue`` as two opposite rays."""
    return make((), [(residue, modulus, 1), (residue - modulus, modulus, -1)])


def _minimal_period(pattern):
    size = len(pattern)
    for p in range(1, size + 1):
        if size % p == 0 and np.array_equal(pattern, np.roll(pattern, -p)):
            return p
    return size


def _canonical(member, lo0, hi0, period):
    """Canonical form of a set that is ``period``-periodic above ``hi0`` and below ``lo0``."""
    top = np.array([member(x) for x in range(hi0 + 1, hi0 + 1 + period)])
    positive = []
    if top.any():
        p = _minimal_period(top)
        floor = lo0 - period
        for x0 in range(hi0 + 1, hi0 + 1 + p):
            if not member(x0):
                continue
            x = x0
            while x - p >= floor and member(x - p):
                x -= p
            if x - p < floor:
                x = x0 % p
            positive.append(Ray(x, p, 1))

    def rest(x):
        return member(x) and not any(x in r for r in positive)

    low = min([lo0] + [r.base for r in positive])
    high = max([hi0] + [r.base for r in positive]) + period
    bottom = np.array([rest(x) for x in range(low - period, low)])
    negative = []
    if bottom.any():
        p = _minimal_period(bottom)
        for x0 in range(low - p, low):
            if not rest(x0):
                continue
            x = x0
            while x + p <= high and rest(x + p):
                x += p
            negative.append(Ray(x, p, -1))
    finite = [x for x in range(low, high + 1)
              if rest(x) and not any(x in r for r in negative)]
    return SemilinearSet(tuple(finite), tuple(sorted(positive + negative)))


def normalize(s: SemilinearSet) -> SemilinearSet:
    """Canonical form of ``s`` (same membership)."""
    return make(s.finite, s.rays)


def union(s1: SemilinearSet, s2: SemilinearSet) -> SemilinearSet:
    return make(s1.finite + s2.finite, s1.rays + s2.rays)


def _ray_sum(r1: Ray, r2: Ray):
    """Raw pieces of ``r1 + r2``."""
    base = r1.base + r2.base
    g = math.gcd(r1.step, r2.step)
    if r1.direction != r2.direction:
        return [], [(base, g, 1), (base - g, g, -1)]
    a, b = r1.step // g, r2.step // g
    conductor = (a - 1) * (b - 1)
    small = {i * a + j * b for i in range(b) for j in range(a) if i * a + j * b < conductor}
    d = r1.direction
    return [base + d * g * v for v in small], [(base + d * g * conductor, g, d)]


def sumset(s1: SemilinearSet, s2: SemilinearSet) -> SemilinearSet:
    """Exact ``{x + y : x in s1, y in s2}``.

    Same-direction rays use the numerical-semigroup conductor
    ``(a-1)(b-1)``: every multiple of the gcd past it is attained.
    """
    if not s1 or not s2:
        return EMPTY
    finite = [x + y for x in s1.finite for y in s2.finite]
    rays = [(x + r.base, r.step, r.direction) for x in s1.finite for r in s2.rays]
    rays += [(y + r.base, r.step, r.direction) for y in s2.finite for r in s1.rays]
    for r1 in s1.rays:
        for r2 in s2.rays:
            extra_finite, extra_rays = _ray_sum(r1, r2)
            finite += extra_finite
            rays += extra_rays
    return make(finite, rays)


def signed_sumset(s1: SemilinearSet, s2: SemilinearSet) -> SemilinearSet:
    """``{±x ± y : x in s1, y in s2}``."""
    n1, n2 = -s1, -s2
    out = EMPTY
    for a in (s1, n1):
        for b in (s2, n2):
            out = union(out, sumset(a, b))
    return out


def intersect_class(s: SemilinearSet, modulus: int, residue: int) -> SemilinearSet:
    """``s ∩ (modulus*Z + residue)``."""
    if not s:
        return EMPTY
    anchors = list(s.finite) + [r.base for r in s.rays]
    period = _lcm([modulus] + [r.step for r in s.rays])
    return _canonical(lambda x: (x - residue) % modulus == 0 and x in s,
                      min(anchors), max(anchors), period)


def parity_split(s: SemilinearSet) -> Tuple[SemilinearSet, SemilinearSet]:
    """``(even members, odd members)``."""
    return intersect_class(s, 2, 0), intersect_class(s, 2, 1)


def is_infinite(s: SemilinearSet) -> bool:
    return bool(s.rays)


def hits_every_full_ap(s: SemilinearSet) -> Tuple[bool, Optional[Tuple[int, int]]]:
    """Does ``s`` meet ``nZ + j`` for every ``n >= 1`` and ``j``?

    Only the rays matter: with ``D`` the lcm of their steps, the answer is
    yes iff their residues cover ``Z/D``.  Otherwise an uncovered residue
    ``r`` is refined modulo ``D*M`` to avoid the finite members, giving a
    witness ``(n, j)`` with ``s ∩ (nZ + j)`` empty.
    """
    s = normalize(s)
    modulus = _lcm(r.step for r in s.rays)
    covered = set()
    for ray in s.rays:
        covered.update(range(ray.base % ray.step, modulus, ray.step))
    if len(covered) == modulus:
        return True, None
    # smallest divisor of D owning a residue class whose lifts are all uncovered
    n0, r = next((n0, r) for n0 in range(1, modulus + 1) if modulus % n0 == 0
                 for r in range(n0) if covered.isdisjoint(range(r, modulus, n0)))
    modulus = n0
    stray = [x for x in s.finite if (x - r) % modulus == 0]
    mult = len(stray) + 1
    n = modulus * mult
    taken = {x % n for x in stray}
    j = next(r + modulus * t for t in range(mult) if (r + modulus * t) % n not in taken)
    return False, (n, j % n)


def enumerate_upto(s: SemilinearSet, bound: int) -> list:
    """Sorted members of ``s`` in ``[-bound, bound]``."""
    out = {x for x in s.finite if -bound <= x <= bound}
    for r in s.rays:
        if r.direction > 0:
            start = r.base if r.base >= -bound else r.base + -(-(-bound - r.base) // r.step) * r.step
            out.update(range(start, bound + 1, r.step))
        else:
            start = r.base if r.base <= bound else r.base - -(-(r.base - bound) // r.step) * r.step
            out.update(range(start, -bound - 1, -r.step))
    return sorted(out)
