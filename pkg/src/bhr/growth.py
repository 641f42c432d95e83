"""Growth embedding and growable realizations.

For an anchor m and a length x <= v/2 the growth embedding sends label y to
y (y <= m) or y + x (y > m), placing K_v inside K_{v+x}.  A realization is
x-growable at m when each label of the window (m-x, m] touches exactly one
edge that the embedding lengthens and no other edge is lengthened.  Growing
then inserts y + x next to each window label y, which adds x edges of
length x and keeps the rest of the multiset.

Windows are taken inside 0..v-1, so an anchor m < x-1 is never a witness.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import (
    InternalError,
    InvalidArgument,
    LengthMultiset,
    PreconditionViolation,
    Realization,
    _length,
    induced_multiset,
    multiset_discrepancy,
)


@dataclass(frozen=True, order=True)
class GrowabilityWitness:
    x: int
    m: int


@dataclass(frozen=True)
class GrowabilityProfile:
    witnesses: frozenset[GrowabilityWitness] = field(default_factory=frozenset)

    @property
    def grow_set(self) -> frozenset[int]:
        return frozenset(w.x for w in self.witnesses)

    def anchors(self, x: int) -> list[int]:
        return sorted(w.m for w in self.witnesses if w.x == x)

    def smallest_anchor(self, x: int) -> int | None:
        a = self.anchors(x)
        return a[0] if a else None


def _check_grow_args(v: int, x: int, m: int) -> None:
    if x < 1 or 2 * x > v:
        raise InvalidArgument(f"grow length {x} must satisfy 1 <= x <= v/2 = {v / 2}")
    if not 0 <= m < v:
        raise InvalidArgument(f"anchor {m} outside 0..{v - 1}")


def _lengthened(path: Sequence[int], v: int, x: int, m: int) -> list[int]:
    w = v + x
    out = []
    prev = path[0]
    fp = prev if prev <= m else prev + x
    for i in range(1, v):
        cur = path[i]
        fc = cur if cur <= m else cur + x
        if _length(w, fp, fc) > _length(v, prev, cur):
            out.append(i - 1)
        prev, fp = cur, fc
    return out


def lengthened_edges(r: Realization, x: int, m: int) -> set[int]:
    """Indices i of path edges (h_i, h_{i+1}) lengthened by the growth embedding at m."""
    _check_grow_args(r.v, x, m)
    return set(_lengthened(r.path, r.v, x, m))


def growability_problem(r: Realization, x: int, m: int) -> str | None:
    """Why r fails to be x-growable at m, or None when it is."""
    _check_grow_args(r.v, x, m)
    lo = m - x + 1
    if lo < 0:
        return f"window ({m - x}, {m}] reaches below label 0"
    path = r.path
    touches = Counter()
    stray = []
    for i in _lengthened(path, r.v, x, m):
        p, q = path[i], path[i + 1]
        inside = [t for t in (p, q) if lo <= t <= m]
        if not inside:
            stray.append((p, q))
        for t in inside:
            touches[t] += 1
    for y in range(lo, m + 1):
        if touches[y] != 1:
            return f"label {y} touches {touches[y]} lengthened edges (needs exactly 1)"
    if stray:
        p, q = stray[0]
        return f"edge ({p}, {q}) is lengthened but misses the window ({m - x}, {m}]"
    return None


def is_growable_at(r: Realization, x: int, m: int) -> bool:
    if m - x + 1 < 0:
        _check_grow_args(r.v, x, m)
        return False
    lo = m - x + 1
    idx = _lengthened(r.path, r.v, x, m)
    if len(idx) != x:
        return False
    path = r.path
    seen = set()
    for i in idx:
        p, q = path[i], path[i + 1]
        p_in = lo <= p <= m
        q_in = lo <= q <= m
        if p_in == q_in:
            return False
        y = p if p_in else q
        if y in seen:
            return False
        seen.add(y)
    return True


def growability_profile(r: Realization, lengths: Iterable[int] | None = None) -> GrowabilityProfile:
    """All witnesses (x, m); x ranges over the underlying set unless ``lengths`` is given."""
    if lengths is None:
        lengths = set(r.lengths())
    ws = []
    for x in sorted(set(lengths)):
        if 2 * x > r.v:
            continue
        for m in range(x - 1, r.v):
            if is_growable_at(r, x, m):
                ws.append(GrowabilityWitness(x, m))
    return GrowabilityProfile(frozenset(ws))


def first_witness(r: Realization, x: int) -> GrowabilityWitness | None:
    if 2 * x > r.v:
        return None
    for m in range(x - 1, r.v):
        if is_growable_at(r, x, m):
            return GrowabilityWitness(x, m)
    return None


def grow(r: Realization, w: GrowabilityWitness) -> Realization:
    """Grow r by w, realizing induced_multiset(r) plus w.x copies of w.x on v + w.x vertices."""
    problem = growability_problem(r, w.x, w.m)
    if problem is not None:
        raise PreconditionViolation(f"not {w.x}-growable at {w.m}: {problem}")
    x, m, v = w.x, w.m, r.v
    lo = m - x + 1
    path = r.path
    cut = set(_lengthened(path, v, x, m))
    out = []
    for i, t in enumerate(path):
        out.append(t if t <= m else t + x)
        if i in cut:
            p, q = path[i], path[i + 1]
            y = p if lo <= p <= m else q
            out.append(y + x)
    grown = Realization(v + x, tuple(out))
    target = induced_multiset(r).union({x: x})
    bad = multiset_discrepancy(grown, target)
    if bad is not None:
        raise InternalError(f"growing {list(path)} at ({x}, {m}) broke the multiset: {bad}")
    return grown


def grow_many(r: Realization, schedule: Sequence[int]) -> Realization:
    """Grow once per scheduled length, re-detecting the smallest anchor each time.

    A path with an edge of length v/2 may lose growability for one length
    after growing in another, so two distinct lengths are refused for it.
    """
    for x in sorted(set(schedule)):
        if first_witness(r, x) is None:
            raise PreconditionViolation(f"{list(r.path)} is not {x}-growable")
    if len(set(schedule)) > 1 and r.v % 2 == 0 and r.v // 2 in r.lengths():
        raise PreconditionViolation(
            f"{list(r.path)} has an edge of length v/2 = {r.v // 2}; grow it in one length first")
    cur = r
    for x in schedule:
        w = first_witness(cur, x)
        if w is None:
            raise InternalError(
                f"no {x}-witness after growth; intermediate path {list(cur.path)}"
            )
        cur = grow(cur, w)
    return cur


@dataclass(frozen=True)
class FeasibilityReport:
    status: str  # "impossible" | "not excluded" | "unsupported"
    items: tuple[int, ...] = ()

    @property
    def impossible(self) -> bool:
        return self.status == "impossible"


def growability_feasible(L: LengthMultiset, X: Iterable[int]) -> FeasibilityReport:
    """Screen (L, X) with the four non-existence conditions for growable realizations.

    Only three-element underlying sets are screened; ``items`` lists every
    triggered condition, numbered 1-4.
    """
    U = L.underlying
    if len(U) != 3:
        return FeasibilityReport("unsupported")
    x, y, z = U
    a, b, c = (L.count(t) for t in U)
    X = set(X)
    if not X <= set(U):
        raise InvalidArgument(f"growth lengths {sorted(X)} not in the underlying set {U}")
    hit = []
    if z in X and L.v == 2 * z:
        hit.append(1)
    if z in X and c < z - y:
        hit.append(2)
    if x in X and a + b < z - x - 1:
        hit.append(3)
    if y in X and a + b < z - y - 1:
        hit.append(4)
    return FeasibilityReport("impossible" if hit else "not excluded", tuple(hit))


def forced_growability_bound(U: Iterable[int], x: int, v: int) -> int:
    """Least count c with c >= (mu-1) v / mu, mu = max(U); that many x's force x-growability."""
    U = set(U)
    if x not in U:
        raise InvalidArgument(f"{x} is not in {sorted(U)}")
    mu = max(U)
    return math.ceil((mu - 1) * v / mu)


def forced_growth_count(U: Iterable[int], others: int) -> int:
    """Least x-count c forcing x-growability when the other exponents sum to ``others``.

    Solves c >= (mu-1)(c + others + 1)/mu, i.e. c >= (mu-1)(others+1).
    """
    mu = max(U)
    return (mu - 1) * (others + 1)
