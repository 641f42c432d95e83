"""Congruence cases, coverage by growable realizations, and closure checking.

Fix U = (x, y, z).  A case is a residue triple (a0, b0, c0) with
0 < a0 <= x and so on; its members are the exponent triples
(a0 + i*x, b0 + j*y, c0 + k*z), addressed here by the index (i, j, k).

A basis entry at index e with growth lengths G covers every index p >= e
that agrees with e in each coordinate whose length is not in G.  Beyond the
largest entry index in a coordinate, coverage no longer depends on that
coordinate.  Admissibility also stops depending on a coordinate once its
exponent reaches E = max(2 max(U), max(base cap)): every divisor d <= max(U)
not dividing that coordinate's length then sees at least d-1 non-multiples,
the divisors that do divide it see a constant v mod d, and v leaves the base
cap.  So the infinite case is decided exactly by scanning the box whose
edge in coordinate c is max(M_c + 1, first index with exponent >= E).  Box
points on the far face of a coordinate stand for the whole ray beyond it.

Joint growth needs care when a path has an edge of length v/2 (v = 2z).
Growing such a path by x keeps it x-growable, but it can stop being
y-growable for the other lengths: the v/2 edge is no longer the longest
possible after the order rises, so it gets lengthened in new ways.  Entries
like that are expanded before closure is checked.  Each growth length gives
a one-direction copy, and the path grown once along that length becomes a
derived entry carrying its own recomputed profile.  Passing
``joint_growth=True`` restores the plain rule that every entry grows
jointly in all its lengths; the method templates are matched under that
rule, because the printed arguments are written that way.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .core import InvalidArgument, Realization, is_admissible_counts
from .growth import GrowabilityProfile, GrowabilityWitness, grow, grow_many, growability_profile

Triple = tuple[int, int, int]

# Orders for which every admissible multiset is taken as realizable.
DEFAULT_BASE_CAP = frozenset(range(2, 20)) | frozenset({23})
# Orders re-verified locally by the exhaustive oracle.
STRICT_BASE_CAP = frozenset(range(2, 13))


@dataclass(frozen=True, order=True)
class CaseId:
    U: Triple
    residues: Triple

    def __post_init__(self) -> None:
        if len(self.U) != 3 or len(self.residues) != 3:
            raise InvalidArgument("cases are defined for three-element underlying sets")
        if not self.U[0] < self.U[1] < self.U[2]:
            raise InvalidArgument(f"underlying set must be increasing, got {self.U}")
        for r, t in zip(self.residues, self.U):
            if not 0 < r <= t:
                raise InvalidArgument(f"residue {r} outside 1..{t}")

    @classmethod
    def of(cls, U: Sequence[int], abc: Sequence[int]) -> CaseId:
        return cls(tuple(U), tuple((e - 1) % t + 1 for e, t in zip(abc, U)))

    def contains(self, abc: Sequence[int]) -> bool:
        return all(e >= r and (e - r) % t == 0 for e, r, t in zip(abc, self.residues, self.U))

    def index(self, abc: Sequence[int]) -> Triple:
        if not self.contains(abc):
            raise InvalidArgument(f"{tuple(abc)} is not in case {self.residues} mod {self.U}")
        return tuple((e - r) // t for e, r, t in zip(abc, self.residues, self.U))

    def triple(self, idx: Sequence[int]) -> Triple:
        return tuple(r + i * t for i, r, t in zip(idx, self.residues, self.U))

    def admissible(self, idx: Sequence[int]) -> bool:
        return is_admissible_counts(self.U, self.triple(idx))

    def order(self, idx: Sequence[int]) -> int:
        return sum(self.triple(idx)) + 1

    def __str__(self) -> str:
        return "({},{},{})".format(*self.residues)


def all_cases(U: Sequence[int]) -> list[CaseId]:
    U = tuple(U)
    return [CaseId(U, r) for r in itertools.product(*(range(1, t + 1) for t in U))]


def dominates(t1: Sequence[int], t2: Sequence[int]) -> bool:
    """t1 precedes t2 componentwise."""
    return all(p <= q for p, q in zip(t1, t2))


@dataclass(frozen=True)
class BasisEntry:
    triple: Triple
    realization: Realization
    profile: GrowabilityProfile

    @property
    def grow_set(self) -> frozenset[int]:
        return self.profile.grow_set


@dataclass
class CoverageBasis:
    case: CaseId
    entries: list[BasisEntry] = field(default_factory=list)
    base_theorem_cap: frozenset[int] = DEFAULT_BASE_CAP


@dataclass(frozen=True)
class ClosureReport:
    covered: bool
    exceptions: tuple[Triple, ...] = ()
    method_label: int | None = None
    unbounded: bool = False  # some exception stands for an infinite ray
    matching: tuple[int, ...] = ()  # every template that closes the case under joint growth
    joint_only: tuple[Triple, ...] = ()  # covered only if half-length entries grew jointly


def has_half_edge(r: Realization) -> bool:
    """Whether some edge of r has length exactly v/2."""
    return r.v % 2 == 0 and (r.v // 2) in r.lengths()


def _only(profile: GrowabilityProfile, x: int) -> GrowabilityProfile:
    return GrowabilityProfile(frozenset(w for w in profile.witnesses if w.x == x))


def effective_entries(entries: Iterable[BasisEntry], U: Sequence[int]) -> list[BasisEntry]:
    """Entries whose growth cones are sound; see the module docstring."""
    U = tuple(U)
    out = []
    for e in entries:
        lengths = sorted(set(U) & e.grow_set)
        if len(lengths) < 2 or not has_half_edge(e.realization):
            out.append(e)
            continue
        for x in lengths:
            out.append(BasisEntry(e.triple, e.realization, _only(e.profile, x)))
            step = tuple(t + (x if ell == x else 0) for t, ell in zip(e.triple, U))
            for m in e.profile.anchors(x):
                g = grow(e.realization, GrowabilityWitness(x, m))
                out.append(BasisEntry(step, g, growability_profile(g, U)))
    return out


def covers(entry: BasisEntry, target: Sequence[int], U: Sequence[int] | None = None,
           joint_growth: bool = False) -> bool:
    """Whether ``entry`` covers the exponent triple ``target``.

    U defaults to the underlying set of the entry's realization.  Unless
    ``joint_growth`` is set, an entry with a v/2 edge covers only targets
    that differ from it in at most one coordinate.
    """
    if U is None:
        U = sorted(set(entry.realization.lengths()))
    U = tuple(U)
    if len(U) != 3:
        raise InvalidArgument(f"coverage needs a three-element underlying set, got {U}")
    for e, t, ell in zip(entry.triple, target, U):
        if (t - e) % ell:
            raise InvalidArgument(f"{tuple(target)} and {entry.triple} are in different cases mod {U}")
    if not dominates(entry.triple, target):
        return False
    moved = sum(e != t for e, t in zip(entry.triple, target))
    if moved > 1 and not joint_growth and has_half_edge(entry.realization):
        return False
    return all(e == t or ell in entry.grow_set for e, t, ell in zip(entry.triple, target, U))


def materialize(entries: Iterable[BasisEntry], target: Sequence[int], U: Sequence[int]) -> Realization:
    """A realization of ``target`` grown from the first entry that soundly covers it."""
    U = tuple(U)
    target = tuple(target)
    for e in effective_entries(entries, U):
        if all(t >= a and (t - a) % ell == 0 for a, t, ell in zip(e.triple, target, U)) and \
                all(a == t or ell in e.grow_set for a, t, ell in zip(e.triple, target, U)):
            schedule = [ell for a, t, ell in zip(e.triple, target, U) for _ in range((t - a) // ell)]
            return grow_many(e.realization, schedule)
    raise InvalidArgument(f"no entry covers {target}")


def _entry_cones(case: CaseId, entries: Iterable[BasisEntry]) -> list[tuple[Triple, tuple[bool, bool, bool]]]:
    cones = []
    for e in entries:
        if not case.contains(e.triple):
            raise InvalidArgument(f"entry {e.triple} is not in case {case.residues}")
        grow = tuple(t in e.grow_set for t in case.U)
        cones.append((case.index(e.triple), grow))
    return cones


def _covered(cones, p: Sequence[int]) -> bool:
    for idx, grow in cones:
        if all(q == i or (q > i and g) for q, i, g in zip(p, idx, grow)):
            return True
    return False


def _stable_index(case: CaseId, c: int, cap: frozenset[int]) -> int:
    """First index from which coordinate c no longer affects admissibility or the cap."""
    E = max(2 * max(case.U), max(cap, default=0))
    r, t = case.residues[c], case.U[c]
    return max(0, math.ceil((E - r) / t))


def _scan_box(case: CaseId, cones, cap: frozenset[int]) -> tuple[list[int], ...]:
    bounds = []
    for c in range(3):
        top = max((idx[c] for idx, _ in cones), default=-1) + 1
        bounds.append(max(top, _stable_index(case, c, cap)))
    return tuple(bounds)


def closure_exceptions(case: CaseId, entries: Iterable[BasisEntry],
                       cap: frozenset[int] = DEFAULT_BASE_CAP,
                       joint_growth: bool = False) -> tuple[list[Triple], bool]:
    """Uncovered admissible triples outside the cap, and whether any is unbounded."""
    if not joint_growth:
        entries = effective_entries(entries, case.U)
    cones = _entry_cones(case, entries)
    bounds = _scan_box(case, cones, cap)
    out = []
    unbounded = False
    for p in itertools.product(*(range(b + 1) for b in bounds)):
        if _covered(cones, p) or not case.admissible(p):
            continue
        if case.order(p) in cap:
            continue
        out.append(case.triple(p))
        if any(q == b for q, b in zip(p, bounds)):
            unbounded = True
    return out, unbounded


def always_inadmissible(case: CaseId, base: Sequence[int], coord: int,
                        cap: frozenset[int] = DEFAULT_BASE_CAP) -> bool:
    """True when index ``base`` moved any distance along ``coord`` is never admissible."""
    stop = max(base[coord], _stable_index(case, coord, frozenset()))
    p = list(base)
    for n in range(base[coord], stop + 1):
        p[coord] = n
        if case.admissible(p):
            return False
    return True


def check_closure(case: CaseId, basis: CoverageBasis) -> ClosureReport:
    exc, unbounded = closure_exceptions(case, basis.entries, basis.base_theorem_cap)
    labels = matching_methods(case, basis)
    joint, _ = closure_exceptions(case, basis.entries, basis.base_theorem_cap, joint_growth=True)
    only = tuple(t for t in exc if t not in set(joint))
    return ClosureReport(not exc, tuple(exc), labels[0] if labels else None, unbounded, labels, only)


def _indexed(case: CaseId, entries: Sequence[BasisEntry]):
    out = []
    for e in entries:
        grow = frozenset(c for c, t in enumerate(case.U) if t in e.grow_set)
        out.append((case.index(e.triple), grow, e))
    return out


def _match_method(method: int, case: CaseId, indexed, roles: tuple[int, int, int],
                  cap: frozenset[int]) -> list[BasisEntry] | None:
    P, Q, R = roles
    ALL = frozenset({0, 1, 2})

    def at(**coords) -> Triple:
        v = [0, 0, 0]
        for name, val in coords.items():
            v[{"P": P, "Q": Q, "R": R}[name]] = val
        return tuple(v)

    def with_growth(idx: Triple, need: Iterable[int]) -> list[BasisEntry]:
        need = frozenset(need)
        return [e for i, g, e in indexed if i == idx and need <= g]

    def along(fixed: dict, free: str, need: Iterable[int], start: int = 0) -> list[BasisEntry]:
        need = frozenset(need)
        coord = {"P": P, "Q": Q, "R": R}[free]
        hits = []
        for i, g, e in indexed:
            if i[coord] < start or not need <= g:
                continue
            if all(i[{"P": P, "Q": Q, "R": R}[k]] == val for k, val in fixed.items()) and all(
                i[c] == 0 for c in range(3) if c != coord and c not in
                {{"P": P, "Q": Q, "R": R}[k] for k in fixed}
            ):
                hits.append(e)
        return hits

    chosen: list[BasisEntry] = []
    if method == 1:
        h = with_growth((0, 0, 0), ALL)
        return h or None
    if method == 2:
        h1 = with_growth(at(R=1), ALL)
        h2 = with_growth((0, 0, 0), {P, Q})
        return h1 + h2 if h1 and h2 else None
    if method == 3:
        h2 = along({"Q": 0, "R": 0}, "P", {P, Q})
        h3 = along({"P": 0, "R": 0}, "Q", {P, Q})
        if not (h2 and h3):
            return None
        h1 = with_growth(at(R=1), ALL)
        if h1:
            return h1 + h2 + h3
        if always_inadmissible(case, (0, 0, 0), R):
            h4 = with_growth(at(P=1, R=1), ALL)
            h5 = with_growth(at(Q=1, R=1), ALL)
            if h4 and h5:
                return h4 + h5 + h2 + h3
        return None
    if method == 4:
        tops = sorted({i[R] for i, g, e in indexed if g == ALL and i == at(R=i[R]) and i[R] >= 1})
        for k in tops:
            chosen = with_growth(at(R=k), ALL)
            ok = True
            for ell in range(k):
                h2 = along({"Q": 0, "R": ell}, "P", {P, Q})
                h3 = along({"P": 0, "R": ell}, "Q", {P, Q})
                if not (h2 and h3):
                    ok = False
                    break
                chosen += h2 + h3
            if ok:
                return chosen
        return None
    if method == 5:
        h1 = with_growth((1, 1, 1), ALL)
        if not h1:
            return None
        chosen = list(h1)
        for c in range(3):
            rays = [e for i, g, e in indexed
                    if c in g and all(i[d] == 0 for d in range(3) if d != c)]
            if rays:
                chosen += rays
            elif not always_inadmissible(case, (0, 0, 0), c):
                return None
        for c in range(3):
            idx = tuple(0 if d == c else 1 for d in range(3))
            need = {d for d in range(3) if d != c}
            h = with_growth(idx, need)
            if not h:
                return None
            chosen += h
        return chosen
    raise InvalidArgument(f"unknown method {method}")


def matching_methods(case: CaseId, basis: CoverageBasis) -> tuple[int, ...]:
    """Every method template (1-5) the basis instantiates with closure.

    Every choice of which coordinate plays the role of z is tried; a template
    matches when its required entries exist and those entries alone close the
    case under the basis' base cap, with every entry growing jointly.  Templates overlap (Method 4 with a single
    layer has the shape of Method 3), so several labels can match.
    """
    indexed = _indexed(case, basis.entries)
    role_orders = [(0, 1, 2), (0, 2, 1), (1, 2, 0)]  # (P, Q, R): R plays z
    out = []
    for method in range(1, 6):
        for roles in role_orders:
            chosen = _match_method(method, case, indexed, roles, basis.base_theorem_cap)
            if chosen is None:
                continue
            exc, _ = closure_exceptions(case, chosen, basis.base_theorem_cap, joint_growth=True)
            if not exc:
                out.append(method)
                break
    return tuple(out)


def classify_method(case: CaseId, basis: CoverageBasis) -> int | None:
    """Least method template the basis instantiates with closure, else None."""
    found = matching_methods(case, basis)
    return found[0] if found else None
