"""Case closure by repeated growable searches, and the {1, 2, x} sweep.

The case algorithm first finds a U-growable realization T at the index of
smallest order; it covers everything above T.  If the slabs below T cannot
all be closed, the next U-growable index in order is tried as well.  What is left is a union of
slabs, one for each coordinate c (playing the role of z) and each value of
that coordinate below T's.  Inside a slab the remaining two coordinates
play x and y: the algorithm finds an {x,y}-growable realization at the
slab's smallest-order index (I, J), a y-growable one on each column i < I
and an x-growable one on each row j < J.  Finitely many uncovered points
may remain; each gets a plain realization.  Every realization it relies on
is returned so the coverage checker can re-certify the result.  Search
order, role choices and offsets are our own heuristics.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Sequence

from ..core import InvalidArgument, LengthMultiset, is_admissible_counts
from ..coverage import (
    DEFAULT_BASE_CAP,
    BasisEntry,
    CaseId,
    ClosureReport,
    CoverageBasis,
    always_inadmissible,
    check_closure,
)
from ..growth import forced_growth_count
from .engine import BUDGET, EXHAUSTED, FOUND, SearchRequest, find_realization

CLOSED = "closed"
OPEN = "open"  # limits reached before closure


@dataclass
class CaseResult:
    case: CaseId
    status: str  # closed | open | budget-exceeded
    entries: list[BasisEntry]
    closure: ClosureReport
    expanded: int
    slabs: int  # two-dimensional slabs worked through below the top entry
    checkpoint: str | None = None


class _Budget(Exception):
    pass


class _Seeker:
    """Cached growable searches sharing one expansion budget."""

    def __init__(self, U: Sequence[int], budget: int, per_search: int, workers: int):
        self.U = tuple(U)
        self.budget = budget
        self.per_search = per_search
        self.workers = workers
        self.expanded = 0
        self.hits: dict[tuple[int, ...], BasisEntry] = {}
        self.misses: set[tuple[tuple[int, ...], frozenset[int]]] = set()

    def seek(self, abc: tuple[int, ...], X: frozenset[int]) -> BasisEntry | None:
        hit = self.hits.get(abc)
        if hit is not None and X <= hit.grow_set:
            return hit
        if (abc, X) in self.misses or not is_admissible_counts(self.U, abc):
            return None
        if any(abc == k and X <= x for k, x in self.misses):
            return None
        left = self.budget - self.expanded
        if left <= 0:
            raise _Budget
        L = LengthMultiset.from_triple(self.U, abc)
        out = find_realization(SearchRequest(L, X, min(self.per_search, left)), workers=self.workers)
        self.expanded += out.expanded
        if out.status == FOUND:
            r, prof = out.realizations[0]
            entry = BasisEntry(abc, r, prof)
            old = self.hits.get(abc)
            if old is None or len(prof.grow_set) >= len(old.grow_set):
                self.hits[abc] = entry
            return entry
        if out.status == EXHAUSTED:
            self.misses.add((abc, X))
        elif self.expanded >= self.budget:
            raise _Budget
        return None


def _ckpt_text(case: CaseId, seeker: _Seeker, rounds: int) -> str:
    from ..certs import CKPT_HEADER

    lines = [f"{CKPT_HEADER} case", "U=" + ",".join(map(str, case.U)),
             "case=" + ",".join(map(str, case.residues)), f"round={rounds}",
             f"expanded={seeker.expanded}"]
    for abc, X in sorted(seeker.misses, key=lambda t: (t[0], sorted(t[1]))):
        lines.append("none={} X={}".format(",".join(map(str, abc)), ",".join(map(str, sorted(X)))))
    for abc in sorted(seeker.hits):
        e = seeker.hits[abc]
        lines.append("hit={} path={}".format(",".join(map(str, abc)), " ".join(map(str, e.realization.path))))
    return "\n".join(lines) + "\n"


def _load_ckpt(text: str, case: CaseId, seeker: _Seeker) -> None:
    from ..core import Realization
    from ..growth import growability_profile

    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].endswith(" case"):
        raise InvalidArgument("not a case-algorithm checkpoint")
    for ln in lines[1:]:
        k, _, val = ln.partition("=")
        if k == "U" and tuple(map(int, val.split(","))) != case.U:
            raise InvalidArgument("checkpoint is for a different U")
        if k == "case" and tuple(map(int, val.split(","))) != case.residues:
            raise InvalidArgument("checkpoint is for a different case")
        if k == "expanded":
            seeker.expanded = int(val)
        if k == "none":
            m = re.match(r"([\d,]+) X=([\d,]*)$", val)
            abc = tuple(map(int, m.group(1).split(",")))
            seeker.misses.add((abc, frozenset(int(t) for t in m.group(2).split(",") if t)))
        if k == "hit":
            m = re.match(r"([\d,]+) path=([\d ]+)$", val)
            abc = tuple(map(int, m.group(1).split(",")))
            r = Realization.of(int(t) for t in m.group(2).split())
            seeker.hits[abc] = BasisEntry(abc, r, growability_profile(r))


def run_case_algorithm(U: Sequence[int], case: CaseId | Sequence[int], budget: int = 10_000_000,
                       per_search: int = 500_000, max_offset: int = 4, max_tops: int = 4,
                       workers: int = 1,
                       cap: frozenset[int] = DEFAULT_BASE_CAP,
                       resume: str | None = None) -> CaseResult:
    """Look for a finite basis closing ``case``; see the module docstring.

    ``max_offset`` bounds how far (in congruence steps) any coordinate is
    pushed while looking for an entry, ``max_tops`` how many U-growable
    starting points are tried when slabs stay open; ``per_search`` caps one
    search and ``budget`` all of them together.
    """
    U = tuple(U)
    if len(U) != 3:
        raise InvalidArgument("the case algorithm needs a three-element underlying set")
    if not isinstance(case, CaseId):
        case = CaseId(U, tuple(case))
    if case.U != U:
        raise InvalidArgument(f"case is over {case.U}, not {U}")
    seeker = _Seeker(U, budget, per_search, workers)
    if resume is not None:
        _load_ckpt(resume, case, seeker)
    used: dict[tuple[int, ...], BasisEntry] = {}
    box = sorted(itertools.product(range(max_offset + 1), repeat=3),
                 key=lambda p: (case.order(p), p))

    def take(idx, X) -> BasisEntry | None:
        e = seeker.seek(case.triple(idx), frozenset(X))
        if e is not None:
            used[e.triple] = e
        return e

    def closure() -> ClosureReport:
        entries = [used[k] for k in sorted(used, key=lambda t: (sum(t), t))]
        return check_closure(case, CoverageBasis(case, entries, cap))

    def report(status: str, slabs: int, ckpt: str | None = None) -> CaseResult:
        entries = [used[k] for k in sorted(used, key=lambda t: (sum(t), t))]
        rep = closure()
        if status == CLOSED and not rep.covered:
            status = OPEN
        return CaseResult(case, status, entries, rep, seeker.expanded, slabs, ckpt)

    def ray(fixed: dict[int, int], free: int, X) -> None:
        base = [0, 0, 0]
        for c, val in fixed.items():
            base[c] = val
        if always_inadmissible(case, base, free):
            return
        for n in range(max_offset + 1):
            base[free] = n
            if take(tuple(base), X) is not None:
                return

    slabs = 0
    try:
        tops = 0
        for top in box:
            if tops == max_tops:
                break
            if take(top, U) is None:
                continue
            tops += 1
            for c in range(3):
                P, Q = (d for d in range(3) if d != c)
                for ell in range(top[c]):
                    slabs += 1
                    main = None
                    for p in box:
                        if p[c] == ell and take(p, (U[P], U[Q])) is not None:
                            main = p
                            break
                    if main is None:
                        continue
                    for i in range(main[P]):
                        ray({c: ell, P: i}, Q, (U[Q],))
                    for j in range(main[Q]):
                        ray({c: ell, Q: j}, P, (U[P],))
            rep = closure()
            if not rep.covered and not rep.unbounded:
                for t in rep.exceptions:
                    take(case.index(t), ())
            if closure().covered:
                break
    except _Budget:
        return report(BUDGET, slabs, _ckpt_text(case, seeker, slabs))
    return report(CLOSED, slabs)


# ----------------------------------------------------------- {1, 2, x}

@dataclass(frozen=True)
class Cell:
    a: int
    b: int
    c: int
    status: str  # realized | budget-exceeded | none
    path: tuple[int, ...] = ()
    anchor: int | None = None
    expanded: int = 0


@dataclass
class TwelveXReport:
    x: int
    cells: list[Cell] = field(default_factory=list)
    skipped: list[tuple[int, int, int]] = field(default_factory=list)  # whole class inadmissible
    growth_threshold: int = 0  # x-counts from here on force x-growability when a+b <= x-2
    counterexample_bound: int = 0  # a smallest counterexample would have c below this

    @property
    def realized(self) -> int:
        return sum(c.status == "realized" for c in self.cells)

    @property
    def success(self) -> bool:
        return all(c.status == "realized" for c in self.cells)

    @property
    def max_c(self) -> int:
        return max((c.c for c in self.cells), default=0)


def _class_start(a: int, b: int, c: int, x: int) -> int | None:
    """First c' = c + i x that is admissible, or None if the class never is."""
    lengths = (1, 2, x)
    for i in range(0, 2 * x + 2):
        if is_admissible_counts(lengths, (a, b, c + i * x)):
            return c + i * x
    return None


def prove_12x(x: int, budget: int = 10_000_000, ab_max: int | None = None,
              workers: int = 1) -> TwelveXReport:
    """x-growable realizations for every admissible residue class of c, per (a, b).

    Cells run over a, b >= 1 with a + b < x - 1 (and a + b <= ab_max when
    given).  For each (a, b) let k be the least admissible x-count; each c in
    [k, k+x-1] is searched at the first admissible member of its class mod x,
    and classes that are never admissible are skipped.  An x-growable
    realization at a class's first member grows into every later member, so
    success settles every c >= k for that (a, b); smaller c are inadmissible.
    """
    if x < 4 or x % 2:
        raise InvalidArgument(f"x must be even and at least 4, got {x}")
    limit = x - 2 if ab_max is None else min(ab_max, x - 2)
    rep = TwelveXReport(x, growth_threshold=forced_growth_count((1, 2, x), x - 2),
                        counterexample_bound=x * x - x + 1)
    lengths = (1, 2, x)
    for s in range(2, limit + 1):
        for a in range(1, s):
            b = s - a
            k = next(c for c in itertools.count(1) if is_admissible_counts(lengths, (a, b, c)))
            for c0 in range(k, k + x):
                c = _class_start(a, b, c0, x)
                if c is None:
                    rep.skipped.append((a, b, c0))
                    continue
                L = LengthMultiset.from_triple(lengths, (a, b, c))
                out = find_realization(SearchRequest(L, frozenset({x}), budget), workers=workers)
                if out.status == FOUND:
                    r, prof = out.realizations[0]
                    rep.cells.append(Cell(a, b, c, "realized", r.path, prof.smallest_anchor(x), out.expanded))
                else:
                    st = "budget-exceeded" if out.status == BUDGET else "none"
                    rep.cells.append(Cell(a, b, c, st, expanded=out.expanded))
    return rep
