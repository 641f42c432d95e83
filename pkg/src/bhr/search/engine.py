"""Depth-first search for realizations of a length multiset.

Paths grow at the right end only.  Candidates are ordered by the remaining
count of the length they use (scarcest first) and then by label.  Partial
paths are pruned when the unused vertices are not reachable from the current
end using lengths that still have copies left.

Symmetry: the first label s satisfies s <= v-1-s and complete paths must
start below where they end.  Every orbit under reversal and complement keeps
at least one member, so orbits are never lost.  Growability is not invariant
under complement, so required growth lengths are tested on both edge sets of
an orbit.

The budget counts node expansions (pushes of a label onto the partial path)
and is checked before each push.  When it runs out the current partial path
is kept as a checkpoint; resuming replays the same deterministic order and
skips everything the earlier run already visited.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from ..core import (
    InvalidArgument,
    LengthMultiset,
    Realization,
    canonical_orbit_rep,
    check_admissibility,
)
from ..growth import GrowabilityProfile, growability_feasible, growability_profile, is_growable_at

FOUND = "found"
EXHAUSTED = "exhausted-none"
BUDGET = "budget-exceeded"


@dataclass(frozen=True)
class SearchRequest:
    L: LengthMultiset
    required_growability: frozenset[int] = frozenset()
    budget: int = 10_000_000
    want_all: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "required_growability", frozenset(self.required_growability))
        if self.budget <= 0:
            raise InvalidArgument("budget must be positive")
        if not self.required_growability <= set(self.L.underlying):
            raise InvalidArgument(
                f"growth lengths {sorted(self.required_growability)} are not in {self.L.underlying}"
            )


@dataclass
class Checkpoint:
    """Where a budget-limited search stopped; see ``certs.emit_checkpoint``."""

    L: LengthMultiset
    required_growability: frozenset[int]
    want_all: bool
    expanded: int
    frontier: tuple[int, ...]
    found: list[Realization] = field(default_factory=list)


@dataclass
class SearchOutcome:
    status: str
    realizations: list[tuple[Realization, GrowabilityProfile]]
    expanded: int = 0
    checkpoint: Checkpoint | None = None

    @property
    def found(self) -> bool:
        return self.status == FOUND


class _OutOfBudget(Exception):
    pass


class _Done(Exception):
    pass


def _growable_all(r: Realization, X: Iterable[int]) -> bool:
    for x in X:
        if 2 * x > r.v:
            return False
        if not any(is_growable_at(r, x, m) for m in range(x - 1, r.v)):
            return False
    return True


class _DFS:
    def __init__(self, L: LengthMultiset, X: frozenset[int], want_all: bool, budget: int,
                 starts: Sequence[int] | None = None, resume: Sequence[int] | None = None,
                 expanded: int = 0):
        self.v = v = L.v
        self.lengths = list(L.underlying)
        self.rem = [L.count(ell) for ell in self.lengths]
        self.X = sorted(X)
        self.want_all = want_all
        self.budget = budget
        self.expanded = expanded
        self.found: dict[tuple[int, ...], tuple[Realization, int]] = {}
        self.order: list[tuple[int, ...]] = []
        self.path: list[int] = []
        self.used = 0
        self.resume = list(resume) if resume else None
        # the frontier's prefix was already counted by the interrupted run
        self.replay = len(self.resume) - 1 if self.resume else 0
        self.frontier: tuple[int, ...] | None = None
        if starts is None:
            starts = range(0, (v - 1) // 2 + 1)
        self.starts = list(starts)
        # nbr[li][u]: bitmask of the (one or two) vertices at length lengths[li] from u
        self.nbr = [[(1 << ((u + ell) % v)) | (1 << ((u - ell) % v)) for u in range(v)]
                    for ell in self.lengths]

    def run(self) -> str:
        try:
            self._root()
        except _OutOfBudget:
            return BUDGET
        except _Done:
            return FOUND
        return FOUND if self.order else EXHAUSTED

    def _push(self, u: int, li: int | None) -> None:
        if self.replay:
            self.replay -= 1
        else:
            if self.expanded >= self.budget:
                self.frontier = tuple(self.path) + (u,)
                raise _OutOfBudget
            self.expanded += 1
        self.path.append(u)
        self.used |= 1 << u
        if li is not None:
            self.rem[li] -= 1

    def _pop(self, li: int | None) -> None:
        u = self.path.pop()
        self.used &= ~(1 << u)
        if li is not None:
            self.rem[li] += 1

    def _root(self) -> None:
        target = self.resume[0] if self.resume else None
        for s in self.starts:
            if target is not None:
                if s != target:
                    continue
                target = None
                if len(self.resume) == 1:
                    self.resume = None
            self._push(s, None)
            self._extend()
            self._pop(None)

    def _connected(self) -> bool:
        v = self.v
        full = (1 << v) - 1
        unused = full & ~self.used
        if unused == 0:
            return True
        live = [self.nbr[li] for li, r in enumerate(self.rem) if r > 0]
        if not live:
            return False
        seen = 1 << self.path[-1]
        frontier = seen
        while frontier:
            nxt = 0
            f = frontier
            while f:
                low = f & -f
                u = low.bit_length() - 1
                f ^= low
                for table in live:
                    nxt |= table[u]
            nxt &= unused & ~seen
            if not nxt:
                break
            seen |= nxt
            frontier = nxt
        return (unused & ~seen) == 0

    def _extend(self) -> None:
        path = self.path
        depth = len(path)
        if depth == self.v:
            self._leaf()
            return
        e = path[-1]
        v = self.v
        used = self.used
        cands = []
        for li, ell in enumerate(self.lengths):
            r = self.rem[li]
            if r == 0:
                continue
            a = (e + ell) % v
            b = (e - ell) % v
            if not (used >> a) & 1:
                cands.append((r, a, li))
            if b != a and not (used >> b) & 1:
                cands.append((r, b, li))
        if not cands:
            return
        cands.sort()
        target = None
        if self.resume is not None and depth < len(self.resume):
            target = self.resume[depth]
        for _, u, li in cands:
            if target is not None:
                if u != target:
                    continue
                target = None
                if depth == len(self.resume) - 1:
                    self.resume = None
            self._push(u, li)
            if depth + 2 >= self.v or self._connected():
                self._extend()
            self._pop(li)

    def _leaf(self) -> None:
        path = self.path
        if path[0] > path[-1]:
            return
        v = self.v
        canon = canonical_orbit_rep(path, v)
        if canon in self.found:
            return
        if self.X:
            r = Realization(v, tuple(path))
            if not _growable_all(r, self.X):
                r = r.complemented()
                if not _growable_all(r, self.X):
                    return
            choice = min(r.path, r.path[::-1])
            chosen = Realization(v, choice)
        else:
            chosen = Realization(v, canon)
        self.found[canon] = (chosen, self.expanded)
        self.order.append(canon)
        if not self.want_all:
            raise _Done


def _prefilter(req: SearchRequest) -> bool:
    """True when the request can be answered 'exhausted-none' without searching."""
    if not check_admissibility(req.L).admissible:
        return True
    if req.required_growability and len(req.L.underlying) == 3:
        if growability_feasible(req.L, req.required_growability).impossible:
            return True
    return False


def _outcome(dfs: _DFS, status: str, req: SearchRequest) -> SearchOutcome:
    keys = sorted(dfs.order) if req.want_all else dfs.order
    reals = [dfs.found[k][0] for k in keys]
    out = [(r, growability_profile(r)) for r in reals]
    ckpt = None
    if status == BUDGET:
        ckpt = Checkpoint(req.L, req.required_growability, req.want_all, dfs.expanded,
                          dfs.frontier or (), [r for r in reals])
        if out and not req.want_all:
            status = FOUND
    if status == FOUND and not out:
        status = EXHAUSTED
    return SearchOutcome(status, out, dfs.expanded, ckpt)


def find_realization(req: SearchRequest, workers: int = 1,
                     resume: Checkpoint | None = None) -> SearchOutcome:
    """Search for realizations of req.L that are growable for every required length.

    With ``want_all`` every orbit (under reversal and complement) is reported
    once, sorted by its canonical representative; otherwise the first hit in
    search order is returned.  ``workers > 1`` splits the search by first
    label across processes and merges the pieces so that the outcome equals
    the single-process one.
    """
    if _prefilter(req):
        return SearchOutcome(EXHAUSTED, [])
    if resume is not None:
        dfs = _DFS(req.L, req.required_growability, req.want_all, req.budget,
                   resume=resume.frontier, expanded=resume.expanded)
        for r in resume.found:
            canon = canonical_orbit_rep(r.path, r.v)
            dfs.found[canon] = (r, 0)
            dfs.order.append(canon)
        return _outcome(dfs, dfs.run(), req)
    if workers > 1:
        return _parallel(req, workers)
    dfs = _DFS(req.L, req.required_growability, req.want_all, req.budget)
    return _outcome(dfs, dfs.run(), req)


def _subtree(args):
    L, X, want_all, budget, s = args
    dfs = _DFS(L, X, want_all, budget, starts=[s])
    status = dfs.run()
    finds = [(k, dfs.found[k][0], dfs.found[k][1]) for k in dfs.order]
    return status, dfs.expanded, finds


def _parallel(req: SearchRequest, workers: int) -> SearchOutcome:
    v = req.L.v
    starts = list(range(0, (v - 1) // 2 + 1))
    jobs = [(req.L, req.required_growability, req.want_all, req.budget, s) for s in starts]
    offset = 0
    found: dict[tuple[int, ...], Realization] = {}
    order: list[tuple[int, ...]] = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_subtree, j) for j in jobs]
        for s, fut in zip(starts, futures):
            status, used, finds = fut.result()
            remaining = req.budget - offset
            if status == BUDGET or used > remaining:
                for f in futures:
                    f.cancel()
                # replay this subtree in-process with the exact remaining budget
                dfs = _DFS(req.L, req.required_growability, req.want_all, req.budget,
                           starts=starts[starts.index(s):], expanded=offset)
                for k in order:
                    dfs.found[k] = (found[k], 0)
                    dfs.order.append(k)
                return _outcome(dfs, dfs.run(), req)
            for k, r, _ in finds:
                if k not in found:
                    found[k] = r
                    order.append(k)
            offset += used
            if order and not req.want_all:
                for f in futures:
                    f.cancel()
                break
    dfs = _DFS(req.L, req.required_growability, req.want_all, req.budget)
    dfs.expanded = offset
    for k in order:
        dfs.found[k] = (found[k], 0)
        dfs.order.append(k)
    return _outcome(dfs, FOUND if order else EXHAUSTED, req)
