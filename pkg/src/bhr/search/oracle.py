"""Exhaustive enumeration of realizations for small orders.

Deliberately naive: every start label, no pruning beyond the remaining
length counts, no symmetry breaking.  It exists to referee the search engine.
"""
from __future__ import annotations

from ..core import InvalidArgument, LengthMultiset, Realization, canonical_orbit_rep, check_admissibility

DEFAULT_CAP = 12


def exhaustive_oracle(L: LengthMultiset, cap: int = DEFAULT_CAP, limit: int | None = None) -> list[Realization]:
    """Canonical representatives of every orbit of realizations of L, sorted.

    An orbit is a path together with its reversal, complement and reversed
    complement; the representative is the lexicographically least.  ``limit``
    stops after that many orbits (for existence checks).
    """
    v = L.v
    if v > cap:
        raise InvalidArgument(f"oracle refuses v={v} above its cap of {cap}")
    if not check_admissibility(L).admissible:
        return []
    lengths = list(L.underlying)
    rem = {ell: L.count(ell) for ell in lengths}
    orbits: set[tuple[int, ...]] = set()
    used = [False] * v
    path: list[int] = []

    class _Enough(Exception):
        pass

    def extend() -> None:
        if len(path) == v:
            orbits.add(canonical_orbit_rep(path, v))
            if limit is not None and len(orbits) >= limit:
                raise _Enough
            return
        e = path[-1]
        for ell in lengths:
            if rem[ell] == 0:
                continue
            for u in {(e + ell) % v, (e - ell) % v}:
                if used[u]:
                    continue
                used[u] = True
                rem[ell] -= 1
                path.append(u)
                extend()
                path.pop()
                rem[ell] += 1
                used[u] = False

    try:
        for s in range(v):
            used[s] = True
            path.append(s)
            extend()
            path.pop()
            used[s] = False
    except _Enough:
        pass
    return [Realization(v, p) for p in sorted(orbits)]


def orbit_members(r: Realization) -> list[Realization]:
    """The distinct paths in r's orbit under reversal and complement."""
    seen = []
    for p in (r, r.reversed(), r.complemented(), r.complemented().reversed()):
        if p not in seen:
            seen.append(p)
    return seen
