"""Closed-form realizations for {1^a, 2^b, x} and two automorphism reductions.

The builder starts from the path

    v-1, v-2, ..., x ; 0, 1, ..., x-1

which realizes {1^(v-2), x} and consists of two runs of consecutive labels.
Replacing a run of k+1 consecutive labels y..y+k by sigma_k + y trades
k-1 differences of 1 for differences of 2, so blocks at the two ends reach
every a from 2 to v-2.  The right end is filled first, as far as it can go
without moving the label 0, then the left end, then the right block takes
the last label.  a = 1 has its own closed form for each parity of v.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    InadmissibleInput,
    InternalError,
    InvalidArgument,
    LengthMultiset,
    Realization,
    apply_unit_automorphism,
    check_admissibility,
    map_length,
    multiset_discrepancy,
)


@dataclass(frozen=True)
class SigmaSequence:
    k: int
    values: tuple[int, ...]

    def shifted(self, y: int) -> tuple[int, ...]:
        return tuple(t + y for t in self.values)


def sigma(k: int) -> SigmaSequence:
    """0, 2, 4, ... up to k or k-1, then back down through the odd (or even) labels to 1."""
    if k < 1:
        raise InvalidArgument(f"sigma needs k >= 1, got {k}")
    up = list(range(0, k + 1, 2))
    top = up[-1]
    down = list(range(top - 1 if top == k else k, 0, -2))
    return SigmaSequence(k, tuple(up + down))


def _check_12x(v: int, x: int, a: int) -> None:
    if x % 2 == 0:
        raise InvalidArgument(f"x must be odd, got {x}")
    if not (6 < x and 2 * x <= v):
        raise InvalidArgument(f"need 6 < x <= v/2, got x={x}, v={v}")
    if not 1 <= a <= v - 2:
        raise InvalidArgument(f"need 1 <= a <= v-2 = {v - 2}, got a={a}")


def _single_one(v: int, x: int) -> list[int]:
    if v % 2 == 0:
        return (list(range(v - 2, x, -2)) + [x - 1] + list(range(x - 2, 0, -2))
                + list(range(v - 1, x - 1, -2)) + list(range(0, x - 2, 2)))
    return (list(range(v - 2, x - 1, -2)) + list(range(0, x, 2)) + list(range(x - 2, 0, -2))
            + list(range(v - 1, x, -2)))


def build_12x_single(v: int, x: int, a: int) -> Realization:
    """A realization of {1^a, 2^(v-2-a), x} for odd x with 6 < x <= v/2."""
    _check_12x(v, x, a)
    L = LengthMultiset.from_counts(v, {1: a, 2: v - 2 - a, x: 1})
    if not check_admissibility(L).admissible:
        raise InvalidArgument(f"{L} is not admissible")
    if a == 1:
        path = _single_one(v, x)
    else:
        twos = v - 2 - a
        left = list(range(v - 1, x - 1, -1))
        right = list(range(0, x))
        kr = min(twos, x - 3) + 1 if twos else 0
        twos -= max(kr - 1, 0)
        kl = min(twos, v - x - 2) + 1 if twos else 0
        twos -= max(kl - 1, 0)
        if twos:  # only the label 0 is left to absorb into the right block
            kr += twos
        if kr >= 2:
            right[x - 1 - kr:] = sigma(kr).shifted(x - 1 - kr)
        if kl >= 2:
            left[:kl + 1] = sigma(kl).shifted(v - 1 - kl)[::-1]
        path = left + right
    r = Realization(v, tuple(path))
    bad = multiset_discrepancy(r, L)
    if bad is not None:
        raise InternalError(f"build_12x_single({v}, {x}, {a}) produced {path}: {bad}")
    return r


def _pull_back(L: LengthMultiset, u: int) -> LengthMultiset:
    """The multiset whose image under multiplication by u is L."""
    inv = pow(u, -1, L.v)
    counts: dict[int, int] = {}
    for ell, m in L.counts:
        t = map_length(L.v, inv, ell)
        counts[t] = counts.get(t, 0) + m
    return LengthMultiset.from_counts(L.v, counts)


def _search_preimage(L: LengthMultiset, budget: int) -> Realization:
    from .search import SearchRequest, find_realization  # search imports nothing from here

    out = find_realization(SearchRequest(L, frozenset(), budget))
    if not out.found:
        raise InternalError(f"no realization of {L} found ({out.status} after {out.expanded} expansions)")
    return out.realizations[0][0]


def _push_forward(r: Realization, u: int, L: LengthMultiset) -> Realization:
    image = apply_unit_automorphism(r, u)
    bad = multiset_discrepancy(image, L)
    if bad is not None:
        raise InternalError(f"image under t -> {u}t does not realize {L}: {bad}")
    return image


def reduce_36x(L: LengthMultiset, budget: int = 10_000_000) -> Realization:
    """Realize {3^a, 6^b, x} through {1^a, 2^b, x'} with x' = +-x/3 mod v."""
    others = [ell for ell in L.underlying if ell not in (3, 6)]
    if len(others) != 1 or L.count(others[0]) != 1:
        raise InvalidArgument(f"{L} is not of the form {{3^a, 6^b, x}} with one x")
    if L.v % 3 == 0:
        raise InadmissibleInput(f"v={L.v} is a multiple of 3, so {L} is inadmissible")
    if not check_admissibility(L).admissible:
        raise InadmissibleInput(f"{L} is not admissible")
    Lp = _pull_back(L, 3)
    a = Lp.count(1)
    xp = map_length(L.v, pow(3, -1, L.v), others[0])
    if xp % 2 == 1 and 6 < xp and 2 * xp <= L.v and a >= 1 and Lp.count(xp) == 1:
        pre = build_12x_single(L.v, xp, a)
    else:
        pre = _search_preimage(Lp, budget)
    return _push_forward(pre, 3, L)


def reduce_246(L: LengthMultiset, budget: int = 10_000_000) -> Realization:
    """Realize a multiset over {2,4,6} by doubling a realization over {1,2,3}."""
    if not set(L.underlying) <= {2, 4, 6}:
        raise InvalidArgument(f"{L} is not over {{2,4,6}}")
    if L.v % 2 == 0:
        raise InadmissibleInput(f"v={L.v} is even, so {L} is inadmissible")
    Lp = _pull_back(L, 2)
    return _push_forward(_search_preimage(Lp, budget), 2, L)
