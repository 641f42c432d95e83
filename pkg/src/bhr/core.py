"""Edge lengths in K_v, length multisets, admissibility and realizations.

Vertices of K_v are the integers 0..v-1 arranged on a circle; the length of
the edge {p, q} is the circular distance min(|p-q|, v-|p-q|).  A Hamiltonian
path (a permutation of the labels) realizes the multiset of lengths of its
v-1 consecutive edges.
"""
from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


class BHRError(Exception):
    """Base class for errors raised by this package."""


class InvalidArgument(BHRError, ValueError):
    pass


class InadmissibleInput(BHRError, ValueError):
    pass


class PreconditionViolation(BHRError):
    pass


class Unsupported(BHRError):
    pass


class InternalError(BHRError, RuntimeError):
    """A construction produced something a theorem says it cannot."""


def edge_length(v: int, p: int, q: int) -> int:
    if v < 2:
        raise InvalidArgument(f"order must be at least 2, got {v}")
    if not (0 <= p < v and 0 <= q < v):
        raise InvalidArgument(f"labels {p}, {q} out of range for v={v}")
    if p == q:
        raise InvalidArgument(f"loop at vertex {p} has no length")
    d = abs(p - q)
    return min(d, v - d)


def _length(v: int, p: int, q: int) -> int:
    # unchecked hot-path variant
    d = p - q if p > q else q - p
    return d if 2 * d <= v else v - d


@dataclass(frozen=True)
class LengthMultiset:
    """A multiset of edge lengths of size v-1, stored as sorted (length, count) pairs."""

    v: int
    counts: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.v < 2:
            raise InvalidArgument(f"order must be at least 2, got {self.v}")
        half = self.v // 2
        prev = 0
        total = 0
        for length, mult in self.counts:
            if length <= prev:
                raise InvalidArgument("counts must be sorted by strictly increasing length")
            if not 1 <= length <= half:
                raise InvalidArgument(f"length {length} outside 1..{half} for v={self.v}")
            if mult < 1:
                raise InvalidArgument(f"length {length} has multiplicity {mult}")
            prev = length
            total += mult
        if total != self.v - 1:
            raise InvalidArgument(f"multiset has size {total}, expected v-1 = {self.v - 1}")

    @classmethod
    def from_counts(cls, v: int, counts: Mapping[int, int]) -> LengthMultiset:
        items = tuple(sorted((int(k), int(m)) for k, m in counts.items() if m != 0))
        return cls(v, items)

    @classmethod
    def from_triple(cls, lengths: Sequence[int], exponents: Sequence[int]) -> LengthMultiset:
        """Build {lengths[0]^exponents[0], ...}; v is inferred as the size plus one."""
        if len(lengths) != len(exponents):
            raise InvalidArgument("lengths and exponents differ in size")
        if len(set(lengths)) != len(lengths):
            raise InvalidArgument(f"repeated length in {tuple(lengths)}")
        v = sum(exponents) + 1
        return cls.from_counts(v, dict(zip(lengths, exponents)))

    def as_dict(self) -> dict[int, int]:
        return dict(self.counts)

    @property
    def underlying(self) -> tuple[int, ...]:
        return tuple(length for length, _ in self.counts)

    @property
    def product(self) -> int:
        return math.prod(self.underlying)

    def count(self, length: int) -> int:
        for ell, mult in self.counts:
            if ell == length:
                return mult
        return 0

    def union(self, extra: Mapping[int, int]) -> LengthMultiset:
        """The multiset with ``extra`` added; the order grows by the number of added elements."""
        merged = Counter(self.as_dict())
        merged.update(extra)
        return LengthMultiset.from_counts(self.v + sum(extra.values()), merged)

    def __str__(self) -> str:
        parts = [str(ell) if m == 1 else f"{ell}^{m}" for ell, m in self.counts]
        return "{" + ", ".join(parts) + "}"


@dataclass(frozen=True)
class Realization:
    """A Hamiltonian path of K_v given as its sequence of vertex labels."""

    v: int
    path: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.v < 2:
            raise InvalidArgument(f"order must be at least 2, got {self.v}")
        if len(self.path) != self.v or set(self.path) != set(range(self.v)):
            raise InvalidArgument(f"path is not a permutation of 0..{self.v - 1}: {list(self.path)}")

    @classmethod
    def of(cls, path: Iterable[int]) -> Realization:
        p = tuple(int(t) for t in path)
        return cls(len(p), p)

    def lengths(self) -> list[int]:
        v, h = self.v, self.path
        return [_length(v, h[i], h[i + 1]) for i in range(v - 1)]

    def reversed(self) -> Realization:
        return Realization(self.v, self.path[::-1])

    def complemented(self) -> Realization:
        top = self.v - 1
        return Realization(self.v, tuple(top - t for t in self.path))

    def __str__(self) -> str:
        return "[" + ", ".join(map(str, self.path)) + "]"


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    violations: tuple[tuple[int, int, int], ...]  # (d, multiples of d in L, bound v-d)


def induced_multiset(r: Realization) -> LengthMultiset:
    return LengthMultiset.from_counts(r.v, Counter(r.lengths()))


def verify_realization(r: Realization, L: LengthMultiset) -> bool:
    if r.v != L.v:
        raise InvalidArgument(f"realization has order {r.v} but multiset has order {L.v}")
    return induced_multiset(r) == L


def multiset_discrepancy(r: Realization, L: LengthMultiset) -> str | None:
    """Describe the first length whose multiplicity differs, or None if r realizes L."""
    if r.v != L.v:
        return f"order mismatch: path has {r.v} vertices, multiset needs {L.v}"
    got = Counter(r.lengths())
    want = L.as_dict()
    for ell in sorted(set(got) | set(want)):
        if got.get(ell, 0) != want.get(ell, 0):
            return f"length {ell}: path has {got.get(ell, 0)}, multiset has {want.get(ell, 0)}"
    return None


def divisors(n: int) -> list[int]:
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def check_admissibility(L: LengthMultiset) -> AdmissibilityReport:
    v = L.v
    violations = []
    for d in divisors(v):
        if d == 1:
            continue
        mult = sum(m for ell, m in L.counts if ell % d == 0)
        if mult > v - d:
            violations.append((d, mult, v - d))
    return AdmissibilityReport(not violations, tuple(violations))


def is_admissible_counts(lengths: Sequence[int], exponents: Sequence[int]) -> bool:
    """Admissibility of {lengths^exponents} without building a LengthMultiset.

    Returns False (rather than raising) when some length exceeds floor(v/2) or
    an exponent is non-positive, so callers can scan congruence classes freely.
    """
    if any(e < 1 for e in exponents):
        return False
    v = sum(exponents) + 1
    if max(lengths) > v // 2:
        return False
    # divisors above max(lengths) have no multiples in L
    for d in range(2, max(lengths) + 1):
        if v % d:
            continue
        mult = sum(e for ell, e in zip(lengths, exponents) if ell % d == 0)
        if mult > v - d:
            return False
    return True


def map_length(v: int, u: int, ell: int) -> int:
    t = (u * ell) % v
    return min(t, v - t)


def apply_unit_automorphism(r: Realization, u: int) -> Realization:
    """Multiply every label by the unit u of Z_v."""
    if math.gcd(u, r.v) != 1:
        raise InvalidArgument(f"{u} is not a unit modulo {r.v}")
    v = r.v
    return Realization(v, tuple((u * t) % v for t in r.path))


def canonical_orbit_rep(path: Sequence[int], v: int) -> tuple[int, ...]:
    """Lexicographically least of a path, its reversal, complement and reversed complement."""
    p = tuple(path)
    top = v - 1
    c = tuple(top - t for t in p)
    return min(p, p[::-1], c, c[::-1])
