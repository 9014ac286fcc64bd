"""Finite unions of half-open subintervals of [0, 1).

All sets live in the universe [0, 1) and are stored canonically: parts
sorted, pairwise disjoint and non-touching.  Statements downstream hold
modulo Lebesgue-null sets, so the open/closed status of individual endpoints
is normalised to ``[lo, hi)`` everywhere.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidInput, RangeError
from .scalars import tol_for


@dataclass(frozen=True, order=True)
class Interval:
    """The half-open interval ``[lo, hi)`` inside [0, 1]."""

    lo: object
    hi: object

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InvalidInput(f"empty or reversed interval [{self.lo}, {self.hi})")
        if self.lo < 0 or self.hi > 1:
            raise InvalidInput(f"interval [{self.lo}, {self.hi}) leaves [0, 1]")

    @property
    def length(self):
        return self.hi - self.lo

    def __contains__(self, x) -> bool:
        return self.lo <= x < self.hi


def _coerce_parts(parts) -> list:
    out = []
    for p in parts:
        if isinstance(p, Interval):
            out.append((p.lo, p.hi))
        else:
            lo, hi = p
            out.append((lo, hi))
    return out


def _canonical(pairs: list) -> tuple:
    tol = tol_for(*(x for pair in pairs for x in pair))
    cleaned = []
    for lo, hi in pairs:
        if lo < -tol or hi > 1 + tol:
            raise InvalidInput(f"interval [{lo}, {hi}) leaves [0, 1]")
        lo = max(lo, 0) if lo > tol else type(lo)(0)
        hi = min(hi, 1) if hi < 1 - tol else type(hi)(1)
        if hi - lo > tol:
            cleaned.append((lo, hi))
    cleaned.sort()
    merged: list = []
    for lo, hi in cleaned:
        if merged and lo <= merged[-1][1] + tol:
            if hi > merged[-1][1]:
                merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return tuple(Interval(lo, hi) for lo, hi in merged)


@dataclass(frozen=True)
class IntervalSet:
    """Canonical finite union of ``[lo, hi)`` intervals.

    ``parts`` may be given as :class:`Interval` objects or ``(lo, hi)``
    pairs in any order; overlapping or touching parts are merged.
    """

    parts: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "parts", _canonical(_coerce_parts(self.parts)))

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(((Fraction(0), Fraction(1)),))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def interval(cls, lo, hi) -> "IntervalSet":
        return cls(((lo, hi),)) if lo < hi else cls(())

    # -- queries ---------------------------------------------------------

    def measure(self):
        """Lebesgue measure; exact when the endpoints are exact."""
        return sum((p.hi - p.lo for p in self.parts), Fraction(0))

    def is_empty(self) -> bool:
        return not self.parts

    def contains_point(self, x) -> bool:
        return any(x in p for p in self.parts)

    def contains_zero(self) -> bool:
        return bool(self.parts) and self.parts[0].lo == 0

    def pairs(self) -> list:
        return [(p.lo, p.hi) for p in self.parts]

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    # -- set algebra -----------------------------------------------------

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return IntervalSet(self.parts + other.parts)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        a, b = self.parts, other.parts
        i = j = 0
        while i < len(a) and j < len(b):
            lo = max(a[i].lo, b[j].lo)
            hi = min(a[i].hi, b[j].hi)
            if lo < hi:
                out.append((lo, hi))
            if a[i].hi < b[j].hi:
                i += 1
            else:
                j += 1
        return IntervalSet(out)

    def complement(self) -> "IntervalSet":
        out = []
        cursor = Fraction(0)
        for p in self.parts:
            if p.lo > cursor:
                out.append((cursor, p.lo))
            cursor = p.hi
        if cursor < 1:
            out.append((cursor, Fraction(1)))
        return IntervalSet(out)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self.intersect(other.complement())

    def issubset(self, other: "IntervalSet") -> bool:
        leftover = self.difference(other).measure()
        return leftover <= tol_for(leftover)

    __or__ = union
    __and__ = intersect
    __sub__ = difference

    def __invert__(self) -> "IntervalSet":
        return self.complement()

    def isclose(self, other: "IntervalSet", tol: float = 1e-12) -> bool:
        if len(self.parts) != len(other.parts):
            return False
        return all(
            abs(p.lo - q.lo) <= tol and abs(p.hi - q.hi) <= tol
            for p, q in zip(self.parts, other.parts)
        )

    def affine_image(self, alpha, beta) -> "IntervalSet":
        return affine_image(self, alpha, beta)


def measure(A: IntervalSet):
    return A.measure()


def union(A: IntervalSet, B: IntervalSet) -> IntervalSet:
    return A.union(B)


def intersect(A: IntervalSet, B: IntervalSet) -> IntervalSet:
    return A.intersect(B)


def complement(A: IntervalSet) -> IntervalSet:
    return A.complement()


def union_all(sets: Iterable[IntervalSet]) -> IntervalSet:
    parts: list = []
    for s in sets:
        parts.extend(s.parts)
    return IntervalSet(parts)


def affine_image(A: IntervalSet, alpha, beta) -> IntervalSet:
    """Image of ``A`` under ``x -> alpha*x + beta``.

    Decreasing maps send ``[lo, hi)`` to ``(.., ..]``; the result is
    re-canonicalised to ``[lo, hi)`` (a single-point discrepancy).
    """
    if alpha == 0:
        raise InvalidInput("affine map with zero slope")
    tol = tol_for(alpha, beta, *(x for p in A.parts for x in (p.lo, p.hi)))
    out = []
    for p in A.parts:
        u, v = alpha * p.lo + beta, alpha * p.hi + beta
        lo, hi = (u, v) if alpha > 0 else (v, u)
        if lo < -tol or hi > 1 + tol:
            raise RangeError(f"image [{lo}, {hi}) of [{p.lo}, {p.hi}) leaves [0, 1]")
        out.append((lo, hi))
    return IntervalSet(out)


def random_interval_set(
    rng: random.Random, max_parts: int = 3, denominator: int = 64
) -> IntervalSet:
    """A random non-empty set with endpoints on the grid ``k/denominator``."""
    k = rng.randint(1, max_parts)
    points = sorted(rng.sample(range(denominator + 1), 2 * k))
    pairs: Sequence = [
        (Fraction(points[2 * i], denominator), Fraction(points[2 * i + 1], denominator))
        for i in range(k)
    ]
    return IntervalSet(pairs)
