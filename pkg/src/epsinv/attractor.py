"""Nested pre-attractor sets ``A_m`` of an affine iterated function system.

``A_0 = [0, 1)`` and ``A_m = union_n f_n(A_{m-1})``.  When the attractor
``A_* = intersection A_m`` is Lebesgue-null, ``||P_0^m f|| -> 0`` for every
nonnegative ``f`` and the Neumann series gives the only integrable solution.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .branches import BranchSystem
from .errors import CapExceeded, InvalidInput, InvalidSystem
from .intervals import IntervalSet
from .operators import fp_operator, iterate
from .scalars import part_cap, tol_for
from .stepfun import StepFunction

YES = "yes"
NO = "no"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class _ScaledUnion:
    """Exact level stored as integer endpoints over a common denominator.

    Affine images of rational sets only ever need integer multiply-adds in
    this form, which keeps deep Cantor-type levels (millions of parts) cheap.
    """

    den: int
    los: tuple
    his: tuple

    def __len__(self) -> int:
        return len(self.los)

    def measure(self) -> Fraction:
        return Fraction(sum(self.his) - sum(self.los), self.den)

    def to_intervalset(self) -> IntervalSet:
        d = self.den
        return IntervalSet([(Fraction(a, d), Fraction(b, d)) for a, b in zip(self.los, self.his)])


def _scaled_step(level: _ScaledUnion, maps: list, D: int) -> _ScaledUnion:
    # maps: (a, b) with f(x) = (a x + b) / D, ordered by image position
    shift_den = level.den
    new_den = level.den * D
    los, his = [], []
    for a, b in maps:
        off = b * shift_den
        if a > 0:
            ilo = [a * x + off for x in level.los]
            ihi = [a * x + off for x in level.his]
        else:
            ilo = [a * x + off for x in reversed(level.his)]
            ihi = [a * x + off for x in reversed(level.los)]
        if los and ilo and ilo[0] == his[-1]:
            his[-1] = ihi[0]
            los.extend(ilo[1:])
            his.extend(ihi[1:])
        else:
            los.extend(ilo)
            his.extend(ihi)
    return _ScaledUnion(new_den, tuple(los), tuple(his))


@dataclass
class AttractorTrace:
    """Levels ``A_0 .. A_depth`` with their Lebesgue measures.

    Exact levels are kept in a compact form and only expanded into
    :class:`IntervalSet` values when asked for.
    """

    measures: list = field(default_factory=list)
    raw: list = field(default_factory=list, repr=False)

    def level_set(self, m: int) -> IntervalSet:
        A = self.raw[m]
        if isinstance(A, _ScaledUnion):
            A = A.to_intervalset()
            self.raw[m] = A
        return A

    @property
    def part_counts(self) -> list:
        return [len(A) for A in self.raw]

    @property
    def levels(self) -> list:
        """``(m, A_m, l(A_m))`` triples (expands every level)."""
        return [(m, self.level_set(m), mu) for m, mu in enumerate(self.measures)]

    @property
    def ratio_estimates(self) -> list:
        ms = self.measures
        return [b / a for a, b in zip(ms, ms[1:]) if a != 0]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["m", "measure"])
            for m, mu in enumerate(self.measures):
                w.writerow([m, str(mu)])


def attractor_iterate(system: BranchSystem, depth: int, cap: int | None = None) -> AttractorTrace:
    """Levels ``A_0 .. A_depth``; raises :class:`CapExceeded` on part blow-up."""
    if depth < 0:
        raise InvalidInput("depth must be >= 0")
    if not system.is_affine:
        raise InvalidSystem("attractor levels are computed for affine systems only")
    if not system.flags.c2_ok:
        raise InvalidSystem("branch images overlap")
    cap = part_cap() if cap is None else cap
    if system.is_exact:
        return _iterate_exact(system, depth, cap)
    A = IntervalSet.full()
    trace = AttractorTrace(measures=[A.measure()], raw=[A])
    for m in range(1, depth + 1):
        A = system.ifs_image(A)
        if len(A) > cap:
            raise CapExceeded(f"level {m} has {len(A)} parts (cap {cap})")
        trace.measures.append(A.measure())
        trace.raw.append(A)
    return trace


def _iterate_exact(system: BranchSystem, depth: int, cap: int) -> AttractorTrace:
    coeffs = [Fraction(c) for b in system.branches for c in (b.alpha, b.beta)]
    D = math.lcm(*(c.denominator for c in coeffs))
    order = sorted(system.branches, key=lambda b: b.image_bounds())
    maps = [(int(b.alpha * D), int(b.beta * D)) for b in order]
    level = _ScaledUnion(1, (0,), (1,))
    trace = AttractorTrace(measures=[Fraction(1)], raw=[level])
    for m in range(1, depth + 1):
        level = _scaled_step(level, maps, D)
        if len(level) > cap:
            raise CapExceeded(f"level {m} has {len(level)} parts (cap {cap})")
        trace.measures.append(level.measure())
        trace.raw.append(level)
    return trace


def measure_zero_verdict(trace: AttractorTrace, tol: float = 1e-9, ratio_bound: float = 0.99) -> str:
    """Heuristic answer to "is the attractor Lebesgue-null?".

    ``yes`` if the deepest level is below ``tol`` or every observed ratio
    ``l(A_{m+1})/l(A_m)`` is at most ``ratio_bound``; ``no`` if the measure
    has stopped decreasing at a positive value; otherwise ``inconclusive``.
    """
    if len(trace.measures) < 3:
        raise InvalidInput("need at least three levels")
    last = trace.measures[-1]
    if last <= tol:
        return YES
    ratios = trace.ratio_estimates
    if all(r <= ratio_bound for r in ratios):
        return YES
    if abs(ratios[-1] - 1) <= tol_for(ratios[-1]):
        return NO
    return INCONCLUSIVE


def norm_decay_check(system: BranchSystem, f: StepFunction, depth: int) -> list:
    """Rows ``(m, ||P_0^m f||, int_{A_m} f, equal)`` for ``m = 0..depth``."""
    if not f.is_nonnegative():
        raise InvalidInput("f must be nonnegative")
    P = fp_operator(system)
    trace = attractor_iterate(system, depth)
    rows = []
    current = f
    for m in range(depth + 1):
        if m > 0:
            current = iterate(P, current, 1)
        lhs = current.l1_norm()
        rhs = f.integral(trace.level_set(m))
        rows.append((m, lhs, rhs, abs(lhs - rhs) <= tol_for(lhs, rhs)))
    return rows


def affine_gap_condition(alphas: Sequence, betas: Sequence) -> bool:
    """Sufficient condition for a null attractor of an affine family.

    The closed images ``[min(b, a+b), max(b, a+b)]`` must be nondegenerate,
    ordered left to right in index order, lie in [0, 1], and fail to cover
    [0, 1].  Not claimed to be necessary.
    """
    if len(alphas) != len(betas) or not alphas:
        raise InvalidInput("alphas and betas must be nonempty and of equal length")
    bounds = [(min(b, a + b), max(b, a + b)) for a, b in zip(alphas, betas)]
    chain = [0]
    for lo, hi in bounds:
        chain.extend((lo, hi))
    chain.append(1)
    for i in range(len(chain) - 1):
        strict = i % 2 == 1  # lo < hi within an image
        if strict and not chain[i] < chain[i + 1]:
            return False
        if not strict and not chain[i] <= chain[i + 1]:
            return False
    gaps = IntervalSet(bounds).complement().measure()
    return gaps > tol_for(gaps)
