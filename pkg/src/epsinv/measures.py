"""Construction and verification of epsilon-invariant measures.

A finite measure ``nu`` on [0, 1) is epsilon-invariant under ``S`` when
``|nu(S^{-1}A) - nu(A)| <= eps * l(A)`` for all Borel ``A``.  For measures
with a density ``f`` this is equivalent to ``|P f - f| <= eps`` a.e.; both
forms are checked here.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .branches import BranchSystem, Transformation, s_preimage
from .errors import HypothesisViolated, InvalidInput, InvalidSystem
from .intervals import Interval, IntervalSet, random_interval_set
from .operators import OperatorHandle
from .scalars import tol_for
from .stepfun import StepFunction, linear_combination


@dataclass(frozen=True)
class DensityMeasure:
    """``nu(A) = int_A density``."""

    density: StepFunction

    def __post_init__(self):
        if not self.density.is_nonnegative():
            raise InvalidInput("a density must be nonnegative")

    def __call__(self, A: IntervalSet):
        return self.density.integral(A)

    def total(self):
        return self.density.integral()

    @classmethod
    def lebesgue(cls) -> "DensityMeasure":
        return cls(StepFunction.constant(Fraction(1)))


def _check_word(word: Sequence[int], N: int) -> tuple:
    word = tuple(word)
    if not word:
        raise InvalidInput("words must be nonempty")
    for n in word:
        if not 1 <= n <= N:
            raise InvalidInput(f"symbol {n} outside 1..{N}")
    return word


@dataclass(frozen=True)
class CylinderMeasure:
    """Measure built on cylinder intervals of a positive full affine system.

    Symbols and ``p``, ``q`` are 1-based.  ``xi`` shifts mass ``eps*min(a_p,
    a_q)`` from the ``q``-th first-level interval to the ``p``-th one.
    """

    alphas: tuple
    epsilon: object
    p: int
    q: int

    def __post_init__(self):
        alphas = tuple(self.alphas)
        object.__setattr__(self, "alphas", alphas)
        if any(a <= 0 for a in alphas):
            raise InvalidInput("cylinder measures need positive slopes")
        total = sum(alphas, Fraction(0))
        if abs(total - 1) > tol_for(*alphas):
            raise InvalidInput(f"slopes sum to {total}, expected 1")
        if not 0 <= self.epsilon <= 1:
            raise InvalidInput("epsilon must lie in [0, 1]")
        N = len(alphas)
        if self.p == self.q or not (1 <= self.p <= N and 1 <= self.q <= N):
            raise InvalidInput("p and q must be distinct symbols in 1..N")

    @property
    def N(self) -> int:
        return len(self.alphas)

    @property
    def system(self) -> BranchSystem:
        from .branches import build_full_affine

        return build_full_affine(self.alphas)

    def xi(self, n: int):
        shift = self.epsilon * min(self.alphas[self.p - 1], self.alphas[self.q - 1])
        if n == self.p:
            return shift
        if n == self.q:
            return -shift
        return shift * 0


def cylinder_interval(system: BranchSystem, word: Sequence[int]) -> Interval:
    """``[f_{n_k} o ... o f_{n_1}(0), f_{n_k} o ... o f_{n_1}(1))``, outermost first."""
    if not system.is_affine or any(a <= 0 for a in system.alphas):
        raise InvalidSystem("cylinders need increasing affine branches")
    if not (system.flags.c1_ok and system.flags.fprime_ok):
        raise InvalidSystem("cylinders need a full system")
    word = _check_word(word, system.N)
    lo, hi = system.alphas[0] * 0, system.alphas[0] * 0 + 1
    for n in reversed(word):
        b = system.branches[n - 1]
        lo, hi = b(lo), b(hi)
    return Interval(lo, hi)


def words(N: int, k: int):
    """All words of length ``k`` in lexicographic order."""
    return itertools.product(range(1, N + 1), repeat=k)


def nu0(m: CylinderMeasure, word: Sequence[int]):
    """``(alpha_{n_k} + xi(n_k)) * prod_{i<k} alpha_{n_i}``."""
    word = _check_word(word, m.N)
    head = word[0]
    value = m.alphas[head - 1] + m.xi(head)
    for n in word[1:]:
        value = value * m.alphas[n - 1]
    return value


def nu_on_intervalset(m: CylinderMeasure, A: IntervalSet, depth: int):
    """``(value, error_bound)`` for ``nu(A)`` from cylinders of depth ``<= depth``.

    Cylinders inside ``A`` contribute their exact mass; the part of ``A``
    not covered by such cylinders is bounded using ``nu0(I) <= 2 l(I)``.
    """
    if depth < 1:
        raise InvalidInput("depth must be >= 1")
    system = m.system
    value = Fraction(0) * m.alphas[0]
    covered = Fraction(0) * m.alphas[0]

    def visit(word: tuple):
        nonlocal value, covered
        I = cylinder_interval(system, word)
        cyl = IntervalSet((I,))
        overlap = cyl.intersect(A)
        if overlap.is_empty():
            return
        if cyl.issubset(A):
            value += nu0(m, word)
            covered += I.length
            return
        if len(word) < depth:
            for n in range(1, m.N + 1):
                visit(word + (n,))

    for n in range(1, m.N + 1):
        visit((n,))
    return value, 2 * (A.measure() - covered)


def density_equivalent(m: CylinderMeasure) -> DensityMeasure:
    """Density ``1 + xi(n)/alpha_n`` on the n-th first-level interval."""
    system = m.system
    pieces = []
    for n, b in enumerate(system.branches, start=1):
        lo, hi = b.image_bounds()
        pieces.append((lo, hi, 1 + m.xi(n) / b.alpha))
    return DensityMeasure(StepFunction.from_pieces(pieces))


def check_density_criterion(f: StepFunction, P: OperatorHandle, epsilon) -> bool:
    """``|P f - f| <= epsilon`` almost everywhere."""
    return (P(f) - f).ae_leq(epsilon)


@dataclass
class SetCheckReport:
    epsilon: object
    rows: list = field(default_factory=list)
    worst_ratio: float = 0.0
    witness: Optional[IntervalSet] = None

    @property
    def ok(self) -> bool:
        return all(r["ok"] for r in self.rows)


def check_set_criterion(
    nu: DensityMeasure,
    T: Transformation,
    epsilon,
    sets: Sequence[IntervalSet],
) -> SetCheckReport:
    """Evaluate ``|nu(S^{-1}A) - nu(A)|`` against ``epsilon * l(A)`` per set."""
    if T.system.is_affine and not T.system.flags.c1_ok:
        raise InvalidSystem("S is singular without the cover condition")
    report = SetCheckReport(epsilon=epsilon)
    for A in sets:
        lhs = abs(nu(s_preimage(T, A)) - nu(A))
        rhs = epsilon * A.measure()
        tol = tol_for(lhs, rhs)
        if rhs > 0:
            ratio = float(lhs / rhs)
        else:
            ratio = 0.0 if lhs <= tol else math.inf
        report.rows.append({"set": A, "lhs": lhs, "rhs": rhs, "ratio": ratio, "ok": lhs <= rhs + tol})
        if report.witness is None or ratio > report.worst_ratio:
            report.worst_ratio = ratio
            report.witness = A
    return report


def random_battery(seed: int, count: int = 100, max_parts: int = 3, denominator: int = 64) -> list:
    rng = random.Random(seed)
    return [random_interval_set(rng, max_parts, denominator) for _ in range(count)]


def _full_affine(system: BranchSystem) -> None:
    if not system.is_affine:
        raise InvalidSystem("needs an affine system")
    flags = system.flags
    if not (flags.c2_ok and flags.c1_ok and flags.fprime_ok):
        raise HypothesisViolated("needs disjoint images covering [0,1] with slopes summing to 1")


def build_g_orthogonal(system: BranchSystem, g0: StepFunction, epsilon) -> StepFunction:
    """Extend ``g0`` (given on ``[0, f_N(0))``) to ``g`` with ``P g = 0``.

    On the last branch image ``g = -(1/|a_N|) sum_{n<N} |a_n| g0(f_n(f_N^{-1}x))``.
    Requires an increasing last branch whose image ``[f_N(0), 1]`` lies above
    all other images, ``|a_N| >= 1/2`` and ``0 <= g0 <= epsilon`` there.
    """
    _full_affine(system)
    last = system.branches[-1]
    cut = last.beta
    top = last(1)
    if not last.increasing or abs(top - 1) > tol_for(top):
        raise HypothesisViolated("the last branch must be increasing with f_N(1) = 1")
    tol = tol_for(cut, *system.alphas)
    for b in system.branches[:-1]:
        if b.image_bounds()[1] > cut + tol:
            raise HypothesisViolated("f_N(0) must dominate the other branch images")
    if abs(last.alpha) < Fraction(1, 2) - tol:
        raise HypothesisViolated("|f_N'| must be at least 1/2")
    head = IntervalSet.interval(cut * 0, cut)
    base = g0.restrict(head)
    if not base.min_value() >= -tol or not base.ae_leq(epsilon):
        raise HypothesisViolated("g0 must take values in [0, epsilon]")
    inner = linear_combination(
        [abs(b.alpha) for b in system.branches[:-1]],
        [base.compose_affine(b.alpha, b.beta) for b in system.branches[:-1]],
    )
    tail = inner.transport_affine(last.alpha, last.beta).scale(-1 / abs(last.alpha))
    return base + tail


def build_g_piecewise(system: BranchSystem, gammas: Sequence, epsilon=None):
    """``g = gamma_n`` on the n-th branch image, returned with ``1 + g``."""
    _full_affine(system)
    gammas = list(gammas)
    if len(gammas) != system.N:
        raise InvalidInput("need one gamma per branch")
    if epsilon is not None:
        tol = tol_for(epsilon, *gammas)
        if any(abs(c) > epsilon + tol for c in gammas):
            raise InvalidInput("every |gamma_n| must be <= epsilon")
    weighted = sum((abs(a) * c for a, c in zip(system.alphas, gammas)), Fraction(0))
    if abs(weighted) > tol_for(weighted, *gammas):
        raise InvalidInput(f"sum |alpha_n| gamma_n = {weighted}, expected 0")
    pieces = [(*b.image_bounds(), c) for b, c in zip(system.branches, gammas)]
    g = StepFunction.from_pieces(pieces)
    return g, DensityMeasure(g + 1)


def convex_mix_measure(
    base: DensityMeasure,
    P: OperatorHandle,
    sets: Sequence[IntervalSet],
    eps_parts: Sequence,
    tol: float = 1e-12,
) -> DensityMeasure:
    """``nu(A) = sum_i eps_i * base(A & A_i)`` for an invariant ``base``.

    With Lebesgue ``base`` the result is ``sum(eps_parts)``-invariant.
    """
    if len(sets) != len(eps_parts):
        raise InvalidInput("one eps part per set")
    if any(e <= 0 for e in eps_parts):
        raise InvalidInput("eps parts must be positive")
    h = base.density
    drift = (P(h) - h).l1_norm()
    if drift > (tol if tol_for(drift) else 0):
        raise InvalidInput(f"base density is not invariant (||Ph - h|| = {drift})")
    if not sets:
        return DensityMeasure(h * 0)
    parts = [h.restrict(A) for A in sets]
    return DensityMeasure(linear_combination(list(eps_parts), parts))
