"""Branch families f_1, ..., f_N and the induced interval map S.

``S`` sends each open branch image ``f_n((0,1))`` back through ``f_n^{-1}``
and everything else to 0.  Affine branches are handled exactly; general
(callable) branches are checked only on a sampling grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

from scipy.optimize import brentq

from .errors import DomainError, InvalidInput, InvalidSystem
from .intervals import IntervalSet, union_all
from .scalars import is_exact, tol_for


@dataclass(frozen=True)
class AffineBranch:
    """``f(x) = alpha*x + beta`` with ``alpha != 0``."""

    alpha: object
    beta: object

    def __post_init__(self):
        if self.alpha == 0:
            raise InvalidInput("affine branch needs a nonzero slope")
        tol = tol_for(self.alpha, self.beta)
        for y in (self.beta, self.alpha + self.beta):
            if y < -tol or y > 1 + tol:
                raise InvalidInput(
                    f"branch {self.alpha}*x+{self.beta} does not map [0,1] into [0,1]"
                )

    @property
    def increasing(self) -> bool:
        return self.alpha > 0

    def __call__(self, x):
        return self.alpha * x + self.beta

    def inverse(self, y):
        return (y - self.beta) / self.alpha

    def deriv(self, x=None):
        return self.alpha

    def image_bounds(self):
        a, b = self.beta, self.alpha + self.beta
        return (a, b) if a < b else (b, a)

    def image(self, A: IntervalSet) -> IntervalSet:
        return A.affine_image(self.alpha, self.beta)


@dataclass(frozen=True)
class GeneralBranch:
    """A strictly monotone branch given by callables.

    ``eval`` and ``deriv`` must be pure; they may be called concurrently.
    """

    eval: Callable[[float], float]
    deriv: Callable[[float], float]
    increasing: bool = True

    def __call__(self, x):
        return self.eval(x)

    def image_bounds(self):
        a, b = float(self.eval(0.0)), float(self.eval(1.0))
        return (a, b) if a < b else (b, a)

    def inverse(self, y):
        a, b = self.image_bounds()
        if y <= a:
            return 0.0 if self.increasing else 1.0
        if y >= b:
            return 1.0 if self.increasing else 0.0
        return brentq(lambda t: self.eval(t) - y, 0.0, 1.0, xtol=1e-15)

    def image(self, A: IntervalSet) -> IntervalSet:
        parts = []
        for p in A.parts:
            u, v = float(self.eval(float(p.lo))), float(self.eval(float(p.hi)))
            parts.append((min(u, v), max(u, v)))
        return IntervalSet(parts)

    def grid_check(self, grid: int) -> bool:
        """Spot-check strict monotonicity and the sign of ``deriv``."""
        xs = [k / grid for k in range(grid + 1)]
        ys = [float(self.eval(x)) for x in xs]
        if self.increasing:
            mono = all(b > a for a, b in zip(ys, ys[1:]))
        else:
            mono = all(b < a for a, b in zip(ys, ys[1:]))
        mids = [(k + 0.5) / grid for k in range(grid)]
        ds = [float(self.deriv(x)) for x in mids]
        sign = all((d > 0) if self.increasing else (d < 0) for d in ds)
        return mono and sign


@dataclass(frozen=True)
class Flags:
    c2_ok: bool
    c1_ok: bool
    fprime_ok: bool
    monotone_ok: bool = True

    def as_dict(self) -> dict:
        return {
            "c1_ok": self.c1_ok,
            "c2_ok": self.c2_ok,
            "fprime_ok": self.fprime_ok,
            "monotone_ok": self.monotone_ok,
        }


@dataclass(frozen=True)
class BranchSystem:
    """An ordered family of branches, all affine or all general."""

    branches: tuple
    grid: int = 1024

    def __post_init__(self):
        branches = tuple(self.branches)
        if not branches:
            raise InvalidInput("a branch system needs at least one branch")
        kinds = {isinstance(b, AffineBranch) for b in branches}
        if len(kinds) != 1:
            raise InvalidInput("cannot mix affine and general branches")
        object.__setattr__(self, "branches", branches)

    @property
    def N(self) -> int:
        return len(self.branches)

    @property
    def is_affine(self) -> bool:
        return isinstance(self.branches[0], AffineBranch)

    @property
    def is_exact(self) -> bool:
        return self.is_affine and all(
            is_exact(b.alpha) and is_exact(b.beta) for b in self.branches
        )

    @property
    def alphas(self) -> tuple:
        return tuple(b.alpha for b in self.branches)

    @property
    def betas(self) -> tuple:
        return tuple(b.beta for b in self.branches)

    @cached_property
    def flags(self) -> Flags:
        return validate(self)

    def slope_sum(self):
        """``sum |alpha_n|`` (affine only); ``P_0 1`` equals this constant."""
        if not self.is_affine:
            raise InvalidSystem("slope_sum needs affine branches")
        return sum((abs(a) for a in self.alphas), Fraction(0))

    def image_sets(self) -> list:
        full = IntervalSet.full()
        return [b.image(full) for b in self.branches]

    def ifs_image(self, A: IntervalSet) -> IntervalSet:
        """``union_n f_n(A)``."""
        return union_all(b.image(A) for b in self.branches)


def build_full_affine(alphas: Sequence) -> BranchSystem:
    """Affine system with ``beta_n = sum_{k<=n}|alpha_k| - (|alpha_n|+alpha_n)/2``.

    The branch images tile [0, 1) left to right in index order; negative
    slopes give decreasing branches.
    """
    alphas = list(alphas)
    if any(a == 0 for a in alphas):
        raise InvalidInput("all slopes must be nonzero")
    total = sum((abs(a) for a in alphas), Fraction(0))
    if abs(total - 1) > tol_for(*alphas):
        raise InvalidInput(f"sum of |alpha| is {total}, expected 1")
    branches = []
    running = Fraction(0)
    for a in alphas:
        running = running + abs(a)
        beta = running - (abs(a) + a) / 2
        if not is_exact(a):
            beta = float(beta)
        branches.append(AffineBranch(a, beta))
    return BranchSystem(tuple(branches))


def validate(system: BranchSystem) -> Flags:
    """Structural conditions: disjoint open images, cover, slope sum one."""
    bounds = sorted(b.image_bounds() for b in system.branches)
    tol = tol_for(*(x for pair in bounds for x in pair))
    c2 = all(bounds[i][1] <= bounds[i + 1][0] + tol for i in range(len(bounds) - 1))
    covered = IntervalSet(bounds)
    c1 = covered.complement().measure() <= tol
    if system.is_affine:
        total = system.slope_sum()
        fprime = abs(total - 1) <= tol_for(total)
        monotone = True
    else:
        g = system.grid
        mids = [(k + 0.5) / g for k in range(g)]
        fprime = all(
            abs(sum(abs(float(b.deriv(x))) for b in system.branches) - 1) <= 1e-9
            for x in mids
        )
        monotone = all(b.grid_check(g) for b in system.branches)
    return Flags(c2_ok=c2, c1_ok=c1, fprime_ok=fprime, monotone_ok=monotone)


@dataclass(frozen=True)
class Transformation:
    """The map ``S``: ``f_n^{-1}`` on ``f_n((0,1))``, 0 elsewhere."""

    system: BranchSystem
    _residual: IntervalSet = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not self.system.flags.c2_ok:
            raise InvalidSystem("branch images overlap; S is not well defined")
        residual = union_all(self.system.image_sets()).complement()
        object.__setattr__(self, "_residual", residual)

    @property
    def residual(self) -> IntervalSet:
        """``[0,1)`` minus the branch images (mapped to 0 by ``S``)."""
        return self._residual

    def __call__(self, x):
        return s_apply(self, x)

    def preimage(self, A: IntervalSet) -> IntervalSet:
        return s_preimage(self, A)


def s_apply(T: Transformation, x):
    if not 0 <= x < 1:
        raise DomainError(f"x={x} not in [0, 1)")
    for b in T.system.branches:
        lo, hi = b.image_bounds()
        if lo < x < hi:
            y = b.inverse(x)
            if isinstance(y, float) and not math.isfinite(y):
                raise DomainError("inverse branch returned a non-finite value")
            return y
    return x * 0


def s_preimage(T: Transformation, A: IntervalSet) -> IntervalSet:
    """``S^{-1}(A) = union_n f_n(A)``, plus the residual set when ``0 in A``."""
    pre = T.system.ifs_image(A)
    if A.contains_zero():
        pre = pre.union(T.residual)
    return pre
