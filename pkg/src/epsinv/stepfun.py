"""Piecewise-constant functions on [0, 1).

A :class:`StepFunction` is the concrete stand-in for an element of
L^1([0, 1)).  Pieces are right-open, ``f = values[i]`` on
``[breakpoints[i], breakpoints[i+1])``.  With exact breakpoints and values
every operation here is exact.
"""
from __future__ import annotations

import csv
import math
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DomainError, InvalidInput, RangeError
from .intervals import IntervalSet
from .scalars import is_exact, tol_for


def _zero_like(*xs):
    return Fraction(0) if all(is_exact(x) for x in xs) else 0.0


def _one_like(*xs):
    return Fraction(1) if all(is_exact(x) for x in xs) else 1.0


@dataclass(frozen=True)
class StepFunction:
    breakpoints: tuple
    values: tuple

    def __post_init__(self):
        bps = tuple(self.breakpoints)
        vals = tuple(self.values)
        if len(bps) < 2 or len(vals) != len(bps) - 1:
            raise InvalidInput("need K+1 breakpoints for K values")
        for v in vals:
            if isinstance(v, float) and not math.isfinite(v):
                raise InvalidInput(f"non-finite value {v!r}")
        tol = tol_for(*bps)
        vtol = tol_for(*vals)
        if abs(bps[0]) > tol or abs(bps[-1] - 1) > tol:
            raise InvalidInput("breakpoints must run from 0 to 1")
        for a, b in zip(bps, bps[1:]):
            if b < a:
                raise InvalidInput("breakpoints must be increasing")

        out_b = [type(bps[0])(0)]
        out_v: list = []
        last = len(vals) - 1
        for i, v in enumerate(vals):
            end = bps[i + 1]
            if i == last:
                end = type(end)(1)
            if end - out_b[-1] <= tol:
                if i < last or not out_v:
                    continue
                out_b[-1] = end
                continue
            if out_v and abs(v - out_v[-1]) <= vtol:
                out_b[-1] = end
            else:
                out_v.append(v)
                out_b.append(end)
        if not out_v:
            # everything collapsed (only possible for a single piece)
            out_b, out_v = [out_b[0], type(bps[-1])(1)], [vals[0]]
        object.__setattr__(self, "breakpoints", tuple(out_b))
        object.__setattr__(self, "values", tuple(out_v))

    # -- constructors ----------------------------------------------------

    @classmethod
    def constant(cls, c) -> "StepFunction":
        return cls((_zero_like(c), _one_like(c)), (c,))

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls.constant(Fraction(0))

    @classmethod
    def indicator(cls, A: IntervalSet, value=Fraction(1)) -> "StepFunction":
        return cls.from_pieces([(p.lo, p.hi, value) for p in A.parts], fill=value * 0)

    @classmethod
    def from_pieces(cls, pieces: Iterable, fill=Fraction(0)) -> "StepFunction":
        """Build from disjoint ``(lo, hi, value)`` triples; gaps get ``fill``."""
        pieces = sorted(pieces, key=lambda t: (t[0], t[1]))
        bps: list = [Fraction(0)]
        vals: list = []
        for lo, hi, v in pieces:
            if lo > bps[-1]:
                vals.append(fill)
                bps.append(lo)
            elif lo < bps[-1] - tol_for(lo, bps[-1]):
                raise InvalidInput("overlapping pieces")
            vals.append(v)
            bps.append(hi)
        if bps[-1] < 1:
            vals.append(fill)
            bps.append(Fraction(1))
        if not vals:
            vals.append(fill)
            bps.append(Fraction(1))
        return cls(tuple(bps), tuple(vals))

    # -- pointwise access ------------------------------------------------

    @property
    def n_pieces(self) -> int:
        return len(self.values)

    def _index(self, x) -> int:
        i = bisect_right(self.breakpoints, x) - 1
        return min(max(i, 0), len(self.values) - 1)

    def _at(self, x):
        return self.values[self._index(x)]

    def evaluate(self, x):
        if not 0 <= x < 1:
            raise DomainError(f"x={x} not in [0, 1)")
        return self._at(x)

    __call__ = evaluate

    def pieces(self):
        bps = self.breakpoints
        return [(bps[i], bps[i + 1], v) for i, v in enumerate(self.values)]

    def is_zero(self) -> bool:
        return len(self.values) == 1 and self.values[0] == 0

    def min_value(self):
        return min(self.values)

    def max_value(self):
        return max(self.values)

    def is_nonnegative(self) -> bool:
        return self.min_value() >= -tol_for(*self.values)

    # -- linear structure ------------------------------------------------

    def __add__(self, other):
        if isinstance(other, StepFunction):
            return linear_combination((1, 1), (self, other))
        return StepFunction(self.breakpoints, tuple(v + other for v in self.values))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, StepFunction):
            return linear_combination((1, -1), (self, other))
        return StepFunction(self.breakpoints, tuple(v - other for v in self.values))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "StepFunction":
        return StepFunction(self.breakpoints, tuple(c * v for v in self.values))

    def __mul__(self, c):
        if isinstance(c, StepFunction):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __abs__(self):
        return StepFunction(self.breakpoints, tuple(abs(v) for v in self.values))

    # -- integrals and norms ---------------------------------------------

    @cached_property
    def _prefix(self) -> tuple:
        acc = [self.values[0] * 0]
        bps = self.breakpoints
        for i, v in enumerate(self.values):
            acc.append(acc[-1] + v * (bps[i + 1] - bps[i]))
        return tuple(acc)

    def cumulative(self, x):
        """``F(x) = integral of f over [0, x)`` for ``x`` in [0, 1]."""
        if x <= 0:
            return self._prefix[0]
        if x >= 1:
            return self._prefix[-1]
        i = self._index(x)
        return self._prefix[i] + self.values[i] * (x - self.breakpoints[i])

    def integral(self, A: IntervalSet | None = None):
        if A is None:
            return self._prefix[-1]
        total = self._prefix[0]
        for p in A.parts:
            total = total + (self.cumulative(p.hi) - self.cumulative(p.lo))
        return total

    def l1_norm(self):
        return abs(self).integral()

    def sup_norm(self):
        return max(abs(v) for v in self.values)

    def ae_leq(self, bound) -> bool:
        """True iff ``|f| <= bound`` on every piece (hence almost everywhere)."""
        tol = tol_for(bound, *self.values)
        return all(abs(v) <= bound + tol for v in self.values)

    # -- transformations -------------------------------------------------

    def compose_affine(self, alpha, beta) -> "StepFunction":
        """``x -> f(alpha*x + beta)`` on [0, 1)."""
        if alpha == 0:
            raise InvalidInput("affine map with zero slope")
        tol = tol_for(alpha, beta, *self.breakpoints)
        lo, hi = min(beta, alpha + beta), max(beta, alpha + beta)
        if lo < -tol or hi > 1 + tol:
            raise RangeError(f"branch image [{lo}, {hi}] leaves [0, 1]")
        zero, one = _zero_like(alpha, beta, *self.breakpoints), _one_like(
            alpha, beta, *self.breakpoints
        )
        xs = {(b - beta) / alpha for b in self.breakpoints[1:-1]}
        inner = sorted(x for x in xs if tol < x < 1 - tol)
        bps = [zero, *inner, one]
        two = 2 if is_exact(zero) else 2.0
        vals = [self._at(alpha * ((a + b) / two) + beta) for a, b in zip(bps, bps[1:])]
        return StepFunction(tuple(bps), tuple(vals))

    def transport_affine(self, alpha, beta) -> "StepFunction":
        """``x -> f((x - beta)/alpha)`` on the image of [0, 1), zero elsewhere."""
        if alpha == 0:
            raise InvalidInput("affine map with zero slope")
        pieces = []
        for a, b, v in self.pieces():
            u, w = alpha * a + beta, alpha * b + beta
            pieces.append((min(u, w), max(u, w), v))
        tol = tol_for(alpha, beta)
        if pieces and (min(p[0] for p in pieces) < -tol or max(p[1] for p in pieces) > 1 + tol):
            raise RangeError("branch image leaves [0, 1]")
        return StepFunction.from_pieces(pieces, fill=self.values[0] * 0)

    def restrict(self, A: IntervalSet) -> "StepFunction":
        """``f * 1_A``."""
        pieces = []
        for p in A.parts:
            i = self._index(p.lo)
            lo = p.lo
            while i < len(self.values) and self.breakpoints[i] < p.hi:
                hi = min(self.breakpoints[i + 1], p.hi)
                if hi > lo:
                    pieces.append((lo, hi, self.values[i]))
                lo = hi
                i += 1
        return StepFunction.from_pieces(pieces, fill=self.values[0] * 0)

    def coarsen(self, cells: int) -> "StepFunction":
        """Conditional expectation onto the uniform grid of ``cells`` cells."""
        if cells < 1:
            raise InvalidInput("cells must be >= 1")
        exact = all(is_exact(x) for x in self.breakpoints + self.values)
        edges = [Fraction(k, cells) if exact else k / cells for k in range(cells + 1)]
        F = [self.cumulative(e) for e in edges]
        vals = [cells * (F[k + 1] - F[k]) for k in range(cells)]
        return StepFunction(tuple(edges), tuple(vals))

    def sample_points(self) -> list:
        """``(x, f(x))`` rows at breakpoints and piece midpoints, for plotting."""
        rows = []
        for a, b, v in self.pieces():
            rows.append((a, v))
            rows.append(((a + b) / 2, v))
        rows.append((self.breakpoints[-1], self.values[-1]))
        return rows

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["x", "value"])
            for x, v in self.sample_points():
                w.writerow([repr(float(x)), repr(float(v))])


def linear_combination(coeffs: Sequence, funcs: Sequence[StepFunction]) -> StepFunction:
    """``sum_i coeffs[i] * funcs[i]`` via a single sweep over all jumps.

    Terms are accumulated in the given order, so float results are
    reproducible for a fixed input order.
    """
    if len(coeffs) != len(funcs):
        raise InvalidInput("coeffs and funcs differ in length")
    if not funcs:
        return StepFunction.zero()
    base = coeffs[0] * funcs[0].values[0] * 0
    events = []
    for c, f in zip(coeffs, funcs):
        base = base + c * f.values[0]
        vals, bps = f.values, f.breakpoints
        for i in range(1, len(vals)):
            jump = vals[i] - vals[i - 1]
            events.append((bps[i], c * jump))
    events.sort(key=lambda e: e[0])
    tol = tol_for(*(e[0] for e in events))
    bps: list = [funcs[0].breakpoints[0] * 0]
    vals: list = [base]
    current = base
    k = 0
    while k < len(events):
        x = events[k][0]
        jump = events[k][1]
        k += 1
        while k < len(events) and events[k][0] - x <= tol:
            jump = jump + events[k][1]
            k += 1
        current = current + jump
        if x - bps[-1] <= tol:
            # coincides with the previous breakpoint (or with 0)
            vals[-1] = current
            continue
        bps.append(x)
        vals.append(current)
    one = funcs[0].breakpoints[-1] * 0 + 1
    if 1 - bps[-1] <= tol and len(bps) > 1:
        bps.pop()
        vals.pop()
    bps.append(one)
    return StepFunction(tuple(bps), tuple(vals))


def add(f: StepFunction, g: StepFunction) -> StepFunction:
    return f + g


def scale(f: StepFunction, c) -> StepFunction:
    return f.scale(c)


def evaluate(f: StepFunction, x):
    return f.evaluate(x)


def integral(f: StepFunction, A: IntervalSet | None = None):
    return f.integral(A)


def l1_norm(f: StepFunction):
    return f.l1_norm()


def sup_norm(f: StepFunction):
    return f.sup_norm()


def compose_affine(f: StepFunction, alpha, beta) -> StepFunction:
    return f.compose_affine(alpha, beta)


def coarsen(f: StepFunction, M: int) -> StepFunction:
    return f.coarsen(M)


def ae_leq(f: StepFunction, bound) -> bool:
    return f.ae_leq(bound)


@dataclass(frozen=True)
class CoarsenPolicy:
    """Bound breakpoint growth under repeated operator application.

    When a function exceeds ``max_breakpoints`` it is replaced by its
    cell-average on ``cells`` uniform cells.  Averaging keeps the integral
    and does not increase the L^1 norm, but it is no longer exact pointwise.
    """

    cells: int = 4096
    max_breakpoints: int = 65536
    enabled: bool = True

    def apply(self, f: StepFunction) -> StepFunction:
        if self.enabled and len(f.breakpoints) > self.max_breakpoints:
            return f.coarsen(self.cells)
        return f


NO_COARSEN = CoarsenPolicy(enabled=False)
