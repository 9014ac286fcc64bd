"""Frobenius-Perron operators of branch systems.

For an affine system the operator is the branch sum
``P f = sum_n |alpha_n| * f(alpha_n x + beta_n)``, which maps step functions
to step functions exactly.  Without the cover condition the same formula
gives the operator usually written ``P_0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .branches import BranchSystem, Transformation, s_preimage
from .errors import InvalidInput, InvalidSystem, NonFiniteSample
from .intervals import IntervalSet
from .scalars import tol_for
from .stepfun import NO_COARSEN, CoarsenPolicy, StepFunction, linear_combination

AFFINE_FP = "affine-FP"
GENERAL_FP = "general-FP"
CUSTOM = "custom"


@dataclass(frozen=True)
class OperatorHandle:
    """A linear map on step functions plus what is known about it.

    ``preserves_one`` records ``P 1 = 1``; solvers rely on it to decide
    whether solutions come as a one-parameter family.
    """

    apply: Callable[[StepFunction], StepFunction]
    kind: str = CUSTOM
    preserves_one: bool = False
    system: Optional[BranchSystem] = field(default=None, compare=False)

    def __call__(self, f: StepFunction) -> StepFunction:
        return self.apply(f)

    @property
    def descriptor(self) -> dict:
        return {"kind": self.kind, "normalization": {"preserves_one": self.preserves_one}}


def _require_c2(system: BranchSystem) -> None:
    if not system.flags.c2_ok:
        raise InvalidSystem("branch images overlap (disjointness condition fails)")


def fp_apply(system: BranchSystem, f: StepFunction) -> StepFunction:
    """Exact branch-sum operator for an affine system."""
    _require_c2(system)
    if not system.is_affine:
        raise InvalidSystem("fp_apply needs affine branches; use fp_apply_general")
    terms = [f.compose_affine(b.alpha, b.beta) for b in system.branches]
    return linear_combination([abs(b.alpha) for b in system.branches], terms)


def fp_apply_general(system: BranchSystem, f: StepFunction, M: int = 4096) -> StepFunction:
    """Branch-sum operator sampled at the midpoints of an ``M``-cell grid.

    Approximate: the error vanishes as ``M`` grows for piecewise-continuous
    integrands.  Works for affine systems too (as a cross-check).
    """
    _require_c2(system)
    if M < 1:
        raise InvalidInput("M must be >= 1")
    vals = []
    for k in range(M):
        x = (k + 0.5) / M
        acc = 0.0
        for b in system.branches:
            d = float(b.deriv(x))
            y = float(b(x))
            if not (math.isfinite(d) and math.isfinite(y)):
                raise NonFiniteSample(f"branch returned a non-finite value at x={x}")
            acc += abs(d) * float(f._at(y))
        vals.append(acc)
    edges = tuple(k / M for k in range(M + 1))
    return StepFunction(edges, tuple(vals))


def fp_operator(system: BranchSystem, M: int = 4096) -> OperatorHandle:
    """Wrap a system's branch-sum operator as an :class:`OperatorHandle`."""
    _require_c2(system)
    if system.is_affine:
        return OperatorHandle(
            apply=lambda f: fp_apply(system, f),
            kind=AFFINE_FP,
            preserves_one=system.flags.fprime_ok,
            system=system,
        )
    return OperatorHandle(
        apply=lambda f: fp_apply_general(system, f, M),
        kind=GENERAL_FP,
        preserves_one=system.flags.fprime_ok,
        system=system,
    )


def iterate(
    P: OperatorHandle,
    f: StepFunction,
    m: int,
    coarsen_policy: CoarsenPolicy = NO_COARSEN,
) -> StepFunction:
    """``P^m f`` with ``P^0 = id``."""
    if m < 0:
        raise InvalidInput("m must be >= 0")
    for _ in range(m):
        f = coarsen_policy.apply(P(f))
    return f


def adjoint_check(system: BranchSystem, f: StepFunction, A: IntervalSet):
    """``|int_A P f - int_{S^{-1}A} f|``; zero up to rounding."""
    if not system.flags.c1_ok:
        raise InvalidSystem("images do not cover [0,1]; S is singular")
    T = Transformation(system)
    lhs = fp_apply(system, f).integral(A)
    rhs = f.integral(s_preimage(T, A))
    return abs(lhs - rhs)


@dataclass
class MarkovSample:
    positive: bool
    norm_in: object
    norm_out: object
    expected_norm: object
    norm_ok: bool


@dataclass
class MarkovReport:
    samples: list
    sets: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.positive and s.norm_ok for s in self.samples) and all(
            e["ok"] for e in self.sets
        )


def markov_check(
    P: OperatorHandle,
    samples: Sequence[StepFunction],
    sets: Sequence[IntervalSet] = (),
) -> MarkovReport:
    """Positivity and norm behaviour on nonnegative samples.

    For a system whose slopes do not sum to one the expected norm of
    ``P f`` is the integral of ``f`` over the first-level image ``A_1``;
    otherwise it is ``||f||``.  Each set ``A`` in ``sets`` additionally
    checks ``int_A P f = int_{union f_n(A)} f``.
    """
    system = P.system
    first_level = None
    if system is not None and not P.preserves_one:
        first_level = system.ifs_image(IntervalSet.full())
    out, set_rows = [], []
    for f in samples:
        if not f.is_nonnegative():
            raise InvalidInput("markov_check samples must be nonnegative")
        Pf = P(f)
        norm_out = Pf.l1_norm()
        expected = f.l1_norm() if first_level is None else f.integral(first_level)
        tol = tol_for(norm_out, expected)
        out.append(
            MarkovSample(
                positive=Pf.is_nonnegative(),
                norm_in=f.l1_norm(),
                norm_out=norm_out,
                expected_norm=expected,
                norm_ok=abs(norm_out - expected) <= tol,
            )
        )
        if system is not None:
            for A in sets:
                lhs = Pf.integral(A)
                rhs = f.integral(system.ifs_image(A))
                set_rows.append({"lhs": lhs, "rhs": rhs, "ok": abs(lhs - rhs) <= tol_for(lhs, rhs)})
    return MarkovReport(samples=out, sets=set_rows)
