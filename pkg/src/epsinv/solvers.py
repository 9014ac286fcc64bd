"""Series solvers for ``phi = P phi + g``.

Three constructions are offered:

* Neumann series ``sum_m P^m g`` (family mode: solutions are that sum plus
  any constant, which needs ``P 1 = 1``; unique mode: the sum is the only
  solution, which needs ``P^m f -> 0``),
* Cesaro-weighted sums ``sum_{k<m} (m-k)/m P^k g`` for ergodic Markov ``P``,
* the explicit word expansion for affine systems.

Stopping is heuristic (increment stall), so every result carries the
residual ``||phi - P phi - g||`` as an a posteriori certificate.
"""
from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapExceeded, HypothesisViolated, InvalidInput
from .operators import OperatorHandle
from .scalars import tol_for
from .stepfun import NO_COARSEN, CoarsenPolicy, StepFunction, linear_combination

log = logging.getLogger(__name__)

NEUMANN = "neumann"
CESARO = "cesaro"
FAMILY = "family"
UNIQUE = "unique"

CONVERGED = "converged"
NO_SOLUTION = "no_solution_detected"
MAX_ITERS = "max_iters"


@dataclass(frozen=True)
class SolveOptions:
    method: str = NEUMANN
    tol: float = 1e-10
    stall_window: int = 5
    max_iters: int = 10000
    coarsen_policy: CoarsenPolicy = NO_COARSEN
    mode: str = FAMILY
    divergence_cap: float = 1e9
    strict: bool = False

    def __post_init__(self):
        if not self.tol > 0:
            raise InvalidInput("tol must be positive")
        if self.max_iters < 1:
            raise InvalidInput("max_iters must be >= 1")
        if self.stall_window < 1:
            raise InvalidInput("stall_window must be >= 1")
        if self.method not in (NEUMANN, CESARO):
            raise InvalidInput(f"unknown method {self.method!r}")
        if self.mode not in (FAMILY, UNIQUE):
            raise InvalidInput(f"unknown mode {self.mode!r}")


@dataclass
class SolveResult:
    phi: StepFunction
    status: str
    residual: object
    iterations: int
    family: bool
    tail_bound: Optional[float] = None
    metadata: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return self.status == CONVERGED


def check_zero_integral(g: StepFunction, tol: float = 1e-10) -> bool:
    """Necessary condition for solvability under a Markov operator."""
    total = g.integral()
    return abs(total) <= (tol if tol_for(total) else 0)


def residual(P: OperatorHandle, phi: StepFunction, g: StepFunction):
    """``||phi - P phi - g||_1``."""
    return linear_combination((1, -1, -1), (phi, P(phi), g)).l1_norm()


def _check_preconditions(P: OperatorHandle, g: StepFunction, opts: SolveOptions) -> None:
    if opts.mode == FAMILY and not P.preserves_one:
        raise HypothesisViolated("family mode needs an operator with P1 = 1")
    if P.preserves_one and not check_zero_integral(g, opts.tol):
        msg = f"g has integral {g.integral()}; no L1 solution exists for a Markov operator"
        if opts.strict:
            raise InvalidInput(msg)
        warnings.warn(msg, stacklevel=3)


def _geometric_rate(P: OperatorHandle):
    """``theta`` with ``||P^m f|| <= theta^m ||f||_inf`` for affine systems."""
    system = P.system
    if system is None or not system.is_affine:
        return None
    theta = system.slope_sum()
    return theta if theta < 1 else None


def solve_neumann(P: OperatorHandle, g: StepFunction, opts: SolveOptions = SolveOptions()) -> SolveResult:
    """Accumulate ``sum_k P^k g`` until the terms stall below ``tol``.

    A term that is exactly zero ends the series early, since all later
    terms vanish by linearity.
    """
    _check_preconditions(P, g, opts)
    partial = g
    term = g
    stall = 0
    status = MAX_ITERS
    iterations = 0
    while iterations < opts.max_iters:
        term = opts.coarsen_policy.apply(P(term))
        iterations += 1
        if term.is_zero():
            status = CONVERGED
            break
        partial = partial + term
        size = term.l1_norm()
        if partial.l1_norm() > opts.divergence_cap:
            status = NO_SOLUTION
            break
        stall = stall + 1 if size <= opts.tol else 0
        if stall >= opts.stall_window:
            status = CONVERGED
            break
    res = residual(P, partial, g)
    tail = None
    theta = _geometric_rate(P)
    if theta is not None:
        # tail sum_{k > n} P^k g with n = iterations
        tail = float(g.sup_norm() * theta ** (iterations + 1) / (1 - theta))
    log.debug("neumann: %s after %d iterations, residual %s", status, iterations, res)
    return SolveResult(
        phi=partial,
        status=status,
        residual=res,
        iterations=iterations,
        family=opts.mode == FAMILY,
        tail_bound=tail,
        metadata={"method": NEUMANN, "mode": opts.mode, "operator": P.descriptor},
    )


def solve_cesaro(P: OperatorHandle, g: StepFunction, opts: SolveOptions = SolveOptions(method=CESARO)) -> SolveResult:
    """Limit of ``W_m = sum_{k<m} (m-k)/m P^k g``.

    Uses ``W_m = (1/m) sum_{j<=m} T_j`` with ``T_j`` the Neumann partial
    sums, so each step costs one operator application.  Ergodicity of ``P``
    is taken on trust and recorded in ``metadata``.
    """
    if not P.preserves_one:
        raise HypothesisViolated("the Cesaro construction needs P1 = 1")
    _check_preconditions(P, g, opts)
    term = g
    T = g * 0
    sumT = g * 0
    W = g * 0
    stall = 0
    neumann_stall = 0
    status = MAX_ITERS
    m = 0
    while m < opts.max_iters:
        m += 1
        T = T + term
        sumT = opts.coarsen_policy.apply(sumT + T)
        W_next = sumT.scale(Fraction(1, m) if tol_for(*sumT.values) == 0 else 1.0 / m)
        term = opts.coarsen_policy.apply(P(term))
        if term.is_zero():
            # T_j is constant from here on, so the averages converge to it
            W = T
            status = CONVERGED
            break
        # a convergent T_j has the same Cesaro limit; W_m itself only gets there at O(1/m)
        neumann_stall = neumann_stall + 1 if term.l1_norm() <= opts.tol else 0
        if neumann_stall >= opts.stall_window:
            W = T + term
            status = CONVERGED
            break
        if sumT.l1_norm() / m > opts.divergence_cap:
            W = W_next
            status = NO_SOLUTION
            break
        step = (W_next - W).l1_norm()
        W = W_next
        stall = stall + 1 if step <= opts.tol else 0
        if stall >= opts.stall_window:
            status = CONVERGED
            break
    res = residual(P, W, g)
    return SolveResult(
        phi=W,
        status=status,
        residual=res,
        iterations=m,
        family=opts.mode == FAMILY,
        metadata={
            "method": CESARO,
            "mode": opts.mode,
            "operator": P.descriptor,
            "ergodic": "caller-asserted",
        },
    )


def solve(P: OperatorHandle, g: StepFunction, opts: SolveOptions = SolveOptions()) -> SolveResult:
    if opts.method == CESARO:
        return solve_cesaro(P, g, opts)
    return solve_neumann(P, g, opts)


def closed_form_affine(
    alphas: Sequence,
    betas: Sequence,
    g: StepFunction,
    depth: int,
    cap: int = 10**7,
) -> StepFunction:
    """Word expansion of ``sum_{m<=depth} P^m g`` for an affine system.

    The word ``(n_1, ..., n_m)`` contributes
    ``prod|alpha_{n_k}| * g(f_{n_m} o ... o f_{n_1}(x))``; words are taken in
    lexicographic order within each length.
    """
    if depth < 0:
        raise InvalidInput("depth must be >= 0")
    N = len(alphas)
    if len(betas) != N:
        raise InvalidInput("alphas and betas differ in length")
    count = sum(N**m for m in range(1, depth + 1))
    if count > cap:
        raise CapExceeded(f"{count} words exceed the cap {cap}")
    coeffs = [1]
    terms = [g]
    one = alphas[0] * 0 + 1
    for m in range(1, depth + 1):
        for word in itertools.product(range(N), repeat=m):
            slope, shift, weight = one, one * 0, one
            for n in word:
                slope, shift = alphas[n] * slope, alphas[n] * shift + betas[n]
                weight = weight * abs(alphas[n])
            coeffs.append(weight)
            terms.append(g.compose_affine(slope, shift))
    return linear_combination(coeffs, terms)
