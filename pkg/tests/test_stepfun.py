import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import interval_sets, step_functions
from epsinv import DomainError, IntervalSet, StepFunction, linear_combination
from epsinv.stepfun import CoarsenPolicy, ae_leq, coarsen, compose_affine, integral

HALF = F(1, 2)
EPS = F(1, 4)


def sf(bps, vals):
    return StepFunction(tuple(bps), tuple(vals))


SIGN = sf([0, HALF, 1], [1, -1])
EPS_G = sf([0, HALF, 1], [EPS, -EPS])


def test_evaluate_right_open():
    assert StepFunction.constant(1).evaluate(0.7) == 1
    assert SIGN.evaluate(HALF) == -1
    assert SIGN.evaluate(0.499) == 1
    with pytest.raises(DomainError):
        SIGN.evaluate(1)
    with pytest.raises(DomainError):
        SIGN.evaluate(-0.1)


def test_add_scale_examples():
    one = StepFunction.constant(F(1))
    assert (one + (-one)).is_zero()
    assert SIGN.scale(0).is_zero()
    left = sf([0, HALF, 1], [1, 0])
    right = sf([0, HALF, 1], [0, 1])
    assert left + right == one


def test_integral_examples():
    assert StepFunction.constant(F(1)).integral(IntervalSet.full()) == 1
    assert EPS_G.integral() == 0
    two = sf([0, F(1, 4), 1], [2, 0])
    assert integral(two, IntervalSet.interval(0, HALF)) == HALF


def test_norms():
    assert EPS_G.l1_norm() == EPS and EPS_G.sup_norm() == EPS
    assert StepFunction.zero().l1_norm() == 0 and StepFunction.zero().sup_norm() == 0
    one = StepFunction.constant(F(1))
    assert one.l1_norm() == 1 and one.sup_norm() == 1


def test_compose_affine_examples():
    assert compose_affine(SIGN, HALF, 0) == StepFunction.constant(F(1))
    assert compose_affine(SIGN, HALF, HALF) == StepFunction.constant(F(-1))
    for alpha, beta in [(F(1, 3), F(1, 3)), (F(-1, 2), 1), (1, 0)]:
        assert compose_affine(StepFunction.constant(F(1)), alpha, beta) == StepFunction.constant(F(1))


def test_compose_affine_decreasing():
    # x -> SIGN(1 - x): -1 on [0, 1/2), 1 on [1/2, 1) up to the point 1/2
    assert compose_affine(SIGN, -1, 1) == sf([0, HALF, 1], [-1, 1])


def test_coarsen_examples():
    assert coarsen(StepFunction.constant(F(3)), 7) == StepFunction.constant(F(3))
    assert coarsen(SIGN, 1).is_zero()
    quarter = sf([0, F(1, 4), 1], [1, 0])
    assert coarsen(quarter, 2) == sf([0, HALF, 1], [HALF, 0])


def test_ae_leq_examples():
    assert ae_leq(EPS_G, EPS)
    assert not ae_leq(EPS_G, EPS / 2)
    assert ae_leq(StepFunction.zero(), 0)


def test_canonical_merge():
    f = sf([0, F(1, 4), HALF, 1], [1, 1, 2])
    assert f.breakpoints == (0, HALF, 1)
    assert f.values == (1, 2)


def test_coarsen_policy_threshold():
    fine = sf([F(k, 10) for k in range(11)], list(range(10)))
    assert CoarsenPolicy(cells=2, max_breakpoints=100).apply(fine) == fine
    coarse = CoarsenPolicy(cells=2, max_breakpoints=5).apply(fine)
    assert coarse.n_pieces == 2 and coarse.integral() == fine.integral()


def test_restrict_and_transport():
    f = sf([0, F(1, 3), 1], [2, 5])
    r = f.restrict(IntervalSet.interval(F(1, 4), HALF))
    assert r == sf([0, F(1, 4), F(1, 3), HALF, 1], [0, 2, 5, 0])
    t = f.transport_affine(HALF, HALF)
    # t(x) = f(2x - 1) on [1/2, 1)
    assert t == sf([0, HALF, F(2, 3), 1], [0, 2, 5])


# -- properties -----------------------------------------------------------

def _pointwise_oracle(fs, coeffs, x):
    return sum(c * f.evaluate(x) for c, f in zip(coeffs, fs))


@given(step_functions(), step_functions(), step_functions(), interval_sets())
def test_linear_combination_matches_pointwise(f, g, h, A):
    combo = linear_combination([2, -1, F(1, 3)], [f, g, h])
    rng = random.Random(0)
    for _ in range(20):
        x = F(rng.randrange(997), 997)
        assert combo.evaluate(x) == _pointwise_oracle([f, g, h], [2, -1, F(1, 3)], x)


@given(step_functions(), step_functions(), interval_sets())
def test_integral_additive(f, g, A):
    assert (f + g).integral(A) == f.integral(A) + g.integral(A)


@given(step_functions(), st.integers(1, 20))
def test_coarsen_contracts_and_preserves_integral(f, M):
    c = f.coarsen(M)
    assert c.l1_norm() <= f.l1_norm()
    assert c.integral() == f.integral()


@given(
    step_functions(),
    st.sampled_from([(HALF, 0), (HALF, HALF), (F(1, 3), F(1, 3)), (F(-1, 4), 1), (F(-2, 3), F(2, 3))]),
)
def test_compose_affine_norm_identity(f, ab):
    alpha, beta = ab
    lhs = abs(alpha) * f.compose_affine(alpha, beta).l1_norm()
    image = IntervalSet.full().affine_image(alpha, beta)
    assert lhs == abs(f).integral(image)


@given(step_functions())
def test_canonicalization_idempotent_and_evaluate(f):
    assert StepFunction(f.breakpoints, f.values) == f
    for a, b, v in f.pieces():
        assert f.evaluate((a + b) / 2) == v
        assert f.evaluate(a) == v


def test_float_mode_roundoff_merges():
    f = StepFunction((0.0, 0.1 + 0.2, 1.0), (1.0, 2.0))
    g = StepFunction((0.0, 0.3, 1.0), (1.0, 2.0))
    assert (f - g).l1_norm() <= 1e-12
