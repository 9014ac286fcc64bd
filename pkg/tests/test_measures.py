from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import full_affine_systems, interval_sets, step_functions
from epsinv import (
    CylinderMeasure,
    DensityMeasure,
    HypothesisViolated,
    IntervalSet,
    InvalidInput,
    StepFunction,
    Transformation,
    build_full_affine,
    build_g_orthogonal,
    build_g_piecewise,
    check_density_criterion,
    check_set_criterion,
    convex_mix_measure,
    cylinder_interval,
    density_equivalent,
    fp_apply,
    fp_operator,
    nu0,
    nu_on_intervalset,
)
from epsinv.measures import random_battery, words

HALF = F(1, 2)
EPS = F(1, 4)
SPEC = CylinderMeasure((HALF, HALF), HALF, 1, 2)


def test_cylinder_interval_examples(dyadic):
    I = cylinder_interval(dyadic, (1,))
    assert (I.lo, I.hi) == (0, HALF)
    I = cylinder_interval(dyadic, (2, 1))
    assert (I.lo, I.hi) == (HALF, F(3, 4))
    I = cylinder_interval(build_full_affine([F(1, 3), F(2, 3)]), (2,))
    assert (I.lo, I.hi) == (F(1, 3), 1)


def test_nu0_examples():
    assert SPEC.xi(1) == EPS and SPEC.xi(2) == -EPS
    assert nu0(SPEC, (1,)) == F(3, 4)
    assert nu0(SPEC, (2,)) == F(1, 4)
    assert nu0(SPEC, (1, 2)) == F(3, 8)


def test_cylinder_spec_validation():
    with pytest.raises(InvalidInput):
        CylinderMeasure((HALF, HALF), HALF, 1, 1)
    with pytest.raises(InvalidInput):
        CylinderMeasure((HALF, F(1, 3)), HALF, 1, 2)
    with pytest.raises(InvalidInput):
        CylinderMeasure((HALF, HALF), F(3, 2), 1, 2)


def test_nu_on_intervalset_examples():
    I = cylinder_interval(SPEC.system, (2, 1, 1))
    assert nu_on_intervalset(SPEC, IntervalSet((I,)), 3) == (nu0(SPEC, (2, 1, 1)), 0)
    assert nu_on_intervalset(SPEC, IntervalSet.full(), 4) == (1, 0)
    A = IntervalSet.interval(0, F(1, 3))
    value, bound = nu_on_intervalset(SPEC, A, 4)
    exact = density_equivalent(SPEC)(A)
    assert bound <= 2 * F(1, 16)
    assert abs(value - exact) <= bound


def test_density_equivalent_examples():
    d = density_equivalent(SPEC).density
    assert d == StepFunction((0, HALF, 1), (F(3, 2), HALF))
    flat = CylinderMeasure((F(1, 3), F(2, 3)), 0, 1, 2)
    assert density_equivalent(flat).density == StepFunction.constant(F(1))


def test_density_criterion_examples(dyadic):
    P = fp_operator(dyadic)
    g, nu = build_g_piecewise(dyadic, [EPS, -EPS], EPS)
    assert check_density_criterion(nu.density, P, EPS)
    assert not check_density_criterion(nu.density, P, EPS / 2)
    assert check_density_criterion(StepFunction.constant(F(1)), P, 0)


def test_set_criterion_examples(dyadic):
    T = Transformation(dyadic)
    _, nu = build_g_piecewise(dyadic, [EPS, -EPS], EPS)
    A = IntervalSet.interval(0, HALF)
    rep = check_set_criterion(nu, T, EPS, [A])
    # nu(S^-1 A) = (1 + eps)/4 + (1 - eps)/4, nu(A) = (1 + eps)/2
    assert rep.rows[0]["lhs"] == EPS / 2
    assert rep.ok and rep.worst_ratio == 1.0
    three = build_full_affine([F(1, 4), F(-1, 4), HALF])
    rep = check_set_criterion(DensityMeasure.lebesgue(), Transformation(three), 0, random_battery(3, 20))
    assert rep.ok and rep.worst_ratio == 0.0


def test_build_g_orthogonal_examples(dyadic):
    g0 = StepFunction.constant(EPS)
    assert build_g_orthogonal(dyadic, g0, EPS) == StepFunction((0, HALF, 1), (EPS, -EPS))
    assert build_g_orthogonal(dyadic, StepFunction.zero(), EPS).is_zero()
    three = build_full_affine([F(1, 4), F(1, 4), HALF])
    g0 = StepFunction((0, F(1, 5), F(3, 7), 1), (F(1, 8), 0, F(1, 5)))
    g = build_g_orthogonal(three, g0, EPS)
    assert fp_apply(three, g).is_zero()


def test_build_g_orthogonal_hypotheses(dyadic):
    with pytest.raises(HypothesisViolated):
        build_g_orthogonal(dyadic, StepFunction.constant(HALF), EPS)
    small_last = build_full_affine([F(2, 3), F(1, 3)])
    with pytest.raises(HypothesisViolated):
        build_g_orthogonal(small_last, StepFunction.constant(EPS), EPS)
    flipped = build_full_affine([HALF, -HALF])
    with pytest.raises(HypothesisViolated):
        build_g_orthogonal(flipped, StepFunction.constant(EPS), EPS)


def test_build_g_piecewise_examples(dyadic):
    g, nu = build_g_piecewise(dyadic, [EPS, -EPS])
    assert nu.density == StepFunction((0, HALF, 1), (1 + EPS, 1 - EPS))
    g, nu = build_g_piecewise(dyadic, [0, 0])
    assert g.is_zero() and nu.density == StepFunction.constant(F(1))
    d = F(1, 10)
    g, _ = build_g_piecewise(build_full_affine([F(1, 4), F(3, 4)]), [3 * d, -d])
    assert fp_apply(build_full_affine([F(1, 4), F(3, 4)]), g).is_zero()
    with pytest.raises(InvalidInput):
        build_g_piecewise(dyadic, [EPS, 0])


def test_convex_mix_examples(dyadic):
    P = fp_operator(dyadic)
    T = Transformation(dyadic)
    leb = DensityMeasure.lebesgue()
    nu = convex_mix_measure(leb, P, [IntervalSet.full()], [EPS])
    assert nu.density == StepFunction.constant(EPS)
    assert convex_mix_measure(leb, P, [], []).total() == 0
    nu = convex_mix_measure(
        leb, P, [IntervalSet.interval(0, HALF), IntervalSet.interval(EPS, 1)], [EPS, EPS]
    )
    assert check_set_criterion(nu, T, HALF, random_battery(11, 100)).ok
    with pytest.raises(InvalidInput):
        convex_mix_measure(DensityMeasure(StepFunction((0, HALF, 1), (F(2), 0))), P, [], [])


# -- properties -----------------------------------------------------------

specs = st.sampled_from(
    [
        CylinderMeasure((HALF, HALF), HALF, 1, 2),
        CylinderMeasure((F(1, 3), F(2, 3)), 1, 2, 1),
        CylinderMeasure((F(1, 5), F(1, 2), F(3, 10)), F(3, 4), 3, 1),
    ]
)


@given(specs, st.integers(1, 6), st.data())
def test_cylinder_additivity_and_domination(m, k, data):
    w = data.draw(st.lists(st.integers(1, m.N), min_size=k, max_size=k))
    assert sum(nu0(m, tuple(w) + (n,)) for n in range(1, m.N + 1)) == nu0(m, w)
    assert nu0(m, w) <= 2 * cylinder_interval(m.system, w).length
    I = cylinder_interval(m.system, w)
    assert nu0(m, w) == density_equivalent(m).density.integral(IntervalSet((I,)))


@given(specs, interval_sets())
def test_density_and_set_criteria_agree(m, A):
    nu = density_equivalent(m)
    P = fp_operator(m.system)
    T = Transformation(m.system)
    battery = random_battery(5, 30) + [A]
    ok_density = check_density_criterion(nu.density, P, m.epsilon)
    rep = check_set_criterion(nu, T, m.epsilon, battery)
    if ok_density:
        assert rep.ok
    if rep.worst_ratio > 1 + 1e-9:
        assert not ok_density


@given(full_affine_systems(min_n=2, max_n=3, signed=False), step_functions(nonnegative=True))
def test_build_g_orthogonal_always_annihilated(system, g0):
    last = system.branches[-1]
    if last.alpha < HALF:
        return
    eps = max(g0.max_value(), F(0))
    g = build_g_orthogonal(system, g0, eps)
    assert fp_apply(system, g).is_zero()
    assert g.integral() == 0


def test_words_are_lexicographic():
    assert list(words(2, 2)) == [(1, 1), (1, 2), (2, 1), (2, 2)]
