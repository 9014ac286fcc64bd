import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import full_affine_systems, interval_sets
from epsinv import (
    AffineBranch,
    BranchSystem,
    DomainError,
    GeneralBranch,
    IntervalSet,
    InvalidInput,
    InvalidSystem,
    Transformation,
    build_full_affine,
    s_apply,
    s_preimage,
    validate,
)

HALF = F(1, 2)


def test_build_full_affine_examples():
    d = build_full_affine([HALF, HALF])
    assert d.betas == (0, HALF)
    s = build_full_affine([-HALF, HALF])
    assert s.betas == (HALF, HALF)
    assert s.branches[0](0) == HALF and s.branches[0](1) == 0
    t = build_full_affine([F(1, 3)] * 3)
    assert t.betas == (0, F(1, 3), F(2, 3))


def test_build_full_affine_rejects():
    with pytest.raises(InvalidInput):
        build_full_affine([HALF, F(1, 3)])
    with pytest.raises(InvalidInput):
        build_full_affine([1, 0])


def test_validate_examples(dyadic, cantor):
    assert validate(dyadic).as_dict() == {"c1_ok": True, "c2_ok": True, "fprime_ok": True, "monotone_ok": True}
    fl = validate(cantor)
    assert (fl.c2_ok, fl.c1_ok, fl.fprime_ok) == (True, False, False)
    overlap = BranchSystem((AffineBranch(HALF, 0), AffineBranch(HALF, F(1, 4))))
    assert not validate(overlap).c2_ok


def test_affine_branch_invariants():
    with pytest.raises(InvalidInput):
        AffineBranch(0, 0)
    with pytest.raises(InvalidInput):
        AffineBranch(HALF, F(3, 4))


def test_s_apply_examples(dyadic, cantor):
    T = Transformation(dyadic)
    assert s_apply(T, F(3, 10)) == F(3, 5)
    assert s_apply(T, F(3, 4)) == HALF
    assert s_apply(Transformation(cantor), HALF) == 0
    with pytest.raises(DomainError):
        s_apply(T, 1)


def test_transformation_requires_disjoint_images():
    overlap = BranchSystem((AffineBranch(HALF, 0), AffineBranch(HALF, F(1, 4))))
    with pytest.raises(InvalidSystem):
        Transformation(overlap)


def test_s_preimage_examples(dyadic, cantor):
    T = Transformation(dyadic)
    assert s_preimage(T, IntervalSet.interval(0, HALF)) == IntervalSet(((0, F(1, 4)), (HALF, F(3, 4))))
    assert s_preimage(T, IntervalSet.full()) == IntervalSet.full()
    C = Transformation(cantor)
    assert s_preimage(C, IntervalSet.interval(F(1, 3), F(2, 3))) == IntervalSet(
        ((F(1, 9), F(2, 9)), (F(7, 9), F(8, 9)))
    )
    # 0 lies in A, so the gap (1/3, 2/3) is added
    assert s_preimage(C, IntervalSet.interval(0, F(1, 3))).measure() == F(2, 9) + F(1, 3)


def test_general_branch_flags_and_inverse():
    sq = GeneralBranch(lambda x: x * x / 2, lambda x: x, increasing=True)
    lin = GeneralBranch(lambda x: 0.5 + x / 2, lambda x: 0.5)
    system = BranchSystem((sq, lin), grid=256)
    fl = system.flags
    assert fl.c2_ok and fl.c1_ok and not fl.fprime_ok
    T = Transformation(system)
    assert math.isclose(s_apply(T, 0.125), 0.5, abs_tol=1e-12)
    assert math.isclose(s_apply(T, 0.75), 0.5, abs_tol=1e-12)


def test_general_branch_monotonicity_flag():
    bad = GeneralBranch(lambda x: 0.5 - abs(x - 0.5) / 2, lambda x: 0.5)
    system = BranchSystem((bad,), grid=64)
    assert not system.flags.monotone_ok


@given(full_affine_systems(), interval_sets())
def test_full_systems_preserve_measure(system, A):
    assert system.flags.c2_ok and system.flags.c1_ok and system.flags.fprime_ok
    assert s_preimage(Transformation(system), A).measure() == A.measure()


@given(full_affine_systems(), interval_sets(), interval_sets())
def test_preimage_distributes_over_union(system, A, B):
    T = Transformation(system)
    assert s_preimage(T, A | B) == s_preimage(T, A) | s_preimage(T, B)


@given(full_affine_systems(), interval_sets(), interval_sets())
def test_disjoint_sets_have_disjoint_images(system, A, B):
    B = B - A
    for b in system.branches:
        assert (b.image(A) & b.image(B)).is_empty()


@given(full_affine_systems(), st.integers(1, 47))
def test_s_apply_inverts_branches(system, k):
    x = F(k, 48)
    T = Transformation(system)
    for b in system.branches:
        y = b(x)
        lo, hi = b.image_bounds()
        if lo < y < hi:
            assert s_apply(T, y) == x
