"""Shared strategies and the acceptance summary hook."""
from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from epsinv import BranchSystem, IntervalSet, StepFunction, build_full_affine

# exact arithmetic on deep iterates is slow but deterministic
settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    key = (mark.args[0], mark.args[1])
    if rep.when == "call" or (rep.when == "setup" and rep.failed):
        ok = _CRITERIA.get(key, True) and rep.passed
        _CRITERIA[key] = ok


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for (n, title), ok in sorted(_CRITERIA.items()):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}: {title}")


# -- strategies ----------------------------------------------------------

DENOM = 48


def grid_points(draw, k, denominator=DENOM):
    pts = draw(
        st.lists(st.integers(1, denominator - 1), min_size=k, max_size=k, unique=True)
    )
    return sorted(Fraction(p, denominator) for p in pts)


small_rationals = st.builds(
    Fraction, st.integers(-12, 12), st.sampled_from([1, 2, 3, 4, 6, 8])
)


@st.composite
def step_functions(draw, max_pieces=6, nonnegative=False):
    k = draw(st.integers(0, max_pieces - 1))
    inner = grid_points(draw, k)
    vals_strategy = (
        st.builds(Fraction, st.integers(0, 12), st.sampled_from([1, 2, 3, 4]))
        if nonnegative
        else small_rationals
    )
    vals = draw(st.lists(vals_strategy, min_size=k + 1, max_size=k + 1))
    return StepFunction((Fraction(0), *inner, Fraction(1)), tuple(vals))


@st.composite
def interval_sets(draw, max_parts=3):
    k = draw(st.integers(0, max_parts))
    pts = grid_points(draw, 2 * k) if k else []
    return IntervalSet([(pts[2 * i], pts[2 * i + 1]) for i in range(k)])


@st.composite
def full_affine_systems(draw, min_n=2, max_n=4, signed=True):
    n = draw(st.integers(min_n, max_n))
    weights = draw(st.lists(st.integers(1, 6), min_size=n, max_size=n))
    total = sum(weights)
    signs = (
        draw(st.lists(st.sampled_from([1, -1]), min_size=n, max_size=n))
        if signed
        else [1] * n
    )
    return build_full_affine([s * Fraction(w, total) for s, w in zip(signs, weights)])


@pytest.fixture
def dyadic():
    return build_full_affine([Fraction(1, 2), Fraction(1, 2)])


@pytest.fixture
def cantor():
    from epsinv import AffineBranch

    return BranchSystem(
        (AffineBranch(Fraction(1, 3), Fraction(0)), AffineBranch(Fraction(1, 3), Fraction(2, 3)))
    )
