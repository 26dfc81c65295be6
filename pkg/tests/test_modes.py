"""Mode bookkeeping: eigenvalues, orders, degeneracies, truncation."""

import pytest

from helmlap.errors import DomainError
from helmlap.modes import ModeIndex, spectrum, truncation_plan, harmonic_space_dimension
from helmlap.solver import RadialSource, ModalProfile


def test_zero_degree_mode_d3():
    sp = spectrum(ModeIndex(3, 0))
    assert sp.lambda_m == 0.0
    assert sp.nu == 0.5
    assert sp.zeta == 0.5
    assert sp.degeneracy == 1


def test_fourier_mode_d2():
    sp = spectrum(ModeIndex(2, 5))
    assert sp.lambda_m == 25.0
    assert sp.zeta == 5.0
    assert sp.degeneracy == 2


def test_d4_mode():
    sp = spectrum(ModeIndex(4, 2))
    assert sp.lambda_m == 8.0
    assert sp.nu == 1.0
    assert sp.zeta == 3.0


def test_zeta_identity_exact():
    # zeta^2 = lambda_m + nu^2 exactly in floating point (integer products)
    for d in (2, 3, 4, 7):
        for m in (0, 1, 5, 10**3, 10**6):
            sp = spectrum(ModeIndex(d, m))
            assert sp.zeta**2 - sp.lambda_m - sp.nu**2 == 0.0


@pytest.mark.parametrize("d,expected", [
    (2, [1, 2, 2, 2, 2, 2]),
    (3, [1, 3, 5, 7, 9, 11]),
])
def test_degeneracy_hand_counts(d, expected):
    got = [harmonic_space_dimension(d, m) for m in range(6)]
    assert got == expected


def test_degeneracy_d4_squares():
    assert [harmonic_space_dimension(4, m) for m in range(5)] == [1, 4, 9, 16, 25]


def test_invalid_mode_index():
    with pytest.raises(DomainError):
        ModeIndex(1, 0)
    with pytest.raises(DomainError):
        ModeIndex(3, -1)


def _source(entries):
    return RadialSource(tuple(ModalProfile(m, tuple(cells)) for m, cells in entries))


def test_plan_contains_exactly_excited_modes():
    src = _source([(0, [(0.0, 0.5, 1.0)]), (1, [(0.0, 0.5, 1.0)])])
    plan = truncation_plan(2, src, 1e-8)
    assert [mode.m for mode in plan] == [0, 1]
    assert plan.m_max == 1


def test_plan_tail_below_tolerance():
    src = _source([(0, [(0.0, 0.5, 1.0)]), (3, [(0.0, 0.5, 1e-6)])])
    plan = truncation_plan(2, src, 1e-8)
    # the m=3 share of the squared norm is ~1e-12: dropped, reported as tail
    assert [mode.m for mode in plan] == [0]
    assert plan.tail_estimate < 1e-8
    tighter = truncation_plan(2, src, 1e-16)
    assert [mode.m for mode in tighter] == [0, 3]


def test_plan_monotone_in_tolerance():
    src = _source([
        (0, [(0.0, 0.5, 1.0)]),
        (2, [(0.0, 0.5, 1e-3)]),
        (5, [(0.0, 0.5, 1e-7)]),
    ])
    prev_len = -1
    for tol in (1e-2, 1e-4, 1e-8, 1e-16, 1e-18):
        plan = truncation_plan(2, src, tol)
        assert len(plan) >= prev_len
        prev_len = len(plan)


def test_plan_empty_source():
    plan = truncation_plan(3, _source([]), 1e-8)
    assert len(plan) == 0 and plan.m_max == -1
