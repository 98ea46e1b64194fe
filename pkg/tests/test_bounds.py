from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clbench.bounds import (
    ErrorBoundParams,
    VacuousBound,
    point_count_error,
    q_threshold,
    q_threshold_by_squaring,
    ratio_majorant,
    stability_range,
    threshold_report,
)

DIGITS = "328356046060931066631381919758377760581308276266762244"


def test_explicit_threshold_digits():
    assert str(q_threshold(3, 5, 2)) == DIGITS
    assert q_threshold(3, 5, 2) == 4 * (6**17 + 1) ** 4
    r = threshold_report(3, 5, 2)
    assert r.exponent == 17
    assert r.formula() == "4*(6^17+1)^4"
    assert r.scientific() == "3.28356e+53"


@given(st.integers(1, 12), st.integers(0, 15), st.integers(1, 6))
@settings(max_examples=200, deadline=None)
def test_two_integer_paths_agree(c, N0, degU):
    assert q_threshold(c, N0, degU) == q_threshold_by_squaring(c, N0, degU)


@given(st.fractions(min_value=Fraction(1, 100), max_value=100), st.integers(2, 10**6))
@settings(max_examples=200, deadline=None)
def test_ratio_majorant_is_a_tight_upper_bound(C, q):
    P = 10**6
    r = ratio_majorant(C, q, precision=P)
    # r >= C / sqrt(q)  <=>  r^2 q >= C^2
    assert r * r * q >= C * C
    if r.denominator == P:
        below = r - Fraction(1, P)
        assert below < 0 or below * below * q < C * C


def test_ratio_majorant_exact_cases():
    assert ratio_majorant(2, 16) == Fraction(1, 2)
    assert ratio_majorant(Fraction(3, 2), 9) == Fraction(1, 2)
    with pytest.raises(ValueError):
        ratio_majorant(0, 5)


def test_point_count_error():
    p = ErrorBoundParams(C=2, C_prime=1, I=1, J=0, q=16, n=3)
    # rho = 1/2, exponent 3: 2 / (1/2) * 1/8
    assert point_count_error(p) == Fraction(1, 2)
    assert point_count_error(p, with_q_factor=True) == Fraction(1, 2) * Fraction(16, 15)
    # fractional exponent floors, negative exponent counts as 0
    assert point_count_error(ErrorBoundParams(2, 1, 2, 0, 16, 3)) == 2
    assert point_count_error(ErrorBoundParams(2, 1, 1, 10, 16, 3)) == 4
    with pytest.raises(VacuousBound):
        point_count_error(ErrorBoundParams(C=4, C_prime=1, I=1, J=0, q=16, n=3))
    with pytest.raises(ValueError):
        ErrorBoundParams(C=0, C_prime=1, I=1, J=0, q=16, n=3)


@given(st.integers(1, 40))
@settings(max_examples=40, deadline=None)
def test_error_decreases_with_n(n):
    a = point_count_error(ErrorBoundParams(3, 2, Fraction(3, 2), 1, 101, n))
    b = point_count_error(ErrorBoundParams(3, 2, Fraction(3, 2), 1, 101, n + 2))
    assert b <= a


def test_stability_range():
    assert stability_range(0, 2, 0) == 1
    assert stability_range(3, 2, 1) == 8
    assert stability_range(2, Fraction(1, 2), Fraction(1, 3)) == 2
    with pytest.raises(ValueError):
        stability_range(-1, 1, 1)
