from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clbench.ffield import FieldSpec, codes_to_coeffs, monic_squarefree_codes
from clbench.hyperell import (
    CurveError,
    HyperellipticCurve,
    InconsistentCounts,
    LPolynomial,
    batch_l_polynomials,
    batch_point_counts,
    l_polynomial,
    l_polynomial_from_counts,
    l_polynomial_full_newton,
    point_count,
    point_count_naive,
    weil_count_ok,
    weil_interval_ok,
)
from clbench.jacobian import Jacobian, brute_force_group


def legendre_count(q: int, f: list[int]) -> int:
    """#X(F_q) for prime q from Euler's criterion, independent of the field code."""
    total = 0
    for x in range(q):
        fx = sum(c * pow(x, i, q) for i, c in enumerate(f)) % q
        if fx == 0:
            total += 1
        elif pow(fx, (q - 1) // 2, q) == 1:
            total += 2
    n = len(f) - 1
    return total + (1 if n % 2 else 2)


# (q, f low-first, L coefficients, #J(F_q) structure); group structures from brute force
FROZEN = [
    (3, [1, 2, 0, 0, 0, 1], (1, 3, 7, 9, 9), [29]),
    (5, [2, 1, 0, 0, 0, 1], (1, 0, 10, 0, 25), [6, 6]),
    (3, [2, 1, 0, 1, 0, 0, 1], (1, 0, 3, 0, 9), [13]),
    (5, [0, 1, 0, 0, 0, 0, 0, 1], (1, -2, -1, 12, -5, -50, 125), [2, 2, 2, 10]),
    (7, [1, 0, 3, 0, 0, 1], (1, -1, 5, -7, 49), [47]),
]


def curve(q, f):
    return HyperellipticCurve.from_coeffs(FieldSpec(q), f)


def test_curve_validation():
    spec = FieldSpec(3)
    with pytest.raises(CurveError):
        HyperellipticCurve.from_coeffs(spec, [1, 1, 1])  # degree 2
    with pytest.raises(CurveError):
        HyperellipticCurve.from_coeffs(spec, [1, 1, 0, 0, 0, 2])  # not monic
    with pytest.raises(CurveError):
        HyperellipticCurve.from_coeffs(spec, [1, 1, 0, 0, 0, 1])  # (x - 1)^2 divides
    C = curve(3, [2, 1, 0, 1, 0, 0, 1])
    assert (C.n, C.genus, C.ramified, C.infinite_points) == (6, 2, False, 2)


@pytest.mark.parametrize("q,f,L,structure", FROZEN)
def test_frozen_l_polynomials(q, f, L, structure):
    C = curve(q, f)
    got = l_polynomial(C)
    assert got.coeffs == L
    assert l_polynomial_full_newton(C).coeffs == L
    assert got.point_count(1) == legendre_count(q, f)
    G = brute_force_group(Jacobian(C))
    assert len(G) == got.at_one()
    assert G.structure() == structure


@pytest.mark.parametrize("q,f,L,structure", FROZEN)
def test_counts_three_ways(q, f, L, structure):
    C = curve(q, f)
    for i in range(1, C.genus + 2):
        naive = point_count_naive(C, i)
        assert point_count(C, i) == naive
        assert LPolynomial(L, q, C.genus).point_count(i) == naive


@pytest.mark.parametrize("q,n", [(3, 5), (3, 6), (5, 5), (5, 6), (3, 7), (7, 5)])
def test_batch_counts_match_scalar_path(q, n):
    spec = FieldSpec(q)
    codes = monic_squarefree_codes(spec, n)
    rng = np.random.default_rng(q * 100 + n)
    pick = np.sort(rng.choice(len(codes), size=min(25, len(codes)), replace=False))
    rows = codes_to_coeffs(codes[pick], q, n)
    g = (n - 1) // 2
    counts = batch_point_counts(spec, n, rows, list(range(1, g + 1)))
    Ls = batch_l_polynomials(counts, q, g)
    for row, cnt, L in zip(rows, counts, Ls):
        f = [int(c) for c in row]
        assert cnt[0] == legendre_count(q, f)
        C = HyperellipticCurve.from_coeffs(spec, f)
        assert tuple(int(a) for a in L) == l_polynomial(C).coeffs
        for i in range(1, g + 1):
            assert weil_count_ok(int(cnt[i - 1]), q, g, i)
        assert weil_interval_ok(int(L.sum()), q, g)


def test_functional_equation_is_enforced():
    with pytest.raises(InconsistentCounts):
        LPolynomial((1, 0, 10, 0, 24), 5, 2)
    with pytest.raises(InconsistentCounts):
        l_polynomial_from_counts([6, 1000], 5, 2)


def test_weil_interval_edges():
    # (sqrt(q) - 1)^(2g) <= L(1) <= (sqrt(q) + 1)^(2g), exactly
    assert weil_interval_ok(1, 4, 1) and weil_interval_ok(9, 4, 1)
    assert not weil_interval_ok(0, 4, 1) and not weil_interval_ok(10, 4, 1)
    # q = 5, g = 2: bounds are (sqrt5 -+ 1)^4 = 56 -+ 24 sqrt5 ~ 2.33, 109.67
    assert not weil_interval_ok(2, 5, 2) and weil_interval_ok(3, 5, 2)
    assert weil_interval_ok(109, 5, 2) and not weil_interval_ok(110, 5, 2)


@given(st.sampled_from([3, 5, 7]), st.sampled_from([5, 6, 7]), st.data())
@settings(max_examples=25, deadline=None)
def test_random_curve_l_polynomial_matches_brute_force_order(q, n, data):
    spec = FieldSpec(q)
    codes = monic_squarefree_codes(spec, n)
    k = data.draw(st.integers(0, len(codes) - 1))
    f = [int(c) for c in codes_to_coeffs(codes[k : k + 1], q, n)[0]]
    C = HyperellipticCurve.from_coeffs(spec, f)
    L = l_polynomial(C)
    assert L.point_count(1) == legendre_count(q, f)
    if q**C.genus <= 49 or n <= 6:
        assert len(brute_force_group(Jacobian(C))) == L.at_one()
