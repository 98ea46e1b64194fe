from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clbench.clgroup import class_group_odd, class_group_part
from clbench.divisor_oracle import DivisorOracle
from clbench.fastjac import FastJacobian, sylow_factors
from clbench.ffield import FieldSpec, codes_to_coeffs, monic_squarefree_codes
from clbench.hyperell import HyperellipticCurve
from clbench.jacobian import Jacobian, JacobianError, MumfordDivisor, brute_force_group, stream

ODD = [(3, [1, 2, 0, 0, 0, 1]), (5, [2, 1, 0, 0, 0, 1]), (7, [1, 0, 3, 0, 0, 1])]
EVEN = [(3, [2, 1, 0, 1, 0, 0, 1]), (3, [0, 2, 1, 1, 1, 0, 1]), (5, [1, 1, 0, 0, 0, 0, 1])]


def jac(q, f):
    return Jacobian(HyperellipticCurve.from_coeffs(FieldSpec(q), f))


def test_stream_is_deterministic_and_keyed():
    a = stream("x", 1).integers(0, 2**62, size=4)
    b = stream("x", 1).integers(0, 2**62, size=4)
    c = stream("x", 2).integers(0, 2**62, size=4)
    assert np.array_equal(a, b) and not np.array_equal(a, c)


@pytest.mark.parametrize("q,f", ODD + EVEN)
def test_group_axioms_on_random_elements(q, f):
    J = jac(q, f)
    els = [J.random_element(i) for i in range(12)]
    for D in els:
        assert J.is_valid(D)
        assert J.add(D, J.zero) == D
        assert J.add(D, J.negate(D)) == J.zero
        assert J.scalar_mul(J.order, D) == J.zero
        assert J.sub(J.double(D), D) == D
    for A, B, C in zip(els, els[1:], els[2:]):
        assert J.add(A, B) == J.add(B, A)
        assert J.add(J.add(A, B), C) == J.add(A, J.add(B, C))
        assert J.scalar_mul(5, A) == J.add(J.scalar_mul(2, A), J.scalar_mul(3, A))
        assert J.scalar_mul(-3, A) == J.negate(J.scalar_mul(3, A))


@pytest.mark.parametrize("q,f", [(3, [1, 2, 0, 0, 0, 1]), (3, [2, 0, 1, 0, 0, 1]), (3, [1, 1, 1, 0, 1, 1])])
def test_cantor_matches_divisor_oracle(q, f):
    J = jac(q, f)
    O = DivisorOracle(J)
    assert len(O.elements) == J.order
    rng = np.random.default_rng(sum(f))
    for _ in range(40):
        a, b = (O.elements[int(i)] for i in rng.integers(len(O.elements), size=2))
        assert O.add(a, b) == J.add(a, b)
    for D in O.elements[:10]:
        assert O.negate(D) == J.negate(D)
        assert O.scalar_mul(7, D) == J.scalar_mul(7, D)


def test_oracle_rejects_real_model():
    with pytest.raises(JacobianError):
        DivisorOracle(jac(3, [2, 1, 0, 1, 0, 0, 1]))


@pytest.mark.parametrize("q,f", ODD + EVEN)
def test_structure_matches_brute_force(q, f):
    J = jac(q, f)
    if J.order > 3000:
        pytest.skip("group too large for the brute-force oracle")
    G = brute_force_group(J)
    assert len(G) == J.order
    full = G.structure()
    odd = [p for p in range(3, J.order + 1, 2) if J.order % p == 0 and all(p % r for r in range(2, p))]
    got = J.subgroup_structure(odd)
    want = [d for d in (_odd_part(x) for x in full) if d > 1]
    assert sorted(got.factors) == sorted(want)


def _odd_part(d):
    while d % 2 == 0:
        d //= 2
    return d


@pytest.mark.parametrize("q,f", EVEN)
def test_real_model_class_group_quotients_delta(q, f):
    J = jac(q, f)
    G = brute_force_group(J)
    delta = J.infinity_delta()
    odd = [p for p in (3, 5, 7, 11, 13) if J.order % p == 0]
    want = sorted(G.structure(primes=odd, quotient_by=delta))
    got = sorted(class_group_odd(J, odd).factors)
    assert got == [d for d in want if d > 1]


def test_sampler_reaches_every_class_on_real_model():
    # this curve has classes with w > 0 that a degree-g-only sampler misses
    J = jac(3, [0, 2, 1, 1, 1, 0, 1])
    G = brute_force_group(J)
    seen = {J.random_element(i) for i in range(40 * len(G))}
    assert seen == set(G.elements)


def test_sampler_reaches_every_class_on_odd_model():
    J = jac(3, [1, 2, 0, 0, 0, 1])
    G = brute_force_group(J)
    seen = {J.random_element(i) for i in range(40 * len(G))}
    assert seen == set(G.elements)


def test_characteristic_prime_part():
    # ell = p is handled by the same generic algorithm
    for code in monic_squarefree_codes(FieldSpec(3), 5)[:60]:
        f = [int(c) for c in codes_to_coeffs(np.array([code]), 3, 5)[0]]
        J = jac(3, f)
        if J.order % 3 == 0:
            G = brute_force_group(J)
            assert sorted(class_group_part(J, [3]).factors) == sorted(d for d in G.structure(primes=[3]) if d > 1)
            return
    pytest.fail("no curve with a 3-part among the first 60")


def test_point_divisor_validation():
    J = jac(3, [1, 2, 0, 0, 0, 1])
    with pytest.raises(JacobianError):
        J.point_divisor(0, 0)  # f(0) = 1, so (0, 0) is off the curve
    P = J.point_divisor(0, 1)
    assert J.add(P, J.point_divisor(0, 2)) == J.zero
    with pytest.raises(JacobianError):
        J.infinity_delta()


@pytest.mark.parametrize("q,f", ODD + EVEN)
def test_fast_arithmetic_matches_reference(q, f):
    J = jac(q, f)
    FJ = FastJacobian(J)
    els = [J.random_element(("fast", i)) for i in range(30)]
    for A, B in zip(els, els[1:]):
        a, b = FJ.encode(A), FJ.encode(B)
        assert FJ.decode(a) == A
        assert FJ.decode(FJ.add(a, b)) == J.add(A, B)
        assert FJ.decode(FJ.neg(a)) == J.negate(A)
        assert FJ.decode(FJ.mul(11, a)) == J.scalar_mul(11, A)
    assert FJ.decode(FJ.zero) == J.zero


@given(st.sampled_from(ODD + EVEN), st.integers(0, 10**6))
@settings(max_examples=30, deadline=None)
def test_fast_sylow_matches_reference(qf, seed):
    q, f = qf
    J = jac(q, f)
    FJ = FastJacobian(J)
    for ell in (3, 5, 7, 13, 47):
        if J.order % ell:
            continue
        ref = sorted(class_group_part(J, [ell], seed=seed).factors)
        fast = sorted(sylow_factors(FJ, J.order, ell, seed=seed, quotient_delta=J.real))
        assert fast == ref


def test_mumford_invalid_input_detected():
    J = jac(3, [1, 2, 0, 0, 0, 1])
    assert J.is_valid(MumfordDivisor((0, 1), (2,), 0))
    assert not J.is_valid(MumfordDivisor((0, 1), (), 0))  # f(0) = 1 is not 0^2
