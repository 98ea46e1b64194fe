from __future__ import annotations

import itertools

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from clbench.ffield import (
    FieldError,
    FieldSpec,
    Polynomial,
    arith,
    codes_to_coeffs,
    conway_modulus,
    extend,
    factor_int,
    frobenius,
    is_irreducible_mod_p,
    is_prime,
    monic_squarefree_codes,
    poly_is_squarefree,
    quadratic_character,
    squarefree_count,
)

FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3)]


@pytest.mark.parametrize("n", list(range(1, 200)) + [2**31 - 1, 3**20, 1009 * 1013])
def test_primality_and_factoring_match_sympy(n):
    assert is_prime(n) == sympy.isprime(n)
    assert factor_int(n) == dict(sympy.factorint(n)) or n == 1


def test_field_validation():
    with pytest.raises(FieldError):
        FieldSpec(2)
    with pytest.raises(FieldError):
        FieldSpec(9)
    with pytest.raises(FieldError):
        FieldSpec(3, 0)
    with pytest.raises(FieldError):
        FieldSpec(5, 2, (1, 0, 1))  # t^2 + 1 has roots 2, 3 in F_5


@pytest.mark.parametrize("p,k", [(3, 2), (5, 2), (3, 3), (5, 3), (3, 4), (7, 2), (3, 5), (3, 6)])
def test_moduli_are_primitive_and_match_sympy(p, k):
    mod = conway_modulus(p, k)
    assert len(mod) == k + 1 and mod[-1] == 1
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(mod)), x, modulus=p)
    assert poly.is_irreducible
    assert is_irreducible_mod_p(mod, p)
    spec = FieldSpec(p, k)
    gen = spec.generator()
    order = spec.q - 1
    for r in sympy.primefactors(order):
        assert (gen ** (order // r)).index != 1


def test_frozen_moduli():
    # lexicographically least primitive compatible moduli (see the decisions ledger)
    assert conway_modulus(3, 2) == (2, 1, 1)
    assert conway_modulus(5, 2) == (3, 2, 1)
    assert conway_modulus(3, 3) == (1, 2, 0, 1)
    assert conway_modulus(3, 6) == (2, 1, 1, 0, 2, 0, 1)


@pytest.mark.parametrize("p,k", FIELDS)
def test_field_axioms_exhaustive(p, k):
    spec = FieldSpec(p, k)
    els = list(spec.elements())
    zero, one = spec.zero(), spec.one()
    for a in els:
        assert a + zero == a and a * one == a
        assert (a + (-a)).is_zero()
        if not a.is_zero():
            assert a * a.inverse() == one
            assert a ** (spec.q - 1) == one
        assert frobenius(a) == a**p
    if spec.q <= 25:
        for a, b in itertools.product(els, repeat=2):
            assert a * b == b * a


@given(st.sampled_from(FIELDS), st.data())
@settings(max_examples=60, deadline=None)
def test_distributivity_and_tables(fk, data):
    p, k = fk
    spec = FieldSpec(p, k)
    ar = arith(spec)
    a, b, c = (spec(data.draw(st.integers(0, spec.q - 1))) for _ in range(3))
    assert a * (b + c) == a * b + a * c
    assert ar.add[a.index][b.index] == (a + b).index
    assert ar.mul[a.index][b.index] == (a * b).index
    assert ar.sub[a.index][b.index] == (a - b).index


@pytest.mark.parametrize("p,k", FIELDS)
def test_quadratic_character_and_sqrt_table(p, k):
    spec = FieldSpec(p, k)
    ar = arith(spec)
    squares = {(x * x).index for x in spec.elements()}
    for a in spec.elements():
        chi = quadratic_character(a)
        if a.is_zero():
            assert chi == 0
        else:
            assert chi == (1 if a.index in squares else -1)
        s = ar.sqrt[a.index]
        if a.index in squares:
            assert ar.mul[s][s] == a.index
        else:
            assert s == -1


@pytest.mark.parametrize("p,k,i", [(3, 1, 2), (3, 1, 4), (5, 1, 3), (3, 2, 2), (3, 2, 3), (5, 2, 2)])
def test_embeddings_are_ring_homomorphisms(p, k, i):
    spec = FieldSpec(p, k)
    big, emb = extend(spec, i)
    assert big.q == spec.q**i
    images = [emb(a) for a in spec.elements()]
    assert len({x.index for x in images}) == spec.q
    for a, b in itertools.product(list(spec.elements())[:12], repeat=2):
        assert emb(a + b) == emb(a) + emb(b)
        assert emb(a * b) == emb(a) * emb(b)
    # image is exactly the fixed field of x -> x^q
    fixed = {x.index for x in big.elements() if x ** spec.q == x}
    assert fixed == {x.index for x in images}


def test_tower_compatibility():
    # F_3 -> F_9 -> F_729 agrees with F_3 -> F_729 on the generator of F_9
    s9, e1 = extend(FieldSpec(3), 2)
    s729, e2 = extend(s9, 3)
    s729b, _ = extend(FieldSpec(3), 6)
    assert s729 == s729b
    t = s9.generator()
    assert e2(t) == s729.generator() ** ((729 - 1) // (9 - 1))


@pytest.mark.parametrize("q,n", [(3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 3), (9, 3)])
def test_squarefree_count_formula(q, n):
    spec = FieldSpec(*{3: (3, 1), 5: (5, 1), 7: (7, 1), 9: (3, 2)}[q])
    codes = monic_squarefree_codes(spec, n)
    expect = q**n - q ** (n - 1)
    assert squarefree_count(q, n) == expect == len(codes)
    assert np.all(np.diff(codes) > 0)
    rows = codes_to_coeffs(codes, q, n)
    for row in rows[:: max(1, len(rows) // 40)]:
        assert poly_is_squarefree(Polynomial(spec, tuple(int(c) for c in row)))


def test_enumeration_order_frozen():
    codes = monic_squarefree_codes(FieldSpec(3), 3)
    rows = codes_to_coeffs(codes[:3], 3, 3)
    # low-first coefficients: x^3 + x, x^3 + x + 1, x^3 + x + 2
    assert rows.tolist() == [[0, 1, 0, 1], [1, 1, 0, 1], [2, 1, 0, 1]]
    assert monic_squarefree_codes(FieldSpec(3), 3, 2, 4).tolist() == codes[2:4].tolist()


def test_squarefree_agrees_with_sympy():
    x = sympy.Symbol("x")
    spec = FieldSpec(5)
    for row in itertools.product(range(5), repeat=3):
        coeffs = list(row) + [1]
        ours = poly_is_squarefree(Polynomial(spec, tuple(coeffs)))
        theirs = sympy.Poly(list(reversed(coeffs)), x, modulus=5).is_sqf
        assert ours == theirs
