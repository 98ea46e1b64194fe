from __future__ import annotations

from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from clbench.abelian import factors_from_orders, invariant_factors, normalize_factors, smith_normal_form
from clbench.clgroup import (
    FiniteAbelianGroup,
    GroupError,
    hom_count,
    mobius_table,
    predicted_moment,
    surj_count,
    surj_count_bruteforce,
    wedge_torsion_order,
)

small_matrices = st.integers(1, 4).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-30, 30), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def _matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@given(small_matrices)
@settings(max_examples=150, deadline=None)
def test_smith_form_matches_sympy_and_is_a_factorization(A):
    diag, U, V, Vinv = smith_normal_form(A)
    D = _matmul(_matmul(U, A), V)
    for i, row in enumerate(D):
        for j, x in enumerate(row):
            assert x == (diag[i] if i == j else 0)
    assert all(d >= 0 for d in diag)
    nz = [d for d in diag if d]
    assert all(nz[i + 1] % nz[i] == 0 for i in range(len(nz) - 1))
    assert sympy.Matrix(U).det() in (1, -1) and sympy.Matrix(V).det() in (1, -1)
    assert _matmul(V, Vinv) == [[int(i == j) for j in range(len(V))] for i in range(len(V))]
    ref = sympy_snf(sympy.Matrix(A), domain=sympy.ZZ)
    ref_diag = sorted(abs(int(ref[i, i])) for i in range(min(ref.shape)))
    assert sorted(diag) == ref_diag


def test_invariant_factors():
    assert invariant_factors([[2, 0], [0, 3]], 2) == [6]
    assert invariant_factors([[4, 6], [6, 4]], 2) == [2, 10]
    with pytest.raises(ValueError):
        invariant_factors([[2, 0]], 2)
    assert normalize_factors([4, 6, 1]) == [2, 12]


def test_factors_from_element_orders():
    # Z/2 x Z/6: element orders listed explicitly
    orders = [1, 2, 2, 2, 3, 3, 6, 6, 6, 6, 6, 6]
    assert factors_from_orders(orders, 12, [2, 3]) == [2, 6]
    assert factors_from_orders(orders, 12, [3]) == [3]
    with pytest.raises(ValueError):
        factors_from_orders([1, 3, 3, 3], 4, [2])


def test_group_parsing():
    assert FiniteAbelianGroup.parse("3,9").factors == (3, 9)
    assert FiniteAbelianGroup.parse("9,3").factors == (3, 9)
    assert FiniteAbelianGroup.parse("15").factors == (15,)
    assert FiniteAbelianGroup.parse("3,5").factors == (15,)
    assert FiniteAbelianGroup.parse("1").factors == ()
    for bad in ("x", "3,,3", "-3"):
        with pytest.raises(GroupError):
            FiniteAbelianGroup.parse(bad)
    with pytest.raises(GroupError):
        FiniteAbelianGroup((3, 5))
    H = FiniteAbelianGroup.parse("3,9")
    assert H.order == 27 and H.rank == 2 and H.primes() == [3]
    assert H.torsion(3).factors == (3, 3)


groups = st.lists(st.sampled_from([2, 3, 4, 5, 6, 9]), min_size=0, max_size=3).map(FiniteAbelianGroup.from_cyclic)
targets = st.sampled_from(["1", "3", "5", "3,3", "9", "2,2", "15", "3,9"]).map(FiniteAbelianGroup.parse)


@given(groups, targets)
@settings(max_examples=80, deadline=None)
def test_surj_count_matches_enumeration(A, H):
    if A.order * H.order ** len(A.factors) > 200000:
        return
    assert surj_count(A, H) == surj_count_bruteforce(A, H)
    assert surj_count(A, H) <= hom_count(A, H)


def test_surj_frozen_values():
    Z3 = FiniteAbelianGroup.parse("3")
    assert surj_count(FiniteAbelianGroup.parse("3,3"), Z3) == 8
    assert surj_count(FiniteAbelianGroup.parse("9"), Z3) == 2
    assert surj_count(FiniteAbelianGroup.parse("3,3"), FiniteAbelianGroup.parse("3,3")) == 48  # |GL_2(F_3)|
    assert surj_count(FiniteAbelianGroup.parse("3"), FiniteAbelianGroup.parse("3,3")) == 0
    assert surj_count(FiniteAbelianGroup(()), FiniteAbelianGroup(())) == 1


def test_mobius_of_elementary_abelian():
    # mu(B, (Z/3)^2): 1 for the whole group, -1 for each of the 4 lines, 3 for the trivial group
    vals = sorted(m for _, m in mobius_table(FiniteAbelianGroup.parse("3,3")))
    assert vals == [-1, -1, -1, -1, 1, 3]


@pytest.mark.parametrize(
    "Hs,h,w",
    [("3", 3, 1), ("3,3", 3, 3), ("3,3", 1, 1), ("3,9", 9, 3), ("3,9", 3, 3), ("3,3,3", 3, 27), ("9,9", 3, 3), ("9,9", 9, 9)],
)
def test_wedge_torsion_hand_values(Hs, h, w):
    assert wedge_torsion_order(FiniteAbelianGroup.parse(Hs), h) == w


def test_predicted_moment_branches():
    H33 = FiniteAbelianGroup.parse("3,3")
    assert predicted_moment(H33, 7, 1).value == 3
    assert predicted_moment(H33, 7, 0).value == Fraction(1, 3)
    assert predicted_moment(H33, 5, 1).value == 1
    assert predicted_moment(H33, 5, 0).value == Fraction(1, 9)
    Z3 = FiniteAbelianGroup.parse("3")
    assert predicted_moment(Z3, 5, 1).value == 1
    assert predicted_moment(Z3, 5, 0).value == Fraction(1, 3)
    with pytest.raises(GroupError):
        predicted_moment(FiniteAbelianGroup.parse("5"), 5, 1)
    with pytest.raises(GroupError):
        predicted_moment(Z3, 5, 2)
    with pytest.raises(GroupError):
        predicted_moment(FiniteAbelianGroup.parse("6"), 7, 1)
