from __future__ import annotations

import itertools
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clbench.hurwitz import (
    BudgetExceeded,
    CannotCertify,
    FiniteMonoid,
    Pi0RingView,
    RackError,
    WitnessNotFound,
    apply_word,
    boundary,
    braid_orbits,
    compute_N0,
    decode,
    encode,
    evw_witness,
    evw_witness_all,
    homepi_witness,
    idempotent_witness,
    is_central,
    localized_component_monoid,
    monoid_class,
    reachable_boundaries,
    sigma,
    sigma_inv,
    stable_component_count,
    u_injective_from,
)
from clbench.racks import standard_racks, subrack_closure, subracks

RACKS = standard_racks()
S3 = RACKS["s3_transpositions"]
D5 = RACKS["dihedral_5"]
D33 = RACKS["dihedral_3x3"]


def orbits_by_group_bfs(rack, n, bnd=None, full=False):
    """Braid orbits computed in the ambient group, without the rack table."""
    G = rack.group
    elems = list(rack.embedding)
    pos = {g: i for i, g in enumerate(elems)}

    def moves(t):
        for i in range(n - 1):
            a, b = elems[t[i]], elems[t[i + 1]]
            yield t[:i] + (t[i + 1], pos[G.conj(b, a)]) + t[i + 2 :]
            yield t[:i] + (pos[G.mul(G.mul(a, b), G.inverse[a])], t[i]) + t[i + 2 :]

    def ok(t):
        if bnd is not None and G.product(elems[x] for x in t) != bnd:
            return False
        return not full or len(G.subgroup_generated(elems[x] for x in t)) == G.order

    todo = {t for t in itertools.product(range(rack.size), repeat=n) if ok(t)}
    count = 0
    while todo:
        count += 1
        stack = [todo.pop()]
        while stack:
            for u in moves(stack.pop()):
                if u in todo:
                    todo.remove(u)
                    stack.append(u)
    return count


@pytest.mark.parametrize("name", ["s3_transpositions", "dihedral_5", "dihedral_3x3", "s4_transpositions", "s3_transpositions_and_3cycles"])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_orbit_counts_match_group_bfs(name, n):
    R = RACKS[name]
    if R.size**n > 20000:
        pytest.skip("oracle too slow")
    assert braid_orbits(R, n).count == orbits_by_group_bfs(R, n)
    G = R.group
    assert braid_orbits(R, n, G.identity).count == orbits_by_group_bfs(R, n, G.identity)
    assert braid_orbits(R, n, generate_full=True).count == orbits_by_group_bfs(R, n, full=True)


@pytest.mark.parametrize("m,n", [(1, 5), (2, 4), (3, 3), (3, 5)])
def test_trivial_rack_orbits_are_multisets(m, n):
    name = {1: "point", 2: "trivial2", 3: "trivial3"}[m]
    assert braid_orbits(RACKS[name], n).count == comb(m + n - 1, n)


@pytest.mark.parametrize("n", [4, 6])
def test_simply_branched_triple_covers_are_connected(n):
    # classical: transposition tuples in S_3 generating with product 1 form one orbit
    G = S3.group
    assert braid_orbits(S3, n, G.identity, generate_full=True).count == 1


def test_braid_moves_invert_and_satisfy_relations():
    for t in itertools.product(range(D5.size), repeat=3):
        for i in range(2):
            assert sigma_inv(D5, sigma(D5, t, i), i) == t
            assert boundary(D5, sigma(D5, t, i)) == boundary(D5, t)
        # braid relation s0 s1 s0 = s1 s0 s1
        assert apply_word(D5, t, [(0, 1), (1, 1), (0, 1)]) == apply_word(D5, t, [(1, 1), (0, 1), (1, 1)])


@given(st.lists(st.integers(0, 8), min_size=1, max_size=6))
@settings(max_examples=100, deadline=None)
def test_code_roundtrip(t):
    assert decode(encode(t, 9), 9, len(t)) == tuple(t)


def test_representatives_are_least_and_invariants_constant():
    table = braid_orbits(D5, 4)
    for k, rep in enumerate(table.reps):
        members = table.members(k)
        assert rep == min(members)
        assert len(members) == table.sizes[k]
        assert {boundary(D5, u) for u in members} == {table.boundaries[k]}
        assert {subrack_closure(D5, u) for u in members} == {table.subracks[k]}
    assert sum(table.sizes) == D5.size**4
    csv = table.to_csv().splitlines()
    assert csv[0] == "degree,representative,orbit_size,boundary,generates"
    assert len(csv) == table.count + 1


def test_boundary_constraint_needs_group_and_budget_is_enforced():
    with pytest.raises(RackError):
        braid_orbits(RACKS["trivial2"], 3, boundary_element=0)
    with pytest.raises(BudgetExceeded):
        braid_orbits(D5, 10, budget=1 << 20)


def test_frozen_component_counts():
    G = D33.group
    res = stable_component_count(D33, G.identity, range(2, 9))
    assert res.counts == {2: 0, 4: 2, 6: 3, 8: 3}
    assert res.skipped == (3, 5, 7)
    assert res.value == 3 and res.onset == 6
    c3 = S3.group.index_of("(123)")
    res = stable_component_count(S3, c3, range(2, 13))
    assert res.value == 1
    assert set(res.skipped) == {3, 5, 7, 9, 11}


def test_parity_obstruction_is_reported():
    G = D5.group
    assert G.identity not in reachable_boundaries(D5, 3)
    assert G.identity in reachable_boundaries(D5, 4)


def test_pi0_ring():
    view = Pi0RingView(S3, 6)
    a, b = view.alpha(0), view.alpha(1)
    ab = view.product(a, b)
    assert ab.degree == 2
    assert view.product(view.unit(), a) == a
    assert view.power(a, 3).degree == 3
    # (x, y) and (y, y |> x) are the same component
    assert view.component((0, 1)) == view.component(sigma(S3, (0, 1), 0))
    assert len(view.basis(2)) == braid_orbits(S3, 2).count
    # alpha_x^(ord x) is central
    assert is_central(view, view.power(a, 2))


def test_explicit_stabilization_constant():
    p = compute_N0(S3, D=1, cap=10)
    assert (p.degU, p.N0) == (2, 5)


def test_trivial_racks_cannot_be_certified():
    with pytest.raises(CannotCertify):
        compute_N0(RACKS["trivial2"], cap=8)
    assert compute_N0(RACKS["point"], cap=6).N0 == 0
    assert u_injective_from(RACKS["trivial2"], cap=8) == 0


def test_evw_witness_all_generating_tuples_s3_length_8():
    # every S_3 transposition tuple of length 8 that generates the rack
    full = frozenset(range(S3.size))
    words = evw_witness_all(S3, 8, 0)
    expected = sum(1 for t in itertools.product(range(3), repeat=8) if subrack_closure(S3, t) == full)
    assert len(words) == expected
    for t, w in list(words.items())[::97]:
        u = apply_word(S3, t, w)
        assert u[0] == 0 and subrack_closure(S3, u[1:]) == full


def test_evw_single_witness_and_failure():
    t = (0, 1, 2, 1)
    w = evw_witness(S3, t, 2, right=True)
    assert apply_word(S3, t, w)[-1] == 2
    with pytest.raises(RackError):
        evw_witness(RACKS["s3_transpositions_and_3cycles"], (0, 0), 4)


@pytest.mark.parametrize("rack", [S3, D5], ids=["s3", "d5"])
def test_homepi_witness_every_choice(rack):
    for sub in subracks(rack):
        if len(sub) == rack.size:
            continue
        for beta in set(range(rack.size)) - sub:
            for gamma in sub:
                h = homepi_witness(rack, sub, beta, gamma)
                end = apply_word(rack, (gamma,) * h.N + (beta,), h.word)
                assert end == h.ys + (beta, beta)


def test_homepi_witness_rejects_bad_input():
    with pytest.raises(RackError):
        homepi_witness(S3, {0}, 0, 0)
    with pytest.raises(RackError):
        homepi_witness(S3, {0}, 1, 2)
    with pytest.raises(WitnessNotFound):
        homepi_witness(RACKS["trivial2"], {0}, 1, 0, max_N=3)


def test_idempotent_in_localized_monoid():
    sub = frozenset({0})
    M, index = localized_component_monoid(S3, sub)
    beta = 1
    x = monoid_class(S3, index, sub, (beta,))
    h = homepi_witness(S3, sub, beta, 0)
    z = monoid_class(S3, index, sub, h.ys, gamma=0, shift=h.N)
    e = idempotent_witness(M, x, z, 2, 1, S3.element_order(beta))
    assert M.mul(e, e) == e and M.is_central(e)


def test_idempotent_checks_hypotheses():
    # Z/2 written additively: z + 2x = x holds for x = z = 1
    M = FiniteMonoid(((0, 1), (1, 0)), 0)
    assert idempotent_witness(M, 1, 1, 2, 1, 2) == 0
    with pytest.raises(ValueError):
        idempotent_witness(M, 1, 0, 2, 1, 2)
    with pytest.raises(ValueError):
        idempotent_witness(M, 1, 1, 1, 2, 2)
