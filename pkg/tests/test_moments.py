from __future__ import annotations

from fractions import Fraction

import pytest

from clbench.ffield import squarefree_count
from clbench.moments import (
    MomentReport,
    compare,
    empty_report,
    field_for,
    merge,
    shard_range,
    sweep,
    sweep_slow,
    threshold_status,
)
from clbench.clgroup import FiniteAbelianGroup, GroupError

# sum of |Surj(Cl, H)| over all monic squarefree f; each value agrees between the
# compiled sweep and the brute-force group oracle
FROZEN = [
    (5, 4, "3", 80),
    (3, 5, "5", 144),
    (3, 6, "5", 36),
    (3, 5, "7", 108),
    (3, 6, "7", 54),
    (5, 5, "3", 1640),
    (7, 4, "3,3", 0),
]


@pytest.mark.parametrize("q,n,H,total", FROZEN)
def test_frozen_sums(q, n, H, total):
    r = sweep(q, n, H)
    assert r.sum_surj == total
    assert r.count == q**n - q ** (n - 1)
    assert r.complete


@pytest.mark.parametrize("q,n,H", [(3, 5, "5"), (3, 6, "7"), (5, 4, "3"), (7, 4, "3,3")])
def test_fast_matches_brute_force_sweep(q, n, H):
    assert sweep(q, n, H).sum_surj == sweep_slow(q, n, H).sum_surj


def test_reference_path_without_compiled_arithmetic():
    a = sweep(3, 6, "5", fast=False)
    b = sweep(3, 6, "5")
    assert a.sum_surj == b.sum_surj


def test_frozen_moment_sequence_q5():
    got = [sweep(5, n, "3").empirical for n in (4, 5, 6)]
    assert got == [Fraction(80, 500), Fraction(1640, 2500), Fraction(2040, 12500)]


def test_shards_merge_to_full_run():
    full = sweep(3, 6, "5")
    total = squarefree_count(3, 6)
    parts = [sweep(3, 6, "5", shard=shard_range(total, 5, i)) for i in range(5)]
    merged = merge(reversed(parts))
    assert merged == full
    assert merged.shards == ((0, total),)


def test_merge_rejects_overlap_and_mismatch():
    a = sweep(3, 5, "5", shard=(0, 50))
    b = sweep(3, 5, "5", shard=(40, 80))
    with pytest.raises(ValueError):
        merge([a, b])
    with pytest.raises(ValueError):
        merge([a, sweep(3, 5, "7", shard=(50, 60))])
    with pytest.raises(ValueError):
        merge([])


def test_shard_ranges_partition():
    for total, k in [(10, 3), (162, 8), (7, 7), (3, 5)]:
        ranges = [shard_range(total, k, i) for i in range(k)]
        assert ranges[0][0] == 0 and ranges[-1][1] == total
        assert all(a[1] == b[0] for a, b in zip(ranges, ranges[1:]))
        assert max(b - a for a, b in ranges) - min(b - a for a, b in ranges) <= 1
    with pytest.raises(ValueError):
        shard_range(10, 3, 3)


def test_report_roundtrip_and_verdict():
    r = sweep(5, 4, "3")
    again = MomentReport.from_dict(r.to_dict())
    assert again == r
    v = compare(r)
    assert v.mode == "empirical"
    assert v.empirical == Fraction(4, 25) and v.predicted == Fraction(1, 3)
    assert v.abs_error == Fraction(1, 3) - Fraction(4, 25)
    assert empty_report(5, 4, "3").count == 0
    with pytest.raises(ValueError):
        compare(empty_report(5, 4, "3"))


def test_input_validation():
    with pytest.raises(ValueError):
        field_for(6)
    with pytest.raises(ValueError):
        sweep(3, 1, "5")
    with pytest.raises(ValueError):
        sweep(3, 5, "5", shard=(0, 10**6))
    with pytest.raises(GroupError):
        sweep(3, 5, "3")  # no prediction when |H| and q share a prime
    assert field_for(9).q == 9


def test_threshold_status():
    Z3 = FiniteAbelianGroup.parse("3")
    assert threshold_status(5, Z3) == "below threshold"
    assert threshold_status(5, FiniteAbelianGroup.parse("7,7")) == "unknown constant"
