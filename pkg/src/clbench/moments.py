"""Exhaustive H-moments of class groups over all monic squarefree f of degree n.

For each f the odd part of the class group is only computed at the primes of
|H| and only up to the exponent of H, since |Surj(A, H)| depends on nothing
else.  Sums are exact Python integers and averages exact Fractions.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .abelian import valuation
from .bounds import ErrorBoundParams, VacuousBound, point_count_error, q_threshold
from .clgroup import FiniteAbelianGroup, class_group_part, predicted_moment, surj_count
from .ffield import FieldSpec, codes_to_coeffs, is_prime, monic_squarefree_codes, squarefree_count
from .hyperell import HyperellipticCurve, batch_l_polynomials, batch_point_counts, weil_interval_ok
from .jacobian import Jacobian

CHUNK = 20000

# (|c|, N0, deg U) for targets whose constant is known explicitly; only the
# dihedral rack of Z/3 (the transpositions of S_3) has been worked out.
KNOWN_CONSTANTS = {(3,): (3, 5, 2)}


class SweepError(RuntimeError):
    def __init__(self, message: str, f=None):
        super().__init__(message if f is None else f"{message} (f = {f})")
        self.f = f


def field_for(q: int) -> FieldSpec:
    """The field with q elements (q an odd prime power)."""
    for p in range(3, q + 1, 2):
        if is_prime(p) and q % p == 0:
            k, r = 0, q
            while r % p == 0:
                r //= p
                k += 1
            if r != 1:
                break
            return FieldSpec(p, k)
    raise ValueError(f"q = {q} is not an odd prime power")


@dataclass(frozen=True)
class MomentReport:
    q: int
    n: int
    H: FiniteAbelianGroup
    count: int
    sum_surj: int
    predicted: Fraction
    threshold_status: str
    shards: tuple[tuple[int, int], ...]
    seed: int
    wall_time: float = field(default=0.0, compare=False)

    @property
    def empirical(self) -> Fraction | None:
        return Fraction(self.sum_surj, self.count) if self.count else None

    @property
    def parity(self) -> int:
        return self.n % 2

    @property
    def complete(self) -> bool:
        return self.count == squarefree_count(self.q, self.n) and _covers(self.shards, self.count)

    def to_dict(self) -> dict:
        emp = self.empirical
        return {
            "q": self.q,
            "n": self.n,
            "H": str(self.H),
            "count": self.count,
            "sum_surj": str(self.sum_surj),
            "empirical_num": str(emp.numerator) if emp is not None else None,
            "empirical_den": str(emp.denominator) if emp is not None else None,
            "predicted_num": str(self.predicted.numerator),
            "predicted_den": str(self.predicted.denominator),
            "threshold_status": self.threshold_status,
            "shards": [list(s) for s in self.shards],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict, wall_time: float = 0.0) -> MomentReport:
        return cls(
            q=int(d["q"]),
            n=int(d["n"]),
            H=FiniteAbelianGroup.parse(d["H"]),
            count=int(d["count"]),
            sum_surj=int(d["sum_surj"]),
            predicted=Fraction(int(d["predicted_num"]), int(d["predicted_den"])),
            threshold_status=d["threshold_status"],
            shards=tuple(tuple(s) for s in d["shards"]),
            seed=int(d["seed"]),
            wall_time=wall_time,
        )


def _covers(shards, count) -> bool:
    total = sum(b - a for a, b in shards)
    return total == count


def threshold_status(q: int, H: FiniteAbelianGroup) -> str:
    """'above threshold', 'below threshold', or 'unknown constant'."""
    consts = KNOWN_CONSTANTS.get(H.factors)
    if consts is None:
        return "unknown constant"
    return "above threshold" if q > q_threshold(*consts) else "below threshold"


def shard_range(total: int, shards: int, index: int) -> tuple[int, int]:
    """Contiguous slice ``index`` of ``shards`` near-equal slices of range(total)."""
    if not 0 <= index < shards:
        raise ValueError("shard index out of range")
    base, extra = divmod(total, shards)
    start = index * base + min(index, extra)
    return start, start + base + (1 if index < extra else 0)


def _caps(H: FiniteAbelianGroup) -> dict[int, int]:
    """Largest ell-exponent among H's invariant factors, per prime."""
    out: dict[int, int] = {}
    for ell in H.primes():
        out[ell] = max(valuation(d, ell) for d in H.factors)
    return out


def _check_counts(counts: np.ndarray, q: int, g: int, codes) -> None:
    for i in range(1, g + 1):
        d = counts[:, i - 1] - (q**i + 1)
        bad = np.flatnonzero(d * d > 4 * g * g * q**i)
        if bad.size:
            raise SweepError(f"Weil bound violated over F_q^{i}", int(codes[bad[0]]))


def class_group_parts(spec: FieldSpec, n: int, rows: np.ndarray, orders: np.ndarray, caps: dict[int, int], seed: int, fast: bool = True):
    """Capped class-group parts (as FiniteAbelianGroup) for each row."""
    from .fastjac import FastJacobian, sylow_factors

    out = []
    real = n % 2 == 0
    for row, order in zip(rows, orders.tolist()):
        facs: list[int] = []
        need = [ell for ell in caps if order % ell == 0]
        if need:
            # the cheap cases need no group arithmetic
            simple = all(valuation(order, ell) == 1 for ell in need) and not real
            if simple:
                facs = list(need)
            else:
                curve = HyperellipticCurve.from_coeffs(spec, row)
                J = Jacobian(curve)
                J.set_order(order)
                FJ = None
                if fast:
                    try:
                        FJ = FastJacobian(J)
                    except OverflowError:
                        FJ = None
                for ell in need:
                    if FJ is not None:
                        part = sylow_factors(FJ, order, ell, seed=seed, quotient_delta=real)
                    else:
                        part = list(class_group_part(J, [ell], seed=seed).factors)
                    facs += [min(d, ell ** caps[ell]) for d in part]
        out.append(FiniteAbelianGroup.from_cyclic(facs))
    return out


def sweep(
    q: int,
    n: int,
    H: FiniteAbelianGroup | str,
    shard: tuple[int, int] | None = None,
    seed: int = 0,
    progress: Callable[[int, int], None] | None = None,
    fast: bool = True,
) -> MomentReport:
    """Sum |Surj(Cl, H)| over a contiguous slice of the monic squarefree degree-n f."""
    t0 = time.perf_counter()
    if isinstance(H, str):
        H = FiniteAbelianGroup.parse(H)
    spec = field_for(q)
    if n < 2:
        raise ValueError("n must be >= 2")
    pred = predicted_moment(H, q, n % 2).value
    total = squarefree_count(q, n)
    start, stop = shard if shard is not None else (0, total)
    if not 0 <= start <= stop <= total:
        raise ValueError(f"shard {shard} outside [0, {total}]")
    caps = _caps(H)
    g = (n - 1) // 2
    surj_cache: dict[FiniteAbelianGroup, int] = {}
    acc = 0
    if stop > start and g == 0:
        # genus 0: the class group is trivial
        acc = surj_count(FiniteAbelianGroup(()), H) * (stop - start)
    elif stop > start:
        codes = monic_squarefree_codes(spec, n, start, stop)
        for s in range(0, len(codes), CHUNK):
            chunk = codes[s : s + CHUNK]
            rows = codes_to_coeffs(chunk, q, n)
            counts = batch_point_counts(spec, n, rows, list(range(1, g + 1)))
            _check_counts(counts, q, g, chunk)
            L = batch_l_polynomials(counts, q, g)
            orders = L.sum(axis=1)
            for j, o in enumerate(orders.tolist()):
                if not weil_interval_ok(o, q, g):
                    raise SweepError("L(1) outside the Weil interval", int(chunk[j]))
            try:
                parts = class_group_parts(spec, n, rows, orders, caps, seed, fast=fast)
            except Exception as exc:  # record the offending polynomial
                raise SweepError(f"class group extraction failed: {exc}") from exc
            for A in parts:
                val = surj_cache.get(A)
                if val is None:
                    val = surj_cache[A] = surj_count(A, H)
                acc += val
            if progress is not None:
                progress(start + s + len(chunk), stop)
    return MomentReport(
        q=q,
        n=n,
        H=H,
        count=stop - start,
        sum_surj=acc,
        predicted=pred,
        threshold_status=threshold_status(q, H),
        shards=((start, stop),) if stop > start else (),
        seed=seed,
        wall_time=time.perf_counter() - t0,
    )


def sweep_slow(q: int, n: int, H: FiniteAbelianGroup | str, shard=None, seed: int = 0) -> MomentReport:
    """Reference path: one curve at a time through the brute-force group oracle."""
    from .jacobian import brute_force_group

    t0 = time.perf_counter()
    if isinstance(H, str):
        H = FiniteAbelianGroup.parse(H)
    spec = field_for(q)
    total = squarefree_count(q, n)
    start, stop = shard if shard is not None else (0, total)
    acc = 0
    for code in monic_squarefree_codes(spec, n, start, stop):
        curve = HyperellipticCurve.from_coeffs(spec, codes_to_coeffs(np.array([code]), q, n)[0])
        J = Jacobian(curve)
        G = brute_force_group(J)
        primes = H.primes()
        if J.real:
            facs = G.structure(primes=primes, quotient_by=J.infinity_delta())
        else:
            facs = G.structure(primes=primes)
        acc += surj_count(FiniteAbelianGroup.from_cyclic(facs), H)
    return MomentReport(q, n, H, stop - start, acc, predicted_moment(H, q, n % 2).value,
                        threshold_status(q, H), ((start, stop),) if stop > start else (), seed,
                        time.perf_counter() - t0)


def merge(reports: Iterable[MomentReport]) -> MomentReport:
    """Combine disjoint shards of one (q, n, H) sweep; order does not matter."""
    reports = list(reports)
    if not reports:
        raise ValueError("nothing to merge")
    first = reports[0]
    for r in reports[1:]:
        if (r.q, r.n, r.H, r.seed) != (first.q, first.n, first.H, first.seed):
            raise ValueError("cannot merge reports with different (q, n, H, seed)")
    shards = sorted(s for r in reports for s in r.shards)
    for (a0, b0), (a1, b1) in zip(shards, shards[1:]):
        if a1 < b0:
            raise ValueError(f"overlapping shards {(a0, b0)} and {(a1, b1)}")
    merged: list[list[int]] = []
    for a, b in shards:
        if merged and merged[-1][1] == a:
            merged[-1][1] = b
        else:
            merged.append([a, b])
    return replace(
        first,
        count=sum(r.count for r in reports),
        sum_surj=sum(r.sum_surj for r in reports),
        shards=tuple(tuple(m) for m in merged),
        wall_time=sum(r.wall_time for r in reports),
    )


def empty_report(q: int, n: int, H: FiniteAbelianGroup | str, seed: int = 0) -> MomentReport:
    return sweep(q, n, H, shard=(0, 0), seed=seed)


@dataclass(frozen=True)
class Verdict:
    empirical: Fraction
    predicted: Fraction
    abs_error: Fraction
    mode: str  # "empirical" or "rigorous"
    bound: Fraction | None = None


def compare(report: MomentReport, params: ErrorBoundParams | None = None) -> Verdict:
    """|empirical - predicted|, plus the rigorous bound when q is past the threshold."""
    emp = report.empirical
    if emp is None:
        raise ValueError("empty report")
    err = abs(emp - report.predicted)
    if report.threshold_status == "above threshold" and params is not None:
        try:
            b = point_count_error(params, with_q_factor=True)
        except VacuousBound:
            b = None
        return Verdict(emp, report.predicted, err, "rigorous", b)
    return Verdict(emp, report.predicted, err, "empirical")

