"""Odd parts of class groups of quadratic function fields, and Hom/Surj counts.

For y^2 = f(x) with f monic of degree n the ring of functions regular away
from infinity has class group J(F_q) when n is odd and J(F_q)/<delta> when n
is even, delta being the class of inf+ - inf-.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, prod
from typing import Iterable, Sequence

from .abelian import normalize_factors, valuation
from .hyperell import HyperellipticCurve
from .jacobian import Jacobian, JacobianError

LATTICE_CAP = 4096


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """prod Z/d_i with d_1 | d_2 | ...; the empty tuple is the trivial group."""

    factors: tuple[int, ...] = ()

    def __post_init__(self):
        f = tuple(int(d) for d in self.factors)
        if any(d < 2 for d in f):
            raise GroupError(f"invariant factors must be >= 2, got {f}")
        if any(f[i + 1] % f[i] for i in range(len(f) - 1)):
            raise GroupError(f"invariant factors must form a divisibility chain, got {f}")
        object.__setattr__(self, "factors", f)

    @classmethod
    def from_cyclic(cls, orders: Iterable[int]) -> FiniteAbelianGroup:
        """Group prod Z/a_i for arbitrary positive a_i."""
        return cls(tuple(normalize_factors(list(orders))))

    @classmethod
    def parse(cls, text: str) -> FiniteAbelianGroup:
        """Parse a comma-separated invariant-factor list such as "3,3"."""
        text = text.strip()
        if text in ("", "1", "0"):
            return cls(())
        try:
            parts = [int(x) for x in text.split(",")]
        except ValueError as exc:
            raise GroupError(f"cannot parse group {text!r}") from exc
        if any(a < 1 for a in parts):
            raise GroupError(f"cannot parse group {text!r}")
        return cls.from_cyclic(parts)

    @property
    def order(self) -> int:
        return prod(self.factors)

    @property
    def rank(self) -> int:
        return len(self.factors)

    def torsion(self, m: int) -> FiniteAbelianGroup:
        """The m-torsion subgroup G[m]."""
        return FiniteAbelianGroup.from_cyclic(gcd(d, m) for d in self.factors)

    def primes(self) -> list[int]:
        from .ffield import factor_int

        return sorted(factor_int(self.order)) if self.order > 1 else []

    def elements(self):
        return itertools.product(*(range(d) for d in self.factors))

    def __str__(self):
        return ",".join(map(str, self.factors)) or "1"


# ---------------------------------------------------------------------------
# Hom and Surj


def hom_count(A: FiniteAbelianGroup, B: FiniteAbelianGroup) -> int:
    return prod(gcd(d, e) for d in A.factors for e in B.factors)


def _subgroups(H: FiniteAbelianGroup) -> list[frozenset]:
    """All subgroups, as frozensets of element tuples, by closure over cyclic generators."""
    if H.order > LATTICE_CAP:
        raise GroupError(f"|H| = {H.order} exceeds the subgroup-lattice cap {LATTICE_CAP}")
    ds = H.factors

    def add(x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, ds))

    def span(gens):
        zero = tuple(0 for _ in ds)
        seen = {zero}
        frontier = [zero]
        while frontier:
            nxt = []
            for x in frontier:
                for gg in gens:
                    y = add(x, gg)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    cyclic = {span([x]) for x in H.elements()}
    subs = set(cyclic)
    frontier = set(cyclic)
    while frontier:
        new = set()
        for S in frontier:
            for C in cyclic:
                if not C <= S:
                    T = span(list(S | C))
                    if T not in subs:
                        new.add(T)
        subs |= new
        frontier = new
    return sorted(subs, key=len)


def _structure_of(subset: frozenset, ds) -> FiniteAbelianGroup:
    from .abelian import factors_from_orders
    from .ffield import factor_int

    def order(x):
        o = 1
        for a, d in zip(x, ds):
            oa = d // gcd(a, d)
            o = o * oa // gcd(o, oa)
        return o

    N = len(subset)
    if N == 1:
        return FiniteAbelianGroup(())
    return FiniteAbelianGroup(tuple(factors_from_orders([order(x) for x in subset], N, list(factor_int(N)))))


@functools.lru_cache(maxsize=64)
def mobius_table(H: FiniteAbelianGroup) -> tuple[tuple[FiniteAbelianGroup, int], ...]:
    """(B, mu(B, H)) for every subgroup B of H with nonzero Moebius value."""
    subs = _subgroups(H)
    mu: dict[frozenset, int] = {}
    for S in reversed(subs):  # largest first
        if len(S) == H.order:
            mu[S] = 1
            continue
        mu[S] = -sum(m for T, m in mu.items() if S < T)
    return tuple((_structure_of(S, H.factors), m) for S, m in mu.items() if m)


def surj_count(A: FiniteAbelianGroup, H: FiniteAbelianGroup) -> int:
    """|Surj(A, H)| by Moebius inversion over the subgroup lattice of H."""
    if H.order == 1:
        return 1
    if A.rank < H.rank:
        return 0
    return sum(m * hom_count(A, B) for B, m in mobius_table(H))


def surj_count_bruteforce(A: FiniteAbelianGroup, H: FiniteAbelianGroup) -> int:
    """Count surjections by listing every homomorphism (images of A's generators)."""
    hs = list(H.elements())
    ds = H.factors

    def scale(x, k):
        return tuple((a * k) % d for a, d in zip(x, ds))

    allowed = [[h for h in hs if not any(scale(h, d))] for d in A.factors]
    count = 0
    for images in itertools.product(*allowed):
        seen = {tuple(0 for _ in ds)}
        frontier = list(seen)
        while frontier:
            nxt = []
            for x in frontier:
                for y in images:
                    z = tuple((a + b) % d for a, b, d in zip(x, y, ds))
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
            frontier = nxt
        if len(seen) == H.order:
            count += 1
    return count


# ---------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class MomentPrediction:
    H: FiniteAbelianGroup
    q: int
    h: int
    parity: int
    wedge_torsion: int
    value: Fraction


def wedge_torsion_order(H: FiniteAbelianGroup, h: int) -> int:
    """|wedge^2 H [h]| = prod_{i<j} gcd(d_i, h) for H = sum Z/d_i, d_1 | d_2 | ..."""
    ds = H.factors
    return prod(gcd(ds[i], h) for i in range(len(ds)) for _ in range(i + 1, len(ds)))


def predicted_moment(H: FiniteAbelianGroup, q: int, parity: int) -> MomentPrediction:
    """Limit of the average of |Surj(Cl, H)|; parity is n mod 2."""
    if parity not in (0, 1):
        raise GroupError("parity must be 0 or 1")
    if q % 2 == 0:
        raise GroupError("q must be odd")
    if gcd(H.order, q) != 1:
        raise GroupError("|H| must be coprime to q")
    if H.order % 2 == 0:
        raise GroupError("H must have odd order")
    h = gcd(H.order, q - 1)
    w = wedge_torsion_order(H, h)
    value = Fraction(w) if parity == 1 else Fraction(w, H.order)
    return MomentPrediction(H, q, h, parity, w, value)


# ---------------------------------------------------------------------------
# class groups


def _as_jacobian(obj) -> Jacobian:
    if isinstance(obj, Jacobian):
        return obj
    if isinstance(obj, HyperellipticCurve):
        return Jacobian(obj)
    raise TypeError("expected a curve or a Jacobian")


def class_group_part(curve_or_jacobian, primes: Sequence[int], seed=0, cap: int | None = None) -> FiniteAbelianGroup:
    """The primes-part of the class group (optionally truncated at ell^cap)."""
    J = _as_jacobian(curve_or_jacobian)
    factors: list[int] = []
    for ell in sorted(set(primes)):
        if ell % 2 == 0:
            raise JacobianError(f"{ell} must be an odd prime")
        if valuation(J.order, ell) == 0:
            continue
        facs = _ell_part(J, ell, seed)
        if cap is not None:
            facs = [min(d, ell**cap) for d in facs]
        factors.extend(facs)
    return FiniteAbelianGroup.from_cyclic(factors)


def class_group_odd(curve_or_jacobian, relevant_primes: Sequence[int], seed=0) -> FiniteAbelianGroup:
    return class_group_part(curve_or_jacobian, relevant_primes, seed=seed)


def _ell_part(J: Jacobian, ell: int, seed) -> list[int]:
    table = J.sylow_table(ell, seed=seed)
    if not J.real:
        facs, _ = table.structure()
        return facs
    cof = J.order // ell**table.v
    d = J.scalar_mul(cof, J.infinity_delta())
    facs, _ = table.structure(extra_relations=[table.coords[d]])
    return facs


__all__ = [
    "FiniteAbelianGroup",
    "GroupError",
    "MomentPrediction",
    "class_group_odd",
    "class_group_part",
    "hom_count",
    "mobius_table",
    "predicted_moment",
    "surj_count",
    "surj_count_bruteforce",
    "wedge_torsion_order",
]
