"""Group law on J(F_q) for y^2 = f, deg f odd, decided by principal divisors.

This does not use composition or reduction.  A reduced divisor D = E - (deg E) inf
is turned into the multiset of geometric points of E over a field F_Q that
contains every place of degree <= g.  Then D1 + D2 = D3 exactly when
E1 + E2 + iota(E3) is the zero divisor of a function a(x) - b(x) y with pole
order deg E1 + deg E2 + deg E3 at infinity, and all such zero divisors are
listed once per curve.
"""

from __future__ import annotations

import itertools
from math import lcm

from .ffield import arith, extend
from .jacobian import Jacobian, JacobianError, MumfordDivisor, _enumerate_pairs

EXT_CAP = 1024


class DivisorOracle:
    def __init__(self, J: Jacobian):
        if J.real:
            raise JacobianError("the divisor oracle handles odd-degree models only")
        self.J = J
        spec = J.curve.spec
        g = J.g
        k = lcm(*range(1, g + 1)) if g else 1
        if spec.q**k > EXT_CAP:
            raise JacobianError(f"splitting field of size {spec.q ** k} exceeds {EXT_CAP}")
        big, emb = extend(spec, k)
        self.big = arith(big)
        self.small = J.ar
        self.lift = [emb(spec(c)).index for c in range(spec.q)]
        self.F = self._lift(J.f)
        self.elements = [MumfordDivisor(u, v, 0) for u, v in _enumerate_pairs(J)]
        self.points = {D: self._points(D) for D in self.elements}
        self.zero_divisors = self._zero_divisors(3 * g)

    # helpers over the big field ----------------------------------------------

    def _lift(self, poly):
        return [self.lift[c] for c in poly]

    def _roots(self, poly):
        """{root: multiplicity} over F_Q for a lifted polynomial."""
        B = self.big
        out = {}
        for x0 in range(B.q):
            p = list(poly)
            e = 0
            lin = [B.neg[x0], 1]
            while p and B.peval(p, x0) == 0:
                p, r = B.pdivmod(p, lin)
                assert not r
                e += 1
            if e:
                out[x0] = e
        return out

    def _points(self, D: MumfordDivisor) -> tuple:
        B = self.big
        u, v = self._lift(D.u), self._lift(D.v)
        pts = []
        for x0, e in self._roots(u).items():
            pts += [(x0, B.peval(v, x0))] * e
        if len(pts) != len(D.u) - 1:
            raise JacobianError("a place of the divisor is not rational over the splitting field")
        return tuple(sorted(pts))

    def _iota(self, pts) -> tuple:
        return tuple(sorted((x, self.big.neg[y]) for x, y in pts))

    def _zero_divisor(self, a, b):
        """Points of a - b y with multiplicity, or None if some zero is not F_Q-rational."""
        B = self.big
        A, Bb = self._lift(a), self._lift(b)
        if Bb:
            c, _, _ = B.pxgcd(A, Bb) if A else (B.pmonic(Bb), None, None)
        else:
            c = B.pmonic(A)
        A1 = B.pdiv_exact(A, c) if A else []
        B1 = B.pdiv_exact(Bb, c) if Bb else []
        pts = []
        for x0, e in self._roots(c).items():
            fx = B.peval(self.F, x0)
            if fx == 0:
                pts += [(x0, 0)] * (2 * e)
            else:
                s = B.sqrt[fx]
                if s < 0:
                    return None
                pts += [(x0, s)] * e + [(x0, B.neg[s])] * e
        norm = B.psub(B.pmul(A1, A1), B.pmul(B.pmul(B1, B1), self.F))
        for x0, e in self._roots(norm).items():
            fx = B.peval(self.F, x0)
            if fx == 0:
                pts += [(x0, 0)] * e
            else:
                y0 = B.mul[B.peval(A1, x0)][B.inv[B.peval(B1, x0)]]
                assert B.mul[y0][y0] == fx
                pts += [(x0, y0)] * e
        return tuple(sorted(pts))

    def _zero_divisors(self, top: int) -> dict[int, set]:
        """Zero divisors of every a - b y with pole order N <= top, keyed by N."""
        q = self.small.q
        n = self.J.curve.n
        out: dict[int, set] = {N: set() for N in range(top + 1)}
        da = top // 2
        db = (top - n) // 2 if top >= n else -1
        for ca in itertools.product(range(q), repeat=da + 1):
            a = self.small.trim(list(ca))
            for cb in itertools.product(range(q), repeat=db + 1) if db >= 0 else [()]:
                b = self.small.trim(list(cb))
                if not a and not b:
                    continue
                N = max(2 * (len(a) - 1) if a else -1, 2 * (len(b) - 1) + n if b else -1)
                if N > top:
                    continue
                Z = self._zero_divisor(a, b)
                if Z is not None and len(Z) == N:
                    out[N].add(Z)
        return out

    # group law -----------------------------------------------------------------

    def add(self, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
        E = self.points[D1] + self.points[D2]
        found = []
        for D3 in self.elements:
            Z = tuple(sorted(E + self._iota(self.points[D3])))
            if Z in self.zero_divisors[len(Z)]:
                found.append(D3)
        if len(found) != 1:
            raise AssertionError(f"oracle found {len(found)} sums")
        return found[0]

    def scalar_mul(self, k: int, D: MumfordDivisor) -> MumfordDivisor:
        if k < 0:
            return self.scalar_mul(-k, self.negate(D))
        acc = MumfordDivisor((1,), (), 0)
        base = D
        while k:
            if k & 1:
                acc = self.add(acc, base)
            base = self.add(base, base)
            k >>= 1
        return acc

    def negate(self, D: MumfordDivisor) -> MumfordDivisor:
        target = self._iota(self.points[D])
        for E in self.elements:
            if self.points[E] == target:
                return E
        raise AssertionError("no element with the reflected support")
