"""Jacobian arithmetic for y^2 = f(x) in Mumford form.

Odd degree (one point at infinity): a class is D - deg(D) inf with D given by
(u, v), deg u <= g.  Even degree (two points inf+ and inf-): the balanced
representation

    D = D_(u,v) + w inf+ + (g - deg u - w) inf- - D_inf,
    D_inf = ceil(g/2) inf+ + floor(g/2) inf-,

with 0 <= w <= g - deg u, which is unique per class.  Internally a real-model
class is handled as D_(u,v) + a inf+ + b inf- with a + b = -deg u, and
w = a + ceil(g/2).
"""

from __future__ import annotations

import hashlib
from functools import lru_cache
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .abelian import factors_from_orders, smith_normal_form, valuation
from .ffield import FieldArith, arith, extend
from .hyperell import HyperellipticCurve, l_polynomial


class JacobianError(ValueError):
    pass


class SylowBudgetExceeded(RuntimeError):
    """Random sampling did not fill the Sylow subgroup within the budget."""


class MumfordDivisor(NamedTuple):
    u: tuple[int, ...]
    v: tuple[int, ...]
    w: int = 0


def stream(*keys) -> np.random.Generator:
    """Counter-based (Philox) generator keyed by a digest of ``keys``."""
    digest = hashlib.blake2b(repr(keys).encode(), digest_size=16).digest()
    key = np.frombuffer(digest, dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant factors d_1 | d_2 | ... with one generator divisor per factor."""

    factors: tuple[int, ...]
    generators: tuple[MumfordDivisor, ...] = ()

    @property
    def order(self) -> int:
        out = 1
        for d in self.factors:
            out *= d
        return out


EXT_TABLE_CAP = 1024


@lru_cache(maxsize=None)
def _extension_data(spec, d: int):
    """Tables for F_(q^d): arithmetic, F_q -> F_(q^d), its inverse on the image, and Frobenius."""
    if spec.q**d > EXT_TABLE_CAP:
        return None
    big, emb = extend(spec, d)
    B = arith(big)
    lift = [emb(spec(c)).index for c in range(spec.q)]
    drop = {b: c for c, b in enumerate(lift)}
    frob = [0] * B.q
    for x in range(B.q):
        y = 1
        for _ in range(spec.q):
            y = B.mul[y][x]
        frob[x] = y
    return B, lift, drop, frob


class Jacobian:
    """Group J(F_q) of a hyperelliptic curve."""

    def __init__(self, curve: HyperellipticCurve):
        self.curve = curve
        self.ar: FieldArith = arith(curve.spec)
        self.f = list(curve.f.coeffs)
        self.g = curve.genus
        self.real = not curve.ramified
        self.shift = (self.g + 1) // 2
        if self.real:
            self.V = self._sqrt_poly_part()
            self.fV = len(self.ar.psub(self.f, self.ar.pmul(self.V, self.V))) - 1
        self._order: int | None = None
        self.zero = MumfordDivisor((1,), (), self.shift if self.real else 0)

    # -- basic data -------------------------------------------------------

    @property
    def model(self) -> str:
        return "real" if self.real else "ramified"

    @property
    def order(self) -> int:
        """|J(F_q)| = L(1)."""
        if self._order is None:
            self._order = l_polynomial(self.curve).at_one()
        return self._order

    def set_order(self, order: int) -> None:
        """Seed the cached L(1) when it was computed in a batch."""
        self._order = int(order)

    @property
    def odd_order(self) -> int:
        m = self.order
        while m % 2 == 0:
            m //= 2
        return m

    def _sqrt_poly_part(self) -> list[int]:
        """Monic V of degree g+1 with deg(f - V^2) <= g."""
        ar = self.ar
        f = self.f
        d = self.g + 1
        V = [0] * d + [1]
        two_inv = ar.inv[2 % ar.p]
        for k in range(d - 1, -1, -1):
            # coefficient of x^(d+k) in f - V^2 fixes V[k]
            diff = ar.psub(f, ar.pmul(V, V))
            c = diff[d + k] if len(diff) > d + k else 0
            V[k] = ar.mul[c][two_inv]
        return V

    def is_valid(self, D: MumfordDivisor) -> bool:
        ar = self.ar
        u, v = list(D.u), list(D.v)
        if not u or u[-1] != 1 or len(u) - 1 > self.g or len(v) >= len(u):
            return False
        if v and v[-1] == 0:
            return False
        if ar.pmod(ar.psub(ar.pmul(v, v), self.f), u):
            return False
        if self.real:
            return 0 <= D.w <= self.g - (len(u) - 1)
        return D.w == 0

    # -- Cantor composition -------------------------------------------------

    def _compose(self, u1, v1, u2, v2):
        """Semi-reduced (u, v) with D1 + D2 = D_(u,v) + div-part; also returns deg d."""
        ar = self.ar
        if u1 == u2 and v1 == v2:
            d, s1, s3 = ar.pxgcd(u1, ar.padd(v1, v1))
            num = ar.padd(ar.pmul(s1, ar.pmul(u1, v1)), ar.pmul(s3, ar.padd(ar.pmul(v1, v1), self.f)))
        else:
            d0, e1, e2 = ar.pxgcd(u1, u2)
            if len(d0) == 1:
                d, s1, s2, s3 = d0, e1, e2, []
            else:
                d, c1, c2 = ar.pxgcd(d0, ar.padd(v1, v2))
                s1, s2, s3 = ar.pmul(c1, e1), ar.pmul(c1, e2), c2
            num = ar.padd(ar.pmul(s1, ar.pmul(u1, v2)), ar.pmul(s2, ar.pmul(u2, v1)))
            if s3:
                num = ar.padd(num, ar.pmul(s3, ar.padd(ar.pmul(v1, v2), self.f)))
        u = ar.pmul(u1, u2)
        if len(d) > 1:
            dd = ar.pmul(d, d)
            u = ar.pdiv_exact(u, dd)
            num = ar.pdiv_exact(num, d)
        v = ar.pmod(num, u)
        return u, v, len(d) - 1

    def _reduce_step(self, u, w):
        """One step through y - w; returns (u'', v'', deg(f - w^2))."""
        ar = self.ar
        t = ar.psub(self.f, ar.pmul(w, w))
        u2 = ar.pmonic(ar.pdiv_exact(t, u))
        v2 = ar.pmod(ar.pneg(w), u2)
        return u2, v2, len(t) - 1

    def _canon_ramified(self, u, v):
        g = self.g
        ar = self.ar
        while len(u) - 1 > g:
            u, v, _ = self._reduce_step(u, v)
        return MumfordDivisor(tuple(u), tuple(v), 0)

    def _canon_real(self, u, v, a):
        """Balanced representative of D_(u,v) + a inf+ + (-deg u - a) inf-."""
        ar = self.ar
        g, V = self.g, self.V
        for _ in range(8 * (g + 2) + 4 * len(u) + 2 * abs(a) + 16):
            du = len(u) - 1
            n = a + self.shift
            if du <= g and 0 <= n <= g - du:
                return MumfordDivisor(tuple(u), tuple(v), n)
            b = -du - a
            if du >= g + 2:
                w = list(v)
            elif n > g - du or du == g + 1:
                w = ar.padd(V, ar.pmod(ar.psub(v, V), u))
            else:
                w = ar.psub(ar.pmod(ar.padd(v, V), u), V)
            u2, v2, dt = self._reduce_step(u, w)
            vm = ar.psub(V, w)
            vp = ar.padd(V, w)
            special = self.fV - g - 1
            p_plus = len(vm) - 1 if vm else special
            p_minus = len(vp) - 1 if vp else special
            d2 = len(u2) - 1
            a, b = a + p_plus - d2, b + p_minus - d2
            u, v = u2, v2
            if a + b != -d2:
                raise AssertionError("degree bookkeeping broke during reduction")
        raise AssertionError("balanced reduction did not terminate")

    # -- group law -------------------------------------------------------

    def _a(self, D: MumfordDivisor) -> int:
        return D.w - self.shift

    def add(self, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
        u, v, dd = self._compose(list(D1.u), list(D1.v), list(D2.u), list(D2.v))
        if not self.real:
            return self._canon_ramified(u, v)
        return self._canon_real(u, v, self._a(D1) + self._a(D2) + dd)

    def negate(self, D: MumfordDivisor) -> MumfordDivisor:
        ar = self.ar
        v = ar.pneg(list(D.v))
        if not self.real:
            return MumfordDivisor(D.u, tuple(v), 0)
        return self._canon_real(list(D.u), v, -self._a(D) - (len(D.u) - 1))

    def involution(self, D: MumfordDivisor) -> MumfordDivisor:
        """(x, y) -> (x, -y); swaps inf+ and inf-."""
        v = self.ar.pneg(list(D.v))
        if not self.real:
            return MumfordDivisor(D.u, tuple(v), 0)
        du = len(D.u) - 1
        b = -du - self._a(D)
        return self._canon_real(list(D.u), v, b)

    def sub(self, D1, D2):
        return self.add(D1, self.negate(D2))

    def double(self, D):
        return self.add(D, D)

    def scalar_mul(self, k: int, D: MumfordDivisor) -> MumfordDivisor:
        if k < 0:
            return self.scalar_mul(-k, self.negate(D))
        result = self.zero
        base = D
        while k:
            if k & 1:
                result = self.add(result, base)
            k >>= 1
            if k:
                base = self.add(base, base)
        return result

    def element_order(self, D: MumfordDivisor, multiple: int | None = None) -> int:
        """Exact order of D given a multiple of it (default L(1))."""
        from .ffield import factor_int

        m = multiple if multiple is not None else self.order
        if self.scalar_mul(m, D) != self.zero:
            raise JacobianError("given multiple is not a multiple of the order")
        for ell in factor_int(m):
            while m % ell == 0 and self.scalar_mul(m // ell, D) == self.zero:
                m //= ell
        return m

    # -- special elements ---------------------------------------------------

    def infinity_delta(self) -> MumfordDivisor:
        """Class of inf+ - inf- (real model only)."""
        if not self.real:
            raise JacobianError("delta needs two points at infinity (even degree)")
        return self._canon_real([1], [], 1)

    def point_divisor(self, x: int, y: int) -> MumfordDivisor:
        """Class of P - inf (ramified) or P - inf- (real) for P = (x, y)."""
        ar = self.ar
        if ar.mul[y][y] != ar.peval(self.f, x):
            raise JacobianError("point is not on the curve")
        u = [ar.neg[x], 1]
        v = [y] if y else []
        if not self.real:
            return self._canon_ramified(u, v)
        return self._canon_real(u, v, 0)

    # -- sampling ---------------------------------------------------------

    def _sqrt_mod(self, u, rng):
        """A square root of f modulo u, or None.

        Tonelli-Shanks in F_q[x]/(u) treated as a field with q^deg(u) elements;
        the result is verified, so a reducible u can only cause a rejection.
        """
        ar = self.ar
        a = ar.pmod(self.f, u)
        if not a:
            return []
        d = len(u) - 1
        Qd = ar.q**d
        if ar.ppowmod(a, (Qd - 1) // 2, u) != [1]:
            return None
        t, s = Qd - 1, 0
        while t % 2 == 0:
            t //= 2
            s += 1
        minus_one = [ar.neg[1]]
        z = None
        for _ in range(32):
            cand = ar.trim([int(c) for c in rng.integers(ar.q, size=d)])
            if cand and ar.ppowmod(cand, (Qd - 1) // 2, u) == minus_one:
                z = cand
                break
        if z is None:
            return None
        c = ar.ppowmod(z, t, u)
        x = ar.ppowmod(a, (t + 1) // 2, u)
        b = ar.ppowmod(a, t, u)
        m = s
        while b != [1]:
            i, bb = 0, b
            while bb != [1]:
                bb = ar.pmulmod(bb, bb, u)
                i += 1
                if i >= m:
                    return None
            e = ar.ppowmod(c, 1 << (m - i - 1), u)
            x = ar.pmulmod(x, e, u)
            c = ar.pmulmod(e, e, u)
            b = ar.pmulmod(b, c, u)
            m = i
        if ar.pmod(ar.psub(ar.pmul(x, x), self.f), u):
            return None
        return x

    def _random_place(self, d: int, rng: np.random.Generator):
        """(u, v) for the place under a random point of degree dividing d, or None.

        A random x0 in F_(q^d) with f(x0) a square gives the point (x0, y0);
        u is the minimal polynomial of x0 and v interpolates the conjugates of
        y0.  Falls back to a random u with a square root of f modulo u when
        F_(q^d) is too large for tables.
        """
        ext = _extension_data(self.curve.spec, d)
        ar = self.ar
        if ext is None:
            cand = [int(c) for c in rng.integers(ar.q, size=d)] + [1]
            root = self._sqrt_mod(cand, rng)
            if root is None:
                return None
            if rng.integers(2):
                root = ar.pmod(ar.pneg(root), cand)
            return cand, root
        B, lift, drop, frob = ext
        x0 = int(rng.integers(B.q))
        y0 = B.sqrt[B.peval([lift[c] for c in self.f], x0)]
        if y0 < 0:
            return None
        if rng.integers(2):
            y0 = B.neg[y0]
        xs, ys = [x0], [y0]
        while frob[xs[-1]] != x0:
            xs.append(frob[xs[-1]])
            ys.append(frob[ys[-1]])
        if frob[ys[-1]] != y0:
            return None  # y0 lies in a larger field than x0
        u = [1]
        for c in xs:
            u = B.pmul(u, [B.neg[c], 1])
        v: list[int] = []
        for i, (c, y) in enumerate(zip(xs, ys)):
            num, den = [1], 1
            for j, c2 in enumerate(xs):
                if j != i:
                    num = B.pmul(num, [B.neg[c2], 1])
                    den = B.mul[den][B.sub[c][c2]]
            v = B.padd(v, B.pscale(num, B.mul[y][B.inv[den]]))
        return [drop[c] for c in u], [drop[c] for c in v]

    def _random_from_rng(self, rng: np.random.Generator) -> MumfordDivisor:
        """Sum of random places of random degrees, total degree at most g.

        The total degree is drawn first, uniformly in [0, g]; places are added
        until it is reached.
        """
        u: list[int] = [1]
        v: list[int] = []
        target = int(rng.integers(0, self.g + 1))
        room = target
        for _ in range(16 * (self.g + 1)):
            if room <= 0:
                break
            place = self._random_place(int(rng.integers(1, room + 1)), rng)
            if place is None:
                continue
            u, v, _ = self._compose(u, v, *place)
            room = target - (len(u) - 1)
        if not self.real:
            return MumfordDivisor(tuple(u), tuple(v), 0)
        du = len(u) - 1
        return MumfordDivisor(tuple(u), tuple(v), int(rng.integers(self.g - du + 1)))

    def random_element(self, seed) -> MumfordDivisor:
        """Deterministic pseudo-random class from ``seed`` (int or tuple)."""
        key = seed if isinstance(seed, tuple) else (seed,)
        return self._random_from_rng(stream("random_element", *key))

    # -- structure ----------------------------------------------------------

    def sylow_table(self, ell: int, seed=0, budget: int | None = None) -> SylowTable:
        """Enumerate the ell-Sylow subgroup together with a relation lattice."""
        v = valuation(self.order, ell)
        table = SylowTable(self, ell, v)
        if v == 0:
            return table
        cof = self.order // ell**v
        budget = budget or 16 + 8 * v
        for attempt in range(8):
            rng = stream("sylow", ell, seed, attempt)
            for _ in range(budget):
                if table.size == ell**v:
                    return table
                Q = self.scalar_mul(cof, self._random_from_rng(rng))
                table.absorb(Q)
            if table.size == ell**v:
                return table
        raise SylowBudgetExceeded(f"{ell}-Sylow not filled after {8 * budget} samples")

    def subgroup_structure(self, primes, cap: int | None = None, seed=0) -> AbelianStructure:
        """Structure of the product of the requested Sylow subgroups.

        ``cap`` truncates each invariant factor's ell-part at ell^cap.
        """
        parts: list[tuple[list[int], list[MumfordDivisor]]] = []
        for ell in sorted(set(primes)):
            _check_prime(ell, self.curve.spec.p)
            t = self.sylow_table(ell, seed=seed)
            facs, gens = t.structure()
            if cap is not None:
                new = []
                for d, G in zip(facs, gens):
                    e = min(d, ell**cap)
                    new.append((e, self.scalar_mul(d // e, G)))
                facs = [e for e, _ in new]
                gens = [G for _, G in new]
            parts.append((facs, gens))
        return _combine_parts(self, parts)


def _check_prime(ell: int, p: int) -> None:
    from .ffield import is_prime

    if ell == 2 or not is_prime(ell):
        raise JacobianError(f"{ell} is not an odd prime")


def _combine_parts(J: Jacobian, parts) -> AbelianStructure:
    """Merge per-prime invariant factor lists (largest first aligned)."""
    r = max((len(f) for f, _ in parts), default=0)
    factors = [1] * r
    gens = [J.zero] * r
    for facs, gs in parts:
        off = r - len(facs)
        for i, (d, G) in enumerate(zip(facs, gs)):
            factors[off + i] *= d
            gens[off + i] = J.add(gens[off + i], G)
    keep = [i for i in range(r) if factors[i] > 1]
    return AbelianStructure(tuple(factors[i] for i in keep), tuple(gens[i] for i in keep))


@dataclass
class SylowTable:
    """All elements of a subgroup of an ell-Sylow subgroup, with coordinates.

    ``coords[D]`` holds the exponent vector of D in the current generators;
    ``relations`` spans all vectors that map to the identity.
    """

    J: Jacobian
    ell: int
    v: int
    gens: list[MumfordDivisor] = field(default_factory=list)
    relations: list[list[int]] = field(default_factory=list)
    coords: dict = field(default_factory=dict)

    def __post_init__(self):
        self.coords = {self.J.zero: ()}

    @property
    def size(self) -> int:
        return len(self.coords)

    def absorb(self, Q: MumfordDivisor) -> bool:
        """Extend the table by Q; returns whether the subgroup grew."""
        J, ell = self.J, self.ell
        k = 0
        cur = Q
        while cur not in self.coords:
            cur = J.scalar_mul(ell, cur)
            k += 1
            if k > self.v:
                raise JacobianError("element is not in the ell-Sylow subgroup")
        if k == 0:
            return False
        r = len(self.gens)
        rel = [-c for c in self.coords[cur]] + [ell**k]
        self.relations = [row + [0] for row in self.relations] + [rel]
        self.gens.append(Q)
        old = list(self.coords.items())
        new = {}
        for D, c in old:
            new[D] = c + (0,)
        step = Q
        for j in range(1, ell**k):
            for D, c in old:
                new[J.add(D, step)] = c + (j,)
            step = J.add(step, Q)
        self.coords = new
        if len(new) != len(old) * ell**k:
            raise AssertionError("subgroup table has collisions")
        return True

    def structure(self, extra_relations=()) -> tuple[list[int], list[MumfordDivisor]]:
        """Invariant factors and generators of (subgroup) / <extra relations>."""
        rels = [list(r) for r in self.relations] + [list(r) for r in extra_relations]
        ng = len(self.gens)
        if ng == 0:
            return [], []
        diag, U, V, Vinv = smith_normal_form(rels, ng)
        facs, gens = [], []
        for i, d in enumerate(diag):
            if d > 1:
                G = self.J.zero
                for j, c in enumerate(Vinv[i]):
                    if c % d:
                        G = self.J.add(G, self.J.scalar_mul(c % d, self.gens[j]))
                facs.append(d)
                gens.append(G)
        return facs, gens


# ---------------------------------------------------------------------------
# brute-force oracle


def _enumerate_pairs(J: Jacobian, max_degree: int | None = None):
    """All (u, v): u monic, deg u <= max_degree, deg v < deg u, u | v^2 - f."""
    ar = J.ar
    q = ar.q
    top = J.g if max_degree is None else max_degree
    f = np.array(J.f, dtype=np.int64)
    yield (1,), ()
    for d in range(1, top + 1):
        idx = np.arange(q**d, dtype=np.int64)
        W = q ** np.arange(d, dtype=np.int64)
        vs = (idx[:, None] // W[None, :]) % q  # all v, low-first, length d
        # v^2 as (N, 2d-1)
        sq = np.zeros((len(vs), 2 * d - 1), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                sq[:, i + j] = ar.add_np[sq[:, i + j], ar.mul_np[vs[:, i], vs[:, j]]]
        width = max(2 * d - 1, len(f))
        base = np.zeros((len(vs), width), dtype=np.int64)
        base[:, : 2 * d - 1] = sq
        for i, c in enumerate(f):
            base[:, i] = ar.sub_np[base[:, i], c]
        for ucode in range(q**d):
            u = [int(ucode // q**i % q) for i in range(d)] + [1]
            R = base.copy()
            for t in range(width - 1, d - 1, -1):
                c = R[:, t]
                for j in range(d):
                    R[:, t - d + j] = ar.sub_np[R[:, t - d + j], ar.mul_np[c, u[j]]]
            ok = ~R[:, :d].any(axis=1)
            for row in vs[ok]:
                vv = [int(x) for x in row]
                while vv and vv[-1] == 0:
                    vv.pop()
                yield tuple(u), tuple(vv)


@dataclass
class BruteForceGroup:
    """Every element of J(F_q) listed explicitly; the group law is computed lazily."""

    J: Jacobian
    elements: list[MumfordDivisor]
    index: dict

    def __len__(self):
        return len(self.elements)

    def add(self, i: int, j: int) -> int:
        return self.index[self.J.add(self.elements[i], self.elements[j])]

    def element_orders(self) -> list[int]:
        return [self.J.element_order(D) for D in self.elements]

    def structure(self, primes=None, quotient_by=None) -> list[int]:
        """Invariant factors read off from |G[ell^j]| counts (no linear algebra).

        With ``quotient_by`` the structure of G / <that element> is returned,
        built from the explicit coset partition.
        """
        from .ffield import factor_int

        orders = self.element_orders()
        N = len(self.elements)
        if quotient_by is not None:
            return _quotient_structure(self, quotient_by, primes)
        if primes is None:
            primes = list(factor_int(N))
        return factors_from_orders(orders, N, primes)


def _quotient_structure(G: BruteForceGroup, D: MumfordDivisor, primes) -> list[int]:
    from .ffield import factor_int

    J = G.J
    sub = [J.zero]
    cur = D
    while cur != J.zero:
        sub.append(cur)
        cur = J.add(cur, D)
    coset_of = {}
    reps = []
    for E in G.elements:
        if E in coset_of:
            continue
        k = len(reps)
        reps.append(E)
        for S in sub:
            coset_of[J.add(E, S)] = k
    Nq = len(reps)
    orders = []
    for E in reps:
        o, cur = 1, E
        while coset_of[cur] != 0:
            cur = J.add(cur, E)
            o += 1
        orders.append(o)
    if primes is None:
        primes = list(factor_int(Nq))
    return factors_from_orders(orders, Nq, primes)


def brute_force_group(J: Jacobian, cap: int = 20000) -> BruteForceGroup:
    """Enumerate all reduced divisors (with every balancing weight)."""
    if J.ar.q**J.g > cap:
        raise JacobianError(f"q^g = {J.ar.q ** J.g} exceeds the brute-force cap {cap}")
    elements = []
    for u, v in _enumerate_pairs(J):
        if J.real:
            for w in range(J.g - (len(u) - 1) + 1):
                elements.append(MumfordDivisor(u, v, w))
        else:
            elements.append(MumfordDivisor(u, v, 0))
    index = {D: i for i, D in enumerate(elements)}
    return BruteForceGroup(J, elements, index)


__all__ = [
    "AbelianStructure",
    "BruteForceGroup",
    "Jacobian",
    "JacobianError",
    "MumfordDivisor",
    "SylowBudgetExceeded",
    "SylowTable",
    "brute_force_group",
    "stream",
]
