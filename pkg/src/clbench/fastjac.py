"""Compiled Jacobian arithmetic on integer-encoded divisors.

Mirrors ``Jacobian`` (same reduction rules, same canonical forms) but runs
under numba with dense field tables, so a group operation costs about a
microsecond.  A reduced divisor (u, v, w) is packed into one integer:

    code = ((deg u * q^g + ucode) * q^g + vcode) * (g + 1) + w

where ucode/vcode are the base-q numbers formed by the low coefficients of
u and v.  The packing needs (g + 1)^2 q^(2g) < 2^62.
"""

from __future__ import annotations

from typing import NamedTuple

import numba
import numpy as np

from .jacobian import Jacobian, MumfordDivisor

L = 24  # polynomial buffer length; enough for genus <= 6


@numba.njit(cache=True)
def _deg(a):
    for i in range(a.shape[0] - 1, -1, -1):
        if a[i] != 0:
            return i
    return -1


@numba.njit(cache=True)
def _add(a, b, T):
    out = np.zeros(L, np.int64)
    for i in range(max(_deg(a), _deg(b)) + 1):
        out[i] = T.add[a[i], b[i]]
    return out


@numba.njit(cache=True)
def _sub(a, b, T):
    out = np.zeros(L, np.int64)
    for i in range(max(_deg(a), _deg(b)) + 1):
        out[i] = T.sub[a[i], b[i]]
    return out


@numba.njit(cache=True)
def _neg(a, T):
    out = np.zeros(L, np.int64)
    for i in range(_deg(a) + 1):
        out[i] = T.neg[a[i]]
    return out


@numba.njit(cache=True)
def _mul(a, b, T):
    out = np.zeros(L, np.int64)
    da, db = _deg(a), _deg(b)
    for i in range(da + 1):
        x = a[i]
        if x == 0:
            continue
        for j in range(db + 1):
            y = b[j]
            if y:
                out[i + j] = T.add[out[i + j], T.mul[x, y]]
    return out


@numba.njit(cache=True)
def _divmod(a, b, T):
    db = _deg(b)
    r = a.copy()
    qt = np.zeros(L, np.int64)
    inv_lc = T.inv[b[db]]
    for top in range(_deg(r), db - 1, -1):
        c = r[top]
        if c:
            c = T.mul[c, inv_lc]
            qt[top - db] = c
            base = top - db
            for j in range(db + 1):
                if b[j]:
                    r[base + j] = T.sub[r[base + j], T.mul[c, b[j]]]
    return qt, r


@numba.njit(cache=True)
def _mod(a, b, T):
    if _deg(a) < _deg(b):
        return a.copy()
    return _divmod(a, b, T)[1]


@numba.njit(cache=True)
def _scale(a, c, T):
    out = np.zeros(L, np.int64)
    for i in range(_deg(a) + 1):
        out[i] = T.mul[c, a[i]]
    return out


@numba.njit(cache=True)
def _monic(a, T):
    d = _deg(a)
    if d < 0 or a[d] == 1:
        return a.copy()
    return _scale(a, T.inv[a[d]], T)


@numba.njit(cache=True)
def _xgcd(a, b, T):
    r0, r1 = a.copy(), b.copy()
    s0 = np.zeros(L, np.int64)
    s0[0] = 1
    s1 = np.zeros(L, np.int64)
    t0 = np.zeros(L, np.int64)
    t1 = np.zeros(L, np.int64)
    t1[0] = 1
    while _deg(r1) >= 0:
        qt, r = _divmod(r0, r1, T)
        r0, r1 = r1, r
        s0, s1 = s1, _sub(s0, _mul(qt, s1, T), T)
        t0, t1 = t1, _sub(t0, _mul(qt, t1, T), T)
    d = _deg(r0)
    if d >= 0 and r0[d] != 1:
        c = T.inv[r0[d]]
        r0, s0, t0 = _scale(r0, c, T), _scale(s0, c, T), _scale(t0, c, T)
    return r0, s0, t0


class _Ctx(NamedTuple):
    add: np.ndarray
    sub: np.ndarray
    mul: np.ndarray
    neg: np.ndarray
    inv: np.ndarray
    f: np.ndarray
    V: np.ndarray
    q: int
    g: int
    real: int
    shift: int
    fV: int
    Qg: int


@numba.njit(cache=True)
def _encode(u, v, w, T):
    du = _deg(u)
    uc = 0
    vc = 0
    for i in range(du - 1, -1, -1):
        uc = uc * T.q + u[i]
        vc = vc * T.q + v[i]
    return ((du * T.Qg + uc) * T.Qg + vc) * (T.g + 1) + w


@numba.njit(cache=True)
def _decode(code, T):
    w = code % (T.g + 1)
    code //= T.g + 1
    vc = code % T.Qg
    code //= T.Qg
    uc = code % T.Qg
    du = code // T.Qg
    u = np.zeros(L, np.int64)
    v = np.zeros(L, np.int64)
    for i in range(du):
        u[i] = uc % T.q
        uc //= T.q
        v[i] = vc % T.q
        vc //= T.q
    u[du] = 1
    return u, v, w


@numba.njit(cache=True)
def _compose(u1, v1, u2, v2, T):
    same = _deg(u1) == _deg(u2) and _deg(v1) == _deg(v2)
    if same:
        for i in range(L):
            if u1[i] != u2[i] or v1[i] != v2[i]:
                same = False
                break
    if same:
        d, s1, s3 = _xgcd(u1, _add(v1, v1, T), T)
        num = _add(_mul(s1, _mul(u1, v1, T), T), _mul(s3, _add(_mul(v1, v1, T), T.f, T), T), T)
    else:
        d0, e1, e2 = _xgcd(u1, u2, T)
        if _deg(d0) == 0:
            d, s1, s2 = d0, e1, e2
            num = _add(_mul(s1, _mul(u1, v2, T), T), _mul(s2, _mul(u2, v1, T), T), T)
        else:
            d, c1, c2 = _xgcd(d0, _add(v1, v2, T), T)
            s1 = _mul(c1, e1, T)
            s2 = _mul(c1, e2, T)
            num = _add(_mul(s1, _mul(u1, v2, T), T), _mul(s2, _mul(u2, v1, T), T), T)
            num = _add(num, _mul(c2, _add(_mul(v1, v2, T), T.f, T), T), T)
    u = _mul(u1, u2, T)
    dd = _deg(d)
    if dd > 0:
        u = _divmod(u, _mul(d, d, T), T)[0]
        num = _divmod(num, d, T)[0]
    v = _mod(num, u, T)
    return u, v, dd


@numba.njit(cache=True)
def _reduce_step(u, w, T):
    t = _sub(T.f, _mul(w, w, T), T)
    u2 = _monic(_divmod(t, u, T)[0], T)
    v2 = _mod(_neg(w, T), u2, T)
    return u2, v2


@numba.njit(cache=True)
def _canon(u, v, a, T):
    """Canonical code of D_(u,v) + a inf+ + ... (a ignored for odd degree)."""
    g = T.g
    if T.real == 0:
        while _deg(u) > g:
            u, v = _reduce_step(u, v, T)
        return _encode(u, v, 0, T)
    for _ in range(200):
        du = _deg(u)
        n = a + T.shift
        if du <= g and n >= 0 and n <= g - du:
            return _encode(u, v, n, T)
        b = -du - a
        if du >= g + 2:
            w = v.copy()
        elif n > g - du or du == g + 1:
            w = _add(T.V, _mod(_sub(v, T.V, T), u, T), T)
        else:
            w = _sub(_mod(_add(v, T.V, T), u, T), T.V, T)
        u2, v2 = _reduce_step(u, w, T)
        dm = _deg(_sub(T.V, w, T))
        dp = _deg(_add(T.V, w, T))
        special = T.fV - g - 1
        p_plus = dm if dm >= 0 else special
        p_minus = dp if dp >= 0 else special
        d2 = _deg(u2)
        a = a + p_plus - d2
        b = b + p_minus - d2
        u, v = u2, v2
    return -1


@numba.njit(cache=True)
def add_codes(c1, c2, T):
    u1, v1, w1 = _decode(c1, T)
    u2, v2, w2 = _decode(c2, T)
    u, v, dd = _compose(u1, v1, u2, v2, T)
    return _canon(u, v, w1 + w2 - 2 * T.shift + dd, T)


@numba.njit(cache=True)
def neg_code(c, T):
    u, v, w = _decode(c, T)
    v = _neg(v, T)
    return _canon(u, v, -(w - T.shift) - _deg(u), T)


@numba.njit(cache=True)
def zero_code(T):
    u = np.zeros(L, np.int64)
    u[0] = 1
    return _encode(u, u * 0, T.shift if T.real else 0, T)


@numba.njit(cache=True)
def mul_code(k, c, T):
    if k < 0:
        k = -k
        c = neg_code(c, T)
    result = zero_code(T)
    base = c
    while k:
        if k & 1:
            result = add_codes(result, base, T)
        k >>= 1
        if k:
            base = add_codes(base, base, T)
    return result


@numba.njit(cache=True)
def add_many(codes, c, T):
    out = np.empty_like(codes)
    for i in range(codes.shape[0]):
        out[i] = add_codes(codes[i], c, T)
    return out


@numba.njit(cache=True)
def random_point_sums(f, sqrt_table, g, real, draws, T):
    """Sum of up to g random affine points per draw row; returns codes.

    ``draws`` rows hold 16 g + 2 uniform integers: (x, sign) attempts, then
    the number of points and the weight.
    """
    out = np.empty(draws.shape[0], np.int64)
    for r in range(draws.shape[0]):
        u = np.zeros(L, np.int64)
        u[0] = 1
        v = np.zeros(L, np.int64)
        pos = 0
        npts = draws[r, draws.shape[1] - 2] % (g + 1)
        for _ in range(npts):
            for _try in range(8):
                x = draws[r, pos] % T.q
                sgn = draws[r, pos + 1] & 1
                pos += 2
                fx = 0
                for i in range(_deg(f), -1, -1):
                    fx = T.add[T.mul[fx, x], f[i]]
                y = sqrt_table[fx]
                if y >= 0:
                    if sgn:
                        y = T.neg[y]
                    pu = np.zeros(L, np.int64)
                    pu[0] = T.neg[x]
                    pu[1] = 1
                    pv = np.zeros(L, np.int64)
                    pv[0] = y
                    u, v, _ = _compose(u, v, pu, pv, T)
                    break
        du = _deg(u)
        w = 0
        if real:
            w = draws[r, draws.shape[1] - 1] % (g - du + 1)
        out[r] = _encode(u, v, w, T)
    return out


class FastJacobian:
    """Code-level view of a ``Jacobian``; codes are plain Python ints."""

    def __init__(self, J: Jacobian):
        g, q = J.g, J.ar.q
        if (g + 1) ** 2 * q ** (2 * g) >= 2**62:
            raise OverflowError("divisor codes would not fit in 64 bits")
        if 3 * g + 4 > L:
            raise OverflowError(f"genus {g} is too large for the compiled buffers")
        self.J = J
        ar = J.ar
        f = np.zeros(L, np.int64)
        f[: len(J.f)] = J.f
        V = np.zeros(L, np.int64)
        if J.real:
            V[: len(J.V)] = J.V
        self.T = _Ctx(
            ar.add_np.astype(np.int64),
            ar.sub_np.astype(np.int64),
            ar.mul_np.astype(np.int64),
            ar.neg_np.astype(np.int64),
            np.array(ar.inv, dtype=np.int64),
            f,
            V,
            q,
            g,
            int(J.real),
            J.shift,
            J.fV if J.real else 0,
            q**g,
        )
        self.f = f
        self.sqrt = np.array(ar.sqrt, dtype=np.int64)
        self.zero = int(zero_code(self.T))

    def encode(self, D: MumfordDivisor) -> int:
        q, g = self.J.ar.q, self.J.g
        du = len(D.u) - 1
        uc = vc = 0
        for i in range(du - 1, -1, -1):
            uc = uc * q + D.u[i]
            vc = vc * q + (D.v[i] if i < len(D.v) else 0)
        return ((du * q**g + uc) * q**g + vc) * (g + 1) + D.w

    def decode(self, code: int) -> MumfordDivisor:
        q, g = self.J.ar.q, self.J.g
        w = code % (g + 1)
        code //= g + 1
        vc = code % q**g
        code //= q**g
        uc, du = code % q**g, code // q**g
        u = [(uc // q**i) % q for i in range(du)] + [1]
        v = [(vc // q**i) % q for i in range(du)]
        while v and v[-1] == 0:
            v.pop()
        return MumfordDivisor(tuple(u), tuple(v), w)

    def add(self, a: int, b: int) -> int:
        return int(add_codes(a, b, self.T))

    def neg(self, a: int) -> int:
        return int(neg_code(a, self.T))

    def mul(self, k: int, a: int) -> int:
        return int(mul_code(k, a, self.T))

    def add_many(self, codes: np.ndarray, c: int) -> np.ndarray:
        return add_many(codes, c, self.T)

    def random_points(self, rng: np.random.Generator, count: int) -> np.ndarray:
        g = self.J.g
        draws = rng.integers(0, 2**31, size=(count, 16 * g + 2), dtype=np.int64)
        return random_point_sums(self.f, self.sqrt, g, int(self.J.real), draws, self.T)


@numba.njit(cache=True)
def mul_many(k, codes, T):
    out = np.empty_like(codes)
    for i in range(codes.shape[0]):
        out[i] = mul_code(k, codes[i], T)
    return out


def _projected(cands, cof, T, batch=4):
    """cof * c for each candidate, computed lazily in small batches."""
    for s in range(0, cands.shape[0], batch):
        yield from mul_many(cof, cands[s : s + batch], T).tolist()


def sylow_factors(FJ: FastJacobian, order: int, ell: int, seed=0, quotient_delta: bool = False) -> list[int]:
    """Invariant factors of the ell-Sylow subgroup of J(F_q), or of its image
    in J(F_q)/<delta> when ``quotient_delta`` is set (even degree only).

    Same algorithm as ``Jacobian.sylow_table``: project random classes into
    the Sylow subgroup, grow an explicit table of the generated subgroup, and
    read the structure off the Smith form of the relations.
    """
    from .abelian import smith_normal_form, valuation
    from .jacobian import SylowBudgetExceeded, stream

    J = FJ.J
    v = valuation(order, ell)
    if v == 0:
        return []
    cof = order // ell**v
    delta = None
    if quotient_delta:
        delta = FJ.mul(cof, FJ.encode(J.infinity_delta()))
        if v == 1:
            return [] if delta != FJ.zero else [ell]
    elif v == 1:
        return [ell]
    full = ell**v
    codes = np.array([FJ.zero], dtype=np.int64)
    coords: dict[int, tuple] = {FJ.zero: ()}
    gens: list[int] = []
    relations: list[list[int]] = []
    budget = 16 + 8 * v
    for attempt in range(8):
        rng = stream("sylow", ell, seed, attempt)
        if attempt < 2:
            cands = FJ.random_points(rng, budget)
        else:
            cands = np.array([FJ.encode(J._random_from_rng(rng)) for _ in range(budget)], dtype=np.int64)
        for Q in _projected(cands, cof, FJ.T):
            if len(coords) == full:
                break
            k, cur = 0, Q
            while cur not in coords:
                cur = FJ.mul(ell, cur)
                k += 1
            if k == 0:
                continue
            relations = [row + [0] for row in relations] + [[-c for c in coords[cur]] + [ell**k]]
            gens.append(Q)
            old_codes = codes
            old_coords = [coords[c] for c in old_codes.tolist()]
            blocks = [old_codes]
            step = Q
            for j in range(1, ell**k):
                blocks.append(FJ.add_many(old_codes, step))
                step = FJ.add(step, Q)
            codes = np.concatenate(blocks)
            coords = {}
            for j, block in enumerate(blocks):
                for c, co in zip(block.tolist(), old_coords):
                    coords[c] = co + (j,)
            if len(coords) != len(codes):
                raise AssertionError("subgroup table has collisions")
        if len(coords) == full:
            break
    else:
        raise SylowBudgetExceeded(f"{ell}-Sylow not filled after {8 * budget} samples")
    rels = relations + ([list(coords[delta])] if delta is not None else [])
    diag = smith_normal_form(rels, len(gens))[0]
    return [d for d in diag if d > 1]
