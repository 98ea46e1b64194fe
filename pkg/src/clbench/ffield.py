"""Odd-characteristic finite fields, their extensions, and polynomials over them.

Elements of F_q with q = p^k are encoded as integers in [0, q): the
coefficient vector (c_0, ..., c_{k-1}) of c_0 + c_1 t + ... + c_{k-1} t^{k-1}
over F_p, modulo the field's defining polynomial, maps to sum c_i p^i.
The prime field therefore encodes as the plain residues 0..p-1.

Every field F_{p^D} is defined by a pseudo-Conway polynomial: the
lexicographically least primitive polynomial of degree D whose roots are
compatible with the ones already chosen for the proper subfields.  This makes
the embeddings F_{p^a} -> F_{p^b} canonical, so towers commute.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

MAX_FIELD_SIZE = 2**40
TABLE_LIMIT = 1024  # dense add/mul tables are only built below this size


class FieldError(ValueError):
    pass


# ---------------------------------------------------------------------------
# integer helpers


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factor_int(n: int) -> dict[int, int]:
    """Trial-division factorisation; fine for the sizes handled here (< 2^41)."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


# ---------------------------------------------------------------------------
# polynomials over F_p as low-first int lists (used for moduli only)


def _pm_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pm_mulmod(a, b, mod, p):
    if not a or not b:
        return []
    res = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] += x * y
    return _pm_reduce(res, mod, p)


def _pm_reduce(a, mod, p):
    # mod is monic
    a = [x % p for x in a]
    d = len(mod) - 1
    for top in range(len(a) - 1, d - 1, -1):
        c = a[top]
        if c:
            base = top - d
            for j in range(d):
                a[base + j] = (a[base + j] - c * mod[j]) % p
            a[top] = 0
    return _pm_trim(a[:d] if len(a) > d else a)


def _pm_powmod(base, e, mod, p):
    result = [1]
    b = _pm_reduce(list(base), mod, p)
    while e:
        if e & 1:
            result = _pm_mulmod(result, b, mod, p)
        e >>= 1
        if e:
            b = _pm_mulmod(b, b, mod, p)
    return result


def _pm_sub(a, b, p):
    n = max(len(a), len(b))
    res = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]
    return _pm_trim(res)


def _pm_gcd(a, b, p):
    a, b = _pm_trim(list(a)), _pm_trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        bm = [(x * inv) % p for x in b]
        a = _pm_reduce(a, bm, p) if len(a) >= len(bm) else a
        a, b = b, a
    return a


def _pm_eval_at(poly, y, mod, p):
    """Evaluate an F_p-coefficient polynomial at an element y of F_p[t]/(mod)."""
    acc: list[int] = []
    for c in reversed(poly):
        acc = _pm_mulmod(acc, y, mod, p)
        if c:
            acc = _pm_trim([((acc[0] if acc else 0) + c) % p] + acc[1:])
    return acc


def is_irreducible_mod_p(poly: Sequence[int], p: int) -> bool:
    """Rabin's test for a monic polynomial over F_p."""
    poly = [x % p for x in poly]
    k = len(poly) - 1
    if k < 1 or poly[-1] != 1:
        return False
    if k == 1:
        return True
    x = [0, 1]
    if _pm_sub(_pm_powmod(x, p**k, poly, p), x, p):
        return False
    for r in factor_int(k):
        h = _pm_sub(_pm_powmod(x, p ** (k // r), poly, p), x, p)
        if len(_pm_gcd(poly, h, p)) > 1:
            return False
    return True


@functools.lru_cache(maxsize=None)
def conway_modulus(p: int, degree: int) -> tuple[int, ...]:
    """Pseudo-Conway polynomial of the given degree over F_p, low-first and monic.

    Candidates run through lexicographic order of (c_{D-1}, ..., c_0).  A
    candidate is accepted when t is primitive modulo it and, for every proper
    divisor d of D, t^((p^D-1)/(p^d-1)) is a root of the degree-d choice.
    """
    order = p**degree - 1
    primes = list(factor_int(order))
    subs = [(d, conway_modulus(p, d)) for d in _divisors(degree) if d < degree]
    t = [0, 1]
    for tail in itertools.product(range(p), repeat=degree):
        cand = list(reversed(tail)) + [1]
        if cand[0] == 0:
            continue
        if _pm_powmod(t, order, cand, p) != [1]:
            continue
        if any(_pm_powmod(t, order // r, cand, p) == [1] for r in primes):
            continue
        ok = True
        for d, sub in subs:
            y = _pm_powmod(t, order // (p**d - 1), cand, p)
            if _pm_eval_at(sub, y, cand, p):
                ok = False
                break
        if ok:
            return tuple(cand)
    raise FieldError(f"no pseudo-Conway polynomial for p={p}, degree={degree}")


# ---------------------------------------------------------------------------
# field specs and elements


@dataclass(frozen=True)
class FieldSpec:
    """The field F_{p^k} = F_p[t]/(modulus)."""

    p: int
    k: int = 1
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if not is_prime(self.p) or self.p == 2:
            raise FieldError(f"characteristic must be an odd prime, got {self.p}")
        if self.k < 1:
            raise FieldError("extension degree must be >= 1")
        if self.p**self.k > MAX_FIELD_SIZE:
            raise FieldError(f"field size {self.p}^{self.k} exceeds 2^40")
        if not self.modulus:
            object.__setattr__(self, "modulus", conway_modulus(self.p, self.k))
        else:
            mod = tuple(int(c) % self.p for c in self.modulus)
            if len(mod) != self.k + 1 or mod[-1] != 1:
                raise FieldError("modulus must be monic of degree k")
            if not is_irreducible_mod_p(mod, self.p):
                raise FieldError(f"modulus {mod} is reducible over F_{self.p}")
            object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def is_conway(self) -> bool:
        return self.k == 1 or self.modulus == conway_modulus(self.p, self.k)

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.spec != self:
                raise FieldError("element belongs to a different field")
            return value
        if isinstance(value, (list, tuple)):
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) > self.k:
                raise FieldError("too many coefficients")
            return FieldElement(self, tuple(coeffs + [0] * (self.k - len(coeffs))))
        value = int(value)
        if self.k == 1:
            return FieldElement(self, (value % self.p,))
        if not 0 <= value < self.q:
            raise FieldError(f"encoded element {value} out of range for F_{self.q}")
        return FieldElement(self, tuple(decode(value, self.p, self.k)))

    def zero(self) -> FieldElement:
        return self(0)

    def one(self) -> FieldElement:
        return self(1)

    def elements(self) -> Iterator[FieldElement]:
        for i in range(self.q):
            yield self(i)

    def generator(self) -> FieldElement:
        """The class of t; a primitive element whenever the modulus is pseudo-Conway."""
        if self.k == 1:
            return self(-self.modulus[0])
        return self([0, 1])

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"


def decode(index: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        index, r = divmod(index, p)
        out.append(r)
    return out


def encode(coeffs: Sequence[int], p: int) -> int:
    v = 0
    for c in reversed(coeffs):
        v = v * p + c
    return v


@dataclass(frozen=True)
class FieldElement:
    spec: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def index(self) -> int:
        return encode(self.coeffs, self.spec.p)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def _coerce(self, other) -> FieldElement:
        if isinstance(other, FieldElement):
            if other.spec != self.spec:
                raise FieldError("mixed-field arithmetic")
            return other
        return self.spec(other)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.spec.p
        return FieldElement(self.spec, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        s = self.spec
        prod = _pm_mulmod(list(self.coeffs), list(other.coeffs), list(s.modulus), s.p)
        return FieldElement(s, tuple(prod + [0] * (s.k - len(prod))))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        s = self.spec
        if e < 0:
            return self.inverse() ** (-e)
        res = _pm_powmod(list(self.coeffs), e, list(s.modulus), s.p)
        return FieldElement(s, tuple(res + [0] * (s.k - len(res))))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return self ** (self.spec.q - 2)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __repr__(self):
        if self.spec.k == 1:
            return f"{self.coeffs[0]}"
        return f"{self.spec!r}{list(self.coeffs)}"


def quadratic_character(a: FieldElement) -> int:
    """+1 on nonzero squares, -1 on non-squares, 0 at zero."""
    if a.is_zero():
        return 0
    r = a ** ((a.spec.q - 1) // 2)
    return 1 if r.coeffs[0] == 1 else -1


def frobenius(a: FieldElement) -> FieldElement:
    return a**a.spec.p


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True)
class Embedding:
    """Ring embedding source -> target determined by the image of t."""

    source: FieldSpec
    target: FieldSpec
    image_of_generator: FieldElement

    def __call__(self, a: FieldElement) -> FieldElement:
        a = self.source(a)
        acc = self.target.zero()
        power = self.target.one()
        for c in a.coeffs:
            if c:
                acc = acc + power * c
            power = power * self.image_of_generator
        return acc


def extend(spec: FieldSpec, i: int) -> tuple[FieldSpec, Embedding]:
    """Return F_{q^i} together with the embedding F_q -> F_{q^i}."""
    if i < 1:
        raise FieldError("extension degree must be >= 1")
    big = FieldSpec(spec.p, spec.k * i)
    if spec.k == 1:
        return big, Embedding(spec, big, big(0))
    if i == 1 and big == spec:
        return big, Embedding(spec, big, big([0, 1]))
    if spec.is_conway:
        root = big.generator() ** ((big.q - 1) // (spec.q - 1))
    else:
        root = _find_root(spec.modulus, big)
    mod_at_root = big.zero()
    for c in reversed(spec.modulus):
        mod_at_root = mod_at_root * root + c
    assert mod_at_root.is_zero(), "embedding does not send t to a root"
    return big, Embedding(spec, big, root)


def _find_root(modulus, big: FieldSpec) -> FieldElement:
    if big.q > 10**6:
        raise FieldError("root search for a non-Conway modulus is capped at 10^6 elements")
    for x in big.elements():
        acc = big.zero()
        for c in reversed(modulus):
            acc = acc * x + c
        if acc.is_zero():
            return x
    raise FieldError("modulus has no root in the extension")


# ---------------------------------------------------------------------------
# fast scalar arithmetic on encoded elements


class FieldArith:
    """Dense-table arithmetic on integer-encoded elements of a small field.

    Polynomials are low-first lists of encoded coefficients with no trailing
    zeros; the zero polynomial is the empty list.
    """

    def __init__(self, spec: FieldSpec):
        if spec.q > TABLE_LIMIT:
            raise FieldError(f"dense tables are limited to q <= {TABLE_LIMIT}")
        self.spec = spec
        self.p = spec.p
        self.q = q = spec.q
        vf = VectorField(spec.p, spec.k, spec.modulus)
        digits = vf.all_elements()
        idx_a = np.repeat(np.arange(q), q)
        idx_b = np.tile(np.arange(q), q)
        add = vf.encode((digits[idx_a] + digits[idx_b]) % spec.p).reshape(q, q)
        mul = vf.encode(vf.mul(digits[idx_a], digits[idx_b])).reshape(q, q)
        self.add_np, self.mul_np = add, mul
        self.neg_np = vf.encode((-digits) % spec.p)
        self.sub_np = add[:, self.neg_np]
        self.add = add.tolist()
        self.mul = mul.tolist()
        self.neg = self.neg_np.tolist()
        self.sub = self.sub_np.tolist()
        inv = [0] * q
        for a in range(1, q):
            row = self.mul[a]
            inv[a] = row.index(1)
        self.inv = inv
        sq: dict[int, int] = {}
        for a in range(q):
            s = self.mul[a][a]
            if s not in sq or a < sq[s]:
                sq[s] = a
        self.sqrt = [sq.get(a, -1) for a in range(q)]
        self.chi = [0] + [1 if self.sqrt[a] >= 0 else -1 for a in range(1, q)]
        self.one = 1

    # polynomial operations -------------------------------------------------

    @staticmethod
    def trim(a: list[int]) -> list[int]:
        while a and a[-1] == 0:
            a.pop()
        return a

    def padd(self, a, b):
        if len(a) < len(b):
            a, b = b, a
        add = self.add
        res = list(a)
        for i, y in enumerate(b):
            res[i] = add[res[i]][y]
        return self.trim(res)

    def psub(self, a, b):
        sub = self.sub
        neg = self.neg
        n = max(len(a), len(b))
        res = [0] * n
        la, lb = len(a), len(b)
        for i in range(n):
            if i < la:
                res[i] = sub[a[i]][b[i]] if i < lb else a[i]
            else:
                res[i] = neg[b[i]]
        return self.trim(res)

    def pneg(self, a):
        neg = self.neg
        return [neg[x] for x in a]

    def pscale(self, a, c):
        if c == 0:
            return []
        row = self.mul[c]
        return [row[x] for x in a]

    def pmul(self, a, b):
        if not a or not b:
            return []
        add, mul = self.add, self.mul
        res = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                row = mul[x]
                for j, y in enumerate(b):
                    if y:
                        res[i + j] = add[res[i + j]][row[y]]
        return self.trim(res)

    def pdivmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        db = len(b) - 1
        if len(a) - 1 < db:
            return [], list(a)
        sub, mul = self.sub, self.mul
        r = list(a)
        inv_lc = self.inv[b[-1]]
        qt = [0] * (len(a) - db)
        for top in range(len(r) - 1, db - 1, -1):
            c = r[top]
            if c:
                c = mul[c][inv_lc]
                qt[top - db] = c
                row = mul[c]
                base = top - db
                for j in range(db):
                    if b[j]:
                        r[base + j] = sub[r[base + j]][row[b[j]]]
                r[top] = 0
        return self.trim(qt), self.trim(r[:db])

    def pmod(self, a, b):
        if len(a) < len(b):
            return list(a)
        return self.pdivmod(a, b)[1]

    def pdiv_exact(self, a, b):
        qt, r = self.pdivmod(a, b)
        if r:
            raise ArithmeticError("inexact polynomial division")
        return qt

    def pmonic(self, a):
        if not a or a[-1] == 1:
            return list(a)
        return self.pscale(a, self.inv[a[-1]])

    def pxgcd(self, a, b):
        """Return (d, s, t) with d = s*a + t*b and d monic (or zero)."""
        r0, r1 = list(a), list(b)
        s0, s1 = [1], []
        t0, t1 = [], [1]
        while r1:
            qt, r = self.pdivmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, self.psub(s0, self.pmul(qt, s1))
            t0, t1 = t1, self.psub(t0, self.pmul(qt, t1))
        if r0 and r0[-1] != 1:
            c = self.inv[r0[-1]]
            r0, s0, t0 = self.pscale(r0, c), self.pscale(s0, c), self.pscale(t0, c)
        return r0, s0, t0

    def pmulmod(self, a, b, m):
        return self.pmod(self.pmul(a, b), m)

    def ppowmod(self, a, e, m):
        result = [1] if len(m) > 1 else []
        base = self.pmod(a, m)
        while e:
            if e & 1:
                result = self.pmod(self.pmul(result, base), m)
            e >>= 1
            if e:
                base = self.pmod(self.pmul(base, base), m)
        return result

    def peval(self, a, x):
        add, mulx = self.add, self.mul[x]
        acc = 0
        for c in reversed(a):
            acc = add[mulx[acc]][c]
        return acc

    def pderiv(self, a):
        out = []
        mul = self.mul
        for i in range(1, len(a)):
            out.append(mul[a[i]][i % self.p])
        return self.trim(out)


@functools.lru_cache(maxsize=64)
def arith(spec: FieldSpec) -> FieldArith:
    return FieldArith(spec)


# ---------------------------------------------------------------------------
# vectorised arithmetic on digit arrays (used for whole-field evaluation)


class VectorField:
    """Batch arithmetic on F_{p^K} with elements stored as (N, K) digit arrays."""

    def __init__(self, p: int, K: int, modulus: Sequence[int] | None = None):
        self.p, self.K = p, K
        self.modulus = np.array(modulus if modulus is not None else conway_modulus(p, K), dtype=np.int64)
        self.Q = p**K
        self.weights = p ** np.arange(K, dtype=np.int64)

    def all_elements(self) -> np.ndarray:
        idx = np.arange(self.Q, dtype=np.int64)
        return (idx[:, None] // self.weights[None, :]) % self.p

    def encode(self, digits: np.ndarray) -> np.ndarray:
        return digits @ self.weights

    def mul(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        p, K = self.p, self.K
        n = max(A.shape[0], B.shape[0])
        prod = np.zeros((n, 2 * K - 1), dtype=np.int64)
        for s in range(K):
            prod[:, s : s + K] += A[:, s : s + 1] * B
        prod %= p
        mod = self.modulus[:K]
        for top in range(2 * K - 2, K - 1, -1):
            c = prod[:, top : top + 1]
            prod[:, top - K : top] = (prod[:, top - K : top] - c * mod[None, :]) % p
        return prod[:, :K]

    def pow(self, A: np.ndarray, e: int) -> np.ndarray:
        result = np.zeros_like(A)
        result[:, 0] = 1
        base = A.copy()
        while e:
            if e & 1:
                result = self.mul(result, base)
            e >>= 1
            if e:
                base = self.mul(base, base)
        return result

    def chi_table(self) -> np.ndarray:
        """Quadratic character of every element, indexed by encoding."""
        E = self.all_elements()
        R = self.encode(self.pow(E, (self.Q - 1) // 2))
        chi = np.where(R == 1, 1, -1).astype(np.int8)
        chi[0] = 0
        return chi


# ---------------------------------------------------------------------------
# polynomials


@dataclass(frozen=True)
class Polynomial:
    """Polynomial over F_q with encoded coefficients, lowest degree first."""

    spec: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_elements(cls, spec, elems) -> Polynomial:
        return cls(spec, tuple(spec(e).index for e in elems))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _ar(self) -> FieldArith:
        return arith(self.spec)

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self.spec, tuple(self._ar().padd(list(self.coeffs), list(other.coeffs))))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self.spec, tuple(self._ar().psub(list(self.coeffs), list(other.coeffs))))

    def __mul__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self.spec, tuple(self._ar().pmul(list(self.coeffs), list(other.coeffs))))

    def __divmod__(self, other: Polynomial):
        qt, r = self._ar().pdivmod(list(self.coeffs), list(other.coeffs))
        return Polynomial(self.spec, tuple(qt)), Polynomial(self.spec, tuple(r))

    def __mod__(self, other: Polynomial) -> Polynomial:
        return divmod(self, other)[1]

    def derivative(self) -> Polynomial:
        return Polynomial(self.spec, tuple(self._ar().pderiv(list(self.coeffs))))

    def gcd(self, other: Polynomial) -> Polynomial:
        d, _, _ = self._ar().pxgcd(list(self.coeffs), list(other.coeffs))
        return Polynomial(self.spec, tuple(d))

    def __call__(self, x: FieldElement) -> FieldElement:
        acc = x.spec.zero()
        if x.spec == self.spec:
            for c in reversed(self.coeffs):
                acc = acc * x + self.spec(c)
            return acc
        raise FieldError("evaluate in an extension via an Embedding first")

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return " + ".join(reversed(terms)) or "0"


def poly_is_squarefree(f: Polynomial) -> bool:
    if f.is_zero():
        raise FieldError("the zero polynomial has no squarefree status")
    return f.gcd(f.derivative()).degree == 0


# ---------------------------------------------------------------------------
# monic squarefree enumeration


def _batch_poly_mul(ar: FieldArith, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Row-wise products of coefficient arrays (low-first) via the dense tables."""
    n = A.shape[0]
    la, lb = A.shape[1], B.shape[1]
    out = np.zeros((n, la + lb - 1), dtype=np.int64)
    for i in range(la):
        for j in range(lb):
            out[:, i + j] = ar.add_np[out[:, i + j], ar.mul_np[A[:, i], B[:, j]]]
    return out


def _all_monic(q: int, degree: int) -> np.ndarray:
    """All monic polys of a degree, rows ordered by code, low-first with leading 1."""
    N = q**degree
    idx = np.arange(N, dtype=np.int64)
    low = (idx[:, None] // (q ** np.arange(degree, dtype=np.int64))[None, :]) % q
    return np.hstack([low, np.ones((N, 1), dtype=np.int64)])


def _irreducible_monic(ar: FieldArith, degree: int) -> np.ndarray:
    q = ar.q
    reducible = np.zeros(q**degree, dtype=bool)
    weights = q ** np.arange(degree, dtype=np.int64)
    for a in range(1, degree // 2 + 1):
        A = _all_monic(q, a)
        B = _all_monic(q, degree - a)
        ia = np.repeat(np.arange(len(A)), len(B))
        ib = np.tile(np.arange(len(B)), len(A))
        prod = _batch_poly_mul(ar, A[ia], B[ib])
        reducible[prod[:, :degree] @ weights] = True
    return _all_monic(q, degree)[~reducible]


@functools.lru_cache(maxsize=16)
def _squarefree_mask(spec: FieldSpec, n: int) -> np.ndarray:
    ar = arith(spec)
    q = spec.q
    mask = np.ones(q**n, dtype=bool)
    weights = q ** np.arange(n, dtype=np.int64)
    for d in range(1, n // 2 + 1):
        for P in _irreducible_monic(ar, d):
            P2 = _batch_poly_mul(ar, P[None, :], P[None, :])
            H = _all_monic(q, n - 2 * d)
            prod = _batch_poly_mul(ar, np.repeat(P2, len(H), axis=0), H)
            mask[prod[:, :n] @ weights] = False
    mask.setflags(write=False)
    return mask


def squarefree_count(q: int, n: int) -> int:
    return q**n - q ** (n - 1) if n >= 2 else q**n


def monic_squarefree_codes(spec: FieldSpec, n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Codes of the monic squarefree degree-n polys, positions [start, stop).

    A code is sum_{j<n} c_j q^j, so code order is lexicographic order on
    (c_{n-1}, ..., c_0).
    """
    if n < 2:
        raise FieldError("enumeration needs n >= 2")
    codes = np.flatnonzero(_squarefree_mask(spec, n))
    total = squarefree_count(spec.q, n)
    if len(codes) != total:
        raise AssertionError(f"squarefree sieve found {len(codes)} polys, expected {total}")
    return codes[start:stop]


def codes_to_coeffs(codes: np.ndarray, q: int, n: int) -> np.ndarray:
    """(N, n+1) low-first coefficient rows, leading coefficient 1."""
    low = (codes[:, None] // (q ** np.arange(n, dtype=np.int64))[None, :]) % q
    return np.hstack([low, np.ones((len(codes), 1), dtype=np.int64)])


def enumerate_monic_squarefree(spec: FieldSpec, n: int, start: int = 0, stop: int | None = None) -> Iterator[Polynomial]:
    """Yield each monic squarefree degree-n polynomial once, in code order.

    ``start``/``stop`` select a contiguous shard of the stream.
    """
    codes = monic_squarefree_codes(spec, n, start, stop)
    for row in codes_to_coeffs(codes, spec.q, n):
        yield Polynomial(spec, tuple(int(c) for c in row))
