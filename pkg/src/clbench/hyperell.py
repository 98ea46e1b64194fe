"""Hyperelliptic curves y^2 = f(x), point counts and L-polynomials.

Point counts are exhaustive: every x in F_{q^i} contributes 1 + chi(f(x)).
Batches of curves are evaluated in discrete-log form (Zech logarithms), and
only one x per Frobenius orbit is visited since chi(f(x^q)) = chi(f(x)).
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from math import comb

import numba
import numpy as np

from .ffield import (
    FieldSpec,
    Polynomial,
    codes_to_coeffs,
    extend,
    poly_is_squarefree,
)


class CurveError(ValueError):
    pass


class InconsistentCounts(ArithmeticError):
    """Point counts do not come from any L-polynomial; points to an arithmetic bug."""


@dataclass(frozen=True)
class HyperellipticCurve:
    spec: FieldSpec
    f: Polynomial

    def __post_init__(self):
        if self.f.spec != self.spec:
            raise CurveError("polynomial is over a different field")
        if self.f.degree < 3:
            raise CurveError("need deg f >= 3")
        if not self.f.is_monic():
            raise CurveError("f must be monic")
        if not poly_is_squarefree(self.f):
            raise CurveError("f must be squarefree")

    @classmethod
    def from_coeffs(cls, spec: FieldSpec, coeffs) -> HyperellipticCurve:
        """Build from low-first encoded coefficients."""
        return cls(spec, Polynomial(spec, tuple(int(c) for c in coeffs)))

    @property
    def n(self) -> int:
        return self.f.degree

    @property
    def genus(self) -> int:
        return (self.n - 1) // 2

    @property
    def ramified(self) -> bool:
        """True when n is odd: a single point above infinity."""
        return self.n % 2 == 1

    @property
    def infinite_points(self) -> int:
        return 1 if self.ramified else 2


@dataclass(frozen=True)
class LPolynomial:
    coeffs: tuple[int, ...]
    q: int
    g: int

    def __post_init__(self):
        a = self.coeffs
        if len(a) != 2 * self.g + 1 or a[0] != 1:
            raise InconsistentCounts(f"malformed L-polynomial {a}")
        for i in range(self.g + 1):
            if a[2 * self.g - i] != self.q ** (self.g - i) * a[i]:
                raise InconsistentCounts(f"functional equation fails at i={i}: {a}")
        if not weil_interval_ok(self.at_one(), self.q, self.g):
            raise InconsistentCounts(f"L(1) = {self.at_one()} outside the Weil interval")

    def __call__(self, T):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * T + c
        return acc

    def at_one(self) -> int:
        return sum(self.coeffs)

    def power_sums(self, count: int) -> list[int]:
        """s_k = sum_j alpha_j^k for k = 1..count, with L = prod (1 - alpha_j T)."""
        a = list(self.coeffs) + [0] * max(0, count + 1 - len(self.coeffs))
        s: list[int] = []
        for k in range(1, count + 1):
            val = -k * a[k] - sum(s[i - 1] * a[k - i] for i in range(1, k))
            s.append(val)
        return s

    def point_count(self, i: int) -> int:
        """#X(F_{q^i}) predicted by the L-polynomial."""
        return self.q**i + 1 - self.power_sums(i)[-1]


# ---------------------------------------------------------------------------
# Weil bounds, exact


def weil_count_ok(count: int, q: int, g: int, i: int) -> bool:
    d = count - q**i - 1
    return d * d <= 4 * g * g * q**i


def _sqrt_q_binomial(q: int, g: int) -> tuple[int, int]:
    """(A, B) with (sqrt(q) + 1)^(2g) = A + B sqrt(q)."""
    A = B = 0
    for k in range(g + 1):
        term = comb(g, k) * (q + 1) ** (g - k) * 2**k
        if k % 2 == 0:
            A += term * q ** (k // 2)
        else:
            B += term * q ** (k // 2)
    return A, B


def weil_interval_ok(value: int, q: int, g: int) -> bool:
    """(sqrt q - 1)^(2g) <= value <= (sqrt q + 1)^(2g), decided in integers."""
    A, B = _sqrt_q_binomial(q, g)
    hi = value - A  # need hi <= B sqrt q
    lo = A - value  # need lo <= B sqrt q
    ok_hi = hi <= 0 or hi * hi <= B * B * q
    ok_lo = lo <= 0 or lo * lo <= B * B * q
    return ok_hi and ok_lo


# ---------------------------------------------------------------------------
# batched point counting


@functools.lru_cache(maxsize=32)
def _log_tables(spec: FieldSpec, i: int):
    """Discrete-log data for F_{q^i}.

    Returns (coeff_log, reps, weights, zech, order): ``coeff_log[c]`` is the
    log of the image of c in F_{q^i} (-1 for zero), ``reps``/``weights`` are
    Frobenius orbit representatives (as logs) of the nonzero x with their orbit
    sizes, and ``zech[d]`` is log(1 + g^d), -1 when that sum vanishes.
    """
    big, phi = extend(spec, i)
    p, K = big.p, big.k
    Q = big.q
    order = Q - 1
    mod = big.modulus
    log = np.full(Q, -1, dtype=np.int64)
    exp = np.empty(order, dtype=np.int64)
    g = big.generator()
    cur = [0] * K
    cur[0] = 1
    if K == 1:
        gen = g.coeffs[0]
        v = 1
        for e in range(order):
            exp[e] = v
            log[v] = e
            v = v * gen % p
    else:
        weights = [p**j for j in range(K)]
        for e in range(order):
            idx = sum(c * w for c, w in zip(cur, weights))
            exp[e] = idx
            log[idx] = e
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                cur = [(c - top * m) % p for c, m in zip(cur, mod[:K])]
    if np.any(log[1:] < 0):
        raise AssertionError("field generator is not primitive")
    one_plus = np.empty(order, dtype=np.int64)
    # index of 1 + g^d: add 1 to the constant digit
    e_dig0 = exp % p
    one_plus[:] = exp - e_dig0 + (e_dig0 + 1) % p
    zech = log[one_plus]
    coeff_log = np.array([log[phi(spec(c)).index] if c else -1 for c in range(spec.q)], dtype=np.int64)
    q = spec.q
    seen = np.zeros(order, dtype=bool)
    reps, wts = [], []
    for e in range(order):
        if seen[e]:
            continue
        size = 0
        f = e
        while not seen[f]:
            seen[f] = True
            size += 1
            f = f * q % order
        reps.append(e)
        wts.append(size)
    return coeff_log, np.array(reps, dtype=np.int64), np.array(wts, dtype=np.int64), zech, order


@numba.njit(cache=True)
def _character_sums(clog, reps, wts, zech, order):
    """sum_x chi(f(x)) for each row of high-first coefficient logs."""
    N, m = clog.shape
    out = np.zeros(N, dtype=np.int64)
    for r in range(N):
        c0 = clog[r, m - 1]
        total = 0
        if c0 >= 0:
            total += 1 if (c0 & 1) == 0 else -1
        for t in range(reps.shape[0]):
            lx = reps[t]
            acc = -1
            for j in range(m):
                c = clog[r, j]
                if acc >= 0:
                    acc += lx
                    if acc >= order:
                        acc -= order
                    if c >= 0:
                        d = c - acc
                        if d < 0:
                            d += order
                        z = zech[d]
                        if z < 0:
                            acc = -1
                        else:
                            acc += z
                            if acc >= order:
                                acc -= order
                else:
                    acc = c
            if acc >= 0:
                total += wts[t] if (acc & 1) == 0 else -wts[t]
        out[r] = total
    return out


def batch_point_counts(spec: FieldSpec, n: int, coeff_rows: np.ndarray, degrees) -> np.ndarray:
    """#X(F_{q^i}) for each curve (row) and each requested extension degree i.

    ``coeff_rows`` holds low-first encoded coefficients with the leading 1.
    Returns an int64 array of shape (N, len(degrees)).
    """
    coeff_rows = np.asarray(coeff_rows, dtype=np.int64)
    if coeff_rows.ndim != 2 or coeff_rows.shape[1] != n + 1:
        raise CurveError("coefficient rows must have n + 1 entries")
    out = np.zeros((coeff_rows.shape[0], len(degrees)), dtype=np.int64)
    inf = 1 if n % 2 else 2
    high_first = np.ascontiguousarray(coeff_rows[:, ::-1])
    for col, i in enumerate(degrees):
        if i < 1:
            raise CurveError("extension degree must be >= 1")
        coeff_log, reps, wts, zech, order = _log_tables(spec, i)
        clog = coeff_log[high_first]
        out[:, col] = order + 1 + inf + _character_sums(clog, reps, wts, zech, order)
    return out


def point_count(curve: HyperellipticCurve, i: int) -> int:
    """Number of points of the smooth projective model over F_{q^i}."""
    if i < 1:
        raise CurveError("extension degree must be >= 1")
    row = np.array([curve.f.coeffs], dtype=np.int64)
    return int(batch_point_counts(curve.spec, curve.n, row, [i])[0, 0])


def point_count_naive(curve: HyperellipticCurve, i: int = 1) -> int:
    """Direct evaluation with FieldElement arithmetic; slow, used as an oracle."""
    from .ffield import quadratic_character

    big, phi = extend(curve.spec, i)
    coeffs = [phi(curve.spec(c)) for c in curve.f.coeffs]
    total = curve.infinite_points
    for x in big.elements():
        acc = big.zero()
        for c in reversed(coeffs):
            acc = acc * x + c
        total += 1 + quadratic_character(acc)
    return total


# ---------------------------------------------------------------------------
# L-polynomials


def batch_l_polynomials(counts: np.ndarray, q: int, g: int) -> np.ndarray:
    """Rows of L-coefficients a_0..a_{2g} from counts over F_{q^1..q^g}.

    Uses Newton's identities k a_k = -sum_{i<=k} s_i a_{k-i} with exact
    division, then the functional equation.  Python ints would be safer for
    huge q, so this raises when intermediate values could overflow int64.
    """
    counts = np.asarray(counts, dtype=np.int64)
    N = counts.shape[0]
    if q ** (2 * g) * comb(2 * g, g) * 2 * g >= 2**62:
        raise OverflowError("batched L-polynomials would overflow int64; use l_polynomial")
    s = np.empty((N, g), dtype=np.int64)
    for i in range(1, g + 1):
        s[:, i - 1] = q**i + 1 - counts[:, i - 1]
    a = np.zeros((N, 2 * g + 1), dtype=np.int64)
    a[:, 0] = 1
    for k in range(1, g + 1):
        acc = np.zeros(N, dtype=np.int64)
        for i in range(1, k + 1):
            acc += s[:, i - 1] * a[:, k - i]
        if np.any(acc % k):
            raise InconsistentCounts("Newton identity division is not exact")
        a[:, k] = -acc // k
    for i in range(g):
        a[:, 2 * g - i] = q ** (g - i) * a[:, i]
    return a


def l_polynomial_from_counts(counts, q: int, g: int) -> LPolynomial:
    s = [q ** (i + 1) + 1 - int(c) for i, c in enumerate(counts[:g])]
    a = [1] + [0] * (2 * g)
    for k in range(1, g + 1):
        acc = sum(s[i - 1] * a[k - i] for i in range(1, k + 1))
        if acc % k:
            raise InconsistentCounts("Newton identity division is not exact")
        a[k] = -acc // k
    for i in range(g):
        a[2 * g - i] = q ** (g - i) * a[i]
    return LPolynomial(tuple(a), q, g)


def l_polynomial(curve: HyperellipticCurve) -> LPolynomial:
    g = curve.genus
    row = np.array([curve.f.coeffs], dtype=np.int64)
    counts = batch_point_counts(curve.spec, curve.n, row, list(range(1, g + 1)))[0]
    for i, c in enumerate(counts, start=1):
        if not weil_count_ok(int(c), curve.spec.q, g, i):
            raise InconsistentCounts(f"count {c} over F_q^{i} violates the Weil bound")
    return l_polynomial_from_counts([int(c) for c in counts], curve.spec.q, g)


def l_polynomial_full_newton(curve: HyperellipticCurve) -> LPolynomial:
    """Solve Newton's identities with counts for all i = 1..2g (no functional equation)."""
    g, q = curve.genus, curve.spec.q
    row = np.array([curve.f.coeffs], dtype=np.int64)
    counts = batch_point_counts(curve.spec, curve.n, row, list(range(1, 2 * g + 1)))[0]
    s = [q ** (i + 1) + 1 - int(c) for i, c in enumerate(counts)]
    a = [1] + [0] * (2 * g)
    for k in range(1, 2 * g + 1):
        acc = sum(s[i - 1] * a[k - i] for i in range(1, k + 1))
        if acc % k:
            raise InconsistentCounts("Newton identity division is not exact")
        a[k] = -acc // k
    return LPolynomial(tuple(a), q, g)


def jacobian_order(curve: HyperellipticCurve) -> int:
    return l_polynomial(curve).at_one()


def curves_from_codes(spec: FieldSpec, n: int, codes) -> list[HyperellipticCurve]:
    rows = codes_to_coeffs(np.asarray(codes, dtype=np.int64), spec.q, n)
    return [HyperellipticCurve.from_coeffs(spec, r) for r in rows]


__all__ = [
    "CurveError",
    "HyperellipticCurve",
    "InconsistentCounts",
    "LPolynomial",
    "batch_l_polynomials",
    "batch_point_counts",
    "curves_from_codes",
    "jacobian_order",
    "l_polynomial",
    "l_polynomial_from_counts",
    "l_polynomial_full_newton",
    "point_count",
    "point_count_naive",
    "weil_count_ok",
    "weil_interval_ok",
]
