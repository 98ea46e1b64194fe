"""Exact evaluation of the error bounds and explicit constants.

Everything is integer or Fraction arithmetic.  sqrt(q) never appears: C/sqrt(q)
is replaced by a rational upper bound, and comparisons with sqrt(q) are made
after squaring.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt

DEFAULT_PRECISION = 10**12  # denominator scale of the rational majorant of C/sqrt(q)


class VacuousBound(ValueError):
    """C^2 >= q, so the point-count estimate says nothing."""


@dataclass(frozen=True)
class ThresholdReport:
    c_size: int
    N0: int
    degU: int
    value: int

    @property
    def exponent(self) -> int:
        return 3 * self.N0 + self.degU

    def scientific(self, digits: int = 6) -> str:
        s = str(self.value)
        if len(s) <= digits:
            return s
        return f"{s[0]}.{s[1:digits]}e+{len(s) - 1}"

    def formula(self) -> str:
        return f"4*({2 * self.c_size}^{self.exponent}+1)^4"


def q_threshold(c_size: int, N0: int, degU: int) -> int:
    """4 ((2|c|)^(3 N0 + deg U) + 1)^4."""
    if c_size < 1 or N0 < 0 or degU < 1:
        raise ValueError("need |c| >= 1, N0 >= 0, deg U >= 1")
    return 4 * ((2 * c_size) ** (3 * N0 + degU) + 1) ** 4


def q_threshold_by_squaring(c_size: int, N0: int, degU: int) -> int:
    """Same number through explicit square-and-multiply on Python ints."""
    base, e = 2 * c_size, 3 * N0 + degU
    acc, b = 1, base
    while e:
        if e & 1:
            acc *= b
        b *= b
        e >>= 1
    t = acc + 1
    t2 = t * t
    return (t2 * t2) << 2


def threshold_report(c_size: int, N0: int, degU: int) -> ThresholdReport:
    v = q_threshold(c_size, N0, degU)
    if v != q_threshold_by_squaring(c_size, N0, degU):
        raise AssertionError("threshold paths disagree")
    return ThresholdReport(c_size, N0, degU, v)


def ratio_majorant(C: Fraction | int, q: int, precision: int = DEFAULT_PRECISION) -> Fraction:
    """Least fraction k/precision with k/precision >= C/sqrt(q) (exact if that is rational)."""
    C = Fraction(C)
    if C <= 0:
        raise ValueError("C must be positive")
    # C/sqrt(q) = sqrt(C^2/q); compare squares
    r2 = C * C / q
    num, den = r2.numerator, r2.denominator
    rn, rd = isqrt(num), isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    # least k with (k/P)^2 >= num/den
    P = precision
    k = isqrt(num * P * P // den)
    while k * k * den < num * P * P:
        k += 1
    return Fraction(k, P)


@dataclass(frozen=True)
class ErrorBoundParams:
    C: Fraction
    C_prime: Fraction
    I: Fraction
    J: Fraction
    q: int
    n: int
    i: int = 0

    def __post_init__(self):
        for name in ("C", "C_prime", "I", "J"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if self.C <= 0 or self.C_prime <= 0 or self.I <= 0:
            raise ValueError("C, C' and I must be positive")


def point_count_error(params: ErrorBoundParams, precision: int = DEFAULT_PRECISION, with_q_factor: bool = False) -> Fraction:
    """Rational upper bound for (2C'/(1 - C/sqrt q)) (C/sqrt q)^((n-J)/I).

    The exponent is rounded down (the base is < 1, so this only enlarges the
    value) and negative exponents are treated as 0.  ``with_q_factor``
    multiplies by 1/(1 - 1/q) as in the moment estimate.
    """
    p = params
    if p.C * p.C >= p.q:
        raise VacuousBound(f"C^2 = {p.C * p.C} >= q = {p.q}")
    rho = ratio_majorant(p.C, p.q, precision)
    if rho >= 1:
        raise VacuousBound("rational majorant of C/sqrt(q) is not below 1")
    t = (p.n - p.J) / p.I
    e = max(0, floor(t))
    value = 2 * p.C_prime / (1 - rho) * rho**e
    if with_q_factor:
        value *= Fraction(p.q, p.q - 1)
    return value


def stability_range(i: int, I, J) -> int:
    """Least integer n with n > i I + J."""
    if i < 0:
        raise ValueError("i must be >= 0")
    return floor(i * Fraction(I) + Fraction(J)) + 1
