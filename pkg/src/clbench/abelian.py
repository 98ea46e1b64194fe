"""Integer Smith normal form and small helpers for finite abelian groups."""

from __future__ import annotations

from math import gcd
from typing import Sequence


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(matrix: Sequence[Sequence[int]], ncols: int | None = None):
    """Return (diag, U, V, Vinv) with U @ A @ V diagonal and diag[i] | diag[i+1].

    U and V are unimodular.  ``diag`` has length min(m, n); zero entries are
    kept, so free parts are visible.
    """
    A = [list(map(int, row)) for row in matrix]
    m = len(A)
    n = ncols if ncols is not None else (len(A[0]) if A else 0)
    U = _identity(m)
    V = _identity(n)
    Vinv = _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        A[dst] = [a + k * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + k * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for row in A:
            row[dst] += k * row[src]
        for row in V:
            row[dst] += k * row[src]
        # inverse: row_src of Vinv -= k * row_dst
        Vinv[src] = [a - k * b for a, b in zip(Vinv[src], Vinv[dst])]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return [A[i][i] for i in range(min(m, n))], U, V, Vinv
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            piv = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // piv))
                    clean &= A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // piv))
                    clean &= A[t][j] == 0
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return [A[i][i] for i in range(min(m, n))], U, V, Vinv


def invariant_factors(relations: Sequence[Sequence[int]], ngens: int) -> list[int]:
    """Invariant factors (all >= 2) of Z^ngens / rowspan(relations); raises if infinite."""
    if ngens == 0:
        return []
    if not relations:
        raise ValueError("group is infinite")
    diag, *_ = smith_normal_form(relations, ngens)
    diag = diag + [0] * (ngens - len(diag))
    if any(d == 0 for d in diag):
        raise ValueError("group is infinite")
    return [d for d in diag if d > 1]


def normalize_factors(factors: Sequence[int]) -> list[int]:
    """Invariant factors of prod Z/a_i for arbitrary a_i >= 1."""
    factors = [int(a) for a in factors if int(a) > 1]
    if not factors:
        return []
    rel = [[a if i == j else 0 for j in range(len(factors))] for i, a in enumerate(factors)]
    return invariant_factors(rel, len(factors))


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def prime_part(n: int, primes) -> int:
    out = 1
    for ell in primes:
        while n % ell == 0:
            out *= ell
            n //= ell
    return out


def valuation(n: int, ell: int) -> int:
    v = 0
    while n % ell == 0:
        n //= ell
        v += 1
    return v


def factors_from_orders(orders, N, primes) -> list[int]:
    """Invariant factors of the primes-part of a group of order N from its element orders.

    Uses |G[ell^j]| = prod_i ell^min(e_i, j), so no linear algebra is involved.
    """
    per_prime = []
    for ell in primes:
        counts = []
        j = 0
        total = ell ** valuation(N, ell)
        while True:
            c = sum(1 for o in orders if (ell**j) % o == 0)
            counts.append(c)
            if c == total:
                break
            j += 1
            if j > valuation(N, ell):
                raise ValueError(f"element orders are inconsistent with a group of order {N}")
        # the number of exponents e_i >= j is log_ell(c_j / c_{j-1})
        ge = [valuation(counts[j] // counts[j - 1], ell) for j in range(1, len(counts))]
        exps = []
        for j in range(len(ge)):
            nxt = ge[j + 1] if j + 1 < len(ge) else 0
            exps += [j + 1] * (ge[j] - nxt)
        per_prime.append(sorted(ell**e for e in exps))
    r = max((len(x) for x in per_prime), default=0)
    out = [1] * r
    for lst in per_prime:
        for i, d in enumerate(lst):
            out[r - len(lst) + i] *= d
    return [d for d in out if d > 1]
