"""Rack homology of a finite rack in low degrees, with exact integer ranks.

C_n = Z[c^n] and
  d(x_1..x_n) = sum_i (-1)^i [(x_1..^x_i..x_n) - (x_i|>x_1, .., x_i|>x_{i-1}, x_{i+1}, .., x_n)],
with i running over 2..n, so d_1 = 0 and C_0 = Z.  Then b_0 = 1 and b_1
counts the orbits of c, which is the usual normalization of this complex.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Sequence

import numpy as np

from .racks import FiniteRack, RackError, connected_components, trivial_rack

MATRIX_BUDGET = 9**4


class ConventionError(AssertionError):
    pass


def _index(t: Sequence[int], m: int) -> int:
    k = 0
    for x in t:
        k = k * m + x
    return k


def _tuples(m: int, n: int):
    return itertools.product(range(m), repeat=n)


def boundary_matrix(rack: FiniteRack, n: int, order: Sequence[int] | None = None) -> dict[tuple[int, int], int]:
    """Sparse d_n : Z[c^n] -> Z[c^(n-1)] as {(row, col): value}.

    ``order`` relabels the rack elements first (to test basis independence).
    """
    m = rack.size
    perm = list(order) if order is not None else list(range(m))
    pos = {x: i for i, x in enumerate(perm)}
    out: dict[tuple[int, int], int] = {}
    if n <= 1:
        return out
    for t in _tuples(m, n):
        col = _index([pos[x] for x in t], m)
        for i in range(1, n):
            sign = 1 if i % 2 else -1  # (-1)^j for the 1-based position j = i + 1
            xi = t[i]
            deleted = t[:i] + t[i + 1 :]
            acted = tuple(rack.op(xi, y) for y in t[:i]) + t[i + 1 :]
            for tt, s in ((deleted, sign), (acted, -sign)):
                key = (_index([pos[x] for x in tt], m), col)
                v = out.get(key, 0) + s
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return out


def to_dense(sparse: dict, rows: int, cols: int) -> np.ndarray:
    M = np.zeros((rows, cols), dtype=np.int64)
    for (r, c), v in sparse.items():
        M[r, c] = v
    return M


def integer_rank(M) -> int:
    """Exact rank over Q by fraction-free sparse elimination on columns."""
    if isinstance(M, dict):
        cols: dict[int, dict[int, int]] = {}
        for (r, c), v in M.items():
            cols.setdefault(c, {})[r] = int(v)
        vectors = list(cols.values())
    else:
        A = np.asarray(M)
        vectors = []
        for c in range(A.shape[1]):
            nz = np.flatnonzero(A[:, c])
            if nz.size:
                vectors.append({int(r): int(A[r, c]) for r in nz})
    pivots: dict[int, dict[int, int]] = {}
    for v in vectors:
        v = dict(v)
        while v:
            lead = min(v)
            p = pivots.get(lead)
            if p is None:
                g = 0
                for x in v.values():
                    g = gcd(g, x)
                if g > 1:
                    v = {k: x // g for k, x in v.items()}
                pivots[lead] = v
                break
            a, b = p[lead], v[lead]
            # v <- a v - b p, then strip the content
            w = {k: a * x for k, x in v.items()}
            for k, x in p.items():
                y = w.get(k, 0) - b * x
                if y:
                    w[k] = y
                else:
                    w.pop(k, None)
            g = 0
            for x in w.values():
                g = gcd(g, x)
            if g > 1:
                w = {k: x // g for k, x in w.items()}
            v = w
    return len(pivots)


@dataclass
class RackChainComplex:
    rack: FiniteRack
    d: int
    boundaries: dict[int, dict] = field(default_factory=dict)  # n -> sparse d_n

    def rank_chain(self, n: int) -> int:
        return 1 if n == 0 else self.rack.size**n

    def matrix(self, n: int) -> np.ndarray:
        m = self.rack.size
        rows = 1 if n == 1 else m ** (n - 1)
        return to_dense(self.boundaries.get(n, {}), rows, m**n)

    def triplets(self, n: int) -> str:
        """One 'row col value' line per nonzero entry of d_n."""
        items = sorted(self.boundaries.get(n, {}).items())
        return "".join(f"{r} {c} {v}\n" for (r, c), v in items)


def _compose_is_zero(lower: dict, upper: dict) -> bool:
    by_row: dict[int, list[tuple[int, int]]] = {}
    for (r, c), v in upper.items():
        by_row.setdefault(r, []).append((c, v))
    acc: dict[tuple[int, int], int] = {}
    for (r, k), v in lower.items():
        for c, w in by_row.get(k, ()):
            acc[(r, c)] = acc.get((r, c), 0) + v * w
    return all(x == 0 for x in acc.values())


def build_complex(rack: FiniteRack, d: int, order: Sequence[int] | None = None, budget: int = MATRIX_BUDGET) -> RackChainComplex:
    if d < 1:
        raise ValueError("d must be >= 1")
    if rack.size**d > budget:
        raise RackError(f"|c|^d = {rack.size ** d} exceeds the matrix budget {budget}")
    cx = RackChainComplex(rack, d)
    for n in range(1, d + 1):
        cx.boundaries[n] = boundary_matrix(rack, n, order)
    for n in range(2, d + 1):
        if not _compose_is_zero(cx.boundaries[n - 1], cx.boundaries[n]):
            raise ConventionError(f"d_{n - 1} d_{n} != 0")
    return cx


def betti_rational(rack: FiniteRack, d: int, order: Sequence[int] | None = None) -> list[int]:
    """b_0 .. b_(d-1) over Q."""
    cx = build_complex(rack, d, order)
    ranks = {n: integer_rank(cx.boundaries[n]) for n in range(1, d + 1)}
    ranks[0] = 0
    return [cx.rank_chain(i) - ranks[i] - ranks.get(i + 1, 0) for i in range(d)]


def compare_to_point(rack: FiniteRack, d: int) -> bool:
    if len(connected_components(rack)) != 1:
        raise RackError("rack is not connected")
    return betti_rational(rack, d) == betti_rational(trivial_rack(1), d)


__all__ = [
    "ConventionError",
    "RackChainComplex",
    "betti_rational",
    "boundary_matrix",
    "build_complex",
    "compare_to_point",
    "integer_rank",
    "to_dense",
]
