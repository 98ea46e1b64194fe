"""Braid-group orbits on c^n and the monoid of components they form.

The generator sigma_i acts on positions i, i+1 (0-based here) by
(a, b) -> (b, b |> a); its inverse is (a, b) -> (a |> b, a) read through
phi_a^-1, i.e. (a, b) -> (phi_a^-1(b), a).  Tuples are encoded base m with the
first entry most significant, so the least code in an orbit is its
lexicographically least tuple.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numba
import numpy as np

from .racks import FiniteRack, RackError, subrack_closure, subracks

DEFAULT_BUDGET = 2 * 1024**3


class BudgetExceeded(MemoryError):
    def __init__(self, required: int, budget: int):
        super().__init__(f"needs about {required} bytes, budget is {budget}")
        self.required = required
        self.budget = budget


class WitnessNotFound(RuntimeError):
    pass


class CannotCertify(RuntimeError):
    pass


# braid moves on plain tuples ----------------------------------------------------


def sigma(rack: FiniteRack, t: Sequence[int], i: int) -> tuple[int, ...]:
    a, b = t[i], t[i + 1]
    return (*t[:i], b, rack.op(b, a), *t[i + 2 :])


def sigma_inv(rack: FiniteRack, t: Sequence[int], i: int) -> tuple[int, ...]:
    a, b = t[i], t[i + 1]
    return (*t[:i], rack.op_inv(a, b), a, *t[i + 2 :])


def apply_word(rack: FiniteRack, t: Sequence[int], word: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Replay a braid word given as (position, +1 or -1) pairs."""
    t = tuple(t)
    for i, s in word:
        t = sigma(rack, t, i) if s > 0 else sigma_inv(rack, t, i)
    return t


def boundary(rack: FiniteRack, t: Sequence[int]) -> int:
    """Product of the entries in the ambient group."""
    if rack.group is None:
        raise RackError("boundary monodromy needs an ambient group")
    return rack.group.product(rack.embedding[x] for x in t)


def generates_group(rack: FiniteRack, entries: Iterable[int]) -> bool:
    G = rack.group
    return len(G.subgroup_generated(rack.embedding[x] for x in set(entries))) == G.order


def encode(t: Sequence[int], m: int) -> int:
    code = 0
    for x in t:
        code = code * m + x
    return code


def decode(code: int, m: int, n: int) -> tuple[int, ...]:
    out = [0] * n
    for j in range(n - 1, -1, -1):
        code, out[j] = divmod(code, m)
    return tuple(out)


# union-find kernel --------------------------------------------------------------


@numba.njit(cache=True)
def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


@numba.njit(cache=True)
def _union_edges(parent, dst, reverse):
    N = dst.shape[0]
    for k in range(N):
        s = N - 1 - k if reverse else k
        a = _find(parent, s)
        b = _find(parent, dst[s])
        if a < b:
            parent[b] = a
        elif b < a:
            parent[a] = b


@numba.njit(cache=True)
def _flatten(parent):
    # roots are the least index of their set and every parent is smaller than its child
    for i in range(parent.shape[0]):
        parent[i] = parent[parent[i]]


# component tables ---------------------------------------------------------------


@dataclass(frozen=True)
class Constraints:
    boundary: int | None = None  # group element index
    generate_full: bool = False


@dataclass
class ComponentTable:
    rack: FiniteRack
    n: int
    constraints: Constraints
    codes: np.ndarray  # sorted codes of every tuple in the constrained set
    roots: np.ndarray  # index of the orbit's least tuple, per tuple
    reps: list[tuple[int, ...]] = field(default_factory=list)
    sizes: list[int] = field(default_factory=list)
    boundaries: list[int | None] = field(default_factory=list)
    subracks: list[frozenset] = field(default_factory=list)
    generates: list[bool] = field(default_factory=list)
    _index: dict = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.reps)

    @property
    def count(self) -> int:
        return len(self.reps)

    def component_of(self, t: Sequence[int]) -> int:
        code = encode(t, self.rack.size)
        k = int(np.searchsorted(self.codes, code))
        if k >= len(self.codes) or self.codes[k] != code:
            raise KeyError(f"{tuple(t)} is not in the constrained tuple set")
        return self._index[int(self.roots[k])]

    def members(self, comp: int) -> list[tuple[int, ...]]:
        root = encode(self.reps[comp], self.rack.size)
        k = int(np.searchsorted(self.codes, root))
        idx = np.flatnonzero(self.roots == k)
        m = self.rack.size
        return [decode(int(c), m, self.n) for c in self.codes[idx]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["degree", "representative", "orbit_size", "boundary", "generates"])
        m = self.rack.size
        G = self.rack.group
        for rep, size, b, gen in zip(self.reps, self.sizes, self.boundaries, self.generates):
            label = "" if b is None else G.labels[b]
            w.writerow([self.n, encode(rep, m), size, label, int(gen)])
        return buf.getvalue()


def _all_tuples(m: int, n: int) -> np.ndarray:
    N = m**n
    out = np.empty((N, n), dtype=np.int8 if m < 128 else np.int16)
    codes = np.arange(N, dtype=np.int64)
    for j in range(n - 1, -1, -1):
        out[:, j] = codes % m
        codes //= m
    return out


def _masks(T: np.ndarray) -> np.ndarray:
    mask = np.zeros(T.shape[0], dtype=np.int64)
    for j in range(T.shape[1]):
        mask |= np.left_shift(np.int64(1), T[:, j].astype(np.int64))
    return mask


def _mask_members(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _products(rack: FiniteRack, T: np.ndarray) -> np.ndarray:
    G = rack.group
    tab = np.array(G.table, dtype=np.int32)
    emb = np.array(rack.embedding, dtype=np.int32)
    prod = np.full(T.shape[0], G.identity, dtype=np.int32)
    for j in range(T.shape[1]):
        prod = tab[prod, emb[T[:, j]]]
    return prod


def braid_orbits(
    rack: FiniteRack,
    n: int,
    boundary_element: int | None = None,
    generate_full: bool = False,
    budget: int = DEFAULT_BUDGET,
    reverse: bool = False,
) -> ComponentTable:
    """All braid orbits on the constrained subset of c^n, by union-find."""
    m = rack.size
    if m > 62:
        raise RackError("racks above 62 elements are not supported")
    if (boundary_element is not None or generate_full) and rack.group is None:
        raise RackError("boundary and generation constraints need an ambient group")
    if n < 0:
        raise ValueError("n must be >= 0")
    cons = Constraints(boundary_element, generate_full)
    free = n - 1 if boundary_element is not None and n > 0 else n
    required = (m**free) * (n + 48)
    if required > budget:
        raise BudgetExceeded(required, budget)

    if n == 0:
        ok = boundary_element in (None, rack.group.identity if rack.group else None)
        if generate_full:
            ok = ok and rack.group.order == 1
        T = np.zeros((1 if ok else 0, 0), dtype=np.int8)
    elif boundary_element is not None:
        G = rack.group
        P = _all_tuples(m, n - 1)
        prod = _products(rack, P)
        inv = np.array(G.inverse, dtype=np.int32)
        tab = np.array(G.table, dtype=np.int32)
        last_g = tab[inv[prod], boundary_element]
        pos = np.full(G.order, -1, dtype=np.int32)
        pos[np.array(rack.embedding, dtype=np.int64)] = np.arange(m, dtype=np.int32)
        last = pos[last_g]
        keep = last >= 0
        T = np.concatenate([P[keep], last[keep].astype(P.dtype)[:, None]], axis=1)
        del P, prod, last_g, last, keep
    else:
        T = _all_tuples(m, n)

    if generate_full and T.shape[0] and n > 0:
        masks = _masks(T)
        uniq, inv_idx = np.unique(masks, return_inverse=True)
        good = np.array([generates_group(rack, _mask_members(int(u))) for u in uniq], dtype=bool)
        T = T[good[inv_idx]]
        del masks, inv_idx

    N = T.shape[0]
    weights = m ** np.arange(n - 1, -1, -1, dtype=np.int64)
    codes = T.astype(np.int64) @ weights if n else np.zeros(N, dtype=np.int64)
    # tuples come out in increasing code order in every branch above
    if N > 1 and not np.all(codes[1:] > codes[:-1]):
        order = np.argsort(codes)
        T, codes = T[order], codes[order]
    parent = np.arange(N, dtype=np.int64)
    table = np.array(rack.table, dtype=np.int64)
    positions = range(n - 1)
    if reverse:
        positions = reversed(positions)
    for i in positions:
        a = T[:, i].astype(np.int64)
        b = T[:, i + 1].astype(np.int64)
        c = table[b, a]
        new = codes + (b - a) * weights[i] + (c - b) * weights[i + 1]
        dst = np.searchsorted(codes, new)
        if N and (dst.max() >= N or not np.array_equal(codes[dst], new)):
            raise AssertionError("braid move left the constrained tuple set")
        _union_edges(parent, dst, reverse)
        del a, b, c, new, dst
    _flatten(parent)

    ct = ComponentTable(rack, n, cons, codes, parent)
    root_idx = np.flatnonzero(parent == np.arange(N))
    sizes = np.bincount(parent, minlength=N)[root_idx] if N else np.zeros(0, dtype=np.int64)
    ct._index = {int(r): k for k, r in enumerate(root_idx.tolist())}
    ct.reps = [tuple(int(x) for x in T[r]) for r in root_idx]
    ct.sizes = [int(s) for s in sizes]

    # orbit invariants, asserted on every tuple
    if N:
        masks = _masks(T) if n else np.zeros(N, dtype=np.int64)
        uniq, inv_idx = np.unique(masks, return_inverse=True)
        closure = {int(u): subrack_closure(rack, _mask_members(int(u))) for u in uniq}
        closed_code = np.array([sum(1 << x for x in closure[int(u)]) for u in uniq], dtype=np.int64)[inv_idx]
        if not np.array_equal(closed_code, closed_code[parent]):
            raise AssertionError("generated subrack is not constant on an orbit")
        ct.subracks = [closure[int(masks[r])] for r in root_idx]
        if rack.group is not None:
            prods = _products(rack, T) if n else np.full(N, rack.group.identity, dtype=np.int32)
            if not np.array_equal(prods, prods[parent]):
                raise AssertionError("boundary monodromy is not constant on an orbit")
            ct.boundaries = [int(prods[r]) for r in root_idx]
            gen_cache: dict[frozenset, bool] = {}
            for S in ct.subracks:
                if S not in gen_cache:
                    gen_cache[S] = generates_group(rack, S) if S else rack.group.order == 1
            ct.generates = [gen_cache[S] for S in ct.subracks]
        else:
            ct.boundaries = [None] * len(root_idx)
            ct.generates = [len(S) == m for S in ct.subracks]
    return ct


# pi_0 monoid ---------------------------------------------------------------------


@dataclass(frozen=True)
class Component:
    rack_id: int
    rep: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.rep)


class Pi0RingView:
    """Components of c^n for every n up to a cap, with concatenation as product."""

    def __init__(self, rack: FiniteRack, cap: int, budget: int = DEFAULT_BUDGET):
        self.rack = rack
        self.cap = cap
        self.budget = budget
        self._tables: dict[int, ComponentTable] = {}

    def table(self, n: int) -> ComponentTable:
        if n > self.cap:
            raise ValueError(f"degree {n} above the cap {self.cap}")
        if n not in self._tables:
            self._tables[n] = braid_orbits(self.rack, n, budget=self.budget)
        return self._tables[n]

    def component(self, t: Sequence[int]) -> Component:
        ct = self.table(len(t))
        return Component(id(self.rack), ct.reps[ct.component_of(t)])

    def basis(self, n: int) -> list[Component]:
        return [Component(id(self.rack), r) for r in self.table(n).reps]

    def unit(self) -> Component:
        return Component(id(self.rack), ())

    def alpha(self, x: int) -> Component:
        return self.component((x,))

    def product(self, a: Component, b: Component) -> Component:
        return pi0_product(self, a, b)

    def power(self, a: Component, k: int) -> Component:
        out = self.unit()
        for _ in range(k):
            out = self.product(out, a)
        return out

    def index(self, c: Component) -> int:
        return self.table(c.degree).component_of(c.rep)


def pi0_product(view: Pi0RingView, a: Component, b: Component) -> Component:
    if a.rack_id != id(view.rack) or b.rack_id != id(view.rack):
        raise RackError("components belong to different racks")
    return view.component(a.rep + b.rep)


def is_central(view: Pi0RingView, comp: Component) -> bool:
    """Whether comp commutes with every degree-one class."""
    for x in range(view.rack.size):
        ax = view.alpha(x)
        if view.product(comp, ax) != view.product(ax, comp):
            return False
    return True


# stabilization -------------------------------------------------------------------


@dataclass(frozen=True)
class StabilizationParams:
    degU: int
    D: int
    N0: int
    summands: tuple[tuple[int, int], ...]  # (g, exponent) with U = sum alpha_g^exponent


def _u_summands(rack: FiniteRack, D: int) -> tuple[tuple[int, int], ...]:
    return tuple((x, D * rack.element_order(x)) for x in range(rack.size))


def u_matrix(view: Pi0RingView, n: int, summands) -> np.ndarray:
    """Matrix of multiplication by U from degree n to degree n + deg U (rows: target)."""
    degU = summands[0][1]
    src = view.table(n)
    dst = view.table(n + degU)
    M = np.zeros((dst.count, src.count), dtype=np.int64)
    for j, rep in enumerate(src.reps):
        for x, e in summands:
            M[dst.component_of(rep + (x,) * e), j] += 1
    return M


def _rank(M: np.ndarray) -> int:
    from .rack_homology import integer_rank

    return integer_rank(M)


def _u_profile(rack: FiniteRack, D: int, cap: int, budget: int):
    summands = _u_summands(rack, D)
    exps = {e for _, e in summands}
    if len(exps) != 1:
        raise RackError("U is not homogeneous: element orders differ across the rack")
    degU = exps.pop()
    if cap < degU:
        raise CannotCertify(f"cap {cap} below deg U = {degU}")
    view = Pi0RingView(rack, cap, budget)
    # (injective, bijective) for U: degree n - deg U -> degree n, n = deg U .. cap
    prof = {}
    for n in range(degU, cap + 1):
        M = u_matrix(view, n - degU, summands)
        r = _rank(M)
        prof[n] = (r == M.shape[1], r == M.shape[1] == M.shape[0])
    return summands, degU, prof


def _onset(prof: dict, k: int, floor: int) -> int | None:
    ns = sorted(prof)
    if not prof[ns[-1]][k]:
        return None
    j = len(ns) - 1
    while j > 0 and prof[ns[j - 1]][k]:
        j -= 1
    return 0 if ns[j] <= floor else ns[j]


def compute_N0(rack: FiniteRack, D: int = 1, cap: int = 12, budget: int = DEFAULT_BUDGET) -> StabilizationParams:
    """Least n0 such that U: H_0(degree n - deg U) -> H_0(degree n) is bijective for max(n0, deg U) <= n <= cap.

    Degrees are indexed by the target.  Raises CannotCertify when U is not
    bijective at the top of the range.
    """
    summands, degU, prof = _u_profile(rack, D, cap, budget)
    n0 = _onset(prof, 1, degU)
    if n0 is None:
        raise CannotCertify(f"U is not bijective onto degree {cap}; no N0 can be certified below the cap")
    return StabilizationParams(degU, D, n0, summands)


def u_injective_from(rack: FiniteRack, D: int = 1, cap: int = 12, budget: int = DEFAULT_BUDGET) -> int | None:
    """Least target degree from which U is injective through the cap (None if not at the cap)."""
    _, degU, prof = _u_profile(rack, D, cap, budget)
    return _onset(prof, 0, degU)


@dataclass(frozen=True)
class StableCount:
    counts: dict[int, int]
    verdict: str
    value: int | None
    onset: int | None
    skipped: tuple[int, ...] = ()  # degrees where no tuple has the requested boundary


def reachable_boundaries(rack: FiniteRack, n: int) -> frozenset:
    """Group elements that occur as products of n entries of c."""
    G = rack.group
    cur = {G.identity}
    for _ in range(n):
        cur = {G.mul(a, rack.embedding[x]) for a in cur for x in range(rack.size)}
    return frozenset(cur)


def stable_component_count(
    rack: FiniteRack,
    boundary_element: int,
    n_range: Iterable[int],
    budget: int = DEFAULT_BUDGET,
) -> StableCount:
    """Orbits of tuples that generate G with product g, for each n in the range.

    Degrees where g is not a product of n elements of c at all (a parity
    obstruction for dihedral racks) are skipped rather than counted as 0.
    """
    G = rack.group
    if G is None:
        raise RackError("needs an ambient group")
    counts = {}
    skipped = []
    for n in n_range:
        if boundary_element not in reachable_boundaries(rack, n):
            skipped.append(n)
            continue
        counts[n] = braid_orbits(rack, n, boundary_element, generate_full=True, budget=budget).count
    ns = sorted(counts)
    short = "range too short to observe a constant tail"
    if len(ns) < 2:
        return StableCount(counts, short, None, None, tuple(skipped))
    v = counts[ns[-1]]
    k = len(ns) - 1
    while k > 0 and counts[ns[k - 1]] == v:
        k -= 1
    if k == len(ns) - 1:
        return StableCount(counts, short, None, None, tuple(skipped))
    return StableCount(counts, f"stabilized at value {v} from {ns[k]}", v, ns[k], tuple(skipped))


# witness searches ----------------------------------------------------------------


def _moves(n: int):
    for i in range(n - 1):
        yield (i, 1)
        yield (i, -1)


def _step(rack, t, mv):
    return sigma(rack, t, mv[0]) if mv[1] > 0 else sigma_inv(rack, t, mv[0])


def _search(rack: FiniteRack, start: tuple[int, ...], goal) -> list[tuple[int, int]] | None:
    """Breadth-first search for a braid word taking start into the goal set."""
    if goal(start):
        return []
    prev = {start: None}
    queue = deque([start])
    while queue:
        t = queue.popleft()
        for mv in _moves(len(t)):
            u = _step(rack, t, mv)
            if u in prev:
                continue
            prev[u] = (t, mv)
            if goal(u):
                word = []
                while prev[u] is not None:
                    u, mv2 = prev[u]
                    word.append(mv2)
                return word[::-1]
            queue.append(u)
    return None


def evw_witness(rack: FiniteRack, t: Sequence[int], g: int, right: bool = False) -> list[tuple[int, int]]:
    """Braid word moving t to a tuple (g, ...) (or (..., g)) whose other entries generate the same subrack."""
    t = tuple(t)
    S = subrack_closure(rack, t)
    if g not in S:
        raise RackError("g is not in the subrack generated by the tuple")

    def goal(u):
        if right:
            return u[-1] == g and subrack_closure(rack, u[:-1]) == S
        return u[0] == g and subrack_closure(rack, u[1:]) == S

    word = _search(rack, t, goal)
    if word is None:
        raise WitnessNotFound("orbit exhausted without reaching the required form")
    if not goal(apply_word(rack, t, word)):
        raise AssertionError("witness failed replay")
    return word


def evw_witness_all(rack: FiniteRack, n: int, g: int, right: bool = False) -> dict[tuple[int, ...], list[tuple[int, int]]]:
    """Witness words for every tuple of length n generating the whole rack.

    One multi-source search per orbit: words are found backwards from all
    tuples already in the required form.
    """
    full = frozenset(range(rack.size))
    out: dict[tuple[int, ...], list[tuple[int, int]]] = {}
    inverse = {1: -1, -1: 1}

    def is_goal(u):
        rest = u[:-1] if right else u[1:]
        return (u[-1] if right else u[0]) == g and subrack_closure(rack, rest) == full

    for t in itertools.product(range(rack.size), repeat=n):
        if t in out or subrack_closure(rack, t) != full:
            continue
        # collect the orbit
        orbit = {t}
        queue = deque([t])
        while queue:
            u = queue.popleft()
            for mv in _moves(n):
                v = _step(rack, u, mv)
                if v not in orbit:
                    orbit.add(v)
                    queue.append(v)
        goals = [u for u in orbit if is_goal(u)]
        words: dict[tuple[int, ...], list[tuple[int, int]]] = {u: [] for u in goals}
        queue = deque(goals)
        while queue:
            u = queue.popleft()
            for mv in _moves(n):
                v = _step(rack, u, mv)
                if v not in words:
                    # v = mv(u), so undoing mv from v reaches u
                    words[v] = [(mv[0], inverse[mv[1]])] + words[u]
                    queue.append(v)
        missing = orbit - set(words)
        if missing:
            raise WitnessNotFound(f"no tuple of the required form in the orbit of {min(missing)}")
        for u, w in words.items():
            if not is_goal(apply_word(rack, u, w)):
                raise AssertionError("witness failed replay")
            out[u] = w
    return out


@dataclass(frozen=True)
class HomWitness:
    N: int
    ys: tuple[int, ...]
    word: tuple[tuple[int, int], ...]  # takes (gamma^N, beta) to (ys, beta, beta)


def homepi_witness(rack: FiniteRack, sub: Iterable[int], beta: int, gamma: int, max_N: int = 12) -> HomWitness:
    """Least N with (y_1..y_{N-1}, beta, beta) in the braid orbit of (gamma^N, beta)."""
    sub = frozenset(sub)
    if subrack_closure(rack, sub) != sub or not sub:
        raise RackError("c' must be a nonempty subrack")
    if beta in sub:
        raise RackError("beta must lie outside c'")
    if gamma not in sub:
        raise RackError("gamma must lie in c'")
    for N in range(1, max_N + 1):
        start = (gamma,) * N + (beta,)
        word = _search(rack, start, lambda u: u[-1] == beta and u[-2] == beta)
        if word is not None:
            end = apply_word(rack, start, word)
            if end[-2:] != (beta, beta):
                raise AssertionError("witness failed replay")
            return HomWitness(N, end[:-2], tuple(word))
    raise WitnessNotFound(f"no witness with N <= {max_N}")


# finite monoid check ---------------------------------------------------------------


@dataclass(frozen=True)
class FiniteMonoid:
    table: tuple[tuple[int, ...], ...]
    identity: int
    labels: tuple[str, ...] = ()

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def pow(self, a: int, k: int) -> int:
        out = self.identity
        for _ in range(k):
            out = self.table[out][a]
        return out

    def is_central(self, a: int) -> bool:
        return all(self.table[a][b] == self.table[b][a] for b in range(len(self.table)))


def idempotent_witness(M: FiniteMonoid, x: int, z: int, n: int, m: int, m_prime: int) -> int:
    """Check z x^n = x^m and x^m' central, then that e = z^(n m') x^(n (n-m) m') is a central idempotent.

    Returns e.
    """
    if n < m:
        raise ValueError("need n >= m")
    if M.mul(z, M.pow(x, n)) != M.pow(x, m):
        raise ValueError("z x^n = x^m fails in the supplied monoid")
    if not M.is_central(M.pow(x, m_prime)):
        raise ValueError("x^m' is not central in the supplied monoid")
    e = M.mul(M.pow(z, n * m_prime), M.pow(x, n * (n - m) * m_prime))
    if M.mul(e, e) != e:
        raise AssertionError("e is not idempotent")
    if not M.is_central(e):
        raise AssertionError("e is not central")
    return e


def localized_component_monoid(rack: FiniteRack, sub: Iterable[int]) -> tuple[FiniteMonoid, dict]:
    """Pairs (S, b), S a subrack containing c', b in G, with (S, b)(T, b') = (<S u T>, b b').

    This is where stable components land once the classes of c' are inverted:
    a component is remembered by its generated subrack and boundary only.
    Returns the monoid and a map (S, b) -> index.
    """
    G = rack.group
    if G is None:
        raise RackError("needs an ambient group")
    sub = frozenset(sub)
    Ss = [S for S in subracks(rack) if sub <= S]
    elems = [(S, b) for S in Ss for b in range(G.order)]
    index = {e: i for i, e in enumerate(elems)}
    table = []
    for S, b in elems:
        row = []
        for T, b2 in elems:
            row.append(index[(subrack_closure(rack, S | T), G.mul(b, b2))])
        table.append(tuple(row))
    ident = index[(sub, G.identity)]
    labels = tuple(f"<{','.join(rack.labels[i] for i in sorted(S))}>:{G.labels[b]}" for S, b in elems)
    return FiniteMonoid(tuple(table), ident, labels), index


def monoid_class(rack: FiniteRack, index: dict, sub: Iterable[int], t: Sequence[int], gamma: int | None = None, shift: int = 0) -> int:
    """Class of alpha_gamma^-shift [t] in the localized monoid."""
    G = rack.group
    sub = frozenset(sub)
    S = subrack_closure(rack, sub | set(t))
    b = G.product(rack.embedding[x] for x in t)
    if shift:
        if gamma not in sub:
            raise RackError("gamma must lie in c'")
        gi = G.inverse[rack.embedding[gamma]]
        b = G.product([gi] * shift + [b])
    return index[(S, b)]


__all__ = [
    "BudgetExceeded",
    "CannotCertify",
    "Component",
    "ComponentTable",
    "FiniteMonoid",
    "HomWitness",
    "Pi0RingView",
    "StabilizationParams",
    "StableCount",
    "WitnessNotFound",
    "apply_word",
    "boundary",
    "braid_orbits",
    "compute_N0",
    "evw_witness",
    "evw_witness_all",
    "homepi_witness",
    "idempotent_witness",
    "is_central",
    "localized_component_monoid",
    "monoid_class",
    "pi0_product",
    "reachable_boundaries",
    "sigma",
    "sigma_inv",
    "stable_component_count",
    "u_injective_from",
    "u_matrix",
]
