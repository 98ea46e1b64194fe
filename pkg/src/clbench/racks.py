"""Finite racks and groups given by dense tables.

Convention: x |> y = x^-1 y x for conjugation racks, and the rack table
stores t[x][y] = x |> y.  Left translations phi_x(y) = x |> y are bijections
and the operation is left self-distributive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .clgroup import FiniteAbelianGroup

SUBRACK_CAP = 16


class RackError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGroup:
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()
    identity: int = field(init=False)
    inverse: tuple[int, ...] = field(init=False)

    def __post_init__(self):
        T = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", T)
        n = len(T)
        if any(len(row) != n for row in T):
            raise RackError("group table must be square")
        if any(sorted(row) != list(range(n)) for row in T):
            raise RackError("group table rows must be permutations")
        if any(sorted(T[i][j] for i in range(n)) != list(range(n)) for j in range(n)):
            raise RackError("group table columns must be permutations")
        ids = [e for e in range(n) if all(T[e][x] == x and T[x][e] == x for x in range(n))]
        if len(ids) != 1:
            raise RackError("group table has no two-sided identity")
        e = ids[0]
        for a, b, c in itertools.product(range(n), repeat=3):
            if T[T[a][b]][c] != T[a][T[b][c]]:
                raise RackError("group table is not associative")
        inv = tuple(next(b for b in range(n) if T[a][b] == e) for a in range(n))
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", inv)
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(n)))

    @property
    def order(self) -> int:
        return len(self.table)

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def product(self, seq: Iterable[int]) -> int:
        acc = self.identity
        for x in seq:
            acc = self.table[acc][x]
        return acc

    def conj(self, x: int, y: int) -> int:
        """x^-1 y x."""
        return self.table[self.table[self.inverse[x]][y]][x]

    def element_order(self, a: int) -> int:
        k, cur = 1, a
        while cur != self.identity:
            cur = self.table[cur][a]
            k += 1
        return k

    def subgroup_generated(self, gens: Iterable[int]) -> frozenset:
        gens = list(gens)
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for gg in gens:
                    y = self.table[x][gg]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(seen)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)


def permutation_group(perms: Sequence[tuple[int, ...]], labels=None) -> FiniteGroup:
    """Group table for a list of permutations closed under composition.

    Composition is (a*b)(i) = b(a(i)) (apply a first), so that conjugation
    a^-1 b a matches the usual left-to-right convention.
    """
    perms = [tuple(p) for p in perms]
    index = {p: i for i, p in enumerate(perms)}
    table = []
    for a in perms:
        row = []
        for b in perms:
            c = tuple(b[a[i]] for i in range(len(a)))
            if c not in index:
                raise RackError("permutations are not closed under composition")
            row.append(index[c])
        table.append(row)
    return FiniteGroup(tuple(map(tuple, table)), tuple(labels) if labels else ())


def _cycle_label(p: tuple[int, ...]) -> str:
    seen, out = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(j + 1)
            j = p[j]
        out.append("(" + "".join(map(str, cyc)) + ")")
    return "".join(out) or "id"


def symmetric_group(k: int) -> FiniteGroup:
    perms = sorted(itertools.permutations(range(k)))
    return permutation_group(perms, [_cycle_label(p) for p in perms])


def generalized_dihedral(H: FiniteAbelianGroup) -> tuple[FiniteGroup, list[int]]:
    """H x| Z/2 with the involution acting by inversion, and c = the elements over 1 in Z/2.

    Element (h, s) is indexed by s * |H| + index(h).
    """
    if H.order % 2 == 0:
        raise RackError("generalized dihedral groups here need |H| odd")
    elems = list(H.elements()) or [()]
    idx = {h: i for i, h in enumerate(elems)}
    N = len(elems)
    ds = H.factors

    def add(a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, ds))

    def neg(a):
        return tuple((-x) % d for x, d in zip(a, ds))

    table = []
    labels = []
    for s1 in (0, 1):
        for h1 in elems:
            row = []
            for s2 in (0, 1):
                for h2 in elems:
                    # (h1, s1)(h2, s2) = (h1 + s1.h2, s1 + s2)
                    h = add(h1, neg(h2) if s1 else h2)
                    row.append(((s1 + s2) % 2) * N + idx[h])
            table.append(row)
            labels.append(("r" if s1 else "") + (",".join(map(str, h1)) or "0"))
    G = FiniteGroup(tuple(map(tuple, table)), tuple(labels))
    c = list(range(N, 2 * N))
    return G, c


@dataclass(frozen=True)
class FiniteRack:
    table: tuple[tuple[int, ...], ...]
    labels: tuple[str, ...] = ()
    group: FiniteGroup | None = field(default=None, compare=False)
    embedding: tuple[int, ...] = ()  # rack element -> group element

    def __post_init__(self):
        T = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", T)
        m = len(T)
        if any(len(row) != m for row in T):
            raise RackError("rack table must be square")
        for x in range(m):
            if sorted(T[x]) != list(range(m)):
                raise RackError(f"left translation by {x} is not a bijection")
        for x, y, z in itertools.product(range(m), repeat=3):
            if T[x][T[y][z]] != T[T[x][y]][T[x][z]]:
                raise RackError(f"self-distributivity fails at {(x, y, z)}")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(m)))
        inv = []
        for x in range(m):
            row = [0] * m
            for y in range(m):
                row[T[x][y]] = y
            inv.append(tuple(row))
        object.__setattr__(self, "_inv", tuple(inv))

    @property
    def size(self) -> int:
        return len(self.table)

    def op(self, x: int, y: int) -> int:
        return self.table[x][y]

    def op_inv(self, x: int, y: int) -> int:
        """phi_x^-1(y)."""
        return self._inv[x][y]

    def is_quandle(self) -> bool:
        return all(self.table[x][x] == x for x in range(self.size))

    def phi_order(self, x: int) -> int:
        perm = self.table[x]
        k, cur = 1, list(perm)
        while cur != list(range(self.size)):
            cur = [perm[i] for i in cur]
            k += 1
        return k

    def element_order(self, x: int) -> int:
        """Order in the ambient group if attached, else the order of phi_x."""
        if self.group is not None:
            return self.group.element_order(self.embedding[x])
        return self.phi_order(x)

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    # text format -------------------------------------------------------

    def dumps(self) -> str:
        lines = ["rack", str(self.size)]
        lines += [" ".join(map(str, row)) for row in self.table]
        return "\n".join(lines) + "\n"


def dumps_group(G: FiniteGroup) -> str:
    lines = ["group", str(G.order)] + [" ".join(map(str, row)) for row in G.table]
    return "\n".join(lines) + "\n"


def loads(text: str):
    """Parse a 'rack' or 'group' table: tag line, size line, then the rows."""
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip() and not ln.startswith("#")]
    if len(lines) < 2:
        raise RackError("table text too short")
    tag, m = lines[0].lower(), int(lines[1])
    rows = [tuple(int(x) for x in ln.split()) for ln in lines[2:]]
    if len(rows) != m:
        raise RackError(f"expected {m} rows, got {len(rows)}")
    if tag == "rack":
        return FiniteRack(tuple(rows))
    if tag == "group":
        return FiniteGroup(tuple(rows))
    raise RackError(f"unknown table tag {tag!r}")


# constructions --------------------------------------------------------------


def conjugation_rack(G: FiniteGroup, c: Sequence[int]) -> FiniteRack:
    """Rack on c with x |> y = x^-1 y x."""
    c = list(c)
    pos = {g: i for i, g in enumerate(c)}
    table = []
    for x in c:
        row = []
        for y in c:
            z = G.conj(x, y)
            if z not in pos:
                raise RackError(f"{G.labels[x]}^-1 {G.labels[y]} {G.labels[x]} leaves c")
            row.append(pos[z])
        table.append(tuple(row))
    return FiniteRack(tuple(table), tuple(G.labels[g] for g in c), G, tuple(c))


def trivial_rack(m: int) -> FiniteRack:
    return FiniteRack(tuple(tuple(range(m)) for _ in range(m)))


def conjugacy_class(G: FiniteGroup, g: int) -> list[int]:
    return sorted({G.conj(x, g) for x in range(G.order)})


def dihedral_rack(H: FiniteAbelianGroup | str) -> FiniteRack:
    if isinstance(H, str):
        H = FiniteAbelianGroup.parse(H)
    G, c = generalized_dihedral(H)
    return conjugation_rack(G, c)


def standard_racks() -> dict[str, FiniteRack]:
    """The small racks used throughout the tests and the CLI."""
    S3 = symmetric_group(3)
    S4 = symmetric_group(4)
    transp3 = [i for i, lab in enumerate(S3.labels) if lab.count("(") == 1 and len(lab) == 4]
    cyc3 = [i for i, lab in enumerate(S3.labels) if len(lab) == 5]
    transp4 = [i for i, lab in enumerate(S4.labels) if lab.count("(") == 1 and len(lab) == 4]
    out = {
        "point": trivial_rack(1),
        "trivial2": trivial_rack(2),
        "trivial3": trivial_rack(3),
        "s3_transpositions": conjugation_rack(S3, transp3),
        "s3_transpositions_and_3cycles": conjugation_rack(S3, transp3 + cyc3),
        "s4_transpositions": conjugation_rack(S4, transp4),
    }
    for name in ("3", "5", "9", "3,3", "15"):
        out["dihedral_" + name.replace(",", "x")] = dihedral_rack(name)
    return out


# structure ------------------------------------------------------------------


def connected_components(rack: FiniteRack) -> list[list[int]]:
    """Orbits of the group generated by all left translations."""
    m = rack.size
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for x in range(m):
        for y in range(m):
            a, b = find(y), find(rack.table[x][y])
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict[int, list[int]] = {}
    for y in range(m):
        groups.setdefault(find(y), []).append(y)
    return sorted(groups.values())


def subrack_closure(rack: FiniteRack, subset: Iterable[int]) -> frozenset:
    """Smallest subset containing ``subset`` closed under |>."""
    S = set(subset)
    frontier = list(S)
    while frontier:
        nxt = []
        for x in list(S):
            for y in frontier:
                for z in (rack.table[x][y], rack.table[y][x]):
                    if z not in S:
                        S.add(z)
                        nxt.append(z)
        frontier = nxt
    return frozenset(S)


def subracks(rack: FiniteRack, include_empty: bool = False) -> list[frozenset]:
    """Every subset closed under |>, found by closing up one element at a time."""
    m = rack.size
    if m > SUBRACK_CAP:
        raise RackError(f"subrack enumeration is capped at {SUBRACK_CAP} elements")
    found = {frozenset()}
    frontier = [frozenset()]
    while frontier:
        nxt = []
        for S in frontier:
            for x in range(m):
                if x not in S:
                    T = subrack_closure(rack, S | {x})
                    if T not in found:
                        found.add(T)
                        nxt.append(T)
        frontier = nxt
    out = sorted(found, key=lambda s: (len(s), sorted(s)))
    return out if include_empty else [s for s in out if s]


def restrict(rack: FiniteRack, subset: Iterable[int]) -> FiniteRack:
    elems = sorted(subset)
    pos = {e: i for i, e in enumerate(elems)}
    table = tuple(tuple(pos[rack.table[x][y]] for y in elems) for x in elems)
    return FiniteRack(table, tuple(rack.labels[e] for e in elems))


def is_connected_subset(rack: FiniteRack, subset: Iterable[int]) -> bool:
    """Whether a subrack is a single orbit under its own translations."""
    elems = sorted(subset)
    if not elems:
        return True
    seen = {elems[0]}
    frontier = [elems[0]]
    while frontier:
        nxt = []
        for y in frontier:
            for x in elems:
                for z in (rack.table[x][y], rack.op_inv(x, y)):
                    if z not in seen:
                        seen.add(z)
                        nxt.append(z)
        frontier = nxt
    return len(seen) == len(elems)


def is_nonsplitting(rack: FiniteRack) -> bool:
    """Every nonempty subrack is connected."""
    return all(is_connected_subset(rack, S) for S in subracks(rack))


def normalizer(rack: FiniteRack, subset: Iterable[int]) -> frozenset:
    """{x in c : x |> c' = c'}."""
    sub = frozenset(subset)
    if any(not 0 <= s < rack.size for s in sub):
        raise RackError("subset is not contained in the rack")
    return frozenset(x for x in range(rack.size) if frozenset(rack.table[x][y] for y in sub) == sub)


def is_self_normalizing(rack: FiniteRack, subset: Iterable[int]) -> bool:
    sub = frozenset(subset)
    return normalizer(rack, sub) == sub


__all__ = [
    "FiniteGroup",
    "FiniteRack",
    "RackError",
    "conjugacy_class",
    "conjugation_rack",
    "connected_components",
    "dihedral_rack",
    "dumps_group",
    "generalized_dihedral",
    "is_connected_subset",
    "is_nonsplitting",
    "is_self_normalizing",
    "loads",
    "normalizer",
    "permutation_group",
    "restrict",
    "standard_racks",
    "subrack_closure",
    "subracks",
    "symmetric_group",
    "trivial_rack",
]
