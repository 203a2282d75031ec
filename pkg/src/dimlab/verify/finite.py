"""Finite groups by multiplication table and their dimension subgroups."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Callable, Hashable, Sequence

from ..abelian import FgAbelian, _Echelon
from ..errors import NotAGroup, ParseError, ResourceBound, SectionNotAbelian

MAX_ORDER = 32


@dataclass(frozen=True)
class FiniteGroupTable:
    order: int
    table: tuple[tuple[int, ...], ...]
    identity: int
    name: str = ""

    def __post_init__(self):
        n = self.order
        if len(self.table) != n or any(len(r) != n for r in self.table):
            raise NotAGroup("table is not n x n")
        if any(not 0 <= x < n for r in self.table for x in r):
            raise NotAGroup("table entry out of range")
        e = self.identity
        if any(self.table[e][g] != g or self.table[g][e] != g for g in range(n)):
            raise NotAGroup("identity index is not a two-sided identity")
        for r in self.table:
            if len(set(r)) != n:
                raise NotAGroup("a row is not a permutation, so inverses fail")
        t = self.table
        for a, b, c in product(range(n), repeat=3):
            if t[t[a][b]][c] != t[a][t[b][c]]:
                raise NotAGroup(f"associativity fails at ({a},{b},{c})")

    def mul(self, a: int, b: int) -> int:
        return self.table[a][b]

    def inv(self, a: int) -> int:
        return self.table[a].index(self.identity)

    def comm(self, a: int, b: int) -> int:
        """a^-1 b^-1 a b."""
        return self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))

    def power(self, a: int, k: int) -> int:
        x = self.identity
        for _ in range(k):
            x = self.mul(x, a)
        return x

    def is_abelian(self) -> bool:
        return all(self.table[a][b] == self.table[b][a] for a in range(self.order) for b in range(a))

    def subgroup(self, gens) -> frozenset[int]:
        elems = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in elems:
                        elems.add(y)
                        nxt.append(y)
            frontier = nxt
        return frozenset(elems)

    def lower_central(self, k: int) -> frozenset[int]:
        """gamma_k(G) by commutator closure."""
        cur = frozenset(range(self.order))
        for _ in range(k - 1):
            cur = self.subgroup({self.comm(a, b) for a in cur for b in range(self.order)})
        return cur

    def to_text(self) -> str:
        rows = [" ".join(str(x + 1) for x in r) for r in self.table]
        return "\n".join([str(self.order)] + rows) + "\n"


def parse_table(text: str, name: str = "") -> FiniteGroupTable:
    """First line the order n, then n rows of n 1-based indices."""
    lines = [l.split("#", 1)[0].strip() for l in text.splitlines()]
    lines = [l for l in lines if l]
    if not lines:
        raise ParseError("empty group table")
    try:
        n = int(lines[0])
        rows = [tuple(int(x) - 1 for x in l.split()) for l in lines[1:]]
    except ValueError as exc:
        raise ParseError(f"bad group table: {exc}") from None
    if len(rows) != n:
        raise NotAGroup(f"expected {n} rows, got {len(rows)}")
    ids = [e for e in range(n) if rows[e] == tuple(range(n))]
    if not ids:
        raise NotAGroup("no identity row")
    return FiniteGroupTable(n, tuple(rows), ids[0], name)


def load_table(path: str | Path) -> FiniteGroupTable:
    p = Path(path)
    return parse_table(p.read_text(), p.stem)


def table_from_elements(elements: Sequence[Hashable], mul: Callable, name: str = "") -> FiniteGroupTable:
    pos = {x: i for i, x in enumerate(elements)}
    table = tuple(tuple(pos[mul(a, b)] for b in elements) for a in elements)
    e = next(i for i in range(len(elements)) if table[i] == tuple(range(len(elements))))
    return FiniteGroupTable(len(elements), table, e, name)


def abelian_table(invariants: Sequence[int]) -> FiniteGroupTable:
    elements = list(product(*[range(d) for d in invariants])) if invariants else [()]
    return table_from_elements(
        elements, lambda a, b: tuple((x + y) % d for x, y, d in zip(a, b, invariants)),
        "Z/" + "+Z/".join(map(str, invariants)) if invariants else "1")


def dihedral_table(n: int = 4) -> FiniteGroupTable:
    """Dihedral group of order 2n as pairs (rotation, reflection flag)."""
    elements = [(r, s) for s in (0, 1) for r in range(n)]

    def mul(a, b):
        r1, s1 = a
        r2, s2 = b
        return ((r1 + (-r2 if s1 else r2)) % n, s1 ^ s2)
    return table_from_elements(elements, mul, f"D{2 * n}")


def quaternion_table() -> FiniteGroupTable:
    """Q8 as signed unit quaternions (sign, index) with index 0..3 for 1, i, j, k."""
    # i*j = k, j*k = i, k*i = j
    unit = {(0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
            (1, 0): (1, 1), (2, 0): (1, 2), (3, 0): (1, 3),
            (1, 1): (-1, 0), (2, 2): (-1, 0), (3, 3): (-1, 0),
            (1, 2): (1, 3), (2, 3): (1, 1), (3, 1): (1, 2),
            (2, 1): (-1, 3), (3, 2): (-1, 1), (1, 3): (-1, 2)}
    elements = [(s, u) for s in (1, -1) for u in range(4)]

    def mul(a, b):
        s, u = unit[(a[1], b[1])]
        return (a[0] * b[0] * s, u)
    return table_from_elements(elements, mul, "Q8")


def _chains(n: int, smallest: int = 2) -> list[list[int]]:
    """Invariant-factor lists d_1 | d_2 | ... with product n."""
    if n == 1:
        return [[]]
    out = []
    for d in range(smallest, n + 1):
        if n % d == 0:
            for rest in _chains(n // d, d):
                if not rest or rest[0] % d == 0:
                    out.append([d] + rest)
    return out


def corpus(max_abelian_order: int = 16) -> list[FiniteGroupTable]:
    """All abelian groups of order <= max_abelian_order, plus D8 and Q8."""
    out = [abelian_table(inv) for n in range(1, max_abelian_order + 1) for inv in _chains(n)]
    out += [dihedral_table(4), quaternion_table()]
    return out


def augmentation_power(G: FiniteGroupTable, n: int) -> _Echelon:
    """g^n as an echelon lattice in Z^{|G|} (coordinates indexed by group elements)."""
    N = G.order
    e = G.identity
    ech = _Echelon(N)
    for g in range(N):
        if g != e:
            v = [0] * N
            v[g] += 1
            v[e] -= 1
            ech.add(v)
    for _ in range(n - 1):
        basis = list(ech.rows.values())
        nxt = _Echelon(N)
        for v in basis:
            for g in range(N):
                if g == e:
                    continue
                w = [0] * N
                for h, x in enumerate(v):
                    if x:
                        w[G.table[h][g]] += x
                        w[h] -= x
                if any(w):
                    nxt.add(w)
        ech = nxt
    return ech


def dimension_subgroup(G: FiniteGroupTable, n: int) -> frozenset[int]:
    ech = augmentation_power(G, n)
    out = []
    for g in range(G.order):
        v = [0] * G.order
        v[g] += 1
        v[G.identity] -= 1
        if not any(ech.reduce(v)):
            out.append(g)
    return frozenset(out)


def finite_abelian_invariants(G: FiniteGroupTable, H: frozenset[int], N: frozenset[int]) -> list[int]:
    """Invariant factors of the abelian quotient H/N (N normal in G, [H,H] in N)."""
    for a in H:
        for b in H:
            if G.comm(a, b) not in N:
                raise SectionNotAbelian("quotient is not abelian")
    m = len(H) // len(N)
    if m == 1:
        return []

    def order_mod(x):
        k, y = 1, x
        while y not in N:
            y = G.mul(y, x)
            k += 1
        return k
    orders = [order_mod(x) for x in H]
    # elements of H/N whose order divides d, counted per coset
    primes = [p for p in range(2, m + 1) if m % p == 0 and all(p % q for q in range(2, p))]
    parts = {}
    for p in primes:
        counts = []
        k = 0
        while True:
            c = sum(1 for o in orders if (p ** k) % o == 0) // len(N)
            counts.append(c)
            if k and counts[-1] == counts[-2]:
                break
            k += 1
        # number of cyclic p-factors of order >= p^k is log_p(c_k / c_{k-1})
        ge = []
        for k in range(1, len(counts)):
            r, t = counts[k] // counts[k - 1], 0
            while r > 1:
                r //= p
                t += 1
            ge.append(t)
        exps = []
        for k, t in enumerate(ge, 1):
            nxt = ge[k] if k < len(ge) else 0
            exps += [k] * (t - nxt)
        parts[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in parts.values()), default=0)
    inv = []
    for i in range(width):
        d = 1
        for p, ex in parts.items():
            if i < len(ex):
                d *= p ** ex[i]
        inv.append(d)
    return sorted(inv, key=lambda d: d)  # divisibility chain, smallest first


def abelianization(G: FiniteGroupTable) -> list[int]:
    return finite_abelian_invariants(G, frozenset(range(G.order)), G.lower_central(2))


def dim_quotient_finite(G: FiniteGroupTable, n: int) -> FgAbelian:
    """Invariant factors of D_n(G)/gamma_n(G) as an FgAbelian."""
    if G.order > MAX_ORDER:
        raise ResourceBound(f"group order {G.order} exceeds {MAX_ORDER}")
    if n > 4:
        raise ResourceBound("only n <= 4 is supported")
    D = dimension_subgroup(G, n)
    gam = G.lower_central(n)
    if not gam <= D:
        raise NotAGroup("gamma_n is not inside D_n; the table is inconsistent")
    return FgAbelian.from_invariants(finite_abelian_invariants(G, D, gam))
