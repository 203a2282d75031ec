"""Truncated lattices of two-sided ideals of Z[F] and generalized dimension subgroups.

All lattices live in the monomial module of degrees 1..N; everything is
modulo f^{N+1}.  Modulo f^{N+1} the Magnus image of Z[F] is the whole
truncated ring, so the two-sided ideal generated by rho - 1 is spanned by
m1 (rho - 1) m2 over monomials m1, m2.

Sums and products are exact.  An intersection computes
(A + f^{N+1}) & (B + f^{N+1}), which is the truncation of A & B whenever
one side already contains f^{N+1}; meets with a power of f always qualify.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .abelian import Lattice, _Echelon, preimage_lattice, from_columns
from .errors import DegreeOverflow, ParseError, UnresolvedAtom, UnsupportedWindow
from .magnus import FreeWord, MonomialIndex, TruncSeries, expand, monomial_index
from .nilpotent import NilContext, NilSubgroup, subgroup_close

MAX_DEGREE = 4


# ---------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class IdealExpr:
    """op in {'f', 'rel', 'delta', '*', '+', '&', '^'}."""
    op: str
    args: tuple = ()
    name: str = ""
    k: int = 0

    def __mul__(self, other):
        return IdealExpr("*", (self, other))

    def __add__(self, other):
        return IdealExpr("+", (self, other))

    def __and__(self, other):
        return IdealExpr("&", (self, other))

    def __pow__(self, k: int):
        if k < 1:
            raise ValueError("ideal powers start at 1")
        return IdealExpr("^", (self,), k=k)

    def __str__(self):
        if self.op == "f":
            return "f"
        if self.op == "rel":
            return self.name
        if self.op == "delta":
            return f"delta({self.name})"
        if self.op == "^":
            return f"{_paren(self.args[0], '^')}^{self.k}"
        sym = {"*": "*", "+": " + ", "&": " & "}[self.op]
        return sym.join(_paren(a, self.op) for a in self.args)


_PREC = {"&": 0, "+": 1, "*": 2, "^": 3}


def _paren(e: IdealExpr, outer: str) -> str:
    s = str(e)
    if e.op in _PREC and _PREC[e.op] < _PREC[outer]:
        return f"({s})"
    return s


F_AUG = IdealExpr("f")


def REL(name: str = "r") -> IdealExpr:
    return IdealExpr("rel", name=name)


def DELTA(name: str) -> IdealExpr:
    return IdealExpr("delta", name=name)


_TOK = re.compile(r"\s*(?:(delta)\s*\(\s*([A-Za-z_]\w*)\s*\)|([A-Za-z_]\w*)|(\d+)|(.))")


def parse_ideal(text: str) -> IdealExpr:
    """Grammar: atoms f, r (or any relator-set name), delta(name); * + ^k & and parentheses.

    Precedence, loosest first: &, +, *, ^.  Juxtaposition is product, so
    ``frf`` is not split; write ``f*r*f``.
    """
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            break
        if m.group(1):
            toks.append(("delta", m.group(2)))
        elif m.group(3):
            toks.append(("atom", m.group(3)))
        elif m.group(4):
            toks.append(("int", int(m.group(4))))
        elif m.group(5).strip():
            toks.append(("op", m.group(5)))
        pos = m.end()
    i = 0

    def peek(kind=None, val=None):
        if i >= len(toks):
            return False
        k, v = toks[i]
        return (kind is None or k == kind) and (val is None or v == val)

    def take():
        nonlocal i
        i += 1
        return toks[i - 1]

    def inter():
        e = plus()
        while peek("op", "&"):
            take()
            e = e & plus()
        return e

    def plus():
        e = times()
        while peek("op", "+"):
            take()
            e = e + times()
        return e

    def times():
        e = power()
        while peek("op", "*"):
            take()
            e = e * power()
        return e

    def power():
        e = atom()
        while peek("op", "^"):
            take()
            if not peek("int"):
                raise ParseError("exponent expected after ^")
            e = e ** take()[1]
        return e

    def atom():
        if peek("op", "("):
            take()
            e = inter()
            if not peek("op", ")"):
                raise ParseError(f"missing ) in {text!r}")
            take()
            return e
        if peek("delta"):
            return DELTA(take()[1])
        if peek("atom"):
            name = take()[1]
            return F_AUG if name == "f" else REL(name)
        raise ParseError(f"unexpected token in {text!r}")

    e = inter()
    if i != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return e


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class TruncIdealLattice:
    rank: int
    max_degree: int
    lattice: Lattice

    @property
    def index(self) -> MonomialIndex:
        return monomial_index(self.rank, self.max_degree)

    def contains_series(self, s: TruncSeries) -> bool:
        return s.to_vector(self.index) in self.lattice

    def __contains__(self, s) -> bool:
        return self.contains_series(s)

    def __eq__(self, other):
        return (isinstance(other, TruncIdealLattice) and self.rank == other.rank
                and self.max_degree == other.max_degree and self.lattice == other.lattice)

    def __hash__(self):
        return hash((self.rank, self.max_degree, self.lattice.basis))

    def __le__(self, other: "TruncIdealLattice") -> bool:
        return self.lattice <= other.lattice

    def reversed(self) -> "TruncIdealLattice":
        """Image under the anti-automorphism reversing monomials."""
        idx = self.index
        perm = [idx.position[m[::-1]] for m in idx.monomials]
        vecs = []
        for b in self.lattice.basis:
            v = [0] * idx.dim
            for j, x in enumerate(b):
                if x:
                    v[perm[j]] = x
            vecs.append(v)
        return TruncIdealLattice(self.rank, self.max_degree, Lattice.from_vectors(vecs, idx.dim))

    def lowest_degree(self) -> int | None:
        idx = self.index
        ds = [len(idx.monomials[p]) for p in self.lattice.pivots]
        return min(ds) if ds else None

    def degree_window(self) -> int:
        """Largest k with lattice inside f^k (N+1 for the zero lattice)."""
        idx = self.index
        lo = self.max_degree + 1
        for b in self.lattice.basis:
            for j, x in enumerate(b):
                if x:
                    lo = min(lo, len(idx.monomials[j]))
                    break
        return lo


@dataclass
class _Val:
    lattice: Lattice
    two_sided: bool
    fpow: int | None = None  # equals f^k exactly


class _Evaluator:
    def __init__(self, rank: int, N: int, relators: Mapping[str, Sequence[FreeWord]],
                 subgroups: Mapping[str, NilSubgroup]):
        if N > MAX_DEGREE:
            raise DegreeOverflow(f"truncation degree {N} exceeds {MAX_DEGREE}")
        self.rank, self.N = rank, N
        self.idx = monomial_index(rank, N)
        self.relators = relators
        self.subgroups = subgroups
        self.cache: dict = {}
        self.monos_by_degree = {d: [m for m in self.idx.monomials if len(m) == d] for d in range(1, N + 1)}

    def sparse(self, v) -> list[tuple[tuple, int]]:
        ms = self.idx.monomials
        return [(ms[j], x) for j, x in enumerate(v) if x]

    def series_sparse(self, s: TruncSeries) -> list[tuple[tuple, int]]:
        return [(m, c) for m, c in s.items()]

    def mul(self, a, b) -> list[int] | None:
        N, pos = self.N, self.idx.position
        v = [0] * self.idx.dim
        nz = False
        for m1, c1 in a:
            d1 = len(m1)
            if d1 >= N:
                continue
            for m2, c2 in b:
                if d1 + len(m2) <= N:
                    v[pos[m1 + m2]] += c1 * c2
                    nz = True
        return v if nz else None

    def span(self, vecs) -> Lattice:
        ech = _Echelon(self.idx.dim)
        for v in vecs:
            if v is not None and any(v):
                ech.add(v)
        return Lattice(self.idx.dim, tuple(tuple(r) for r in ech.canonical_rows()))

    def eval(self, e: IdealExpr) -> _Val:
        if e in self.cache:
            return self.cache[e]
        op = e.op
        if op == "f":
            val = self.fpow(1)
        elif op == "rel":
            val = _Val(self.rel(e.name), True)
        elif op == "delta":
            val = _Val(self.delta(e.name), False)
        elif op == "^":
            base = self.eval(e.args[0])
            if base.fpow is not None:
                val = self.fpow(base.fpow * e.k)
            else:
                val = base
                for _ in range(e.k - 1):
                    val = self.product(val, base)
        elif op == "*":
            val = self.product(self.eval(e.args[0]), self.eval(e.args[1]))
        elif op == "+":
            a, b = self.eval(e.args[0]), self.eval(e.args[1])
            val = _Val(a.lattice + b.lattice, a.two_sided and b.two_sided,
                       min(a.fpow, b.fpow) if a.fpow and b.fpow else None)
        elif op == "&":
            from .abelian import lattice_intersect
            a, b = self.eval(e.args[0]), self.eval(e.args[1])
            val = _Val(lattice_intersect(a.lattice, b.lattice), a.two_sided and b.two_sided,
                       max(a.fpow, b.fpow) if a.fpow and b.fpow else None)
        else:
            raise ValueError(f"unknown ideal operator {op!r}")
        self.cache[e] = val
        return val

    def fpow(self, k: int) -> _Val:
        vecs = []
        for j, m in enumerate(self.idx.monomials):
            if len(m) >= k:
                v = [0] * self.idx.dim
                v[j] = 1
                vecs.append(v)
        return _Val(Lattice.from_vectors(vecs, self.idx.dim), True, k)

    def product(self, a: _Val, b: _Val) -> _Val:
        if a.fpow is not None and b.fpow is not None:
            return self.fpow(a.fpow + b.fpow)
        if a.fpow is not None and b.two_sided:
            # f^k b = (degree-k monomials) b, since Z[F] b lies in b
            left = [[(m, 1)] for m in self.monos_by_degree.get(a.fpow, [])]
            right = [self.sparse(v) for v in b.lattice.basis]
        elif b.fpow is not None and a.two_sided:
            left = [self.sparse(v) for v in a.lattice.basis]
            right = [[(m, 1)] for m in self.monos_by_degree.get(b.fpow, [])]
        else:
            left = [self.sparse(v) for v in a.lattice.basis]
            right = [self.sparse(v) for v in b.lattice.basis]
        lat = self.span(self.mul(u, v) for u in left for v in right)
        return _Val(lat, a.two_sided and b.two_sided)

    def rel(self, name: str) -> Lattice:
        if name not in self.relators:
            raise UnresolvedAtom(f"no relator set named {name!r}")
        N = self.N
        vecs = []
        units = [[((), 1)]] + [[(m, 1)] for d in range(1, N) for m in self.monos_by_degree[d]]
        for w in self.relators[name]:
            if w.rank != self.rank:
                raise UnresolvedAtom(f"relator {w} has rank {w.rank}, expected {self.rank}")
            s = expand(w, N) - TruncSeries.one(self.rank, N)
            low = s.lowest_degree()
            if low is None:
                continue
            sp = self.series_sparse(s)
            for m1 in units:
                d1 = len(m1[0][0])
                if d1 + low > N:
                    continue
                left = self.mul(m1, sp) if d1 else s.to_vector(self.idx)
                if left is None:
                    continue
                ls = self.sparse(left)
                for m2 in units:
                    d2 = len(m2[0][0])
                    if d1 + d2 + low > N:
                        continue
                    vecs.append(self.mul(ls, m2) if d2 else left)
        return self.span(vecs)

    def delta(self, name: str) -> Lattice:
        if name not in self.subgroups:
            raise UnresolvedAtom(f"no subgroup named {name!r}")
        H = self.subgroups[name]
        if H.ctx.cls < self.N:
            raise DegreeOverflow(f"subgroup {name!r} known only modulo gamma_{H.ctx.cls + 1}")
        N = self.N
        factors = []
        for g in H.gens:
            for h in (g, g.inverse()):
                s = h.series.truncate(N) - TruncSeries.one(self.rank, N)
                if s.lowest_degree() is not None:
                    factors.append((s.lowest_degree(), self.series_sparse(s)))
        vecs = []

        def grow(cur, low):
            for fl, fs in factors:
                if low + fl <= N:
                    nxt = self.mul(cur, fs) if cur is not None else self.mul([((), 1)], fs)
                    if nxt is None:
                        continue
                    vecs.append(nxt)
                    grow(self.sparse(nxt), low + fl)
        grow(None, 0)
        return self.span(vecs)


def ideal_lattice(expr: IdealExpr | str, relators: Sequence[FreeWord] | Mapping[str, Sequence[FreeWord]],
                  rank: int, N: int, subgroups: Mapping[str, NilSubgroup] | None = None) -> TruncIdealLattice:
    """Lattice of expr + f^{N+1} inside the monomial module of degrees 1..N."""
    if isinstance(expr, str):
        expr = parse_ideal(expr)
    if not isinstance(relators, Mapping):
        relators = {"r": list(relators)}
    ev = _Evaluator(rank, N, relators, subgroups or {})
    return TruncIdealLattice(rank, N, ev.eval(expr).lattice)


def ideal_membership(w: FreeWord, expr: IdealExpr | str, relators, rank: int, N: int,
                     subgroups: Mapping[str, NilSubgroup] | None = None,
                     lattice: TruncIdealLattice | None = None) -> bool:
    """w - 1 in expr + f^{N+1}."""
    L = lattice or ideal_lattice(expr, relators, rank, N, subgroups)
    s = expand(w, N) - TruncSeries.one(rank, N)
    return s.to_vector(L.index) in L.lattice


def gen_dim_subgroup(expr: IdealExpr | str, relators, rank: int, n: int,
                     window: tuple[int, int] | None = None,
                     subgroups: Mapping[str, NilSubgroup] | None = None,
                     lattice: TruncIdealLattice | None = None) -> NilSubgroup:
    """D(n, a) = F cap (1 + a + f^n), returned modulo gamma_n(F).

    Supported when a lies in f^{k_low} with 2*k_low >= n: then D(n, a) sits in
    gamma_{k_low}(F) and g - 1 is linear in the basic-commutator exponents of g
    modulo f^n.
    """
    N = n - 1
    if N < 1:
        raise UnsupportedWindow("n must be at least 2")
    ctx = NilContext(rank, N)
    L = lattice or ideal_lattice(expr, relators, rank, N, subgroups)
    lo = L.degree_window()
    if window is None:
        k_low = min(lo, n)
    else:
        k_low, wn = window
        if wn != n:
            raise UnsupportedWindow(f"window ends at {wn}, expected {n}")
        if lo < k_low:
            raise UnsupportedWindow(f"ideal is not contained in f^{k_low}")
    if 2 * k_low < n:
        raise UnsupportedWindow(f"membership is not linear for k_low={k_low}, n={n}")
    if k_low >= n:
        return ctx.trivial()
    start = ctx.layer_offsets[k_low]
    idx = L.index
    cols = []
    for i in range(start, ctx.n_basics):
        s = ctx.basic(i).series - TruncSeries.one(rank, N)
        cols.append(s.to_vector(idx))
    M = from_columns(cols, idx.dim)
    P = preimage_lattice(M, len(cols), L.lattice)
    gens = []
    for a in P.basis:
        coords = [0] * start + list(a)
        gens.append(ctx.from_coordinates(coords))
    return subgroup_close(ctx, gens)
