"""Free nilpotent quotients F/gamma_{c+1}(F) in truncated Magnus coordinates.

Every element of F/gamma_{c+1}(F) is uniquely c_1^{a_1} ... c_m^{a_m} with
c_1 < ... < c_m the basic commutators of weight <= c in Hall order.  The
position of the first nonzero exponent is the element's *depth*; elements of
depth >= i form a normal subgroup G_i with G_i/G_{i+1} infinite cyclic, and
the exponent at depth i is additive on G_i.  Subgroups are stored as induced
sequences: one generator per occupied depth with positive leading exponent.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from .abelian import FgAbelian, xgcd
from .errors import NotSubgroup, RankMismatch, SectionNotAbelian
from .magnus import (BasicCommutator, FreeWord, TruncSeries, expand, hall_basis, lie_series,
                     word_comm, word_inv, word_mul, word_pow)

CLASS_BOUND = 4


# ---------------------------------------------------------------------------
# witnesses: small expression trees, flattened to words only on demand

def _leaf(w: FreeWord):
    return ("w", w)


def witness_word(tree, rank: int) -> FreeWord:
    memo: dict[int, FreeWord] = {}

    def ev(t):
        key = id(t)
        if key in memo:
            return memo[key]
        op = t[0]
        if op == "w":
            r = t[1]
        elif op == "*":
            r = word_mul(ev(t[1]), ev(t[2]))
        elif op == "i":
            r = word_inv(ev(t[1]))
        elif op == "^":
            r = word_pow(ev(t[1]), t[2])
        else:
            r = word_comm(ev(t[1]), ev(t[2]))
        memo[key] = r
        return r
    return ev(tree) if tree is not None else FreeWord.identity(rank)


def _substitute_tree(tree, images: Sequence["NilElement"], dst: "NilContext") -> "NilElement":
    memo: dict[int, NilElement] = {}

    def ev(t):
        key = id(t)
        if key in memo:
            return memo[key]
        op = t[0]
        if op == "w":
            r = dst.one()
            for g, e in t[1].syllables:
                r = r * images[g - 1] ** e
        elif op == "*":
            r = ev(t[1]) * ev(t[2])
        elif op == "i":
            r = ev(t[1]).inverse()
        elif op == "^":
            r = ev(t[1]) ** t[2]
        else:
            r = ev(t[1]).comm(ev(t[2]))
        memo[key] = r
        return r
    return ev(tree) if tree is not None else dst.one()


# ---------------------------------------------------------------------------
# context


class _LayerSolver:
    """Exact solver for Lie coordinates of a homogeneous degree-k component."""

    def __init__(self, rank: int, k: int, basics: list[BasicCommutator], N: int):
        self.k = k
        self.cols = [lie_series(c, rank, N).component(k) for c in basics]
        monos = sorted({m for col in self.cols for m in col})
        self.monos = monos
        b = len(basics)
        # choose b independent monomial rows by rational elimination
        rows: list[tuple] = []
        basis: list[list[Fraction]] = []
        pivots: list[int] = []
        for m in monos:
            v = [Fraction(col.get(m, 0)) for col in self.cols]
            for bv, p in zip(basis, pivots):
                if v[p]:
                    f = v[p] / bv[p]
                    v = [x - f * y for x, y in zip(v, bv)]
            nz = next((i for i, x in enumerate(v) if x), None)
            if nz is not None:
                basis.append(v)
                pivots.append(nz)
                rows.append(m)
            if len(rows) == b:
                break
        if len(rows) != b:
            raise ValueError("Lie elements of a Hall layer are not independent")
        self.rows = rows
        A = [[Fraction(col.get(m, 0)) for col in self.cols] for m in rows]
        self.inv = _frac_inverse(A)

    def solve(self, comp: dict) -> list[int]:
        vals = [comp.get(m, 0) for m in self.rows]
        out = []
        for row in self.inv:
            x = sum(a * v for a, v in zip(row, vals) if v)
            if x.denominator != 1:
                raise ValueError("component is not an integral Lie element")
            out.append(int(x))
        # verify the full component
        recon: dict = {}
        for a, col in zip(out, self.cols):
            if a:
                for m, c in col.items():
                    recon[m] = recon.get(m, 0) + a * c
        recon = {m: c for m, c in recon.items() if c}
        if recon != {m: c for m, c in comp.items() if c}:
            raise ValueError("component is not in the span of the Hall layer")
        return out


def _frac_inverse(A: list[list[Fraction]]) -> list[list[Fraction]]:
    n = len(A)
    M = [row[:] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next(r for r in range(c, n) if M[r][c])
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


class NilContext:
    """F/gamma_{cls+1}(F) for the free group of the given rank."""

    def __init__(self, rank: int, cls: int):
        if not 1 <= cls <= CLASS_BOUND:
            raise ValueError(f"class must lie in 1..{CLASS_BOUND}")
        self.rank, self.cls = rank, cls
        self.hall = hall_basis(rank, cls)
        self.basics = list(self.hall.order)
        self.n_basics = len(self.basics)
        self.layer_offsets = {k: self.hall.offset(k) for k in range(1, cls + 2)}
        self.weights = [c.weight for c in self.basics]

    def __eq__(self, other):
        return isinstance(other, NilContext) and (self.rank, self.cls) == (other.rank, other.cls)

    def __hash__(self):
        return hash((self.rank, self.cls))

    def __repr__(self):
        return f"NilContext(rank={self.rank}, class={self.cls})"

    @cached_property
    def _solvers(self) -> dict[int, _LayerSolver]:
        return {k: _LayerSolver(self.rank, k, self.hall.layer(k), self.cls)
                for k in range(1, self.cls + 1) if self.hall.layer(k)}

    @cached_property
    def _basic_minus_one(self) -> list[TruncSeries]:
        return [expand(c.word(self.rank), self.cls) - TruncSeries.one(self.rank, self.cls)
                for c in self.basics]

    @lru_cache(maxsize=None)
    def _basic_powers(self, i: int) -> list[TruncSeries]:
        C = self._basic_minus_one[i]
        out = [TruncSeries.one(self.rank, self.cls)]
        for _ in range(self.cls // self.weights[i]):
            out.append(out[-1] * C)
        return out

    def basic_power_series(self, i: int, a: int) -> TruncSeries:
        """Series of c_i^a via the binomial series in (c_i - 1)."""
        powers = self._basic_powers(i)
        s = TruncSeries.one(self.rank, self.cls)
        for j in range(1, len(powers)):
            b = _binom(a, j)
            if b:
                s = s + powers[j].scale(b)
        return s

    def one(self) -> "NilElement":
        return NilElement(self, TruncSeries.one(self.rank, self.cls), _leaf(FreeWord.identity(self.rank)))

    def gen(self, i: int) -> "NilElement":
        return nil_embed(self, FreeWord.gen(self.rank, i))

    def basic(self, i: int) -> "NilElement":
        c = self.basics[i]
        w = c.word(self.rank)
        return NilElement(self, self._basic_minus_one[i] + TruncSeries.one(self.rank, self.cls), _leaf(w))

    def from_coordinates(self, coords: Sequence[int]) -> "NilElement":
        e = self.one()
        for i, a in enumerate(coords):
            if a:
                e = e * self.basic(i) ** a
        return e

    def gamma(self, k: int) -> "NilSubgroup":
        """gamma_k(F) modulo gamma_{cls+1}(F)."""
        start = self.layer_offsets.get(k, self.n_basics) if k <= self.cls else self.n_basics
        return NilSubgroup._from_canonical(self, [self.basic(i) for i in range(start, self.n_basics)])

    def whole(self) -> "NilSubgroup":
        return self.gamma(1)

    def trivial(self) -> "NilSubgroup":
        return NilSubgroup._from_canonical(self, [])


def _binom(e: int, k: int) -> int:
    num, den = 1, 1
    for j in range(k):
        num *= e - j
        den *= j + 1
    return num // den


# ---------------------------------------------------------------------------
# elements


class NilElement:
    __slots__ = ("ctx", "series", "tree", "_coords", "_lead")

    def __init__(self, ctx: NilContext, series: TruncSeries, tree=None):
        self.ctx = ctx
        self.series = series
        self.tree = tree
        self._coords = None
        self._lead = None

    # group operations -------------------------------------------------
    def __mul__(self, other: "NilElement") -> "NilElement":
        if self.is_identity():
            return other
        if other.is_identity():
            return self
        return NilElement(self.ctx, self.series * other.series, ("*", self.tree, other.tree))

    def inverse(self) -> "NilElement":
        return NilElement(self.ctx, self.series.inverse(), ("i", self.tree))

    def __pow__(self, k: int) -> "NilElement":
        if k == 0:
            return self.ctx.one()
        if k == 1:
            return self
        return NilElement(self.ctx, self.series ** k, ("^", self.tree, k))

    def comm(self, other: "NilElement") -> "NilElement":
        """[self, other] = self^-1 other^-1 self other."""
        s = (self.series.inverse() * other.series.inverse()) * (self.series * other.series)
        return NilElement(self.ctx, s, ("c", self.tree, other.tree))

    def conj(self, g: "NilElement") -> "NilElement":
        return g.inverse() * self * g

    def __eq__(self, other):
        return isinstance(other, NilElement) and self.ctx == other.ctx and self.series == other.series

    def __hash__(self):
        return hash(self.series)

    def is_identity(self) -> bool:
        return self.series.is_one()

    @property
    def leading_weight(self) -> float:
        d = self.series.lowest_degree()
        return float("inf") if d is None else d

    def word(self) -> FreeWord:
        """Normal-form word prod c_i^{a_i} over the basic commutators.

        It equals the element modulo gamma_{cls+1}; the expression tree of
        the construction is kept in ``tree`` (see ``tree_word``).
        """
        rank = self.ctx.rank
        w = FreeWord.identity(rank)
        for c, a in zip(self.ctx.basics, self.coordinates()):
            if a:
                w = w * (c.word(rank) ** a)
        return w

    def tree_word(self) -> FreeWord:
        return witness_word(self.tree, self.ctx.rank)

    # coordinates -------------------------------------------------------
    def lead(self) -> tuple[int, int] | None:
        """(depth, leading exponent), or None for the identity."""
        if self._lead is None:
            k = self.series.lowest_degree()
            if k is None:
                return None
            a = self.ctx._solvers[k].solve(self.series.component(k))
            off = self.ctx.layer_offsets[k]
            i = next(i for i, x in enumerate(a) if x)
            self._lead = (off + i, a[i])
        return self._lead

    @property
    def depth(self) -> int:
        ld = self.lead()
        return self.ctx.n_basics if ld is None else ld[0]

    def coordinates(self) -> list[int]:
        """Exponents a with self = prod c_i^{a_i} in Hall order."""
        if self._coords is None:
            ctx = self.ctx
            x = self.series
            out = [0] * ctx.n_basics
            for k in range(1, ctx.cls + 1):
                comp = x.component(k)
                if not comp:
                    continue
                a = ctx._solvers[k].solve(comp)
                off = ctx.layer_offsets[k]
                P = TruncSeries.one(ctx.rank, ctx.cls)
                for j, aj in enumerate(a):
                    if aj:
                        out[off + j] = aj
                        P = P * ctx.basic_power_series(off + j, aj)
                x = P.inverse() * x
            if not x.is_one():
                raise ValueError("series is not group-like")
            self._coords = out
        return list(self._coords)

    def __repr__(self):
        return f"NilElement({self.coordinates()})"


def nil_embed(ctx: NilContext, w: FreeWord) -> NilElement:
    if w.rank != ctx.rank:
        raise RankMismatch(f"word of rank {w.rank} in context of rank {ctx.rank}")
    return NilElement(ctx, expand(w, ctx.cls), _leaf(w))


# ---------------------------------------------------------------------------
# subgroups


class NilSubgroup:
    """Subgroup given by a canonical induced sequence (one generator per depth)."""

    def __init__(self, ctx: NilContext, gens: Iterable[NilElement] = ()):
        seq = _close(ctx, list(gens), [])
        self.ctx = ctx
        self.gens = _canonical(seq)

    @classmethod
    def _from_canonical(cls, ctx: NilContext, gens: list[NilElement]) -> "NilSubgroup":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.gens = list(gens)
        return obj

    @property
    def depths(self) -> list[int]:
        return [g.depth for g in self.gens]

    @property
    def weights(self) -> list[int]:
        return [self.ctx.weights[g.depth] for g in self.gens]

    def key(self) -> tuple:
        return tuple(tuple(g.coordinates()) for g in self.gens)

    def __eq__(self, other):
        return isinstance(other, NilSubgroup) and self.ctx == other.ctx and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __len__(self):
        return len(self.gens)

    def sift(self, g: NilElement) -> tuple[NilElement, list[int]]:
        """Divide g by generators from the left: g = gens^e * remainder."""
        exps = [0] * len(self.gens)
        table = {h.depth: (i, h) for i, h in enumerate(self.gens)}
        while not g.is_identity():
            d, a = g.lead()
            if d not in table:
                break
            i, h = table[d]
            b = h.lead()[1]
            if a % b:
                break
            q = a // b
            exps[i] += q
            g = (h ** (-q)) * g
        return g, exps

    def contains(self, g: NilElement) -> bool:
        return self.sift(g)[0].is_identity()

    __contains__ = contains

    def exponents(self, g: NilElement) -> list[int]:
        """e with g = gens[0]^e0 gens[1]^e1 ...; raises NotSubgroup if g is outside."""
        r, e = self.sift(g)
        if not r.is_identity():
            raise NotSubgroup("element is not in the subgroup")
        return e

    def contains_subgroup(self, other: "NilSubgroup") -> bool:
        return all(self.contains(g) for g in other.gens)

    def __le__(self, other: "NilSubgroup") -> bool:
        return other.contains_subgroup(self)

    def join(self, other: "NilSubgroup") -> "NilSubgroup":
        return subgroup_close(self.ctx, self.gens + other.gens)

    def __repr__(self):
        return f"NilSubgroup(depths={self.depths}, leads={[g.lead()[1] for g in self.gens]})"


def _insert(table: dict[int, NilElement], g: NilElement, queue: list) -> bool:
    changed = False
    while not g.is_identity():
        d, a = g.lead()
        h = table.get(d)
        if h is None:
            table[d] = g.inverse() if a < 0 else g
            return True
        b = h.lead()[1]
        if a % b == 0:
            g = (h ** (-(a // b))) * g
            continue
        gg, s, t = xgcd(b, a)
        if gg < 0:
            gg, s, t = -gg, -s, -t
        new = (h ** s) * (g ** t)
        table[d] = new
        queue.append((new ** (-(b // gg))) * h)
        queue.append((new ** (-(a // gg))) * g)
        return True
    return changed


def _close(ctx: NilContext, gens: list[NilElement], conjugators: list[NilElement]) -> list[NilElement]:
    """Induced sequence of the subgroup generated by gens, normalized by the conjugators.

    Commutators of sequence members (and with conjugators) are sifted in until
    nothing changes; finitely generated nilpotent groups are Noetherian, so
    this terminates.
    """
    table: dict[int, NilElement] = {}
    queue = [g for g in gens if not g.is_identity()]
    done: set = set()
    keep: list = []  # pins objects so ids in `done` stay unique
    while True:
        while queue:
            _insert(table, queue.pop(), queue)
        cur = [table[d] for d in sorted(table)]
        keep.extend(cur)
        fresh = []
        for i, g in enumerate(cur):
            for h in cur[i + 1:]:
                if (id(g), id(h)) not in done:
                    done.add((id(g), id(h)))
                    fresh += [g.comm(h), g.inverse().comm(h)]
            for x in conjugators:
                if (id(g), id(x)) not in done:
                    done.add((id(g), id(x)))
                    fresh += [g.comm(x), g.comm(x.inverse())]
        queue = [q for q in fresh if not q.is_identity()]
        if not queue:
            return cur


def _canonical(seq: list[NilElement]) -> list[NilElement]:
    """Reduce every generator's exponent at each other pivot depth into [0, lead)."""
    seq = list(seq)
    for i, h in enumerate(seq):
        d, e = h.lead()
        for j in range(i):
            a = seq[j].coordinates()[d]
            q = a // e
            if q:
                seq[j] = seq[j] * h ** (-q)
    return seq


def subgroup_close(ctx: NilContext, gens: Iterable[NilElement]) -> NilSubgroup:
    return NilSubgroup(ctx, gens)


def subgroup_from_words(ctx: NilContext, words: Iterable[FreeWord]) -> NilSubgroup:
    return NilSubgroup(ctx, [nil_embed(ctx, w) for w in words])


def normal_closure(ctx: NilContext, gens: Iterable[NilElement]) -> NilSubgroup:
    conj = [ctx.gen(i) for i in range(1, ctx.rank + 1)]
    seq = _close(ctx, list(gens), conj)
    return NilSubgroup._from_canonical(ctx, _canonical(seq))


def normal_closure_words(ctx: NilContext, words: Iterable[FreeWord]) -> NilSubgroup:
    return normal_closure(ctx, [nil_embed(ctx, w) for w in words])


def commutator_subgroup(S: NilSubgroup, T: NilSubgroup) -> NilSubgroup:
    """[S, T]: generated by [s, t], closed under conjugation by S and T."""
    ctx = S.ctx
    comms = [s.comm(t) for s in S.gens for t in T.gens]
    seq = _close(ctx, comms, S.gens + T.gens)
    return NilSubgroup._from_canonical(ctx, _canonical(seq))


def meet_gamma(S: NilSubgroup, k: int) -> NilSubgroup:
    """S intersected with gamma_k(F): the generators of leading weight >= k."""
    return NilSubgroup._from_canonical(S.ctx, [g for g in S.gens if g.leading_weight >= k])


def product_subgroup(*subs: NilSubgroup) -> NilSubgroup:
    ctx = subs[0].ctx
    return subgroup_close(ctx, [g for S in subs for g in S.gens])


@dataclass
class Section:
    """The abelian section S/T presented on S's canonical generators."""
    S: NilSubgroup
    T: NilSubgroup
    group: FgAbelian

    def vector(self, g: NilElement) -> list[int]:
        return self.S.exponents(g)

    def witnesses(self) -> list[FreeWord]:
        return [g.word() for g in self.S.gens]


def section_invariants(S: NilSubgroup, T: NilSubgroup) -> Section:
    for t in T.gens:
        if not S.contains(t):
            raise NotSubgroup("T is not contained in S")
    rels = [S.exponents(t) for t in T.gens]
    for i, a in enumerate(S.gens):
        for b in S.gens[i + 1:]:
            for c in (a.comm(b), a.inverse().comm(b)):
                if not T.contains(c):
                    raise SectionNotAbelian("[S,S] is not contained in T")
                rels.append(S.exponents(c))
    rels = [r for r in rels if any(r)]
    return Section(S, T, FgAbelian(len(S.gens), tuple(rels)))


class InducedHom:
    """Homomorphism F_src/gamma -> F_dst/gamma given by images of the generators."""

    def __init__(self, src: NilContext, dst: NilContext, images: Sequence[FreeWord]):
        if len(images) != src.rank:
            raise RankMismatch("need one image per source generator")
        self.src, self.dst = src, dst
        self.images = [nil_embed(dst, w) for w in images]
        self.image_words = list(images)
        self._cache: dict = {}

    def _basic_image(self, c) -> NilElement:
        key = id(c)
        hit = self._cache.get(key)
        if hit is None:
            if c.is_leaf:
                hit = self.images[c.left - 1]
            else:
                hit = self._basic_image(c.left).comm(self._basic_image(c.right))
            self._cache[key] = hit
        return hit

    def __call__(self, g: NilElement) -> NilElement:
        """Image through the Malcev coordinates of g, exact modulo gamma_{cls+1}."""
        if g.ctx.cls > self.dst.cls:
            return _substitute_tree(g.tree, self.images, self.dst)
        out = self.dst.one()
        for c, a in zip(g.ctx.basics, g.coordinates()):
            if a:
                out = out * self._basic_image(c) ** a
        return out

    def via_tree(self, g: NilElement) -> NilElement:
        return _substitute_tree(g.tree, self.images, self.dst)

    def on_subgroup(self, S: NilSubgroup) -> NilSubgroup:
        return subgroup_close(self.dst, [self(g) for g in S.gens])


def induced_hom(ctx_src: NilContext, ctx_dst: NilContext, images: Sequence[FreeWord]) -> InducedHom:
    return InducedHom(ctx_src, ctx_dst, images)


def section_map(hom: InducedHom, src: Section, dst: Section):
    """Matrix of the map src.group -> dst.group induced by hom."""
    from .abelian import AbMap, from_columns
    cols = [dst.vector(hom(g)) for g in src.S.gens]
    M = from_columns(cols, dst.group.n_gens) if cols else [[] for _ in range(dst.group.n_gens)]
    return AbMap(src.group, dst.group, M).check()
