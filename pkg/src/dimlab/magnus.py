"""Free-group words, truncated Magnus expansions and Hall bases.

Generators are numbered 1..rank in words (``x1``, ``x2``, ...).  Inside a
truncated series a monomial is a tuple of 0-based letter indices, so the
monomial ``(0, 1)`` is X1*X2 with X_i = x_i - 1.  The commutator convention
is [u, v] = u^-1 v^-1 u v throughout.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import ParseError, RankMismatch

# ---------------------------------------------------------------------------
# words


def _reduce_syllables(syls: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[list[int]] = []
    for g, e in syls:
        if e == 0:
            continue
        if out and out[-1][0] == g:
            out[-1][1] += e
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([g, e])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class FreeWord:
    """Freely reduced word; syllables are (generator 1..rank, nonzero exponent)."""
    rank: int
    syllables: tuple = ()

    def __post_init__(self):
        syl = _reduce_syllables(tuple((int(g), int(e)) for g, e in self.syllables))
        for g, _ in syl:
            if not 1 <= g <= self.rank:
                raise RankMismatch(f"generator x{g} outside rank {self.rank}")
        object.__setattr__(self, "syllables", syl)

    @classmethod
    def identity(cls, rank: int) -> "FreeWord":
        return cls(rank, ())

    @classmethod
    def gen(cls, rank: int, i: int, e: int = 1) -> "FreeWord":
        return cls(rank, ((i, e),))

    def is_identity(self) -> bool:
        return not self.syllables

    def __len__(self):
        return sum(abs(e) for _, e in self.syllables)

    def __mul__(self, other: "FreeWord") -> "FreeWord":
        return word_mul(self, other)

    def __invert__(self) -> "FreeWord":
        return word_inv(self)

    def __pow__(self, k: int) -> "FreeWord":
        return word_pow(self, k)

    def exponent_sums(self) -> list[int]:
        v = [0] * self.rank
        for g, e in self.syllables:
            v[g - 1] += e
        return v

    def substitute(self, images: Sequence["FreeWord"]) -> "FreeWord":
        """Image under the homomorphism x_i -> images[i-1]."""
        if len(images) != self.rank:
            raise RankMismatch("need one image per generator")
        r = images[0].rank if images else 0
        out = FreeWord.identity(r)
        for g, e in self.syllables:
            out = out * word_pow(images[g - 1], e)
        return out

    def relabel(self, rank: int, offset: int = 0) -> "FreeWord":
        return FreeWord(rank, tuple((g + offset, e) for g, e in self.syllables))

    def __str__(self):
        if not self.syllables:
            return "1"
        return " ".join(f"x{g}" if e == 1 else f"x{g}^{e}" for g, e in self.syllables)


def _same_rank(u: FreeWord, v: FreeWord):
    if u.rank != v.rank:
        raise RankMismatch(f"rank {u.rank} vs rank {v.rank}")


def word_mul(u: FreeWord, v: FreeWord) -> FreeWord:
    _same_rank(u, v)
    return FreeWord(u.rank, u.syllables + v.syllables)


def word_inv(u: FreeWord) -> FreeWord:
    return FreeWord(u.rank, tuple((g, -e) for g, e in reversed(u.syllables)))


def word_comm(u: FreeWord, v: FreeWord) -> FreeWord:
    """[u, v] = u^-1 v^-1 u v."""
    _same_rank(u, v)
    return FreeWord(u.rank, word_inv(u).syllables + word_inv(v).syllables + u.syllables + v.syllables)


def word_pow(u: FreeWord, k: int) -> FreeWord:
    if k < 0:
        u, k = word_inv(u), -k
    return FreeWord(u.rank, u.syllables * k)


def word_conj(u: FreeWord, g: FreeWord) -> FreeWord:
    """u^g = g^-1 u g."""
    return word_inv(g) * u * g


# ---------------------------------------------------------------------------
# word grammar:  x3, ^-2, juxtaposition, [u,v], parentheses, 1

_TOKEN = re.compile(r"\s*(?:(x)(\d+)|(\^)\s*(-?\d+)|([\[\](),])|(1))")


def _tokenize(text: str):
    pos, toks = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected input at {pos}: {text[pos:pos + 10]!r}")
        if m.group(1):
            toks.append(("gen", int(m.group(2))))
        elif m.group(3):
            toks.append(("pow", int(m.group(4))))
        elif m.group(5):
            toks.append((m.group(5), None))
        else:
            toks.append(("one", None))
        pos = m.end()
    return toks


def parse_word(text: str, rank: int | None = None) -> FreeWord:
    """Parse the word grammar, e.g. ``[x1,x2]^2 (x1^2 x2)^-1``.

    When rank is None it is inferred as the largest generator index.
    """
    toks = _tokenize(text)
    if rank is None:
        rank = max((v for k, v in toks if k == "gen"), default=0)
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def product_() -> FreeWord:
        w = FreeWord.identity(rank)
        while peek() in ("gen", "[", "(", "one"):
            w = w * power()
        return w

    def power() -> FreeWord:
        nonlocal pos
        a = atom()
        while peek() == "pow":
            a = word_pow(a, toks[pos][1])
            pos += 1
        return a

    def expect(kind):
        nonlocal pos
        if peek() != kind:
            raise ParseError(f"expected {kind!r} in {text!r}")
        pos += 1

    def atom() -> FreeWord:
        nonlocal pos
        kind, val = toks[pos]
        pos += 1
        if kind == "gen":
            if not 1 <= val <= rank:
                raise ParseError(f"x{val} outside rank {rank}")
            return FreeWord.gen(rank, val)
        if kind == "one":
            return FreeWord.identity(rank)
        if kind == "(":
            w = product_()
            expect(")")
            return w
        if kind == "[":
            parts = [product_()]
            while peek() == ",":
                pos += 1
                parts.append(product_())
            expect("]")
            if len(parts) < 2:
                raise ParseError("commutator needs two entries")
            w = parts[0]
            for p in parts[1:]:  # left-normed [a,b,c] = [[a,b],c]
                w = word_comm(w, p)
            return w
        raise ParseError(f"unexpected token {kind!r} in {text!r}")

    w = product_()
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return w


def format_word(w: FreeWord) -> str:
    return str(w)


# ---------------------------------------------------------------------------
# truncated series


class TruncSeries:
    """Element of Z<X_1..X_rank> modulo monomials of degree > max_degree.

    ``terms`` maps degree -> {monomial: coefficient}; the constant term is
    kept separately.  Zero coefficients are never stored.
    """

    __slots__ = ("rank", "max_degree", "constant", "terms")

    def __init__(self, rank: int, max_degree: int, constant: int = 0, terms=None):
        self.rank = rank
        self.max_degree = max_degree
        self.constant = constant
        self.terms: dict[int, dict[tuple, int]] = {}
        if terms:
            for mono, c in (terms.items() if isinstance(terms, dict) else terms):
                d = len(mono)
                if c and 1 <= d <= max_degree:
                    bucket = self.terms.setdefault(d, {})
                    c = bucket.get(mono, 0) + c
                    if c:
                        bucket[mono] = c
                    else:
                        del bucket[mono]
                        if not bucket:
                            del self.terms[d]

    @classmethod
    def one(cls, rank: int, N: int) -> "TruncSeries":
        return cls(rank, N, 1)

    @classmethod
    def monomial(cls, rank: int, N: int, mono: Sequence[int], coeff: int = 1) -> "TruncSeries":
        return cls(rank, N, 0, {tuple(mono): coeff})

    def copy(self) -> "TruncSeries":
        s = TruncSeries(self.rank, self.max_degree, self.constant)
        s.terms = {d: dict(b) for d, b in self.terms.items()}
        return s

    def items(self):
        for d in sorted(self.terms):
            yield from self.terms[d].items()

    def coefficient(self, mono: Sequence[int]) -> int:
        mono = tuple(mono)
        if not mono:
            return self.constant
        return self.terms.get(len(mono), {}).get(mono, 0)

    def component(self, d: int) -> dict[tuple, int]:
        return dict(self.terms.get(d, {}))

    def homogeneous(self, d: int) -> "TruncSeries":
        s = TruncSeries(self.rank, self.max_degree)
        if d in self.terms:
            s.terms[d] = dict(self.terms[d])
        return s

    def lowest_degree(self) -> int | None:
        """Lowest degree >= 1 carrying a nonzero coefficient (None if none)."""
        return min(self.terms) if self.terms else None

    def is_zero(self) -> bool:
        return self.constant == 0 and not self.terms

    def is_one(self) -> bool:
        return self.constant == 1 and not self.terms

    def _check(self, other: "TruncSeries"):
        if self.rank != other.rank or self.max_degree != other.max_degree:
            raise RankMismatch("series with different rank or truncation")

    def __add__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        s = self.copy()
        s.constant += other.constant
        for d, b in other.terms.items():
            t = s.terms.setdefault(d, {})
            for m, c in b.items():
                v = t.get(m, 0) + c
                if v:
                    t[m] = v
                else:
                    del t[m]
            if not t:
                del s.terms[d]
        return s

    def __neg__(self) -> "TruncSeries":
        s = TruncSeries(self.rank, self.max_degree, -self.constant)
        s.terms = {d: {m: -c for m, c in b.items()} for d, b in self.terms.items()}
        return s

    def __sub__(self, other: "TruncSeries") -> "TruncSeries":
        return self + (-other)

    def scale(self, k: int) -> "TruncSeries":
        if k == 0:
            return TruncSeries(self.rank, self.max_degree)
        s = TruncSeries(self.rank, self.max_degree, k * self.constant)
        s.terms = {d: {m: k * c for m, c in b.items()} for d, b in self.terms.items()}
        return s

    def __mul__(self, other: "TruncSeries") -> "TruncSeries":
        self._check(other)
        N = self.max_degree
        out: dict[int, dict[tuple, int]] = {}
        a0, b0 = self.constant, other.constant
        if b0:
            for d, b in self.terms.items():
                out[d] = {m: c * b0 for m, c in b.items()}
        if a0:
            for d, b in other.terms.items():
                t = out.setdefault(d, {})
                for m, c in b.items():
                    t[m] = t.get(m, 0) + a0 * c
        for d1, b1 in self.terms.items():
            for d2, b2 in other.terms.items():
                d = d1 + d2
                if d > N:
                    continue
                t = out.setdefault(d, {})
                for m1, c1 in b1.items():
                    for m2, c2 in b2.items():
                        m = m1 + m2
                        t[m] = t.get(m, 0) + c1 * c2
        s = TruncSeries(self.rank, N, a0 * b0)
        s.terms = {}
        for d, t in out.items():
            t = {m: c for m, c in t.items() if c}
            if t:
                s.terms[d] = t
        return s

    def __pow__(self, k: int) -> "TruncSeries":
        if k < 0:
            return self.inverse() ** (-k)
        result = TruncSeries.one(self.rank, self.max_degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def inverse(self) -> "TruncSeries":
        """Inverse of a series with constant term +-1."""
        if self.constant not in (1, -1):
            raise ValueError("only series with unit constant term are invertible")
        c = self.constant
        u = self.scale(c) - TruncSeries.one(self.rank, self.max_degree)  # c*self = 1 + u
        result = TruncSeries.one(self.rank, self.max_degree)
        term = TruncSeries.one(self.rank, self.max_degree)
        neg_u = -u
        for _ in range(self.max_degree):
            term = term * neg_u
            if term.is_zero():
                break
            result = result + term
        return result.scale(c)

    def __eq__(self, other):
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return (self.rank == other.rank and self.max_degree == other.max_degree
                and self.constant == other.constant and self.terms == other.terms)

    def __hash__(self):
        return hash((self.rank, self.max_degree, self.constant,
                     tuple(sorted((m, c) for b in self.terms.values() for m, c in b.items()))))

    def truncate(self, N: int) -> "TruncSeries":
        s = TruncSeries(self.rank, N, self.constant)
        s.terms = {d: dict(b) for d, b in self.terms.items() if d <= N}
        return s

    def reversed(self) -> "TruncSeries":
        """Image under the anti-automorphism reversing monomials."""
        s = TruncSeries(self.rank, self.max_degree, self.constant)
        s.terms = {d: {m[::-1]: c for m, c in b.items()} for d, b in self.terms.items()}
        return s

    def to_vector(self, index: "MonomialIndex") -> list[int]:
        v = [0] * index.dim
        pos = index.position
        for b in self.terms.values():
            for m, c in b.items():
                j = pos.get(m)
                if j is not None:
                    v[j] = c
        return v

    def __str__(self):
        parts = []
        if self.constant:
            parts.append(str(self.constant))
        for m, c in self.items():
            name = "*".join(f"X{i + 1}" for i in m)
            if c == 1:
                parts.append(name)
            elif c == -1:
                parts.append("-" + name)
            else:
                parts.append(f"{c}*{name}")
        return " + ".join(parts).replace("+ -", "- ") or "0"

    __repr__ = __str__


class MonomialIndex:
    """Coordinates for monomials of degrees lo..hi (inclusive), degree-major, lexicographic."""

    def __init__(self, rank: int, hi: int, lo: int = 1):
        self.rank, self.lo, self.hi = rank, lo, hi
        self.monomials: list[tuple] = []
        for d in range(lo, hi + 1):
            self.monomials.extend(product(range(rank), repeat=d))
        self.position = {m: i for i, m in enumerate(self.monomials)}
        self.dim = len(self.monomials)

    def degree_slice(self, d: int) -> range:
        start = sum(self.rank ** k for k in range(self.lo, d))
        return range(start, start + self.rank ** d)

    def series(self, v: Sequence[int], N: int | None = None) -> TruncSeries:
        return TruncSeries(self.rank, N or self.hi, 0,
                           {m: c for m, c in zip(self.monomials, v) if c})


@lru_cache(maxsize=None)
def monomial_index(rank: int, hi: int, lo: int = 1) -> MonomialIndex:
    return MonomialIndex(rank, hi, lo)


def _binom(e: int, k: int) -> int:
    """Generalized binomial coefficient C(e, k), valid for negative e."""
    num, den = 1, 1
    for j in range(k):
        num *= e - j
        den *= j + 1
    return num // den


@lru_cache(maxsize=4096)
def _syllable_series(rank: int, N: int, g: int, e: int) -> TruncSeries:
    i = g - 1
    return TruncSeries(rank, N, 1, {(i,) * k: _binom(e, k) for k in range(1, N + 1)})


def expand(w: FreeWord, N: int) -> TruncSeries:
    """Magnus expansion x_i -> 1 + X_i truncated above degree N."""
    s = TruncSeries.one(w.rank, N)
    for g, e in w.syllables:
        s = _mul_syllable(s, g - 1, e, N)
    return s


def _mul_syllable(s: TruncSeries, i: int, e: int, N: int) -> TruncSeries:
    # right multiplication by (1 + X_i)^e, appending letters
    coeffs = [_binom(e, k) for k in range(N + 1)]
    out: dict[int, dict[tuple, int]] = {d: dict(b) for d, b in s.terms.items()}
    items = [((), s.constant)] if s.constant else []
    for d in sorted(s.terms):
        items.extend(s.terms[d].items())
    for m, c in items:
        base = len(m)
        for k in range(1, N - base + 1):
            ck = coeffs[k]
            if ck:
                mm = m + (i,) * k
                t = out.setdefault(base + k, {})
                v = t.get(mm, 0) + c * ck
                if v:
                    t[mm] = v
                else:
                    del t[mm]
    r = TruncSeries(s.rank, N, s.constant)
    r.terms = {d: b for d, b in out.items() if b}
    return r


def left_letter_quotient(s: TruncSeries, i: int) -> TruncSeries:
    """Sum over monomials of s starting with X_i (1-based i), that letter stripped.

    s = constant + sum_i X_i * left_letter_quotient(s, i).
    """
    k = i - 1
    out = TruncSeries(s.rank, s.max_degree)
    terms: dict[tuple, int] = {}
    for m, c in s.items():
        if m[0] == k:
            terms[m[1:]] = c
    const = terms.pop((), 0)
    out.constant = const
    for m, c in terms.items():
        out.terms.setdefault(len(m), {})[m] = c
    return out


def right_letter_quotient(s: TruncSeries, i: int) -> TruncSeries:
    """Mirror of left_letter_quotient: monomials ending in X_i, letter stripped."""
    return left_letter_quotient(s.reversed(), i).reversed()


# ---------------------------------------------------------------------------
# Hall basis


@dataclass(frozen=True)
class BasicCommutator:
    """Binary bracket tree; a leaf is a generator index 1..rank."""
    left: "BasicCommutator | int"
    right: "BasicCommutator | None" = None
    weight: int = 1

    @classmethod
    def leaf(cls, i: int) -> "BasicCommutator":
        return cls(i, None, 1)

    @classmethod
    def bracket(cls, u: "BasicCommutator", v: "BasicCommutator") -> "BasicCommutator":
        return cls(u, v, u.weight + v.weight)

    @property
    def is_leaf(self) -> bool:
        return self.right is None

    def word(self, rank: int) -> FreeWord:
        if self.is_leaf:
            return FreeWord.gen(rank, self.left)
        return word_comm(self.left.word(rank), self.right.word(rank))

    def __str__(self):
        if self.is_leaf:
            return f"x{self.left}"
        return f"[{self.left},{self.right}]"

    __repr__ = __str__


class HallBasis:
    """Basic commutators of weight 1..max_weight on x1 < x2 < ... in Hall order."""

    def __init__(self, rank: int, max_weight: int):
        self.rank, self.max_weight = rank, max_weight
        order: list[BasicCommutator] = [BasicCommutator.leaf(i) for i in range(1, rank + 1)]
        by_weight: dict[int, list[BasicCommutator]] = {1: list(order)}
        for k in range(2, max_weight + 1):
            pos = {c: n for n, c in enumerate(order)}
            layer = []
            for u in order:
                wv = k - u.weight
                if wv < 1:
                    continue
                for v in by_weight.get(wv, []):
                    if pos[u] <= pos[v]:
                        continue
                    if not u.is_leaf and pos[u.right] > pos[v]:
                        continue
                    layer.append(BasicCommutator.bracket(u, v))
            by_weight[k] = layer
            order.extend(layer)
        self.by_weight = by_weight
        self.order = order
        self.position = {c: n for n, c in enumerate(order)}

    def layer(self, k: int) -> list[BasicCommutator]:
        return list(self.by_weight.get(k, []))

    def counts(self) -> list[int]:
        return [len(self.by_weight.get(k, [])) for k in range(1, self.max_weight + 1)]

    def is_basic(self, c: BasicCommutator) -> bool:
        return c in self.position

    def offset(self, k: int) -> int:
        return sum(len(self.by_weight.get(j, [])) for j in range(1, k))

    def __len__(self):
        return len(self.order)


CLASS_BOUND = 4


@lru_cache(maxsize=None)
def hall_basis(rank: int, max_weight: int) -> HallBasis:
    return HallBasis(rank, max_weight)


def is_admissible(c: BasicCommutator, rank: int) -> bool:
    return hall_basis(rank, c.weight).is_basic(c)


def witt_number(rank: int, k: int) -> int:
    def mobius(n):
        res, p = 1, 2
        while p * p <= n:
            if n % p == 0:
                n //= p
                if n % p == 0:
                    return 0
                res = -res
            p += 1
        return -res if n > 1 else res
    return sum(mobius(d) * rank ** (k // d) for d in range(1, k + 1) if k % d == 0) // k


def lie_series(c: BasicCommutator, rank: int, N: int) -> TruncSeries:
    """Homogeneous Lie polynomial of c computed by bracketing: [U,V] = UV - VU."""
    if c.is_leaf:
        return TruncSeries.monomial(rank, N, (c.left - 1,))
    U = lie_series(c.left, rank, N)
    V = lie_series(c.right, rank, N)
    return U * V - V * U


def lie_element(c: BasicCommutator, N: int, rank: int | None = None) -> TruncSeries:
    """Degree-weight(c) component of expand(c) - 1."""
    if c.weight > N:
        raise ValueError(f"weight {c.weight} exceeds truncation degree {N}")
    if rank is None:
        rank = _max_leaf(c)
    s = expand(c.word(rank), N)
    return s.homogeneous(c.weight)


def _max_leaf(c: BasicCommutator) -> int:
    if c.is_leaf:
        return c.left
    return max(_max_leaf(c.left), _max_leaf(c.right))
