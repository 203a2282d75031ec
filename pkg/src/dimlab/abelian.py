"""Exact integer linear algebra: normal forms, lattices, f.g. abelian groups.

Matrices are plain lists of rows of Python ints (arbitrary precision).  A
lattice is stored by its canonical echelon basis; vectors are rows.  A
finitely generated abelian group is the cokernel of its relation vectors,
and maps between groups are integer matrices acting on generator
coordinates (``target.n_gens`` rows, ``source.n_gens`` columns).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd, prod
from typing import Iterable, Sequence

from .errors import DimensionMismatch, IllFormedMap, NotAComplex, NotSublattice

IntMatrix = list  # list[list[int]], row-major


# ---------------------------------------------------------------------------
# small matrix helpers

def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(m: int, n: int) -> list[list[int]]:
    return [[0] * n for _ in range(m)]


def transpose(M: Sequence[Sequence[int]], n_rows_if_empty: int = 0) -> list[list[int]]:
    if not M:
        return [[] for _ in range(n_rows_if_empty)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    if not A:
        return []
    Bt = list(zip(*B)) if B else []
    if not Bt:
        return [[] for _ in A]
    return [[sum(a * b for a, b in zip(row, col) if a) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, v) if a) for row in A]


def columns(A: Sequence[Sequence[int]], n_cols: int | None = None) -> list[list[int]]:
    if not A:
        return [[] for _ in range(n_cols or 0)]
    return [list(c) for c in zip(*A)]


def from_columns(cols: Sequence[Sequence[int]], n_rows: int) -> list[list[int]]:
    if not cols:
        return [[] for _ in range(n_rows)]
    return [list(r) for r in zip(*cols)]


def kron(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[a * b for a in ra for b in rb] for ra in A for rb in B]


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Bareiss fraction-free determinant."""
    n = len(M)
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def lcm(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return abs(a * b) // gcd(a, b)


# ---------------------------------------------------------------------------
# Smith normal form

def _snf_core(A, U, V):
    m = len(A)
    n = len(A[0]) if m else 0
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        _swap_rows(A, U, t, i)
        _swap_cols(A, V, t, j)
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                x = A[i][t]
                if x:
                    q = _round_div(x, p)
                    if q:
                        _add_row(A, U, i, t, -q)
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                x = A[t][j]
                if x:
                    q = _round_div(x, p)
                    if q:
                        _add_col(A, V, j, t, -q)
                    if A[t][j]:
                        dirty = True
            if dirty:
                best = None
                for i in range(t, m):
                    x = A[i][t]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, t)
                for j in range(t + 1, n):
                    x = A[t][j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), t, j)
                _, i, j = best
                _swap_rows(A, U, t, i)
                _swap_cols(A, V, t, j)
                continue
            bad = None
            for i in range(t + 1, m):
                row = A[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            _add_row(A, U, t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if U is not None:
                U[t] = [-x for x in U[t]]
        t += 1
    return A, U, V


def _round_div(x: int, p: int) -> int:
    q, r = divmod(x, p)
    if 2 * abs(r) > abs(p):
        q += 1 if (r > 0) == (p > 0) else -1
    return q


def _swap_rows(A, U, i, j):
    if i != j:
        A[i], A[j] = A[j], A[i]
        if U is not None:
            U[i], U[j] = U[j], U[i]


def _swap_cols(A, V, i, j):
    if i != j:
        for row in A:
            row[i], row[j] = row[j], row[i]
        if V is not None:
            for row in V:
                row[i], row[j] = row[j], row[i]


def _add_row(A, U, dst, src, c):
    A[dst] = [x + c * y for x, y in zip(A[dst], A[src])]
    if U is not None:
        U[dst] = [x + c * y for x, y in zip(U[dst], U[src])]


def _add_col(A, V, dst, src, c):
    for row in A:
        if row[src]:
            row[dst] += c * row[src]
    if V is not None:
        for row in V:
            if row[src]:
                row[dst] += c * row[src]


def smith_normal_form(M: Sequence[Sequence[int]]):
    """Return (U, D, V) with U*M*V = D, U and V unimodular, D in Smith form.

    Pivots are chosen by minimal absolute value, which keeps entries small.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(r) for r in M]
    U, V = identity(m), identity(n)
    _snf_core(A, U, V)
    return U, A, V


def smith_diagonal(M: Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form (length min(rows, cols)), no transforms."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(r) for r in M]
    _snf_core(A, None, None)
    return [A[i][i] for i in range(min(m, n))]


# ---------------------------------------------------------------------------
# lattices

def _first_nonzero(v, start=0):
    for j in range(start, len(v)):
        if v[j]:
            return j
    return None


class _Echelon:
    """Mutable row-echelon accumulator keyed by pivot column."""

    __slots__ = ("dim", "rows")

    def __init__(self, dim: int):
        self.dim = dim
        self.rows: dict[int, list[int]] = {}

    def add(self, vec) -> bool:
        rows = self.rows
        v = list(vec)
        j = _first_nonzero(v)
        changed = False
        while j is not None:
            row = rows.get(j)
            if row is None:
                if v[j] < 0:
                    v = [-x for x in v]
                rows[j] = v
                return True
            a, b = row[j], v[j]
            if b % a == 0:
                q = b // a
                v = [x - q * y for x, y in zip(v, row)] if j == 0 else \
                    v[:j] + [x - q * y for x, y in zip(v[j:], row[j:])]
            else:
                g, s, t = xgcd(a, b)
                ag, bg = a // g, b // g
                new_row = v[:j] + [s * y + t * x for x, y in zip(v[j:], row[j:])]
                v = v[:j] + [ag * x - bg * y for x, y in zip(v[j:], row[j:])]
                rows[j] = new_row
                changed = True
            j = _first_nonzero(v, j + 1)
        return changed

    def reduce(self, vec):
        """Reduce vec against the echelon rows; returns the remainder."""
        v = list(vec)
        j = _first_nonzero(v)
        while j is not None:
            row = self.rows.get(j)
            if row is None:
                return v
            q = v[j] // row[j]
            if q:
                v = v[:j] + [x - q * y for x, y in zip(v[j:], row[j:])]
            if v[j]:
                return v
            j = _first_nonzero(v, j + 1)
        return v

    def canonical_rows(self) -> list[list[int]]:
        piv = sorted(self.rows)
        rows = [list(self.rows[p]) for p in piv]
        for i, p in enumerate(piv):
            if rows[i][p] < 0:
                rows[i] = [-x for x in rows[i]]
        # row k is reduced by rows below it in pivot order; reducing by row i
        # only touches columns >= piv[i], so earlier columns stay reduced
        for k in range(len(rows)):
            for i in range(k + 1, len(rows)):
                p = piv[i]
                x = rows[k][p]
                q = x // rows[i][p]
                if q:
                    rows[k] = rows[k][:p] + [a - q * b for a, b in zip(rows[k][p:], rows[i][p:])]
        return rows


@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^ambient_dim held in canonical Hermite form.

    ``basis`` rows are in echelon form with positive pivots and all entries
    above a pivot reduced into [0, pivot).  Two lattices are equal iff their
    bases are identical.
    """
    ambient_dim: int
    basis: tuple = ()

    @classmethod
    def from_vectors(cls, vectors: Iterable[Sequence[int]], ambient_dim: int) -> "Lattice":
        ech = _Echelon(ambient_dim)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in Z^{ambient_dim}")
            if any(v):
                ech.add(v)
        return cls(ambient_dim, tuple(tuple(r) for r in ech.canonical_rows()))

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, tuple(tuple(r) for r in identity(n)))

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, ())

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[int]:
        return [_first_nonzero(r) for r in self.basis]

    def basis_matrix(self) -> list[list[int]]:
        """Basis vectors as columns."""
        return from_columns(self.basis, self.ambient_dim)

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Coefficients c with v = sum c_i basis_i, or None if v is not in the lattice."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch("vector/lattice dimension mismatch")
        v = list(v)
        coeffs = []
        for row in self.basis:
            p = _first_nonzero(row)
            if any(v[:p]):
                return None
            q, r = divmod(v[p], row[p])
            if r:
                return None
            coeffs.append(q)
            if q:
                v = v[:p] + [x - q * y for x, y in zip(v[p:], row[p:])]
        if any(v):
            return None
        return coeffs

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(b in self for b in other.basis)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains_lattice(self)

    def __add__(self, other: "Lattice") -> "Lattice":
        _check_dims(self, other)
        return Lattice.from_vectors(list(self.basis) + list(other.basis), self.ambient_dim)

    def scale(self, k: int) -> "Lattice":
        return Lattice.from_vectors([[k * x for x in b] for b in self.basis], self.ambient_dim)

    def __str__(self):
        return f"Lattice(Z^{self.ambient_dim}, rank {self.rank})"


def _check_dims(a: Lattice, b: Lattice):
    if a.ambient_dim != b.ambient_dim:
        raise DimensionMismatch(f"Z^{a.ambient_dim} vs Z^{b.ambient_dim}")


def lattice_canonicalize(vectors: Iterable[Sequence[int]], ambient_dim: int) -> Lattice:
    return Lattice.from_vectors(vectors, ambient_dim)


def relation_kernel(tops: Sequence[Sequence[int]], bottoms: Sequence[Sequence[int]], top_dim: int, bottom_dim: int) -> Lattice:
    """Lattice of sums sum c_i*bottom_i over integer c with sum c_i*top_i = 0.

    Zassenhaus trick: echelonize the stacked vectors (top_i | bottom_i); the rows
    whose top part vanishes span the requested lattice.
    """
    ech = _Echelon(top_dim + bottom_dim)
    for t, b in zip(tops, bottoms):
        v = list(t) + list(b)
        if any(v):
            ech.add(v)
    out = [r[top_dim:] for p, r in ech.rows.items() if p >= top_dim]
    return Lattice.from_vectors(out, bottom_dim)


def lattice_intersect(L1: Lattice, L2: Lattice) -> Lattice:
    _check_dims(L1, L2)
    d = L1.ambient_dim
    tops = list(L1.basis) + list(L2.basis)
    bottoms = list(L1.basis) + [[0] * d for _ in L2.basis]
    return relation_kernel(tops, bottoms, d, d)


def integer_kernel(M: Sequence[Sequence[int]], n_cols: int) -> Lattice:
    """{x in Z^n_cols : M x = 0}."""
    m = len(M)
    cols = columns(M, n_cols) if m else [[] for _ in range(n_cols)]
    return relation_kernel(cols, identity(n_cols), m, n_cols)


def preimage_lattice(M: Sequence[Sequence[int]], n_cols: int, L: Lattice) -> Lattice:
    """{x in Z^n_cols : M x in L}."""
    m = L.ambient_dim
    cols = columns(M, n_cols) if len(M) else [[0] * m for _ in range(n_cols)]
    tops = cols + [list(b) for b in L.basis]
    bottoms = identity(n_cols) + [[0] * n_cols for _ in L.basis]
    return relation_kernel(tops, bottoms, m, n_cols)


def image_lattice(M: Sequence[Sequence[int]], n_cols: int, L: Lattice | None = None) -> Lattice:
    m = len(M)
    if L is None:
        vecs = columns(M, n_cols)
    else:
        vecs = [matvec(M, b) for b in L.basis]
    return Lattice.from_vectors(vecs, m)


def invariants_of_relations(n_gens: int, relations: Iterable[Sequence[int]]) -> list[int]:
    """Invariant factors of Z^n_gens / span(relations), units dropped, zeros last."""
    L = relations if isinstance(relations, Lattice) else Lattice.from_vectors(relations, n_gens)
    diag = smith_diagonal([list(b) for b in L.basis]) if L.basis else []
    diag = sorted((abs(d) for d in diag if d), key=lambda d: d)
    tors = [d for d in diag if d != 1]
    return _divisibility_chain(tors) + [0] * (n_gens - L.rank)


def _divisibility_chain(ds: list[int]) -> list[int]:
    # smith_diagonal already yields a chain; re-derive defensively from the multiset
    primes: dict[int, list[int]] = {}
    for d in ds:
        for p, e in _factor(d).items():
            primes.setdefault(p, []).append(p ** e)
    k = max((len(v) for v in primes.values()), default=0)
    out = [1] * k
    for p, powers in primes.items():
        powers.sort()
        for i, q in enumerate(reversed(powers)):
            out[k - 1 - i] *= q
    return out


def _factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def lattice_quotient_invariants(big: Lattice, small: Lattice) -> list[int]:
    _check_dims(big, small)
    coords = []
    for b in small.basis:
        c = big.coordinates(b)
        if c is None:
            raise NotSublattice("small lattice is not contained in big lattice")
        coords.append(c)
    return invariants_of_relations(big.rank, coords)


# ---------------------------------------------------------------------------
# finitely generated abelian groups

def format_invariants(inv: Sequence[int]) -> str:
    return ",".join(str(d) for d in inv)


def parse_invariants(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(t) for t in text.replace(" ", "").split(",") if t != ""]


@dataclass(frozen=True, eq=False)
class FgAbelian:
    """Cokernel of the relation vectors in Z^n_gens.

    Equality is isomorphism: two groups compare equal iff their invariant
    factor lists agree.
    """
    n_gens: int
    relations: tuple = ()
    _inv: list = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relations)
        for r in rels:
            if len(r) != self.n_gens:
                raise DimensionMismatch("relation length differs from n_gens")
        object.__setattr__(self, "relations", rels)

    @classmethod
    def from_invariants(cls, inv: Sequence[int]) -> "FgAbelian":
        n = len(inv)
        rels = []
        for i, d in enumerate(inv):
            if d != 0:
                v = [0] * n
                v[i] = d
                rels.append(v)
        return cls(n, tuple(rels))

    @classmethod
    def free(cls, n: int) -> "FgAbelian":
        return cls(n, ())

    @classmethod
    def cyclic(cls, m: int) -> "FgAbelian":
        return cls.from_invariants([m])

    @classmethod
    def trivial(cls) -> "FgAbelian":
        return cls(0, ())

    @property
    def relation_lattice(self) -> Lattice:
        lat = self.__dict__.get("_lat")
        if lat is None:
            lat = Lattice.from_vectors(self.relations, self.n_gens)
            object.__setattr__(self, "_lat", lat)
        return lat

    @property
    def relation_matrix(self) -> list[list[int]]:
        return from_columns(self.relations, self.n_gens)

    @property
    def invariant_factors(self) -> list[int]:
        if self._inv is None:
            object.__setattr__(self, "_inv", invariants_of_relations(self.n_gens, self.relation_lattice))
        return list(self._inv)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariant_factors if d == 0)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.invariant_factors if d]

    def is_trivial(self) -> bool:
        return not self.invariant_factors

    def is_finite(self) -> bool:
        return self.rank == 0

    def order(self) -> int | None:
        """Group order, or None when infinite."""
        if not self.is_finite():
            return None
        return prod(self.invariant_factors)

    def is_zero(self, v: Sequence[int]) -> bool:
        return v in self.relation_lattice

    def __eq__(self, other):
        if not isinstance(other, FgAbelian):
            return NotImplemented
        return self.invariant_factors == other.invariant_factors

    def __hash__(self):
        return hash(tuple(self.invariant_factors))

    def __str__(self):
        inv = self.invariant_factors
        if not inv:
            return "0"
        return " + ".join("Z" if d == 0 else f"Z/{d}" for d in inv)

    def __repr__(self):
        return f"FgAbelian[{format_invariants(self.invariant_factors)}]"

    def simplify(self) -> tuple["FgAbelian", "AbMap", "AbMap"]:
        """Smith-reduced presentation with isomorphisms (to_small, from_small)."""
        n = self.n_gens
        basis = [list(b) for b in self.relation_lattice.basis]
        if basis:
            U, D, _ = smith_normal_form(from_columns(basis, n))
            diag = [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]
        else:
            U, diag = identity(n), []
        diag = diag + [0] * (n - len(diag))
        keep = [i for i in range(n) if diag[i] != 1]
        small = FgAbelian(len(keep), tuple(
            [diag[i] if k == j else 0 for k in range(len(keep))]
            for j, i in enumerate(keep) if diag[i] != 0))
        Uinv = _unimodular_inverse(U)
        to_small = AbMap(self, small, [U[i] for i in keep])
        from_small = AbMap(small, self, [[Uinv[r][i] for i in keep] for r in range(n)])
        return small, to_small, from_small


def _unimodular_inverse(U: Sequence[Sequence[int]]) -> list[list[int]]:
    n = len(U)
    aug = [list(U[i]) + [int(i == j) for j in range(n)] for i in range(n)]
    for c in range(n):
        # integer Gauss-Jordan; unimodularity guarantees unit pivots after gcd steps
        for r in range(c + 1, n):
            while aug[r][c]:
                q = aug[c][c] // aug[r][c] if aug[r][c] else 0
                aug[c] = [x - q * y for x, y in zip(aug[c], aug[r])]
                aug[c], aug[r] = aug[r], aug[c]
        if aug[c][c] == 0:
            raise ValueError("matrix is not unimodular")
        if aug[c][c] < 0:
            aug[c] = [-x for x in aug[c]]
        if aug[c][c] != 1:
            raise ValueError("matrix is not unimodular")
    for c in range(n - 1, -1, -1):
        for r in range(c):
            q = aug[r][c]
            if q:
                aug[r] = [x - q * y for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def direct_sum(*groups: FgAbelian) -> FgAbelian:
    n = sum(g.n_gens for g in groups)
    rels, off = [], 0
    for g in groups:
        for r in g.relations:
            rels.append([0] * off + list(r) + [0] * (n - off - g.n_gens))
        off += g.n_gens
    return FgAbelian(n, tuple(rels))


# ---------------------------------------------------------------------------
# maps

@dataclass(frozen=True, eq=False)
class AbMap:
    source: FgAbelian
    target: FgAbelian
    matrix: list

    def __post_init__(self):
        M = [list(r) for r in self.matrix]
        if len(M) != self.target.n_gens or any(len(r) != self.source.n_gens for r in M):
            if not (self.target.n_gens == 0 and not M):
                raise DimensionMismatch(
                    f"matrix shape does not match {self.target.n_gens}x{self.source.n_gens}")
        object.__setattr__(self, "matrix", M)

    def apply(self, v: Sequence[int]) -> list[int]:
        if self.target.n_gens == 0:
            return []
        return matvec(self.matrix, v)

    def column(self, j: int) -> list[int]:
        return [row[j] for row in self.matrix]

    def is_well_defined(self) -> bool:
        T = self.target.relation_lattice
        return all(self.apply(r) in T for r in self.relations_of_source())

    def relations_of_source(self):
        return self.source.relations

    def check(self) -> "AbMap":
        if not self.is_well_defined():
            raise IllFormedMap("map does not send source relations into target relations")
        return self

    def is_zero(self) -> bool:
        T = self.target.relation_lattice
        return all(self.column(j) in T for j in range(self.source.n_gens))

    def compose(self, other: "AbMap") -> "AbMap":
        """self o other."""
        if self.target.n_gens == 0:
            M = []
        elif other.source.n_gens == 0:
            M = [[] for _ in range(self.target.n_gens)]
        else:
            M = matmul(self.matrix, other.matrix) if other.target.n_gens else \
                [[0] * other.source.n_gens for _ in range(self.target.n_gens)]
        return AbMap(other.source, self.target, M)

    def __sub__(self, other: "AbMap") -> "AbMap":
        return AbMap(self.source, self.target,
                     [[a - b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def __add__(self, other: "AbMap") -> "AbMap":
        return AbMap(self.source, self.target,
                     [[a + b for a, b in zip(r, s)] for r, s in zip(self.matrix, other.matrix)])

    def equals(self, other: "AbMap") -> bool:
        """Equality as homomorphisms (differences land in target relations)."""
        return (self - other).is_zero()

    @classmethod
    def identity(cls, A: FgAbelian) -> "AbMap":
        return cls(A, A, identity(A.n_gens))

    @classmethod
    def zero(cls, A: FgAbelian, B: FgAbelian) -> "AbMap":
        return cls(A, B, zeros(B.n_gens, A.n_gens))

    @classmethod
    def scalar(cls, A: FgAbelian, k: int) -> "AbMap":
        return cls(A, A, [[k * x for x in r] for r in identity(A.n_gens)])

    def image_lattice(self) -> Lattice:
        """Image of Z^source plus target relations, inside Z^target."""
        vecs = [self.column(j) for j in range(self.source.n_gens)]
        return Lattice.from_vectors(vecs + [list(r) for r in self.target.relation_lattice.basis],
                                    self.target.n_gens)

    def lift(self, b: Sequence[int]) -> list[int] | None:
        """Some a with f(a) = b in the target group, or None if b is not in the image."""
        n, m = self.source.n_gens, self.target.n_gens
        rel = [list(r) for r in self.target.relation_lattice.basis]
        tops = [self.column(j) for j in range(n)] + rel
        # solve via echelon of (top | e_i) with the target vector appended as (b | 0)
        ech = _Echelon(m + n + len(rel))
        k = len(tops)
        for i, t in enumerate(tops):
            ech.add(list(t) + [int(i == j) for j in range(k)])
        v = list(b) + [0] * k
        rem = ech.reduce(v)
        if any(rem[:m]):
            return None
        # b - sum coeffs*tops has zero top part => coefficients are -rem[m:]
        coeffs = [-x for x in rem[m:]]
        return coeffs[:n]


def map_kernel_cokernel(f: AbMap):
    """Return ((K, incl), (C, proj)) for f: A -> B.

    K is presented on a basis of the preimage lattice P = {x : f(x) in rel(B)},
    with relations rel(A) written in that basis.
    """
    f.check()
    A, B = f.source, f.target
    P = preimage_lattice(f.matrix if B.n_gens else [], A.n_gens, B.relation_lattice)
    rels = []
    for r in A.relation_lattice.basis:
        c = P.coordinates(r)
        assert c is not None
        rels.append(c)
    K = FgAbelian(P.rank, tuple(rels))
    incl = AbMap(K, A, from_columns(P.basis, A.n_gens) if P.basis else [[] for _ in range(A.n_gens)])
    C = FgAbelian(B.n_gens, tuple([f.column(j) for j in range(A.n_gens)] + list(B.relations)))
    proj = AbMap(B, C, identity(B.n_gens))
    return (K, incl), (C, proj)


def kernel(f: AbMap) -> tuple[FgAbelian, AbMap]:
    return map_kernel_cokernel(f)[0]


def cokernel(f: AbMap) -> tuple[FgAbelian, AbMap]:
    return map_kernel_cokernel(f)[1]


def is_injective(f: AbMap) -> bool:
    return kernel(f)[0].is_trivial()


def is_surjective(f: AbMap) -> bool:
    return cokernel(f)[0].is_trivial()


def factor_through(f: AbMap, incl: AbMap) -> AbMap | None:
    """g with incl o g = f, when the image of f lies in the image of incl."""
    cols = []
    for j in range(f.source.n_gens):
        a = incl.lift(f.column(j))
        if a is None:
            return None
        cols.append(a)
    g = AbMap(f.source, incl.source, from_columns(cols, incl.source.n_gens))
    return g


def subquotient(ambient_dim: int, numerator: Lattice, denominator: Lattice) -> FgAbelian:
    """numerator/denominator presented on the numerator basis."""
    rels = []
    for b in denominator.basis:
        c = numerator.coordinates(b)
        if c is None:
            raise NotSublattice("denominator not contained in numerator")
        rels.append(c)
    return FgAbelian(numerator.rank, tuple(rels))


# ---------------------------------------------------------------------------
# tensor and Tor

def ab_tensor(A: FgAbelian, B: FgAbelian) -> FgAbelian:
    """A (x) B on generators e_i (x) f_j, index i*B.n_gens + j."""
    n, m = A.n_gens, B.n_gens
    rels = []
    for r in A.relation_lattice.basis:
        for j in range(m):
            v = [0] * (n * m)
            for i, x in enumerate(r):
                if x:
                    v[i * m + j] = x
            rels.append(v)
    for s in B.relation_lattice.basis:
        for i in range(n):
            v = [0] * (n * m)
            for j, x in enumerate(s):
                if x:
                    v[i * m + j] = x
            rels.append(v)
    return FgAbelian(n * m, tuple(rels))


def ab_tensor_map(f: AbMap, g: AbMap) -> AbMap:
    return AbMap(ab_tensor(f.source, g.source), ab_tensor(f.target, g.target), kron(f.matrix, g.matrix))


def free_cover(A: FgAbelian) -> tuple[int, list[list[int]]]:
    """Two-term free resolution 0 -> Z^r -> Z^n -> A: returns (r, n x r matrix)."""
    basis = A.relation_lattice.basis
    return len(basis), from_columns(basis, A.n_gens)


def tor_map_data(A: FgAbelian, B: FgAbelian) -> AbMap:
    """The map P1 (x) B -> P0 (x) B whose kernel is Tor(A, B)."""
    r, d = free_cover(A)
    src = ab_tensor(FgAbelian.free(r), B)
    tgt = ab_tensor(FgAbelian.free(A.n_gens), B)
    M = kron(d, identity(B.n_gens)) if r else [[] for _ in range(A.n_gens * B.n_gens)]
    return AbMap(src, tgt, M)


def ab_tor(A: FgAbelian, B: FgAbelian) -> FgAbelian:
    return kernel(tor_map_data(A, B))[0]


# ---------------------------------------------------------------------------
# complexes

@dataclass(frozen=True)
class AbComplex:
    """Chain of composable maps; objects are maps[0].source, maps[0].target, ..."""
    maps: tuple

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))

    @property
    def objects(self) -> list[FgAbelian]:
        if not self.maps:
            return []
        return [self.maps[0].source] + [f.target for f in self.maps]

    def check(self) -> None:
        for i, (f, g) in enumerate(zip(self.maps, self.maps[1:])):
            if g.source.n_gens != f.target.n_gens:
                raise NotAComplex(f"maps {i} and {i + 1} are not composable")
            if not g.compose(f).is_zero():
                raise NotAComplex(f"composite of maps {i} and {i + 1} is nonzero")

    def homology(self, position: int) -> FgAbelian:
        """ker(outgoing) / im(incoming) at object ``position``; missing maps are zero."""
        objs = self.objects
        if not 0 <= position < len(objs):
            raise IndexError(position)
        X = objs[position]
        n = X.n_gens
        if position < len(self.maps):
            g = self.maps[position]
            Z = preimage_lattice(g.matrix if g.target.n_gens else [], n, g.target.relation_lattice)
        else:
            Z = Lattice.full(n)
        vecs = [list(r) for r in X.relation_lattice.basis]
        if position > 0:
            f = self.maps[position - 1]
            vecs += [f.column(j) for j in range(f.source.n_gens)]
        Bd = Lattice.from_vectors(vecs, n)
        if not Z.contains_lattice(Bd):
            raise NotAComplex(f"image is not inside kernel at position {position}")
        return subquotient(n, Z, Bd)


def complex_is_exact(C: AbComplex, position: int | None = None) -> bool:
    C.check()
    if position is None:
        return all(C.homology(i).is_trivial() for i in range(len(C.objects)))
    return C.homology(position).is_trivial()
