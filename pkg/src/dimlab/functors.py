"""Quadratic functors on finitely generated abelian groups and their first derived functors.

Three independent paths compute L1 SP^2:

* ``derived_l1`` applies the functor degreewise to the simplicial abelian
  group attached (Dold-Kan) to a two-term free resolution and takes pi_1;
* ``koszul_lsp2`` uses the kernel of Lambda^2(I)/Lambda^2(J) -> I (x) I/J;
* ``l1sp2_closed`` uses the direct-sum formula with pairwise Tor terms.

Coordinates on a free module Z^n: TENSOR2 and TILDE2 use e_i (x) e_j at index
i*n + j; SP2 uses pairs i <= j and LAMBDA2 pairs i < j (lexicographic).
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd
from typing import Callable, Sequence

from .abelian import (AbComplex, AbMap, FgAbelian, Lattice, ab_tor, format_invariants, lattice_quotient_invariants,
                      from_columns, identity, kron, map_kernel_cokernel, matmul,
                      preimage_lattice, smith_normal_form, subquotient, zeros, _unimodular_inverse)
from .errors import IllFormedMap, NotAComplex, NotSublattice
from .report import CheckReport, timed


class QuadTag(enum.Enum):
    TENSOR2 = "tensor2"
    SP2 = "sp2"
    LAMBDA2 = "lambda2"
    TILDE2 = "tilde2"


class Path(enum.Enum):
    CLOSED_FORM = "closed_form"
    KOSZUL = "koszul"
    DOLD_KAN = "dold_kan"


@dataclass
class DerivedResult:
    value: FgAbelian
    path: Path
    tag: QuadTag = QuadTag.SP2
    input: FgAbelian | None = None
    witnesses: list = field(default_factory=list)

    @property
    def invariants(self) -> list[int]:
        return self.value.invariant_factors

    def to_dict(self) -> dict:
        return {
            "input": format_invariants(self.input.invariant_factors) if self.input is not None else None,
            "tag": self.tag.value,
            "path": self.path.value,
            "output": format_invariants(self.value.invariant_factors),
        }


# ---------------------------------------------------------------------------
# functors on free modules


@lru_cache(maxsize=None)
def _pairs(n: int, strict: bool) -> tuple[tuple[int, int], ...]:
    return tuple((i, j) for i in range(n) for j in range(i + int(strict), n))


@lru_cache(maxsize=None)
def _pair_index(n: int, strict: bool) -> dict:
    return {p: k for k, p in enumerate(_pairs(n, strict))}


def quad_dim(tag: QuadTag, n: int) -> int:
    if tag in (QuadTag.TENSOR2, QuadTag.TILDE2):
        return n * n
    return len(_pairs(n, tag is QuadTag.LAMBDA2))


@lru_cache(maxsize=None)
def _reduction(tag: QuadTag, n: int) -> tuple:
    """Projection from tensor coordinates (n^2) onto the functor's coordinates."""
    d = quad_dim(tag, n)
    R = [[0] * (n * n) for _ in range(d)]
    if tag in (QuadTag.TENSOR2, QuadTag.TILDE2):
        for k in range(n * n):
            R[k][k] = 1
    elif tag is QuadTag.SP2:
        idx = _pair_index(n, False)
        for i in range(n):
            for j in range(n):
                R[idx[(min(i, j), max(i, j))]][i * n + j] = 1
    else:
        idx = _pair_index(n, True)
        for i in range(n):
            for j in range(n):
                if i < j:
                    R[idx[(i, j)]][i * n + j] = 1
                elif i > j:
                    R[idx[(j, i)]][i * n + j] = -1
    return tuple(tuple(r) for r in R)


@lru_cache(maxsize=None)
def _section(tag: QuadTag, n: int) -> tuple:
    """A set-theoretic section of the reduction: functor coordinates -> tensor coordinates."""
    d = quad_dim(tag, n)
    S = [[0] * d for _ in range(n * n)]
    if tag in (QuadTag.TENSOR2, QuadTag.TILDE2):
        for k in range(n * n):
            S[k][k] = 1
    else:
        for k, (i, j) in enumerate(_pairs(n, tag is QuadTag.LAMBDA2)):
            S[i * n + j][k] = 1
    return tuple(tuple(r) for r in S)


@lru_cache(maxsize=None)
def _base_relations(tag: QuadTag, n: int) -> tuple:
    if tag is not QuadTag.TILDE2:
        return ()
    rels = []
    for i in range(n):
        for j in range(i, n):
            v = [0] * (n * n)
            v[i * n + j] += 1
            v[j * n + i] += 1
            rels.append(tuple(v))
    return tuple(rels)


def _mat(M, rows: int, cols: int) -> list[list[int]]:
    if rows == 0:
        return []
    if cols == 0:
        return [[] for _ in range(rows)]
    return [list(r) for r in M]


def quad_free_matrix(tag: QuadTag, M: Sequence[Sequence[int]], n: int, m: int) -> list[list[int]]:
    """Matrix of F(M): F(Z^n) -> F(Z^m) for an m x n integer matrix M."""
    dn, dm = quad_dim(tag, n), quad_dim(tag, m)
    if dn == 0 or dm == 0:
        return _mat([], dm, dn) if dm else []
    K = kron(M, M)
    return matmul(matmul(_reduction(tag, m), K), _section(tag, n))


def _relation_images(tag: QuadTag, n: int, rels: Sequence[Sequence[int]]) -> list[list[int]]:
    """Images in F(Z^n) of r (x) e_j and e_j (x) r for relation vectors r."""
    R = _reduction(tag, n)
    out = []
    for r in rels:
        for j in range(n):
            a = [0] * (n * n)
            b = [0] * (n * n)
            for i, x in enumerate(r):
                if x:
                    a[i * n + j] = x
                    b[j * n + i] = x
            for v in (a, b):
                w = [sum(c * y for c, y in zip(row, v)) for row in R]
                if any(w):
                    out.append(w)
    return out


def quad_apply(tag: QuadTag, A: FgAbelian) -> FgAbelian:
    """F(A) as F(Z^n) modulo the images of relation-times-generator tensors."""
    n = A.n_gens
    rels = list(_base_relations(tag, n)) + _relation_images(tag, n, A.relation_lattice.basis)
    return FgAbelian(quad_dim(tag, n), tuple(rels))


def quad_apply_map(tag: QuadTag, f: AbMap) -> AbMap:
    f.check()
    n, m = f.source.n_gens, f.target.n_gens
    M = quad_free_matrix(tag, f.matrix, n, m)
    return AbMap(quad_apply(tag, f.source), quad_apply(tag, f.target), M).check()


# ---------------------------------------------------------------------------
# degreewise functors and natural transformations


@dataclass(frozen=True)
class _Functor:
    """An additive or quadratic functor on free modules, given by coordinates."""
    name: str
    dim: Callable[[int], int]
    base_relations: Callable[[int], tuple]
    on_matrix: Callable[[Sequence[Sequence[int]], int, int], list]


def _quad_functor(tag: QuadTag) -> _Functor:
    return _Functor(tag.value, lambda n: quad_dim(tag, n), lambda n: _base_relations(tag, n),
                    lambda M, n, m: quad_free_matrix(tag, M, n, m))


def _mod2_functor() -> _Functor:
    # X -> X (x) Z/2 on coordinates e_i
    return _Functor("mod2", lambda n: n,
                    lambda n: tuple(tuple(2 * int(i == j) for j in range(n)) for i in range(n)),
                    lambda M, n, m: [list(r) for r in M] if m else [])


FUNCTORS = {tag: _quad_functor(tag) for tag in QuadTag}
MOD2 = _mod2_functor()


def _nat_tensor_to_sp2(n):
    return [list(r) for r in _reduction(QuadTag.SP2, n)]


def _nat_tensor_to_lambda2(n):
    return [list(r) for r in _reduction(QuadTag.LAMBDA2, n)]


def _nat_tensor_to_tilde2(n):
    return identity(n * n)


def _nat_sp2_to_tensor(n):
    # symmetrization e_i e_j -> e_ij + e_ji (so e_i^2 -> 2 e_ii)
    pairs = _pairs(n, False)
    M = zeros(n * n, len(pairs))
    for k, (i, j) in enumerate(pairs):
        M[i * n + j][k] += 1
        M[j * n + i][k] += 1
    return M


def _nat_lambda2_to_tensor(n):
    pairs = _pairs(n, True)
    M = zeros(n * n, len(pairs))
    for k, (i, j) in enumerate(pairs):
        M[i * n + j][k] = 1
        M[j * n + i][k] = -1
    return M


def _nat_tilde2_to_lambda2(n):
    return [list(r) for r in _reduction(QuadTag.LAMBDA2, n)]


def _nat_mod2_to_tilde2(n):
    M = zeros(n * n, n)
    for i in range(n):
        M[i * n + i][i] = 1
    return M


# ---------------------------------------------------------------------------
# Dold-Kan object of a two-term complex C1 --d--> C0


def dk_rank(n: int, r: int, k: int) -> int:
    return n + k * r


def dk_face(d: Sequence[Sequence[int]], n: int, r: int, k: int, i: int) -> list[list[int]]:
    """Face d_i : K_k -> K_{k-1} where K_k = C0 + C1^k, element (c0; b1, ..., bk).

    d_0 adds d(b1) to c0 and drops b1; d_k drops b_k; otherwise b_i, b_{i+1} merge.
    """
    src, dst = dk_rank(n, r, k), dk_rank(n, r, k - 1)
    M = zeros(dst, src)
    for a in range(n):
        M[a][a] = 1

    def put(l_src: int, l_dst: int):
        # copy block b_{l_src} (1-based) to block b_{l_dst}
        for t in range(r):
            M[n + (l_dst - 1) * r + t][n + (l_src - 1) * r + t] += 1

    for l in range(1, k + 1):
        if i == 0:
            if l == 1:
                for a in range(n):
                    for t in range(r):
                        M[a][n + t] += d[a][t]
            else:
                put(l, l - 1)
        elif i == k:
            if l < k:
                put(l, l)
        else:
            if l <= i:
                put(l, l)
            else:
                put(l, l - 1)
    return M


def dk_degeneracy(n: int, r: int, k: int, j: int) -> list[list[int]]:
    """Degeneracy s_j : K_k -> K_{k+1}, inserting a zero block at position j+1."""
    src, dst = dk_rank(n, r, k), dk_rank(n, r, k + 1)
    M = zeros(dst, src)
    for a in range(n):
        M[a][a] = 1
    for l in range(1, k + 1):
        l2 = l if l <= j else l + 1
        for t in range(r):
            M[n + (l2 - 1) * r + t][n + (l - 1) * r + t] = 1
    return M


class _SimplicialData:
    """The chain complex F(K_2) -> F(K_1) -> F(K_0) and its homology in degrees 0, 1."""

    def __init__(self, F: _Functor, n: int, r: int, d: Sequence[Sequence[int]]):
        self.F, self.n, self.r, self.d = F, n, r, d
        self.objects = [FgAbelian(F.dim(dk_rank(n, r, k)), F.base_relations(dk_rank(n, r, k)))
                        for k in range(3)]
        self.boundary = {}
        for k in (1, 2):
            s, t = dk_rank(n, r, k), dk_rank(n, r, k - 1)
            total = None
            for i in range(k + 1):
                Mi = F.on_matrix(dk_face(d, n, r, k, i), s, t)
                if total is None:
                    total = [[((-1) ** i) * x for x in row] for row in Mi]
                else:
                    total = [[x + ((-1) ** i) * y for x, y in zip(a, b)] for a, b in zip(total, Mi)]
            self.boundary[k] = AbMap(self.objects[k], self.objects[k - 1],
                                     total if total is not None else [])
        self._hom = {}

    def cycles(self, q: int) -> Lattice:
        X = self.objects[q]
        if q == 0:
            return Lattice.full(X.n_gens)
        g = self.boundary[q]
        return preimage_lattice(g.matrix if g.target.n_gens else [], X.n_gens, g.target.relation_lattice)

    def boundaries(self, q: int) -> Lattice:
        X = self.objects[q]
        f = self.boundary[q + 1]
        vecs = [list(b) for b in X.relation_lattice.basis] + [f.column(j) for j in range(f.source.n_gens)]
        return Lattice.from_vectors(vecs, X.n_gens)

    def homology(self, q: int) -> tuple[FgAbelian, Lattice]:
        """(H_q, Z_q); H_q is presented on the basis of the cycle lattice Z_q."""
        if q not in self._hom:
            Z, B = self.cycles(q), self.boundaries(q)
            if not Z.contains_lattice(B):
                raise NotAComplex(f"boundary not inside cycles in degree {q}")
            self._hom[q] = (subquotient(self.objects[q].n_gens, Z, B), Z)
        return self._hom[q]

    def chain_matrix(self, nat: Callable[[int], list], other: "_SimplicialData", q: int) -> list:
        return nat(dk_rank(self.n, self.r, q))

    def class_of(self, q: int, v: Sequence[int]) -> list[int]:
        H, Z = self.homology(q)
        c = Z.coordinates(v)
        if c is None:
            raise NotAComplex(f"vector is not a cycle in degree {q}")
        return c


def _induced_on_homology(src: _SimplicialData, dst: _SimplicialData, chain: Callable[[int], list],
                         q: int) -> AbMap:
    """Map H_q(src) -> H_q(dst) induced by the degree-q chain matrix chain(q)."""
    Hs, Zs = src.homology(q)
    Hd, _ = dst.homology(q)
    M = chain(q)
    cols = []
    for b in Zs.basis:
        v = [sum(x * y for x, y in zip(row, b)) for row in M] if M else []
        cols.append(dst.class_of(q, v))
    return AbMap(Hs, Hd, from_columns(cols, Hd.n_gens) if cols else [[] for _ in range(Hd.n_gens)]).check()


def _nat_chain(nat: Callable[[int], list], data: _SimplicialData) -> Callable[[int], list]:
    return lambda q: nat(dk_rank(data.n, data.r, q))


def _resolution(A: FgAbelian):
    """Smith-reduced presentation of A as a two-term complex C1 -> C0."""
    small, to_small, from_small = A.simplify()
    n = small.n_gens
    rels = [list(r) for r in small.relation_lattice.basis]
    r = len(rels)
    d = from_columns(rels, n) if r else [[] for _ in range(n)]
    return small, to_small, from_small, n, r, d


@lru_cache(maxsize=512)
def _simplicial(F_name: str, inv: tuple) -> _SimplicialData:
    A = FgAbelian.from_invariants(list(inv))
    _, _, _, n, r, d = _resolution(A)
    F = MOD2 if F_name == "mod2" else FUNCTORS[QuadTag(F_name)]
    return _SimplicialData(F, n, r, d)


def _simplicial_for(F: _Functor, A: FgAbelian) -> _SimplicialData:
    return _simplicial(F.name, tuple(A.invariant_factors))


def derived_l1(tag: QuadTag, A: FgAbelian) -> DerivedResult:
    """pi_1 of F applied degreewise to the Dold-Kan object of a free resolution of A."""
    data = _simplicial_for(FUNCTORS[tag], A)
    H, _ = data.homology(1)
    return DerivedResult(H, Path.DOLD_KAN, tag, A)


def derived_l0(tag: QuadTag, A: FgAbelian) -> FgAbelian:
    """pi_0 of the same simplicial object; agrees with quad_apply(tag, A)."""
    return _simplicial_for(FUNCTORS[tag], A).homology(0)[0]


def _lift_resolution_map(f: AbMap):
    """Chain map between the Smith-reduced resolutions of source and target of f."""
    _, _, from_a, n, r, d = _resolution(f.source)
    _, to_b, _, m, s, e = _resolution(f.target)
    M0 = matmul(to_b.matrix, matmul(f.matrix, from_a.matrix)) if (m and n and f.target.n_gens and f.source.n_gens) \
        else zeros(m, n)
    # M1 with e * M1 = M0 * d; e is diagonal with nonzero entries
    M1 = zeros(s, r)
    for t in range(r):
        col = [sum(M0[a][b] * d[b][t] for b in range(n)) for a in range(m)]
        for u in range(s):
            row = next(a for a in range(m) if e[a][u])
            M1[u][t] = col[row] // e[row][u]
        check = [sum(e[a][u] * M1[u][t] for u in range(s)) for a in range(m)]
        if check != col:
            raise IllFormedMap("map does not lift to the resolutions")
    return M0, M1, (n, r), (m, s)


def _dk_block(M0, M1, src: tuple[int, int], dst: tuple[int, int], k: int) -> list[list[int]]:
    (n, r), (m, s) = src, dst
    M = zeros(dk_rank(m, s, k), dk_rank(n, r, k))
    for a in range(m):
        for b in range(n):
            M[a][b] = M0[a][b]
    for l in range(k):
        for u in range(s):
            for t in range(r):
                M[m + l * s + u][n + l * r + t] = M1[u][t]
    return M


def derived_l1_map(tag: QuadTag, f: AbMap) -> AbMap:
    """L1 F(f) between the Dold-Kan homology presentations of source and target."""
    f.check()
    F = FUNCTORS[tag]
    src, dst = _simplicial_for(F, f.source), _simplicial_for(F, f.target)
    M0, M1, a, b = _lift_resolution_map(f)

    def chain(q):
        return F.on_matrix(_dk_block(M0, M1, a, b, q), dk_rank(a[0], a[1], q), dk_rank(b[0], b[1], q))
    return _induced_on_homology(src, dst, chain, 1)


# ---------------------------------------------------------------------------
# closed form and Koszul model


def l1sp2_closed_invariants(inv: Sequence[int]) -> list[int]:
    tors = [d for d in inv if d not in (0, 1)]
    out = []
    for i in range(len(tors)):
        for j in range(i + 1, len(tors)):
            out.append(gcd(tors[i], tors[j]))
    return out


def l1sp2_closed(A: FgAbelian) -> DerivedResult:
    """Cyclic summands contribute 0, each pair of summands contributes Tor."""
    cyc = l1sp2_closed_invariants(A.invariant_factors)
    return DerivedResult(FgAbelian.from_invariants(cyc), Path.CLOSED_FORM, QuadTag.SP2, A)


@dataclass
class KoszulResult:
    complex: AbComplex
    l1: FgAbelian
    sp2_of_quotient: FgAbelian
    l1_inclusion: AbMap
    witnesses: list = field(default_factory=list)


def _lambda2_quotient(n: int, J: Lattice) -> FgAbelian:
    idx = _pair_index(n, True)
    rels = []
    B = [list(b) for b in J.basis]
    for a in range(len(B)):
        for b in range(a + 1, len(B)):
            rels.append(_wedge(B[a], B[b], n, idx))
    return FgAbelian(len(idx), tuple(rels))


def _wedge(x, y, n, idx=None):
    idx = idx or _pair_index(n, True)
    v = [0] * len(idx)
    for i in range(n):
        if x[i]:
            for j in range(n):
                if y[j] and i != j:
                    if i < j:
                        v[idx[(i, j)]] += x[i] * y[j]
                    else:
                        v[idx[(j, i)]] -= x[i] * y[j]
    return v


def koszul_lsp2(I_rank: int, J: Lattice) -> KoszulResult:
    """Sequence 0 -> L1 SP^2(I/J) -> Lambda^2 I / Lambda^2 J -> I (x) I/J -> SP^2(I/J) -> 0."""
    n = I_rank
    if J.ambient_dim != n:
        raise NotSublattice(f"J lives in Z^{J.ambient_dim}, not Z^{n}")
    Q = FgAbelian(n, tuple(J.basis))
    L = _lambda2_quotient(n, J)
    T = FgAbelian(n * n, tuple(_tensor_rels(n, J)))
    S = quad_apply(QuadTag.SP2, Q)
    pairs = _pairs(n, True)
    to_T = zeros(n * n, len(pairs))
    for k, (i, j) in enumerate(pairs):
        to_T[i * n + j][k] = 1
        to_T[j * n + i][k] = -1
    alpha = AbMap(L, T, to_T).check()
    beta = AbMap(T, S, [list(r) for r in _reduction(QuadTag.SP2, n)]).check()
    (K, incl), _ = map_kernel_cokernel(alpha)
    zero_in = AbMap(FgAbelian.trivial(), K, [[] for _ in range(K.n_gens)])
    zero_out = AbMap(S, FgAbelian.trivial(), [])
    C = AbComplex((zero_in, incl, alpha, beta, zero_out))
    witnesses = _koszul_witnesses(n, J, alpha)
    return KoszulResult(C, K, S, incl, witnesses)


def _tensor_rels(n: int, J: Lattice) -> list[list[int]]:
    # I (x) (I/J): relations e_i (x) j for j in J
    rels = []
    for jv in J.basis:
        for i in range(n):
            v = [0] * (n * n)
            for t, x in enumerate(jv):
                if x:
                    v[i * n + t] = x
            rels.append(v)
    return rels


def _koszul_witnesses(n: int, J: Lattice, alpha: AbMap) -> list[dict]:
    """Elements (d_i u_i) ^ ((d_j/g) u_j) in an adapted basis u of I, one per pair of torsion factors."""
    if not J.basis:
        return []
    Jm = from_columns(J.basis, n)
    U, D, _ = smith_normal_form(Jm)
    Uinv = _unimodular_inverse(U)
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    # columns of U^-1 form a basis u of I with J = span(d_i u_i)
    u = [[Uinv[a][i] for a in range(n)] for i in range(n)]
    tors = [(i, d) for i, d in enumerate(diag) if d > 1]
    out = []
    for a in range(len(tors)):
        for b in range(a + 1, len(tors)):
            (i, di), (j, dj) = tors[a], tors[b]
            g = gcd(di, dj)
            x = [di * c for c in u[i]]
            y = [(dj // g) * c for c in u[j]]
            vec = _wedge(x, y, n)
            ok = L_is_zero(alpha, vec)
            out.append({"pair": (i, j), "order": g, "x": x, "y": y, "wedge": vec, "in_kernel": ok})
    return out


def L_is_zero(alpha: AbMap, v) -> bool:
    return alpha.target.is_zero(alpha.apply(v))


def koszul_l1_map(f: AbMap) -> AbMap:
    """L1 SP^2(f) on Koszul kernels, via Lambda^2 of the presentation-level matrix of f."""
    f.check()
    A, B = f.source, f.target
    kA = koszul_lsp2(A.n_gens, A.relation_lattice)
    kB = koszul_lsp2(B.n_gens, B.relation_lattice)
    L2 = quad_free_matrix(QuadTag.LAMBDA2, f.matrix, A.n_gens, B.n_gens)
    LA, LB = kA.l1_inclusion.target, kB.l1_inclusion.target
    lam = AbMap(LA, LB, L2 if LB.n_gens else []).check()
    composite = lam.compose(kA.l1_inclusion)
    cols = []
    for j in range(kA.l1.n_gens):
        c = kB.l1_inclusion.lift(composite.column(j))
        if c is None:
            raise IllFormedMap("Koszul map leaves the L1 kernel")
        cols.append(c)
    return AbMap(kA.l1, kB.l1, from_columns(cols, kB.l1.n_gens) if cols else [[] for _ in range(kB.l1.n_gens)]).check()


def l1sp2_koszul(A: FgAbelian) -> DerivedResult:
    k = koszul_lsp2(A.n_gens, A.relation_lattice)
    return DerivedResult(k.l1, Path.KOSZUL, QuadTag.SP2, A, k.witnesses)


# ---------------------------------------------------------------------------
# natural exact sequences


def _zero_from(X: FgAbelian) -> AbMap:
    return AbMap(FgAbelian.trivial(), X, [[] for _ in range(X.n_gens)])


def _zero_to(X: FgAbelian) -> AbMap:
    return AbMap(X, FgAbelian.trivial(), [])


def _connecting(left: _SimplicialData, mid: _SimplicialData, right: _SimplicialData,
                nat_l: Callable[[int], list], nat_r: Callable[[int], list]) -> AbMap:
    """delta: H_1(right) -> H_0(left) for a degreewise short exact sequence left -> mid -> right."""
    H1, Z1 = right.homology(1)
    H0, _ = left.homology(0)
    n1 = dk_rank(mid.n, mid.r, 1)
    n0 = dk_rank(mid.n, mid.r, 0)
    g1 = AbMap(mid.objects[1], right.objects[1], nat_r(n1))
    f0 = AbMap(left.objects[0], mid.objects[0], nat_l(n0))
    cols = []
    for z in Z1.basis:
        y = g1.lift(z)
        if y is None:
            raise NotAComplex("degreewise map is not surjective")
        dy = mid.boundary[1].apply(y)
        x = f0.lift(dy)
        if x is None:
            raise NotAComplex("boundary of lift does not come from the left term")
        cols.append(left.class_of(0, x))
    return AbMap(H1, H0, from_columns(cols, H0.n_gens) if cols else [[] for _ in range(H0.n_gens)]).check()


def _map(src, dst, nat, q):
    return _induced_on_homology(src, dst, _nat_chain(nat, src), q)


def natural_sequences(A: FgAbelian) -> dict[str, AbComplex]:
    """All natural sequences for A, with maps realized on Dold-Kan homology."""
    sp2 = _simplicial_for(FUNCTORS[QuadTag.SP2], A)
    ten = _simplicial_for(FUNCTORS[QuadTag.TENSOR2], A)
    til = _simplicial_for(FUNCTORS[QuadTag.TILDE2], A)
    lam = _simplicial_for(FUNCTORS[QuadTag.LAMBDA2], A)
    mod2 = _simplicial_for(MOD2, A)
    seqs = {}

    a = _map(mod2, til, _nat_mod2_to_tilde2, 0)
    b = _map(til, lam, _nat_tilde2_to_lambda2, 0)
    seqs["seq0"] = AbComplex((_zero_from(a.source), a, b, _zero_to(b.target)))

    a = _map(mod2, til, _nat_mod2_to_tilde2, 1)
    b = _map(til, lam, _nat_tilde2_to_lambda2, 1)
    seqs["seq1"] = AbComplex((_zero_from(a.source), a, b, _zero_to(b.target)))

    m1 = _map(sp2, ten, _nat_sp2_to_tensor, 1)
    m2 = _map(ten, til, _nat_tensor_to_tilde2, 1)
    delta = _connecting(sp2, ten, til, _nat_sp2_to_tensor, _nat_tensor_to_tilde2)
    m4 = _map(sp2, ten, _nat_sp2_to_tensor, 0)
    m5 = _map(ten, til, _nat_tensor_to_tilde2, 0)
    seqs["seq2"] = AbComplex((_zero_from(m1.source), m1, m2, delta, m4, m5, _zero_to(m5.target)))

    t1 = _map(lam, ten, _nat_lambda2_to_tensor, 1)
    t2 = _map(ten, sp2, _nat_tensor_to_sp2, 1)
    seqs["tor"] = AbComplex((_zero_from(t1.source), t1, t2, _zero_to(t2.target)))
    return seqs


def natural_sequences_check(A: FgAbelian) -> CheckReport:
    rep = CheckReport("natural_sequences", {"A": format_invariants(A.invariant_factors)})
    with timed(rep):
        try:
            seqs = natural_sequences(A)
        except NotAComplex as exc:
            return rep.fail(f"natural map construction failed: {exc}")
        exactness = {}
        for name, C in seqs.items():
            try:
                C.check()
                bad = [i for i in range(len(C.objects)) if not C.homology(i).is_trivial()]
            except NotAComplex as exc:
                rep.fail(f"{name}: {exc}")
                continue
            exactness[name] = not bad
            rep.require(not bad, f"{name} not exact at positions {bad}",
                        [format_invariants(C.homology(i).invariant_factors) for i in bad])
        rep.details["exact"] = exactness
        ten1 = seqs["tor"].objects[2]
        lam1 = seqs["tor"].objects[1]
        sp21 = seqs["tor"].objects[3]
        til1 = seqs["seq1"].objects[2]
        tor2 = seqs["seq1"].objects[1]
        rep.details["invariants"] = {
            "Tor(A,A)": ten1.invariant_factors, "L1Lambda2": lam1.invariant_factors,
            "L1SP2": sp21.invariant_factors, "L1Tilde2": til1.invariant_factors,
            "Tor(A,Z/2)": tor2.invariant_factors,
        }
        if A.is_finite():
            rep.require(ten1.order() == lam1.order() * sp21.order(),
                        "|Tor(A,A)| differs from |L1 Lambda2| * |L1 SP2|")
            rep.require(til1.order() == tor2.order() * lam1.order(),
                        "|L1 Tilde2| differs from |Tor(A,Z/2)| * |L1 Lambda2|")
        rep.require(ten1 == ab_tor(A, A), "Dold-Kan L1 tensor square differs from Tor(A,A)")
        rep.require(tor2 == ab_tor(A, FgAbelian.cyclic(2)), "Dold-Kan L1(- (x) Z/2) differs from Tor(A,Z/2)")
        delta = seqs["seq2"].maps[3]
        img = delta.image_lattice()
        rep.details["L1Tilde2_to_SP2_image"] = lattice_quotient_invariants(
            img, delta.target.relation_lattice)
        rep.lhs_invariants = sp21.invariant_factors
        rep.rhs_invariants = l1sp2_closed(A).invariants
    return rep
