from math import gcd

import pytest
from hypothesis import given, strategies as st

from conftest import determinantal_invariants, leibniz_det
from dimlab.abelian import (AbComplex, AbMap, FgAbelian, Lattice, ab_tensor, ab_tor, complex_is_exact,
                            format_invariants, lattice_canonicalize, lattice_intersect,
                            lattice_quotient_invariants, map_kernel_cokernel, matmul, parse_invariants,
                            smith_normal_form)
from dimlab.errors import IllFormedMap
from dimlab.functors import koszul_lsp2

small_ints = st.integers(-6, 6)


def matrices(max_rows=4, max_cols=4):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


invariant_lists = st.lists(st.integers(0, 12).filter(lambda d: d != 1), max_size=4)


def group(inv):
    return FgAbelian.from_invariants(inv)


# smith normal form


@pytest.mark.parametrize("M, diag", [
    ([[2, 0], [0, 3]], [1, 6]),
    ([[1, 0, 0], [0, 1, 0], [0, 0, 1]], [1, 1, 1]),
    ([[0, 2], [2, 0]], [2, 2]),
])
def test_snf_examples(M, diag):
    U, D, V = smith_normal_form(M)
    assert [D[i][i] for i in range(len(diag))] == diag
    assert matmul(matmul(U, M), V) == D


def test_snf_identity_has_identity_transforms():
    I = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    U, D, V = smith_normal_form(I)
    assert U == I and D == I and V == I


@given(matrices())
def test_snf_certificate(M):
    U, D, V = smith_normal_form(M)
    assert matmul(matmul(U, M), V) == D
    assert abs(leibniz_det(U)) == 1
    assert abs(leibniz_det(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nz = [d for d in diag if d]
    assert all(d > 0 for d in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert diag[:len(nz)] == nz


@given(matrices())
def test_invariants_match_determinantal_divisors(M):
    n = len(M[0])
    A = FgAbelian(n, tuple(tuple(r) for r in M))
    assert A.invariant_factors == determinantal_invariants(M, n)


# lattices


def test_canonicalize_example():
    L = lattice_canonicalize([(2, 0), (0, 2), (1, 1)], 2)
    assert L.basis == ((1, 1), (0, 2))
    assert lattice_canonicalize([], 3).rank == 0
    assert lattice_canonicalize([(1, 0), (0, 1)], 2).basis == ((1, 0), (0, 1))


@given(st.lists(st.lists(small_ints, min_size=3, max_size=3), max_size=5), st.randoms())
def test_canonicalize_idempotent_and_order_free(vecs, rnd):
    L = lattice_canonicalize(vecs, 3)
    assert lattice_canonicalize(L.basis, 3) == L
    shuffled = list(vecs)
    rnd.shuffle(shuffled)
    assert lattice_canonicalize(shuffled, 3) == L
    for v in vecs:
        assert v in L


def test_intersections():
    two = Lattice.from_vectors([(2, 0), (0, 2)], 2)
    three = Lattice.from_vectors([(3, 0), (0, 3)], 2)
    assert lattice_intersect(two, three) == Lattice.from_vectors([(6, 0), (0, 6)], 2)
    assert lattice_intersect(two, two) == two
    a = Lattice.from_vectors([(1, 1)], 2)
    b = Lattice.from_vectors([(1, -1)], 2)
    assert lattice_intersect(a, b).rank == 0


def _members_in_box(L, box=12):
    return {(x, y) for x in range(-box, box + 1) for y in range(-box, box + 1) if (x, y) in L}


@given(st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=3),
       st.lists(st.lists(st.integers(-4, 4), min_size=2, max_size=2), min_size=1, max_size=3))
def test_intersection_matches_box_enumeration(u, v):
    L1, L2 = Lattice.from_vectors(u, 2), Lattice.from_vectors(v, 2)
    M = lattice_intersect(L1, L2)
    assert _members_in_box(M, 8) == _members_in_box(L1, 8) & _members_in_box(L2, 8)


def test_quotient_invariants():
    Z2 = Lattice.full(2)
    assert lattice_quotient_invariants(Z2, Lattice.from_vectors([(4, 0), (0, 2)], 2)) == [2, 4]
    assert lattice_quotient_invariants(Z2, Z2) == []
    assert lattice_quotient_invariants(Z2, Lattice.from_vectors([(2, 2), (0, 4)], 2)) == [2, 4]


# tensor and Tor


def test_tensor_examples():
    assert ab_tensor(FgAbelian.cyclic(4), FgAbelian.cyclic(6)).invariant_factors == [2]
    A = group([3, 6, 0])
    assert ab_tensor(FgAbelian.free(1), A) == A
    assert ab_tensor(group([2, 0]), FgAbelian.cyclic(4)).invariant_factors == [2, 4]


def test_tor_examples():
    assert ab_tor(FgAbelian.cyclic(4), FgAbelian.cyclic(6)).invariant_factors == [2]
    assert ab_tor(FgAbelian.free(1), group([2, 4])).is_trivial()
    assert ab_tor(group([2, 2]), group([2, 2])).invariant_factors == [2, 2, 2, 2]


def test_tor_of_z2_z4_with_itself():
    # pairwise gcds of (2, 4) x (2, 4) give 2, 2, 2, 4: order 32
    T = ab_tor(group([2, 4]), group([2, 4]))
    assert T.invariant_factors == [2, 2, 2, 4]
    assert T.order() == 32


def _pairwise_gcd(a, b):
    out = []
    for x in a:
        for y in b:
            if x and y:
                out.append(gcd(x, y))
    return sorted(d for d in out if d != 1)


@given(invariant_lists, invariant_lists)
def test_tensor_and_tor_symmetric_and_match_cyclic_rule(a, b):
    A, B = group(a), group(b)
    assert ab_tensor(A, B) == ab_tensor(B, A)
    assert ab_tor(A, B) == ab_tor(B, A)
    # Tor is additive, and Tor(Z/m, Z/n) = Z/gcd(m, n)
    assert ab_tor(A, B) == FgAbelian.from_invariants(_pairwise_gcd(a, b))


# maps, kernels, cokernels


def test_kernel_cokernel_examples():
    Z = FgAbelian.free(1)
    (K, _), (C, _) = map_kernel_cokernel(AbMap(Z, Z, [[2]]))
    assert K.is_trivial() and C.invariant_factors == [2]
    Z6 = FgAbelian.cyclic(6)
    (K, _), (C, _) = map_kernel_cokernel(AbMap(Z6, Z6, [[0]]))
    assert K.invariant_factors == [6] and C.invariant_factors == [6]


def test_kernel_cokernel_against_enumeration():
    A, B = group([2, 4]), FgAbelian.cyclic(4)
    f = AbMap(A, B, [[0, 2]])
    (K, incl), (C, _) = map_kernel_cokernel(f)
    kernel = [(a, b) for a in range(2) for b in range(4) if (2 * b) % 4 == 0]
    image = {(2 * b) % 4 for a in range(2) for b in range(4)}
    assert K.order() == len(kernel) == 4
    assert K.invariant_factors == [2, 2]
    assert C.order() == 4 // len(image) == 2


def test_ill_formed_map_rejected():
    with pytest.raises(IllFormedMap):
        AbMap(FgAbelian.cyclic(2), FgAbelian.free(1), [[1]]).check()


@given(matrices(3, 3))
def test_rank_nullity_on_free_groups(M):
    n, m = len(M[0]), len(M)
    f = AbMap(FgAbelian.free(n), FgAbelian.free(m), M)
    (K, _), (C, _) = map_kernel_cokernel(f)
    image_rank = m - C.rank
    assert n == K.rank + image_rank


def test_exactness_examples():
    Z, Z2, T = FgAbelian.free(1), FgAbelian.cyclic(2), FgAbelian.trivial()
    C = AbComplex((AbMap(T, Z, [[]]), AbMap(Z, Z, [[2]]), AbMap(Z, Z2, [[1]]), AbMap(Z2, T, [])))
    assert complex_is_exact(C)
    D = AbComplex((AbMap(T, Z, [[]]), AbMap(Z, Z, [[0]]), AbMap(Z, T, [])))
    assert not complex_is_exact(D, 1)


def test_koszul_sequence_exact_for_2z2():
    k = koszul_lsp2(2, Lattice.from_vectors([(2, 0), (0, 2)], 2))
    assert all(complex_is_exact(k.complex, i) for i in range(len(k.complex.objects)))


@given(invariant_lists)
def test_invariant_text_roundtrip(inv):
    A = group(inv)
    assert parse_invariants(format_invariants(A.invariant_factors)) == A.invariant_factors


def test_simplify_preserves_group():
    A = FgAbelian(3, ((2, 0, 0), (0, 1, 0), (0, 0, 0)))
    S, to_s, from_s = A.simplify()
    assert S == A
    assert to_s.compose(from_s).equals(AbMap.identity(S))
