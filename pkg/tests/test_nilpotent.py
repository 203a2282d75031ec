import random

import pytest
from hypothesis import given, settings, strategies as st

from dimlab.magnus import FreeWord, expand, hall_basis, parse_word, witt_number, word_comm
from dimlab.nilpotent import (NilContext, commutator_subgroup, induced_hom, meet_gamma, nil_embed,
                              normal_closure, normal_closure_words, product_subgroup, section_invariants,
                              subgroup_close)

CTX22 = NilContext(2, 2)
CTX23 = NilContext(2, 3)


def W(text, rank=2):
    return parse_word(text, rank)


def E(ctx, text):
    return nil_embed(ctx, W(text, ctx.rank))


def words(rank, max_len=5):
    letters = st.tuples(st.integers(1, rank), st.sampled_from([-2, -1, 1, 2]))
    return st.lists(letters, max_size=max_len).map(
        lambda ls: _word(rank, ls))


def _word(rank, ls):
    w = FreeWord.identity(rank)
    for i, e in ls:
        w = w * FreeWord.gen(rank, i, e)
    return w


def test_embed_examples():
    assert nil_embed(CTX23, FreeWord.identity(2)).leading_weight == float("inf")
    assert E(CTX23, "[x1,x2]").leading_weight == 2
    assert E(CTX22, "[[x1,x2],x1]").is_identity()


@given(words(2), words(2))
def test_multiplication_matches_series(u, v):
    a, b = nil_embed(CTX23, u), nil_embed(CTX23, v)
    assert (a * b).series == expand(u * v, 3)
    assert (a * b) == nil_embed(CTX23, u * v)
    assert (a * a.inverse()).is_identity()


@given(words(2))
def test_normal_form_word_round_trip(w):
    g = nil_embed(CTX23, w)
    assert nil_embed(CTX23, g.word()) == g
    assert CTX23.from_coordinates(g.coordinates()) == g


@pytest.mark.parametrize("rank", [2, 3])
def test_faithfulness_on_commutators(rank):
    ctx = NilContext(rank, 3)
    H = hall_basis(rank, 4)
    for k in range(1, 5):
        for c in H.layer(k):
            assert nil_embed(ctx, c.word(rank)).is_identity() == (k >= 4)


def test_subgroup_close_examples():
    c1 = NilContext(1, 2)
    S = subgroup_close(c1, [E(c1, "x1^2"), E(c1, "x1^3")])
    assert S == c1.whole()
    assert subgroup_close(CTX22, []) == CTX22.trivial()
    S = subgroup_close(CTX22, [E(CTX22, "x1^2"), E(CTX22, "[x1,x2]")])
    assert S.weights == [1, 2]


def test_subgroup_close_against_enumeration():
    # <x1^2, [x1,x2]> in class 2: x1^a x2^b c^k lies in it iff a is even and b = 0
    S = subgroup_close(CTX22, [E(CTX22, "x1^2"), E(CTX22, "[x1,x2]")])
    for a in range(-3, 4):
        for b in range(-2, 3):
            for k in range(-2, 3):
                g = E(CTX22, f"x1^{a} x2^{b} [x1,x2]^{k}") if (a or b or k) else CTX22.one()
                assert S.contains(g) == (a % 2 == 0 and b == 0)


@settings(max_examples=40)
@given(st.lists(words(2, 4), min_size=1, max_size=3), st.randoms())
def test_subgroup_close_canonical(gens, rnd):
    els = [nil_embed(CTX23, w) for w in gens]
    S = subgroup_close(CTX23, els)
    shuffled = list(els)
    rnd.shuffle(shuffled)
    assert subgroup_close(CTX23, shuffled) == S
    assert subgroup_close(CTX23, S.gens) == S
    g = CTX23.one()
    for _ in range(8):
        g = g * rnd.choice(els) ** rnd.choice([-1, 1, 2])
        assert S.contains(g)


def test_normal_closure_examples():
    N = normal_closure(CTX22, [CTX22.gen(1)])
    assert N.contains(E(CTX22, "[x1,x2]"))
    c1 = NilContext(1, 3)
    assert normal_closure(c1, [E(c1, "x1^2")]) == subgroup_close(c1, [E(c1, "x1^2")])


def test_commutator_subgroup_examples():
    F = CTX23.whole()
    assert commutator_subgroup(F, F) == CTX23.gamma(2)
    assert commutator_subgroup(F, CTX23.trivial()) == CTX23.trivial()
    assert meet_gamma(F, 2) == CTX23.gamma(2)
    assert meet_gamma(CTX23.trivial(), 2) == CTX23.trivial()


@pytest.mark.parametrize("rank,cls", [(2, 3), (3, 3), (2, 4)])
def test_lower_central_sections_are_free(rank, cls):
    ctx = NilContext(rank, cls)
    for k in range(1, cls + 1):
        sec = section_invariants(ctx.gamma(k), ctx.gamma(k + 1))
        assert sec.group.invariant_factors == [0] * witt_number(rank, k)
    assert section_invariants(ctx.gamma(2), ctx.gamma(2)).group.is_trivial()


def test_meet_gamma_of_relation_subgroup():
    R = normal_closure_words(CTX22, [W("x1^2"), W("x2^4")])
    M = meet_gamma(R, 2)
    # (R cap gamma_2)/gamma_3 is generated by [x1,x2]^2 modulo gamma_3
    c = E(CTX22, "[x1,x2]")
    assert M.contains(c ** 2) and not M.contains(c)


def test_k_for_z2_z2():
    R = normal_closure_words(CTX22, [W("x1^2"), W("x2^2"), W("[x2,x1]")])
    K = section_invariants(meet_gamma(R, 2), commutator_subgroup(R, R)).group
    # R cap gamma_2 = gamma_2 = <c> in class 2; gamma_2(R) is generated by [x1^2, x2^2] = c^(+-4),
    # the other commutators of relators landing in gamma_3
    assert K.invariant_factors == [4]


def _random_relators(rnd, rank):
    out = []
    for _ in range(rnd.randint(1, 3)):
        i = rnd.randint(1, rank)
        w = FreeWord.gen(rank, i, rnd.choice([2, 3, 4]))
        if rank > 1 and rnd.random() < 0.5:
            j = rnd.choice([k for k in range(1, rank + 1) if k != i])
            w = w * word_comm(FreeWord.gen(rank, i), FreeWord.gen(rank, j)) ** rnd.choice([1, 2])
        out.append(w)
    return out


def _sampled_relator_sets(count=10, seed=7):
    rnd = random.Random(seed)
    return [(r, _random_relators(rnd, r)) for r in (rnd.choice([2, 2, 3]) for _ in range(count))]


@pytest.mark.parametrize("rank,rels", _sampled_relator_sets())
def test_dedekind_section_law(rank, rels):
    ctx = NilContext(rank, 2)
    R = normal_closure_words(ctx, rels)
    g2R = commutator_subgroup(R, R)
    sec = section_invariants(meet_gamma(R, 2), g2R)
    kernel = [g for g in meet_gamma(R, 2).gens if sec.group.is_zero(sec.vector(g))]
    lhs = subgroup_close(ctx, kernel + list(g2R.gens))
    assert lhs == product_subgroup(g2R, meet_gamma(R, 3))


@pytest.mark.parametrize("rank,rels", _sampled_relator_sets(seed=11))
def test_eqr_identity(rank, rels):
    ctx = NilContext(rank, 3)
    R = normal_closure_words(ctx, rels)
    lhs = meet_gamma(commutator_subgroup(R, R), 3)
    rhs = commutator_subgroup(meet_gamma(R, 2), R)
    assert lhs == rhs


def test_induced_hom_laws():
    src, dst = NilContext(2, 3), NilContext(4, 3)
    ident = induced_hom(src, src, [W("x1"), W("x2")])
    i1 = induced_hom(src, dst, [W("x1", 4), W("x2", 4)])
    i2 = induced_hom(src, dst, [W("x3", 4), W("x4", 4)])
    fold = induced_hom(dst, src, [W("x1"), W("x2"), W("x1"), W("x2")])
    for text in ["x1", "x2^-1 x1^3", "[x1,x2]", "[[x2,x1],x1]^2 x2"]:
        g = E(src, text)
        assert ident(g) == g
        assert i1(g).leading_weight == g.leading_weight
        assert fold(i1(g)) == g and fold(i2(g)) == g
        assert i1(g) == i1.via_tree(g)
