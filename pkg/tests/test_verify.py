import json

import pytest

from dimlab.errors import NotAGroup, ParseError, PreconditionViolated, ResourceBound
from dimlab.functors import l1sp2_closed_invariants
from dimlab.magnus import parse_word
from dimlab.verify import (PresentationSpec, RepTag, abelian_table, check_dim_identity, check_fox,
                           check_foxlimit, check_thdim, corpus, dihedral_table, dim_quotient_finite,
                           evaluate, limit_equalizer, monoadd_check, parse_presentation, parse_table,
                           quaternion_table, run_suite)
from dimlab.verify.checks import fox_w, fox_witnesses, presentation_from_params
from dimlab.verify.finite import abelianization, augmentation_power, dimension_subgroup
from dimlab.verify.presentations import fg1_presentation

Z2Z2 = PresentationSpec.abelian([2, 2])
Z2Z4 = PresentationSpec.abelian([2, 4])


# presentations


def test_presentation_file_format():
    text = "# Z/2 + Z/4\nrank 2\nrelator x1^2\nrelator x2^4\ninclude-gamma2\n"
    p = parse_presentation(text, "g")
    assert p.rank == 2 and p.include_gamma2
    assert parse_presentation(p.to_text()) == PresentationSpec(2, p.relators, True)
    assert len(p.all_relators()) == 3
    with pytest.raises(ParseError):
        parse_presentation("relator x1\n")
    with pytest.raises(ParseError):
        parse_presentation("rank 1\nbogus\n")


def test_coproduct_shape():
    c = Z2Z4.coproduct()
    assert c.rank == 4 and len(c.relators) == 2 * 3 + 2
    with pytest.raises(ResourceBound):
        PresentationSpec.abelian([2, 2, 2, 2]).coproduct()


def test_fg1_presentation_preconditions():
    with pytest.raises(PreconditionViolated):
        fg1_presentation([2, 4])
    with pytest.raises(PreconditionViolated):
        fg1_presentation([4, 2], xi=["x1"])
    assert fg1_presentation([4, 2], xi=["[x1,x2]"]).rank == 2


# finite groups


def test_table_parsing_and_axioms():
    G = abelian_table([2, 2])
    assert parse_table(G.to_text()).table == G.table
    with pytest.raises(NotAGroup):
        parse_table("2\n1 2\n1 2\n")
    with pytest.raises(NotAGroup):
        parse_table("3\n1 2 3\n2 3 1\n3 2 1\n")


def test_corpus_contents():
    groups = corpus(16)
    assert len(groups) == 27
    assert not dihedral_table(4).is_abelian() and not quaternion_table().is_abelian()
    assert abelianization(dihedral_table(4)) == [2, 2]
    assert abelianization(quaternion_table()) == [2, 2]
    assert dihedral_table(4).lower_central(3) == frozenset({dihedral_table(4).identity})


def test_augmentation_powers_of_z2():
    # (x-1)^2 = -2(x-1), so g^n = 2^(n-1) Z (x-1)
    G = abelian_table([2])
    for n in range(1, 5):
        L = augmentation_power(G, n)
        assert len(L.rows) == 1
        (row,) = L.rows.values()
        assert sorted(abs(x) for x in row) == [2 ** (n - 1)] * 2


def test_dim_quotient_examples():
    assert dim_quotient_finite(abelian_table([2]), 4).is_trivial()
    assert dimension_subgroup(abelian_table([2]), 4) == frozenset({abelian_table([2]).identity})
    for G in corpus(8):
        assert dim_quotient_finite(G, 2).is_trivial()
    with pytest.raises(ResourceBound):
        dim_quotient_finite(abelian_table([2]), 5)


@pytest.mark.parametrize("G", corpus(16), ids=lambda G: G.name)
def test_third_dimension_quotient_trivial(G):
    assert dim_quotient_finite(G, 3).is_trivial()


# representations and limits


def test_limit_examples():
    assert limit_equalizer(RepTag.GAMMA2_MOD3, Z2Z4).invariant_factors == [2]
    assert limit_equalizer(RepTag.F2_OVER_FR_F4, Z2Z4).is_trivial()
    assert limit_equalizer(RepTag.L1SP2_OF_K, PresentationSpec.abelian([2, 2, 2])).invariant_factors == [2, 2, 2]


def test_limit_is_presentation_independent():
    redundant = PresentationSpec.from_strings(3, ["x1^2", "x2^4", "x3 x2^-1 x1^-1"], True)
    assert limit_equalizer(RepTag.GAMMA2_MOD3, redundant) == limit_equalizer(RepTag.GAMMA2_MOD3, Z2Z4)


@pytest.mark.parametrize("tag", [RepTag.GAMMA2_MOD3, RepTag.F2_OVER_FR_F4, RepTag.L1SP2_OF_K])
def test_limit_embeds_in_value(tag):
    from dimlab.verify.reps import equalizer_data
    from dimlab.abelian import is_injective
    d = equalizer_data(tag, Z2Z4)
    assert is_injective(d.inclusion)
    assert d.inclusion.target == d.value.group


def test_value_k_for_z2_z2():
    assert evaluate(RepTag.K_FUNCTOR, Z2Z2).group.invariant_factors == [4]


def test_monoadd_examples():
    assert monoadd_check(RepTag.F2_OVER_FR_F4, Z2Z2).status == "VERIFIED"
    r = monoadd_check(RepTag.GAMMA2_MOD3, Z2Z4)
    assert r.status == "FAILED" and r.lhs_invariants == [2] == r.rhs_invariants
    assert monoadd_check(RepTag.GAMMA2_MOD3, Z2Z4, expect_injective=False).status == "VERIFIED"
    trivial = PresentationSpec(0)
    for tag in RepTag:
        assert monoadd_check(tag, trivial).status == "VERIFIED"


# identity checks


def test_fg1_examples():
    r = check_dim_identity("FG1", {"exponents": [1, 1]})
    assert r.status == "VERIFIED" and r.lhs_invariants == []
    r = check_dim_identity("FG1", {"exponents": [4, 2]})
    assert r.status == "VERIFIED" and r.lhs_invariants == [2, 4]


def test_d3fr_example():
    r = check_dim_identity("D3FR", {"rank": 2, "relators": ["x1^2", "x2^4"], "include_gamma2": True})
    assert r.status == "VERIFIED" and r.lhs_invariants == [2] == r.rhs_invariants


def test_corfrf_precondition():
    with pytest.raises(PreconditionViolated):
        check_dim_identity("CORFRF", {"exponents": [4, 2]})
    assert check_dim_identity("CORFRF", {"exponents": [0, 1]}).status == "VERIFIED"


def test_unknown_identity():
    with pytest.raises(PreconditionViolated):
        check_dim_identity("NOPE", {})


def test_params_select_presentations():
    assert presentation_from_params({"group": [2, 4]}) == Z2Z4
    with pytest.raises(PreconditionViolated):
        presentation_from_params({})


# Fox subgroup checks


def test_gen_b_witnesses():
    ws = fox_witnesses(Z2Z2, 5)
    assert len(ws) == 5
    r = check_fox("GEN_B", Z2Z2, ws)
    assert r.status == "VERIFIED"
    assert len(r.witnesses) == 5 and all(w["in_1+rf^3"] for w in r.witnesses)


def test_gen_b_trivial_membership_example():
    # x, y in gamma_2(R), m = 1, r = 1, s = x resp. y: w = [x,y][x,y]^-1[y,x] = [y,x] in gamma_2(gamma_2 R)
    x, y = "[x1^2,x2^2]", "[x2^2,x1^2 x2^2]"
    t = {"x": x, "y": y, "m": 1, "r_x": "", "s_x": x, "r_y": "", "s_y": y}
    w = fox_w({k: (parse_word(v, 2) if isinstance(v, str) else v) for k, v in t.items()})
    assert w == parse_word(f"[{y},{x}]", 2)
    assert check_fox("GEN_B", Z2Z2, [t]).status == "VERIFIED"


def test_iso_a_reports_lower_bound():
    r = check_fox("ISO_A", Z2Z2)
    assert r.status == "PARTIAL"
    K = r.details["K"]
    assert K == [4]
    assert r.rhs_invariants == l1sp2_closed_invariants(K)


def test_remark_tf():
    p = PresentationSpec.from_strings(2, ["x1 x2^-1"])
    r = check_fox("REMARK_TF", p)
    assert r.status == "VERIFIED" and r.rhs_invariants == []


@pytest.mark.parametrize("inv", [[2, 2], [4, 2], []])
def test_thdim(inv):
    pres = PresentationSpec.abelian(inv) if inv else PresentationSpec(0)
    r = check_thdim(pres, abelian_table(inv))
    assert r.status == "VERIFIED", r.details


@pytest.mark.parametrize("inv,expected", [([2, 2, 2], [2, 2, 2]), ([2], []), ([0, 0], [])])
def test_foxlimit(inv, expected):
    r = check_foxlimit(PresentationSpec.abelian(inv))
    assert r.status == "VERIFIED"
    assert r.lhs_invariants == expected == r.rhs_invariants


# suite runner


def test_smoke_suite(tmp_path):
    out = tmp_path / "out.json"
    code, reports = run_suite({"preset": "smoke", "report": str(out)})
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data) == len(reports) > 0
    for r in data:
        assert set(r) >= {"check", "params", "status", "lhs_invariants", "rhs_invariants", "witnesses", "millis"}


def test_suite_exit_codes():
    code, _ = run_suite({"checks": [{"kind": "dim", "id": "KKV", "params": {"group": [2, 2]}}]})
    assert code == 1
    code, reports = run_suite({"checks": [{"kind": "dim", "id": "CORFRF", "params": {"exponents": [4, 2]}}]})
    assert code == 2 and reports[0]["status"] == "ERROR"


def test_failed_reports_carry_counterexamples():
    r = check_dim_identity("KKV", {"group": [2, 2]})
    assert r.status == "FAILED"
    assert any("counterexample" in w for w in r.witnesses)
    assert r.details["equality_after_adding_rfr"] is True
