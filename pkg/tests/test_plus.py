import pytest

import oracles
from conftest import bar_Z, group_model
from genplus.groups import GroupHom, Presentation, Word
from genplus.homology import GroupModel, GroupRingCoefficients, SpaceModel, space_homology
from genplus.parsing import parse_group, parse_hom, parse_space, parse_word
from genplus.plus import (AssemblyError, CellLedger, NotKPerfect, PlusResult, Rejection, build_W,
                          check_hypotheses, moore_space, partial_completion, plus_construction, plus_from_hom,
                          relatively_perfect)
from genplus.rings import QQ, ZZ, mod

A5 = "group { gens: a b; rels: a^2 b^3 (a*b)^5 }"


def raw_integral_homology(C):
    """Recompute homology of an integer complex with the independent SNF."""
    return oracles.integral_homology_from_boundaries(
        list(C.ranks), {q: C.d(q).entries for q in range(1, C.top + 1)})


def test_a5_to_trivial_group():
    X = SpaceModel(parse_group(A5))
    G = group_model("group { gens: a b; rels: a^2 b^3 (a*b)^5 a b }")
    r = plus_construction(X, GroupHom.by_names(X.base, G.presentation), [Word.gen(0), Word.gen(1)], G)
    assert isinstance(r, PlusResult) and r.verified and r.finite
    assert [str(m) for m in r.homology_Y] == ["Z", "0", "Z", "0"]
    assert r.ledger.counts == {1: 0, 2: 2, 3: 2}
    assert r.Y.cells == (1, 2, 5, 2)
    raw = raw_integral_homology(r.Y.augmented(ZZ))
    assert [(h.free, h.torsion) for h in raw] == [(1, ()), (0, ()), (1, ()), (0, ())]
    chi = sum((-1) ** q * c for q, c in enumerate(r.Y.cells))
    assert chi == 2


@pytest.mark.parametrize("G", oracles.TEST_GROUPS, ids=lambda G: G.name)
def test_moore_space_exists_iff_h2_vanishes(G):
    model = group_model(G.presentation)
    r = moore_space(model)
    h2_zero = bar_Z(G.name)[2] == oracles.AbelianInvariants(0, ())
    assert isinstance(r, PlusResult) == h2_zero
    if h2_zero:
        raw = raw_integral_homology(r.Y.augmented(ZZ))
        assert raw[2] == raw[3] == oracles.AbelianInvariants(0, ())
        assert raw[1] == bar_Z(G.name)[1]
    else:
        assert isinstance(r, Rejection) and str(r.module) == "Z/2"


def test_duplicated_relator_moore_space():
    G = group_model("group { gens: a; rels: a^5 a^5 }")
    r = moore_space(G)
    assert r.verified
    assert r.Y.cells == (1, 1, 2, 1)
    assert len(r.ledger.three_cells) == 1


def test_moore_with_field_coefficients():
    r = moore_space(group_model("group { gens: a; rels: a^3 }"), mod(2))
    assert isinstance(r, PlusResult) and r.coefficients == "Z/2"
    r = moore_space(group_model("group { gens: a; rels: a^4 }"), mod(2))
    assert isinstance(r, Rejection)


def test_hypothesis_failures_are_reported():
    # Z/4 -> Z/2 is not injective on H_1
    X = SpaceModel(parse_group("group { gens: a; rels: a^4 }"))
    G = group_model("group { gens: a; rels: a^4 a^2 }")
    alpha = GroupHom.by_names(X.base, G.presentation)
    hyp = check_hypotheses(X, alpha, G, ZZ)
    assert not hyp.h1_injective and hyp.h2_surjective
    r = plus_construction(X, alpha, [Word.gen(0, 2)], G)
    assert isinstance(r, Rejection) and "H1" in r.reason


def test_point_with_group_ring_coefficients_is_gated():
    X = SpaceModel(Presentation((), ()))
    G = group_model("group { gens: a; rels: a^3 }")
    hyp = check_hypotheses(X, GroupHom(X.base, G.presentation, ()), G, GroupRingCoefficients(mod(2)))
    assert hyp.gate.kind == "Rejected" and not hyp.passed


def test_sphere_wedge_path():
    X = SpaceModel(parse_group("group { gens: a; rels: a^3 }"))
    G = group_model("group { gens: a c; rels: a^3 c*a^-1 }")
    alpha = GroupHom.by_names(X.base, G.presentation)
    r = plus_construction(X, alpha, [], G, GroupRingCoefficients(mod(2)))
    assert r.verified and r.finite
    provenance = [p for _, p in r.ledger.two_cells]
    assert provenance == ["new-relation", "sphere-wedge"]
    assert r.ledger.one_cells == ("c",)


def test_new_generators_with_integer_coefficients():
    X = SpaceModel(parse_group("group { gens: a; rels: a^6 }"))
    G = group_model("group { gens: a c; rels: a^6 c*a^-2 a^2 }")
    alpha = GroupHom.by_names(X.base, G.presentation)
    r = plus_construction(X, alpha, [Word.gen(0, 2)], G)
    assert isinstance(r, Rejection)
    r = plus_construction(X, alpha, [Word.gen(0, 2)], G, QQ)
    assert r.verified and r.ledger.counts[1] == 1


def test_build_w_checks_relators():
    X = SpaceModel(parse_group("group { gens: a; rels: a^4 }"))
    G = parse_group("group { gens: a; rels: a^2 }")
    with pytest.raises(AssemblyError):
        build_W(X, GroupHom.by_names(X.base, G), [], G)
    G2 = parse_group("group { gens: b a; rels: a^4 }")
    with pytest.raises(AssemblyError):
        build_W(X, GroupHom(X.base, G2, (Word.gen(1),)), [], G2)


def test_build_w_ledger():
    X = SpaceModel(parse_group("group { gens: a b; rels: a^2 }"))
    G = parse_group("group { gens: a b c; rels: b^3 a^2 b*c^-1 (a*b)^5 }")
    W, ledger = build_W(X, GroupHom.by_names(X.base, G), [parse_word("b^3", G.generators[:2])], G)
    assert ledger.one_cells == ("c",)
    assert [p for _, p in ledger.two_cells] == ["kill-kernel", "new-relation", "new-relation"]
    assert W.base.ngens == 3 and len(W.cells2) == 4
    d = ledger.as_dict()
    assert d["2-cells"][0] == {"word": "b^3", "provenance": "kill-kernel"}


def test_ledger_rejects_unknown_provenance():
    with pytest.raises(ValueError):
        CellLedger(("a",), (), ((Word.gen(0), "mystery"),))


def test_relatively_perfect():
    ok, report = relatively_perfect(group_model("group { gens: a b; rels: a^2 b^3 (a*b)^3 }"), [Word.gen(0)])
    assert ok and report.exact
    Z = GroupModel.realize(parse_group("group { gens: a; rels: }"), aspherical=True)
    ok, report = relatively_perfect(Z, [Word.gen(0, 2)])
    assert not ok and report.exact


def test_partial_completion_z3_mod_2():
    pi = group_model("group { gens: a; rels: a^3 }")
    c = partial_completion(pi, [Word.gen(0)], mod(2))
    assert c.quotient_order == 1 and c.gate.kind == "RelH1Zero"
    r = c.result
    assert r.verified
    X = SpaceModel(pi.presentation)
    hx = space_homology(X, mod(2))
    hy = [r.Y.augmented(mod(2)).homology_group(q).module for q in range(4)]
    assert hx[2] == hy[2] and hy[3].is_zero()


def test_partial_completion_a5_rational():
    pi = group_model(A5)
    c = partial_completion(pi, [Word.gen(0), Word.gen(1)], QQ)
    assert c.h1_subgroup.is_zero()
    assert [str(m) for m in c.result.homology_Y] == ["Q", "0", "Q", "0"]


def test_partial_completion_requires_k_perfect_subgroup():
    A4 = group_model("group { gens: a b; rels: a^2 b^3 (a*b)^3 }")
    with pytest.raises(NotKPerfect) as info:
        partial_completion(A4, [Word.gen(0)], mod(2))
    assert str(info.value.module) == "(Z/2)^2"
    assert partial_completion(A4, [Word.gen(0)], mod(3)).result.verified


def test_plus_from_parsed_files():
    s = parse_space(f"space {{ group: {A5} }}")
    X = SpaceModel(s.group, s.cells2)
    h = parse_hom("hom { to: group { gens: a b; rels: a^2 b^3 (a*b)^5 a b }; a -> a; b -> b; kernel: a b }",
                  source=X.base)
    r = plus_from_hom(X, h.hom, h.kernel)
    assert r.verified and r.Y.cells == (1, 2, 5, 2)
