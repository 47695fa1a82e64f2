import random

import pytest

import oracles
from conftest import bar_mod_p, bar_Z, group_model
from genplus.chains import ModulePresentation, homology
from genplus.groups import GroupHom, Word
from genplus.homology import (GroupModel, GroupRingCoefficients, SpaceModel, TierRejection, five_term,
                              group_homology, hopf_check, lift_equivariant, parse_coefficients, space_homology)
from genplus.parsing import parse_group, parse_word
from genplus.rings import QQ, ZZ, mod

NAMES = [G.name for G in oracles.TEST_GROUPS]
PRESENTATION = {G.name: G.presentation for G in oracles.TEST_GROUPS}


def as_module(inv: oracles.AbelianInvariants) -> ModulePresentation:
    return ModulePresentation(ZZ, inv.free, inv.torsion)


@pytest.mark.parametrize("name", NAMES)
def test_integral_group_homology_matches_bar_oracle(name):
    G = group_model(PRESENTATION[name])
    assert [group_homology(G, ZZ, q) for q in range(3)] == [as_module(x) for x in bar_Z(name)]


@pytest.mark.parametrize("name", ["Z/4", "Z/6", "(Z/2)^2", "S3", "A4"])
@pytest.mark.parametrize("p", [2, 3])
def test_mod_p_group_homology_matches_bar_oracle(name, p):
    G = group_model(PRESENTATION[name])
    dims = [group_homology(G, mod(p), q).free_rank for q in range(3)]
    assert dims == bar_mod_p(name, p)


@pytest.mark.parametrize("name", NAMES)
def test_resolution_is_acyclic_through_degree_two(name):
    E = group_model(PRESENTATION[name]).resolution()
    C = E.integer_complex
    assert str(homology(C, 0)) == "Z"
    assert homology(C, 1).is_zero() and homology(C, 2).is_zero()


def test_resolution_cell_counts():
    assert group_model("group { gens: a; rels: a^6 }").resolution().cells == (1, 1, 1, 1)
    assert group_model(PRESENTATION["(Z/2)^2"]).resolution().cells[:3] == (1, 2, 3)


def test_rational_homology_of_finite_group_vanishes():
    G = group_model(PRESENTATION["A4"])
    assert [str(group_homology(G, QQ, q)) for q in range(3)] == ["Q", "0", "0"]


def test_aspherical_tier_for_surface_group():
    P = parse_group("group { gens: a b; rels: a*b*a^-1*b^-1 }")
    with pytest.raises(TierRejection):
        GroupModel.realize(P, max_cosets=2000)
    T = GroupModel.realize(P, aspherical=True)
    assert T.tier == "aspherical"
    assert [str(group_homology(T, ZZ, q)) for q in range(3)] == ["Z", "Z^2", "Z"]
    with pytest.raises(TierRejection):
        group_homology(T, GroupRingCoefficients(QQ), 1)


def test_genus_two_surface():
    P = parse_group("group { gens: a b c d; rels: a*b*a^-1*b^-1*c*d*c^-1*d^-1 }")
    S = GroupModel.realize(P, aspherical=True)
    assert [str(group_homology(S, ZZ, q)) for q in range(3)] == ["Z", "Z^4", "Z"]


def test_space_homology_with_extra_cells():
    P = parse_group("group { gens: a; rels: a^4 }")
    X = SpaceModel(P, (Word(), Word.gen(0, 2)))
    assert [str(m) for m in space_homology(X)] == ["Z", "Z/2", "Z^2"]
    with pytest.raises(TierRejection):
        space_homology(X, GroupRingCoefficients(mod(2)))


def test_coefficient_tokens():
    assert parse_coefficients("Z/3[G]") == GroupRingCoefficients(mod(3))
    assert parse_coefficients("Q") == QQ
    with pytest.raises(ValueError):
        parse_coefficients("Z[G]")


def test_group_ring_coefficients_give_cover_homology():
    P = parse_group("group { gens: a; rels: a^3 }")
    X = SpaceModel(P)
    G = group_model("group { gens: a; rels: a^3 }")
    from genplus.homology import equivariant_chains
    E = equivariant_chains(X, GroupHom.identity(P), G.table)
    # the universal cover of the presentation complex of Z/3 is a wedge of two spheres
    assert str(E.tensor(GroupRingCoefficients(QQ)).homology_group(2).module) == "Q^2"


def test_lifted_chain_map_commutes():
    Z6 = group_model("group { gens: a; rels: a^6 }")
    E = Z6.equivariant_complex()
    f = lift_equivariant(E, Z6.resolution())
    f.tensor(ZZ, source=E.tensor(ZZ), target=Z6.complex(ZZ))


HOPF_SPACES = [
    ("group { gens: a; rels: a^6 }", ()),
    ("group { gens: a; rels: a^6 }", ("1",)),
    ("group { gens: a b; rels: a^2 b^2 a*b*a^-1*b^-1 }", ()),
    ("group { gens: a b; rels: a^2 b^2 a*b*a^-1*b^-1 }", ("a*b*a^-1*b^-1", "1")),
    ("group { gens: a b; rels: a^3 b^2 (a*b)^2 }", ()),
    ("group { gens: a b; rels: a^2 b^3 (a*b)^3 }", ("b^3",)),
    ("group { gens: a b; rels: a^2 b^4 a*b*a^-1*b^-1 }", ()),
]


@pytest.mark.parametrize("coeffs", ["Z", "Z/2", "Z/3", "Q", "Z/2[G]", "Q[G]"])
@pytest.mark.parametrize("text, extra", HOPF_SPACES)
def test_hopf_sequence_is_exact(text, extra, coeffs):
    P = parse_group(text)
    X = SpaceModel(P, tuple(parse_word(w, P.generators) for w in extra))
    cert = hopf_check(X, parse_coefficients(coeffs))
    assert cert.exact_middle and cert.surjective_right


def test_hopf_for_simply_connected_space():
    P = parse_group("group { gens: a; rels: a }")
    X = SpaceModel(P, (Word(), Word()))
    cert = hopf_check(X)
    assert cert.exact and cert.C.is_zero() and str(cert.B) == "Z^2"


def test_five_term_a4_v4():
    r = five_term(group_model(PRESENTATION["A4"]), [parse_word("a", ["a", "b"])])
    assert r.exact and r.middle.is_zero()
    assert str(r.H1_pi) == str(r.H1_Q) == "Z/3"


def test_five_term_integers_mod_two():
    Z = GroupModel.realize(parse_group("group { gens: a; rels: }"), aspherical=True)
    r = five_term(Z, [Word.gen(0, 2)])
    assert r.exact and str(r.middle) == "Z"
    assert r.tiers == ("aspherical", "finite")


def test_five_term_with_trivial_subgroup():
    r = five_term(group_model(PRESENTATION["S3"]), [Word()])
    assert r.exact and r.middle.is_zero()


def _random_word(rng, ngens, length):
    return Word(tuple((rng.randrange(ngens), rng.choice((1, -1))) for _ in range(length)))


def random_five_term_fixtures(count=10, seed=7):
    rng = random.Random(seed)
    pool = [G for G in oracles.TEST_GROUPS if G.order >= 4]
    out = []
    while len(out) < count:
        G = rng.choice(pool)
        ngens = len(G.gens)
        words = [_random_word(rng, ngens, rng.randint(1, 5)) for _ in range(rng.randint(1, 2))]
        N = oracles.normal_closure(G, [G.evaluate(w) for w in words])
        if 1 < len(N) < G.order:
            out.append((G, words, N))
    return out


@pytest.mark.parametrize("G, words, N", random_five_term_fixtures(),
                         ids=lambda x: getattr(x, "name", None))
def test_random_five_term_against_brute_force(G, words, N):
    r = five_term(group_model(G.presentation), words)
    assert r.exact
    assert r.middle.free_rank == 0
    expected = oracles.middle_term_counts(G, N)
    assert oracles.invariants_counts(r.middle.invariant_factors) == expected
