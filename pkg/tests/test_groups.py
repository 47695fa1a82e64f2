import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from genplus.chains import ModulePresentation
from genplus.groups import (EMPTY, FoxTerm, GroupHom, HomomorphismError, Overflow, Word, abelianization,
                            fox_derivative, group_order, pushforward_elements, todd_coxeter, word_ops)
from genplus.parsing import parse_group
from genplus.rings import ZZ

letters = st.tuples(st.integers(0, 2), st.sampled_from([1, -1]))
words = st.lists(letters, max_size=12).map(lambda ls: Word(tuple(ls)))


def fox_sum(w: Word, ngens: int) -> FoxTerm:
    """Right-hand side of the fundamental formula, sum_j (dw/dx_j)(x_j - 1)."""
    total = FoxTerm()
    for j in range(ngens):
        d = fox_derivative(w, j)
        total = total + d.right_mul(Word.gen(j)) - d
    return total


@given(words)
def test_fundamental_formula(w):
    assert fox_sum(w, 3) == FoxTerm.of(w) - FoxTerm.of(EMPTY)


@given(words, words, st.integers(0, 2))
def test_product_rule(u, v, j):
    lhs = fox_derivative(u * v, j)
    assert lhs == fox_derivative(u, j) + fox_derivative(v, j).left_mul(u)


@given(words, st.integers(0, 2))
def test_derivative_of_inverse(w, j):
    assert fox_derivative(w.inverse(), j) == -fox_derivative(w, j).left_mul(w.inverse())


@given(words, st.integers(0, 2))
def test_augmented_derivative_is_exponent_sum(w, j):
    assert fox_derivative(w, j).augmentation() == w.exponent_sum(j)


def test_derivative_of_a_power():
    a = Word.gen(0)
    d = fox_derivative(a ** 3, 0)
    assert d == FoxTerm.of(EMPTY) + FoxTerm.of(a) + FoxTerm.of(a ** 2)


@given(words, words)
def test_word_algebra(u, v):
    assert (u * v).inverse() == v.inverse() * u.inverse()
    assert (u * u.inverse()).is_trivial()
    assert word_ops("concat", u, v) == u * v
    assert word_ops("invert", u) == u.inverse()
    assert word_ops("reduce", u) == u


def test_words_are_freely_reduced():
    assert Word(((0, 1), (1, 1), (1, -1), (0, -1))).is_trivial()
    assert Word.from_exponents([(0, 2), (0, -1), (1, 3)]) == Word.gen(0) * Word.gen(1, 3)


@pytest.mark.parametrize("G", oracles.TEST_GROUPS, ids=lambda G: G.name)
def test_coset_enumeration_matches_permutation_closure(G):
    P = parse_group(G.presentation)
    t = todd_coxeter(P)
    t.check()
    assert t.order == G.order
    # the map sending each enumerated element to its permutation is a bijection
    images = {G.evaluate(rep) for rep in t.reps}
    assert len(images) == G.order


@pytest.mark.parametrize("text, order", [
    ("group { gens: a b; rels: a^2 b^3 (a*b)^5 }", 60),
    ("group { gens: a b; rels: a^2 b^3 (a*b)^4 }", 24),
    ("group { gens: a b; rels: a^4 b^2 (a*b)^2 }", 8),
    ("group { gens: a b; rels: a^2 b^2 (a*b)^2 a }", 2),
    ("group { gens: a; rels: a^1 }", 1),
    ("group { gens: ; rels: }", 1),
])
def test_known_orders(text, order):
    assert group_order(parse_group(text)) == order


def test_free_group_overflows():
    out = todd_coxeter(parse_group("group { gens: a b; rels: }"), max_cosets=500)
    assert isinstance(out, Overflow) and not out and out.budget == 500


def test_cayley_multiplication_is_associative():
    t = todd_coxeter(parse_group("group { gens: a b; rels: a^2 b^3 (a*b)^3 }"))
    m = t.mult
    for x in range(t.order):
        assert m[0][x] == m[x][0] == x
        assert m[x][t.inverses[x]] == 0
        for y in range(0, t.order, 3):
            for z in range(0, t.order, 5):
                assert m[m[x][y]][z] == m[x][m[y][z]]


@pytest.mark.parametrize("text, free, torsion", [
    ("group { gens: a b; rels: a^2*b^2 }", 1, (2,)),
    ("group { gens: a b; rels: a^2 b^3 (a*b)^5 }", 0, ()),
    ("group { gens: a b; rels: a^2 b^4 a*b*a^-1*b^-1 }", 0, (2, 4)),
    ("group { gens: a b c; rels: a*b*a^-1*b^-1 }", 3, ()),
])
def test_abelianization(text, free, torsion):
    assert abelianization(parse_group(text)) == ModulePresentation(ZZ, free, torsion)


def test_homomorphism_validation():
    S3 = parse_group("group { gens: a b; rels: a^3 b^2 (a*b)^2 }")
    Z2 = parse_group("group { gens: s; rels: s^2 }")
    t2 = todd_coxeter(Z2)
    sign = GroupHom(S3, Z2, (EMPTY, Word.gen(0)))
    sign.validate(t2)
    assert sign.is_surjective(t2)
    bad = GroupHom(S3, Z2, (Word.gen(0), EMPTY))
    with pytest.raises(HomomorphismError):
        bad.validate(t2)
    with pytest.raises(HomomorphismError):
        GroupHom(S3, Z2, (EMPTY,))
    with pytest.raises(HomomorphismError):
        sign.validate(None)


def test_pushforward_agrees_with_word_evaluation():
    S3 = parse_group("group { gens: a b; rels: a^3 b^2 (a*b)^2 }")
    Z2 = parse_group("group { gens: s; rels: s^2 }")
    t, t2 = todd_coxeter(S3), todd_coxeter(Z2)
    sign = GroupHom(S3, Z2, (EMPTY, Word.gen(0)))
    images = pushforward_elements(t, sign, t2)
    assert images == [t2.evaluate(sign.apply(w)) for w in t.reps]
    assert sorted(images).count(1) == 3


def test_composition():
    P = parse_group("group { gens: a b; rels: a^3 b^2 (a*b)^2 }")
    ident = GroupHom.identity(P)
    assert ident.compose(ident).images == ident.images


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 30))
def test_cyclic_orders(n):
    assert group_order(parse_group(f"group {{ gens: a; rels: a^{n} }}")) == n
