import pytest
from hypothesis import given
from hypothesis import strategies as st

from genplus.groups import Presentation, Word
from genplus.parsing import (ParseError, parse_group, parse_hom, parse_matrix, parse_space, parse_word,
                             parse_words)
from genplus.rings import ZI, GaussianInteger

GROUP_CORPUS = [
    "group { gens: a; rels: a^5 }",
    "group { gens: a b; rels: a^2 b^3 (a*b)^5 }",
    "group {gens:a b;rels:a^-2*b  b^3}",
    "# comment line\ngroup { gens: x y z; rels: x*y*x^-1*y^-1 (x*(y*z)^2)^-3 }",
    "group { gens: ; rels: }",
    "group { gens: a; rels: 1 a^0 a }",
]


def test_simple_presentation():
    P = parse_group("group { gens: a; rels: a^5 }")
    assert P == Presentation(("a",), (Word.gen(0, 5),))


@pytest.mark.parametrize("text", GROUP_CORPUS)
def test_group_round_trip(text):
    P = parse_group(text)
    normal = str(P)
    assert parse_group(normal) == P
    assert str(parse_group(normal)) == normal


def test_powers_and_parentheses_expand():
    a, b = Word.gen(0), Word.gen(1)
    assert parse_word("(a*b)^-2", ["a", "b"]) == (a * b) ** -2
    assert parse_word("a^3*a^-3", ["a", "b"]).is_trivial()
    assert parse_words("a b^2 1", ["a", "b"]) == [a, b ** 2, Word()]


def test_caret_error_position():
    with pytest.raises(ParseError) as info:
        parse_group("group { gens: a; rels: a^ }")
    assert (info.value.line, info.value.column) == (1, 25)


@pytest.mark.parametrize("text, line, column", [
    ("group { gens: a; rels: b }", 1, 24),
    ("group { gens: a a; rels: }", 1, 17),
    ("group {\n  gens: a;\n  rels: a^2 *\n}", 4, 1),
    ("grp { gens: a }", 1, 1),
])
def test_errors_carry_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_group(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_space_round_trip():
    text = "space { group: group { gens: a b; rels: a^3 }; cells2: b^2 1; aspherical: false }"
    s = parse_space(text)
    assert s.cells2 == (Word.gen(1, 2), Word())
    assert parse_space(str(s)) == s


def test_hom_round_trip():
    src = parse_group("group { gens: a b; rels: a^2 b^3 (a*b)^5 }")
    text = "hom { to: group { gens: t; rels: t^2 }; a -> t; b -> 1; kernel: b }"
    h = parse_hom(text, source=src)
    assert h.hom.images == (Word.gen(0), Word())
    assert h.kernel == (Word.gen(1),)
    again = parse_hom(str(h))
    assert again.hom == h.hom and again.kernel == h.kernel


def test_hom_errors():
    src = parse_group("group { gens: a b; rels: }")
    with pytest.raises(ParseError, match="no image"):
        parse_hom("hom { to: group { gens: t; rels: }; a -> t }", source=src)
    with pytest.raises(ParseError, match="not a source generator"):
        parse_hom("hom { to: group { gens: t; rels: }; a -> t; b -> t; c -> t }", source=src)
    with pytest.raises(ParseError, match="from"):
        parse_hom("hom { to: group { gens: t; rels: }; a -> t }")


def test_gaussian_matrix_literal():
    A = parse_matrix("Z[i]: [[3,2-1i],[2+1i,2]]")
    assert A.ring == ZI
    assert A.entries == [[GaussianInteger(3, 0), GaussianInteger(2, -1)],
                         [GaussianInteger(2, 1), GaussianInteger(2, 0)]]
    assert parse_matrix(A.to_literal()) == A


@pytest.mark.parametrize("text", ["Z: [[1,2],[3]]", "Z: [[1,,2]]", "Z: [[1,2]", "W: [[1]]", "Z/5: [[1,x]]"])
def test_bad_matrices(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


names = st.sampled_from(["a", "b", "c"])
exps = st.integers(-4, 4).filter(bool)
atoms = st.tuples(names, exps).map(lambda t: f"{t[0]}^{t[1]}")
word_texts = st.lists(atoms, min_size=1, max_size=6).map("*".join)


@given(st.lists(word_texts, max_size=4))
def test_generated_presentations_round_trip(rels):
    P = parse_group(f"group {{ gens: a b c; rels: {' '.join(rels)} }}")
    assert parse_group(str(P)) == P
