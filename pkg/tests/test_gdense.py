from fractions import Fraction

import pytest

from genplus.gdense import (DenseRingSpec, RegularAction, Refuted, Unknown, UnitCase, Witness, coefficient_vectors,
                            extract_basis, gaussian_units, induced_spec, matrix_criterion)
from genplus.groups import GroupHom, Word, todd_coxeter
from genplus.matrix import MatrixR, is_invertible
from genplus.parsing import parse_group, parse_matrix
from genplus.rings import QQ, ZI, ZZ, GaussianInteger, RingError, localized, mod

GAUSS_EXAMPLE = "Z[i]: [[3,2-1i],[2+1i,2]]"


def test_gaussian_example_is_refuted_case_by_case():
    A = parse_matrix(GAUSS_EXAMPLE)
    assert A.det() == ZI.one
    v = matrix_criterion(A, 1, ZI)
    assert isinstance(v, Refuted)
    assert [c.unit for c in v.cases] == gaussian_units()
    assert all(isinstance(c, UnitCase) and c.solution is None for c in v.cases)
    lines = v.transcript()
    assert len(lines) == 4
    assert lines[0].startswith("u = 1:") and lines[3].startswith("u = -1i:")
    assert all("no integer solution" in line for line in lines)


def test_each_refuted_case_is_really_unsolvable():
    # brute force over a box of integer coefficient pairs
    A = parse_matrix(GAUSS_EXAMPLE)
    col = A.column(0)
    for u in gaussian_units():
        for b1 in range(-20, 21):
            for b2 in range(-20, 21):
                z = ZI.add(ZI.mul(ZI.coerce(b1), col[0]), ZI.mul(ZI.coerce(b2), col[1]))
                assert z != u


@pytest.mark.parametrize("text, witness", [
    ("Z/5: [[2,4],[1,3]]", [[0, 1]]),
    ("Q: [[1,0],[0,1]]", [[1, 0]]),
    ("Q: [[1,2],[3,4]]", [[0, 1]]),
    ("Z[i]: [[2,1],[1i,0]]", [[0, 1]]),
    ("Z[i]: [[1,0],[0,1]]", [[1, 0]]),
])
def test_positive_fixtures_find_a_witness(text, witness):
    A = parse_matrix(text)
    v = matrix_criterion(A, 1, A.ring)
    assert isinstance(v, Witness)
    assert is_invertible(v.product)
    assert v.product == v.B @ A.submatrix(cols=[0])
    assert v.B == MatrixR.from_rows(A.ring, witness)


def test_full_rank_witness_over_integers():
    A = parse_matrix("Z: [[2,1],[1,1]]")
    v = matrix_criterion(A, 2, ZZ, budget=0)
    assert isinstance(v, Witness) and is_invertible(v.product)


def test_budget_exhaustion_is_unknown():
    # over Z[1/3] the first column (9, 2) needs b with 9*b1 + 2*b2 a unit; norm 0 has no such b
    A = parse_matrix("Z[1/3]: [[9,4],[2,1]]")
    assert isinstance(matrix_criterion(A, 1, A.ring, budget=0), Unknown)
    v = matrix_criterion(A, 1, A.ring, budget=1)
    assert isinstance(v, Witness) and A.ring.is_unit(v.product.entries[0][0])


def test_criterion_requires_invertible_matrix():
    with pytest.raises(RingError):
        matrix_criterion(parse_matrix("Z: [[2,0],[0,1]]"), 1, ZZ)
    with pytest.raises(ValueError):
        matrix_criterion(parse_matrix("Z: [[1,0],[0,1]]"), 3, ZZ)


def test_mod_p_exhaustive_refutation():
    # over Z/2 with k = 2 only an invertible integer matrix mod 2 works, and it always exists
    A = parse_matrix("Z/2: [[1,1],[0,1]]")
    assert isinstance(matrix_criterion(A, 2, A.ring, budget=0), Witness)


def test_coefficient_vectors_are_ordered_and_bounded():
    vs = list(coefficient_vectors(2, 1))
    assert len(vs) == len(set(vs)) == 9
    assert vs[0] == (0, 0)
    assert all(max(map(abs, v)) <= 1 for v in vs)
    norms = [max(map(abs, v)) for v in vs]
    assert norms == sorted(norms)


def test_extraction_over_localization():
    images = MatrixR.from_rows(ZZ, [[2, 0], [0, 2]])
    R = localized(2)
    coeffs = MatrixR.from_rows(R, [[Fraction(1, 2)], [Fraction(1, 4)]])
    out = extract_basis(images, coeffs, R)
    assert out.case == "denominator" and out.scales == (4,)
    assert out.lifted.column(0) == [2, 1]


def test_extraction_rejects_non_unit_denominator():
    images = MatrixR.from_rows(ZZ, [[1]])
    with pytest.raises(RingError):
        extract_basis(images, MatrixR.from_rows(QQ, [[Fraction(1, 3)]]), localized(2))


def test_extraction_mod_p_and_gaussian():
    images = MatrixR.from_rows(ZZ, [[1, 1], [0, 1]])
    F = mod(5)
    out = extract_basis(images, MatrixR.from_rows(F, [[4], [3]]), F)
    assert out.case == "lift" and out.lifted.column(0) == [4, 3]
    out = extract_basis(images, MatrixR.from_rows(ZI, [[GaussianInteger(2, 0)], [GaussianInteger(-1, 0)]]), ZI)
    assert out.case == "real-part"


def test_extraction_over_group_ring_uses_orbits():
    table = todd_coxeter(parse_group("group { gens: a; rels: a^3 }"))
    act = RegularAction(table)
    images = MatrixR.from_columns(ZZ, [[1, 0, 0], [0, 1, 0]], 3)
    F = mod(2)
    coeffs = MatrixR.from_rows(F, [[1], [1]])
    out = extract_basis(images, coeffs, F, group_action=act)
    assert out.lifted.column(0) == [1, 1]


def test_dense_spec_checks_homomorphism():
    Z6 = todd_coxeter(parse_group("group { gens: a; rels: a^6 }"))
    Z3 = todd_coxeter(parse_group("group { gens: a; rels: a^3 }"))
    reduce = tuple(Z3.evaluate(w) for w in Z6.reps)
    spec = DenseRingSpec(mod(2), Z6, reduce, Z3)
    a3 = Z6.evaluate(Word.gen(0, 3))
    assert spec.phi_group({0: 1, a3: 1}) == {}
    assert spec.phi_group({0: 1, a3: 2}) == {0: 1}
    with pytest.raises(ValueError):
        DenseRingSpec(mod(2), Z6, tuple(range(6)), Z3)


def test_induced_spec_composes_quotients():
    S3p = parse_group("group { gens: a b; rels: a^3 b^2 (a*b)^2 }")
    Z2p = parse_group("group { gens: a b; rels: a b^2 }")
    S3, Z2 = todd_coxeter(S3p), todd_coxeter(Z2p)
    q = GroupHom.by_names(S3p, Z2p)
    base = DenseRingSpec(QQ, Z2)
    spec = induced_spec(base, q, S3)
    assert spec.trivial_action and spec.group is S3
    ident = tuple(range(Z2.order))
    spec2 = induced_spec(DenseRingSpec(QQ, Z2, ident, Z2), q, S3)
    assert sorted(spec2.element_map).count(1) == 3
    with pytest.raises(ValueError):
        induced_spec(DenseRingSpec(QQ, Z2, ident, Z2),
                      GroupHom(S3p, Z2p, (Word(), Word())), S3)
