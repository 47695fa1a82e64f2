import pytest

from genplus.chains import (ChainComplexR, ChainMapR, FGModule, ModuleMap, ModulePresentation, cone_inclusion,
                            cone_projection, exact_at, format_module, homology, induced_homology_map,
                            integer_complex, mapping_cone, module_iso_test, parse_module)
from genplus.matrix import MatrixR
from genplus.rings import QQ, ZI, ZZ, GaussianInteger, RingError, localized, mod


def rp2():
    return integer_complex((1, 1, 1), {1: [[0]], 2: [[2]]})


def circle():
    return integer_complex((1, 1), {1: [[0]]})


def test_projective_plane():
    C = rp2()
    assert [str(homology(C, q)) for q in range(3)] == ["Z", "Z/2", "0"]
    assert [str(homology(C.tensor(mod(2)), q)) for q in range(3)] == ["(Z/2)", "(Z/2)", "(Z/2)"]
    assert [str(homology(C.tensor(QQ), q)) for q in range(3)] == ["Q", "0", "0"]


def test_boundary_of_boundary_is_checked():
    with pytest.raises(ValueError):
        integer_complex((1, 1, 1), {1: [[1]], 2: [[1]]})


def test_homology_coordinates_reduce_torsion():
    H = rp2().homology_group(1)
    assert H.orders == [2]
    assert H.coordinates([3]) == [1]
    assert H.coordinates([4]) == [0]


def test_non_cycle_is_rejected():
    C = integer_complex((1, 2), {1: [[1, -1]]})
    with pytest.raises(ValueError):
        C.homology_group(1).coordinates([1, 0])


def test_degree_n_map_on_circle():
    S = circle()
    f = ChainMapR(S, S, {0: MatrixR.identity(ZZ, 1), 1: MatrixR.from_rows(ZZ, [[3]])})
    h = induced_homology_map(f, 1)
    assert h.injective and not h.surjective
    cone = mapping_cone(f)
    assert str(homology(cone, 2)) == "0"
    assert str(homology(cone, 1)) == "Z/3"


def test_cone_long_exact_sequence():
    # inclusion of the 1-skeleton into the projective plane
    A = integer_complex((1, 1), {1: [[0]]})
    B = rp2()
    f = ChainMapR(A, B, {0: MatrixR.identity(ZZ, 1), 1: MatrixR.identity(ZZ, 1)})
    cone = mapping_cone(f)
    assert [str(homology(cone, q)) for q in range(3)] == ["0", "0", "Z"]
    inc = cone_inclusion(f, cone)
    proj, shifted = cone_projection(f, cone)
    for q in (1, 2):
        fq = induced_homology_map(f, q) if q <= A.top else None
        iq = induced_homology_map(inc, q)
        pq = induced_homology_map(proj, q)
        assert exact_at(iq, pq)
        if fq is not None:
            assert exact_at(fq, iq)


def test_chain_map_must_commute():
    S = circle()
    with pytest.raises(ValueError):
        ChainMapR(rp2(), S, {1: MatrixR.from_rows(ZZ, [[1]]), 2: MatrixR.zeros(ZZ, 1, 1), 0: MatrixR.zeros(ZZ, 1, 1)})


@pytest.mark.parametrize("ring, text", [
    (ZZ, "Z^2 + Z/2 + Z/6"), (ZZ, "0"), (mod(3), "(Z/3)^4"), (QQ, "Q"),
    (ZI, "Z[i]/(1+1i)"), (localized(2), "Z[1/2] + Z[1/2]/3"),
])
def test_module_format_round_trip(ring, text):
    M = parse_module(text, ring)
    assert format_module(M) == text
    assert module_iso_test(M, parse_module(str(M), ring))


def test_invariant_factors_must_divide():
    with pytest.raises(RingError):
        ModulePresentation(ZZ, 0, (4, 6))
    assert ModulePresentation(ZZ, 0, (1, 2)).invariant_factors == (2,)


def test_gaussian_torsion():
    C = ChainComplexR(ZI, (1, 1), {1: MatrixR.from_rows(ZI, [[GaussianInteger(2, 0)]])})
    M = homology(C, 0)
    assert M.free_rank == 0
    assert M.invariant_factors == (ZI.normalize(GaussianInteger(2, 0))[1],)


def test_module_map_flags():
    Z2 = FGModule(ZZ, 1, MatrixR.from_rows(ZZ, [[2]]))
    Z = FGModule.free(ZZ, 1)
    reduce = ModuleMap(Z, Z2, MatrixR.from_rows(ZZ, [[1]]))
    assert reduce.surjective and not reduce.injective
    double = ModuleMap(Z, Z, MatrixR.from_rows(ZZ, [[2]]))
    assert double.injective and not double.surjective
    assert exact_at(double, reduce)
