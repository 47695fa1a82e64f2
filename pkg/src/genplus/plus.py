"""Attaching cells to change the fundamental group while keeping higher homology.

Pipeline: check the homological hypotheses on ``α: π -> G``, assemble the
2-complex ``W`` whose presentation is ``G``'s, find 2-cycles of the G-cover
of ``W`` that hit a basis of ``H_2(W, X; R)``, attach 3-cells along them,
and recompute every claimed isomorphism from the resulting chains.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .chains import ChainComplexR, InducedMap, ModulePresentation, induced_homology_map, mapping_cone, module_iso_test
from .gdense import RegularAction, extract_basis
from .groups import DEFAULT_MAX_COSETS, GroupHom, Presentation, Word, format_word
from .homology import (CoefficientSpec, EquivariantChainComplex, FiveTermReport, GroupModel,
                       GroupRingCoefficients, SpaceModel, TierRejection, _inclusion_map,
                       equivariant_chains, five_term, group_homology, homology_chain_map, point,
                       quotient_model)
from .matrix import MatrixR, kernel_basis, smith_normal_form, solve
from .rings import ZZ, RingSpec


class AssemblyError(ValueError):
    """The supplied kernel generators and presentation of G do not fit together."""


class CertificateError(ArithmeticError):
    """A recomputed homology isomorphism failed; carries the offending degree."""

    def __init__(self, degree: str, detail: str, result: "PlusResult | None" = None):
        super().__init__(f"certificate {degree} failed: {detail}")
        self.degree = degree
        self.detail = detail
        self.result = result


# -- hypotheses ----------------------------------------------------------------


@dataclass(frozen=True)
class Gate:
    kind: str  # "PID", "RelH1Zero" or "Rejected"
    reason: str = ""
    module: ModulePresentation | None = None

    @property
    def passed(self) -> bool:
        return self.kind != "Rejected"


@dataclass
class HypothesesReport:
    h1_injective: bool
    h2_surjective: bool
    gate: Gate
    h1_map: InducedMap = field(repr=False)
    h2_map: InducedMap = field(repr=False)

    @property
    def passed(self) -> bool:
        return self.h1_injective and self.h2_surjective and self.gate.passed


def check_hypotheses(X: SpaceModel, alpha: GroupHom, G: GroupModel, R: CoefficientSpec) -> HypothesesReport:
    """H_1(α; R) injective, H_2(α; R) surjective, and the coefficient gate.

    The source side uses the chains of ``X`` itself: ``H_1(X) = H_1(π)`` and
    ``H_2(X) -> H_2(π)`` is onto, so surjectivity can be tested from ``X``.
    """
    f = homology_chain_map(X, G, alpha, R)
    h1 = induced_homology_map(f, 1)
    h2 = induced_homology_map(f, 2)
    if isinstance(R, GroupRingCoefficients):
        rel = mapping_cone(f).homology_group(1).module
        if rel.is_zero():
            gate = Gate("RelH1Zero", module=rel)
        else:
            gate = Gate("Rejected", f"relative H1 with {R.token} coefficients is {rel}, not zero", rel)
    else:
        gate = Gate("PID")
    return HypothesesReport(h1.injective, h2.surjective, gate, h1, h2)


# -- the complex W ----------------------------------------------------------------


@dataclass(frozen=True)
class CellLedger:
    """Cells added to ``X``: 1-cell names, 2-cell words with provenance, 3-cell boundaries."""

    generators: tuple[str, ...]
    one_cells: tuple[str, ...] = ()
    two_cells: tuple[tuple[Word, str], ...] = ()
    three_cells: tuple[tuple[dict, ...], ...] = ()

    PROVENANCE = ("kill-kernel", "new-relation", "sphere-wedge")

    def __post_init__(self):
        for _, p in self.two_cells:
            if p not in self.PROVENANCE:
                raise ValueError(f"unknown provenance {p!r}")

    @property
    def counts(self) -> dict[int, int]:
        return {1: len(self.one_cells), 2: len(self.two_cells), 3: len(self.three_cells)}

    @property
    def finite(self) -> bool:
        return all(isinstance(v, int) for v in self.counts.values())

    def with_two_cells(self, words: Sequence[Word], provenance: str) -> "CellLedger":
        return CellLedger(self.generators, self.one_cells,
                          self.two_cells + tuple((w, provenance) for w in words), self.three_cells)

    def with_three_cells(self, rows) -> "CellLedger":
        return CellLedger(self.generators, self.one_cells, self.two_cells,
                          self.three_cells + tuple(tuple(r) for r in rows))

    def as_dict(self) -> dict:
        return {
            "1-cells": list(self.one_cells),
            "2-cells": [{"word": format_word(w, self.generators), "provenance": p} for w, p in self.two_cells],
            "3-cells": [[{str(g): c for g, c in u.items()} for u in row] for row in self.three_cells],
        }


def build_W(X: SpaceModel, alpha: GroupHom, ker_normal_gens: Sequence[Word],
            G_pres: Presentation) -> tuple[SpaceModel, CellLedger]:
    """Attach kill-kernel 2-cells, new 1-cells and new relations so ``π_1(W) = G``.

    ``G_pres`` must list ``X``'s generators first (with ``α`` sending each to
    its namesake) and contain ``X``'s nontrivial 2-cell words and the kernel
    generators among its relators; what remains is recorded as new.
    """
    n = X.base.ngens
    if G_pres.generators[:n] != X.base.generators:
        raise AssemblyError("the presentation of G must begin with the generators of X")
    if alpha.source.generators != X.base.generators or alpha.target.generators != G_pres.generators:
        raise AssemblyError("the homomorphism does not run from X's generators to G's")
    if any(w != Word.gen(i) for i, w in enumerate(alpha.images)):
        raise AssemblyError("the homomorphism must send each generator of X to the generator "
                            "of G with the same name")
    pool = list(G_pres.relators)
    for w in X.cells2:
        if w.is_trivial():
            continue
        if w not in pool:
            raise AssemblyError(f"2-cell {X.base.format_word(w)} of X is not a relator of G")
        pool.remove(w)
    for s in ker_normal_gens:
        if s not in pool:
            raise AssemblyError(f"kernel generator {X.base.format_word(s)} is not a relator of G")
        pool.remove(s)
    new = tuple(pool)
    W = SpaceModel(Presentation(G_pres.generators, X.cells2 + tuple(ker_normal_gens) + new))
    ledger = CellLedger(G_pres.generators, G_pres.generators[n:])
    ledger = ledger.with_two_cells(ker_normal_gens, "kill-kernel").with_two_cells(new, "new-relation")
    return W, ledger


# -- relative H_2 and spherical classes -------------------------------------------


@dataclass
class RelativeBasis:
    """Basis of ``H_2(W, X; R)`` as columns in relative 2-chain coordinates.

    Over ``k[G]`` the coordinates are cell-major over the group and the
    columns form a ``k[G]``-basis; ``spheres`` 2-spheres must be wedged on
    (their coordinates follow the new cells).
    """

    basis: MatrixR
    spheres: int
    module: ModulePresentation


def _relative_d2(W_E: EquivariantChainComplex, n1x: int, n2x: int) -> MatrixR:
    n = W_E.order
    B = W_E.blowup(2)
    return B.submatrix(rows=range(n1x * n, B.rows), cols=range(n2x * n, B.cols))


def relative_H2_basis(W: SpaceModel, X: SpaceModel, R: CoefficientSpec,
                      W_E: EquivariantChainComplex | None = None) -> RelativeBasis:
    n1x, n2x = X.base.ngens, len(X.cells2)
    new_cells = W.cells2[n2x:]
    new_gens = range(n1x, W.base.ngens)
    if not isinstance(R, GroupRingCoefficients):
        d = MatrixR.from_rows(ZZ, [[w.exponent_sum(j) for w in new_cells] for j in new_gens],
                              len(new_cells)).map(R)
        K = kernel_basis(d) if d.rows else MatrixR.identity(R, len(new_cells))
        return RelativeBasis(K, 0, ModulePresentation(R, K.cols))
    if W_E is None:
        raise TierRejection("group-ring coefficients need the equivariant chains of W")
    k = R.field
    n = W_E.order
    m2 = len(new_cells)
    m1 = len(new_gens)
    d = _relative_d2(W_E, n1x, n2x).map(k)

    def unit(c: int, size: int) -> list:
        v = [k.zero] * size
        v[c * n] = k.one
        return v

    if m1 == 0:
        cols = [unit(c, m2 * n) for c in range(m2)]
        B = MatrixR.from_columns(k, cols, m2 * n) if cols else MatrixR.zeros(k, 0, 0)
        return RelativeBasis(B, 0, ModulePresentation(k, m2 * n))
    # H_1(W, X; k[G]) = 0 makes d onto; a section turns C_2 into H_2 + (wedged spheres)
    S = smith_normal_form(d)
    act = RegularAction(W_E.group)
    sections = []
    for j in range(m1):
        x = solve(d, unit(j, m1 * n), S)
        if x is None:
            raise TierRejection("relative H1 is nonzero; the boundary of the new 2-cells is not onto")
        sections.append(x)
    cols = []
    for c in range(m2):
        y = d.column(c * n)
        sigma = [k.zero] * (m2 * n)
        for j in range(m1):
            for g in range(n):
                coeff = y[j * n + g]
                if not k.is_zero(coeff):
                    moved = act(g, sections[j])
                    sigma = [k.add(a, k.mul(coeff, b)) for a, b in zip(sigma, moved)]
        cyc = [k.sub(a, b) for a, b in zip(unit(c, m2 * n), sigma)]
        cols.append(cyc + list(y))
    B = MatrixR.from_columns(k, cols, (m2 + m1) * n)
    return RelativeBasis(B, m1, ModulePresentation(k, m2 * n))


def spherical_lift(W_E: EquivariantChainComplex, basis: RelativeBasis, R: CoefficientSpec,
                   n2x: int) -> list[list[int]]:
    """Integer 2-cycles of the G-cover of ``W`` whose relative images form the basis.

    Returns blowup coordinate vectors; each lies in ``ker d_2`` exactly.
    """
    if basis.basis.cols == 0:
        return []
    n = W_E.order
    K = kernel_basis(W_E.blowup(2))
    ncells = W_E.cells[2]
    if isinstance(R, GroupRingCoefficients):
        ring = R.field
        rho = K.submatrix(rows=range(n2x * n, ncells * n))
        action = RegularAction(W_E.group)
    else:
        ring = R
        rho = MatrixR.from_rows(ZZ, [[sum(K.entries[c * n + g][col] for g in range(n))
                                      for col in range(K.cols)] for c in range(n2x, ncells)], K.cols)
        action = None
    rhoR = rho.map(ring)
    S = smith_normal_form(rhoR)
    coeff_cols = []
    for b in basis.basis.columns():
        y = solve(rhoR, b, S)
        if y is None:
            raise CertificateError("spherical-lift", "a relative basis element is not hit by a 2-cycle of the cover")
        coeff_cols.append(y)
    Y = MatrixR.from_columns(ring, coeff_cols, K.cols)
    extracted = extract_basis(rho, Y, ring, action)
    Z = K @ extracted.lifted
    if not (W_E.blowup(2) @ Z).is_zero():
        raise CertificateError("spherical-lift", "lifted chains are not cycles")
    return Z.columns()


# -- attaching 3-cells ---------------------------------------------------------------


@dataclass
class PlusResult:
    Y: EquivariantChainComplex
    W: SpaceModel
    ledger: CellLedger
    coefficients: str
    certificates: dict[str, bool]
    homology_X: list[ModulePresentation]
    homology_Y: list[ModulePresentation]
    homology_G: list[ModulePresentation]
    finite: bool
    hypotheses: HypothesesReport | None = field(default=None, repr=False)

    @property
    def verified(self) -> bool:
        return all(self.certificates.values())


def _pad(C: ChainComplexR, top: int) -> ChainComplexR:
    if C.top >= top:
        return C
    ranks = list(C.ranks) + [0] * (top - C.top)
    return ChainComplexR(C.ring, ranks, dict(C.boundaries), check=False)


def attach_3cells_and_verify(W_E: EquivariantChainComplex, cycles: Sequence[Sequence[int]],
                             X_chains: ChainComplexR, G: GroupModel, R: CoefficientSpec,
                             W: SpaceModel, ledger: CellLedger,
                             hypotheses: HypothesesReport | None = None) -> PlusResult:
    """Attach 3-cells along ``cycles`` and certify ``H_q(X) = H_q(Y)`` (q = 2, 3) and the rest."""
    rows = [W_E.vector_to_row(z, W_E.cells[2]) for z in cycles]
    Y_E = W_E.with_cells(3, rows)
    ledger = ledger.with_three_cells(rows)
    CX = _pad(X_chains, 3)
    CY = Y_E.tensor(R)
    f = _inclusion_map(CX, CY)
    inc2 = induced_homology_map(f, 2)
    inc3 = induced_homology_map(f, 3)
    HY = [CY.homology_group(q).module for q in range(4)]
    HX = [CX.homology_group(q).module for q in range(4)]
    HG = [group_homology(G, R, q) for q in range(3)]
    certificates = {
        "H0(Y)=H0(G)": module_iso_test(HY[0], HG[0]),
        "H1(Y)=H1(G)": module_iso_test(HY[1], HG[1]),
        "H2(X)->H2(Y) iso": inc2.iso,
        "H3(X)->H3(Y) iso": inc3.iso,
    }
    finite = ledger.finite and all(isinstance(c, int) for c in Y_E.cells)
    result = PlusResult(Y_E, W, ledger, getattr(R, "token", str(R)), certificates, HX, HY, HG,
                        finite, hypotheses)
    for name, ok in certificates.items():
        if not ok:
            raise CertificateError(name, f"X: {[str(m) for m in HX]}, Y: {[str(m) for m in HY]}", result)
    return result


@dataclass(frozen=True)
class Rejection:
    reason: str
    module: ModulePresentation | None = None
    hypotheses: HypothesesReport | None = field(default=None, compare=False, repr=False)


def plus_construction(X: SpaceModel, alpha: GroupHom, ker_normal_gens: Sequence[Word], G: GroupModel,
                      R: CoefficientSpec = ZZ) -> PlusResult | Rejection:
    """Run the whole pipeline; hypothesis failures come back as a :class:`Rejection`."""
    if not G.is_finite:
        raise TierRejection("the pipeline needs a finite target group")
    hyp = check_hypotheses(X, alpha, G, R)
    if not hyp.passed:
        reasons = []
        if not hyp.h1_injective:
            reasons.append("H1 map not injective")
        if not hyp.h2_surjective:
            reasons.append("H2 map not surjective")
        if not hyp.gate.passed:
            reasons.append(hyp.gate.reason)
        return Rejection("; ".join(reasons), hypotheses=hyp)
    W, ledger = build_W(X, alpha, ker_normal_gens, G.presentation)
    table = G.table
    W_E = equivariant_chains(W, GroupHom.by_names(W.base, G.presentation), table)
    rel = relative_H2_basis(W, X, R, W_E)
    if rel.spheres:
        spheres = (Word(),) * rel.spheres
        W = SpaceModel(W.base, spheres)
        ledger = ledger.with_two_cells(spheres, "sphere-wedge")
        W_E = equivariant_chains(W, GroupHom.by_names(W.base, G.presentation), table)
    cycles = spherical_lift(W_E, rel, R, len(X.cells2))
    if isinstance(R, GroupRingCoefficients):
        X_chains = equivariant_chains(X, alpha, table).tensor(R)
    else:
        X_chains = X.cellular_complex(R)
    return attach_3cells_and_verify(W_E, cycles, X_chains, G, R, W, ledger, hyp)


# -- applications ---------------------------------------------------------------------


def moore_space(G: GroupModel, R: CoefficientSpec = ZZ) -> PlusResult | Rejection:
    """``M(G, 1; R)`` from a point, or the nonzero ``H_2(G; R)`` that forbids it."""
    h2 = group_homology(G, R, 2)
    if not h2.is_zero():
        return Rejection(f"H2(G; {getattr(R, 'token', R)}) = {h2} is nonzero", h2)
    X = point()
    alpha = GroupHom(X.base, G.presentation, ())
    return plus_construction(X, alpha, (), G, R)


def relatively_perfect(pi: GroupModel, N_gens: Sequence[Word],
                       max_cosets: int = DEFAULT_MAX_COSETS) -> tuple[bool, FiveTermReport]:
    report = five_term(pi, N_gens, max_cosets)
    h1, h2 = report.maps["H1"], report.maps["H2"]
    return h1.injective and h2.surjective, report


class NotKPerfect(ValueError):
    def __init__(self, module: ModulePresentation):
        super().__init__(f"subgroup is not perfect over the field: H1 = {module}")
        self.module = module


@dataclass
class CompletionReport:
    quotient_order: int
    h1_subgroup: ModulePresentation
    gate: Gate
    result: PlusResult | Rejection


def partial_completion(pi: GroupModel, P_gens: Sequence[Word], k: RingSpec,
                       max_cosets: int = DEFAULT_MAX_COSETS) -> CompletionReport:
    """Kill a k-perfect normal subgroup ``P`` keeping homology with ``k[π/P]`` coefficients.

    ``H_1(P; k)`` is computed as ``H_1(π; k[π/P])`` on the cover of the
    presentation complex with group ``π/P``.
    """
    Q, hom = quotient_model(pi, P_gens, max_cosets)
    if not Q.is_finite:
        raise TierRejection("the quotient by P must be finite")
    R = GroupRingCoefficients(k)
    X = SpaceModel(pi.presentation)
    h1P = equivariant_chains(X, hom, Q.table).tensor(R).homology_group(1).module
    if not h1P.is_zero():
        raise NotKPerfect(h1P)
    result = plus_construction(X, hom, tuple(P_gens), Q, R)
    gate = result.hypotheses.gate if isinstance(result, PlusResult) else result.hypotheses.gate
    return CompletionReport(Q.order, h1P, gate, result)


def plus_from_hom(X: SpaceModel, alpha: GroupHom, kernel: Sequence[Word], R: CoefficientSpec = ZZ,
                  max_cosets: int = DEFAULT_MAX_COSETS) -> PlusResult | Rejection:
    """Convenience wrapper: enumerate ``alpha``'s target and run the pipeline."""
    G = GroupModel.realize(alpha.target, max_cosets=max_cosets)
    return plus_construction(X, alpha, kernel, G, R)
