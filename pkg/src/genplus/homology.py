"""Cellular chains of 2-complexes, their covers, and group homology.

Equivariant complexes are left modules over Z[G] written with row vectors:
``D_q[i][j]`` is the coefficient of the ``j``-th ``(q-1)``-cell in the
boundary of the ``i``-th ``q``-cell.  The regular-representation blowup
turns such a matrix into an integer matrix acting on column vectors whose
coordinates are indexed cell-major, ``(cell, g) -> cell * |G| + g``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence, Union

from .chains import (ChainComplexR, ChainMapR, FGModule, ModuleMap,
                     ModulePresentation, cone_inclusion, exact_at, induced_homology_map,
                     mapping_cone)
from .groups import (DEFAULT_MAX_COSETS, CayleyTable, GroupHom, HomomorphismError, Overflow,
                     Presentation, Word, pushforward_elements, quotient_presentation, todd_coxeter)
from .matrix import IntegerLattice, MatrixR, kernel_basis, smith_normal_form, solve
from .rings import GroupRingElement, RingError, RingSpec, ZZ, parse_ring

GRDict = dict  # {group element index: integer coefficient}


class TierRejection(Exception):
    """No finite or aspherical model is available for the requested computation."""


# -- spaces -----------------------------------------------------------------


@dataclass(frozen=True)
class SpaceModel:
    """A connected 2-complex: one 0-cell, a 1-cell per generator, a 2-cell per word.

    ``extra_2cells`` are attached after the relators; the empty word wedges
    on a 2-sphere.  ``aspherical`` records a user assertion.
    """

    base: Presentation
    extra_2cells: tuple[Word, ...] = ()
    aspherical: bool = False

    def __post_init__(self):
        object.__setattr__(self, "extra_2cells", tuple(self.extra_2cells))
        n = self.base.ngens
        for w in self.extra_2cells:
            if any(not 0 <= g < n for g, _ in w):
                raise ValueError("extra 2-cell word uses an unknown generator")
        if self.aspherical and self.extra_2cells:
            raise ValueError("the aspherical flag only applies to a bare presentation complex")

    @property
    def cells2(self) -> tuple[Word, ...]:
        return self.base.relators + self.extra_2cells

    @property
    def cell_counts(self) -> tuple[int, int, int]:
        return 1, self.base.ngens, len(self.cells2)

    @property
    def fundamental_group(self) -> Presentation:
        return Presentation(self.base.generators, tuple(w for w in self.cells2 if not w.is_trivial()))

    def cellular_complex(self, R: RingSpec = ZZ) -> ChainComplexR:
        """Integral cellular chains (tensored up to ``R``), padded with ``C_3 = 0``."""
        n1, cells = self.base.ngens, self.cells2
        d2 = MatrixR.from_rows(ZZ, [[w.exponent_sum(j) for w in cells] for j in range(n1)], len(cells))
        C = ChainComplexR(ZZ, (1, n1, len(cells), 0), {2: d2})
        return C if R == ZZ else C.tensor(R)

    def __str__(self) -> str:
        from .parsing import SpaceSpec
        return str(SpaceSpec(self.base, self.extra_2cells, self.aspherical))


def build_presentation_complex(P: Presentation, extras: Sequence[Word] = ()) -> SpaceModel:
    return SpaceModel(P, tuple(extras))


def point() -> SpaceModel:
    return SpaceModel(Presentation(()))


# -- coefficients -------------------------------------------------------------


@dataclass(frozen=True)
class GroupRingCoefficients:
    """``k[G]`` with ``G`` the group of the equivariant complex being tensored."""

    field: RingSpec

    def __post_init__(self):
        if not self.field.is_field:
            raise RingError(f"group-ring coefficients need a field, got {self.field.token}")

    @property
    def token(self) -> str:
        return f"{self.field.token}[G]"


CoefficientSpec = Union[RingSpec, GroupRingCoefficients]


def parse_coefficients(token: str) -> CoefficientSpec:
    token = token.strip()
    if token.endswith("[G]"):
        return GroupRingCoefficients(parse_ring(token[:-3]))
    return parse_ring(token)


def base_ring(coeffs: CoefficientSpec) -> RingSpec:
    return coeffs.field if isinstance(coeffs, GroupRingCoefficients) else coeffs


# -- equivariant complexes ---------------------------------------------------


def _gr_mul(u: GRDict, v: GRDict, mult) -> GRDict:
    out: GRDict = {}
    for g, a in u.items():
        row = mult[g]
        for h, b in v.items():
            k = row[h]
            out[k] = out.get(k, 0) + a * b
    return {g: c for g, c in out.items() if c}


def _gr_add_into(acc: GRDict, u: GRDict, sign: int = 1) -> None:
    for g, c in u.items():
        acc[g] = acc.get(g, 0) + sign * c


def _clean(u: GRDict) -> GRDict:
    return {g: c for g, c in sorted(u.items()) if c}


def _blowup(rows: Sequence[Sequence[GRDict]], nrows_target: int, mult) -> MatrixR:
    """Integer matrix of a Z[G]-matrix acting on cell-major coordinates."""
    n = len(mult)
    src = len(rows)
    out = [[0] * (src * n) for _ in range(nrows_target * n)]
    for i, row in enumerate(rows):
        for j, u in enumerate(row):
            for h, c in u.items():
                for g in range(n):
                    out[j * n + mult[g][h]][i * n + g] += c
    return MatrixR(ZZ, nrows_target * n, src * n, out)


class EquivariantChainComplex:
    """Free left Z[G]-complex in degrees ``0..top`` for a finite group ``G``."""

    def __init__(self, group: CayleyTable, cells: Sequence[int],
                 boundaries: dict[int, Sequence[Sequence[GRDict]]], check: bool = True):
        self.group = group
        self.cells = tuple(cells)
        self._D: dict[int, tuple[tuple[GRDict, ...], ...]] = {}
        for q in range(1, len(self.cells)):
            rows = boundaries.get(q, [[{} for _ in range(self.cells[q - 1])] for _ in range(self.cells[q])])
            rows = tuple(tuple(_clean(u) for u in r) for r in rows)
            if len(rows) != self.cells[q] or any(len(r) != self.cells[q - 1] for r in rows):
                raise ValueError(f"boundary in degree {q} has the wrong shape")
            self._D[q] = rows
        self._blowups: dict[int, MatrixR] = {}
        if check:
            for q in range(2, len(self.cells)):
                if not (self.blowup(q - 1) @ self.blowup(q)).is_zero():
                    raise ValueError(f"d_{q - 1} d_{q} != 0 on the regular blowup")

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def top(self) -> int:
        return len(self.cells) - 1

    def rows(self, q: int) -> tuple[tuple[GRDict, ...], ...]:
        return self._D[q]

    def entry(self, q: int, i: int, j: int) -> GroupRingElement:
        return GroupRingElement.from_dict(ZZ, self.order, self._D[q][i][j])

    def blowup(self, q: int) -> MatrixR:
        if q not in self._blowups:
            self._blowups[q] = _blowup(self._D[q], self.cells[q - 1], self.group.mult)
        return self._blowups[q]

    @cached_property
    def integer_complex(self) -> ChainComplexR:
        """Chains of the G-cover as a complex of free abelian groups."""
        n = self.order
        return ChainComplexR(ZZ, [c * n for c in self.cells],
                             {q: self.blowup(q) for q in range(1, self.top + 1)}, check=False)

    def augmented(self, R: RingSpec = ZZ) -> ChainComplexR:
        """``C ⊗_{Z[G]} R`` for the trivial action."""
        bds = {}
        for q in range(1, self.top + 1):
            M = [[sum(self._D[q][i][j].values()) for i in range(self.cells[q])]
                 for j in range(self.cells[q - 1])]
            bds[q] = MatrixR.from_rows(ZZ, M, self.cells[q])
        C = ChainComplexR(ZZ, self.cells, bds)
        return C if R == ZZ else C.tensor(R)

    def tensor(self, coeffs: CoefficientSpec) -> ChainComplexR:
        if isinstance(coeffs, GroupRingCoefficients):
            C = self.integer_complex
            return C if coeffs.field == ZZ else C.tensor(coeffs.field)
        return self.augmented(coeffs)

    def act(self, g: int, vec: Sequence[int]) -> list[int]:
        """Left multiplication by ``g`` on a blowup coordinate vector."""
        n = self.order
        row = self.group.mult[g]
        out = [0] * len(vec)
        for i in range(len(vec) // n):
            base = i * n
            for h in range(n):
                c = vec[base + h]
                if c:
                    out[base + row[h]] = c
        return out

    def vector_to_row(self, vec: Sequence[int], ncells: int) -> list[GRDict]:
        n = self.order
        return [_clean({h: vec[i * n + h] for h in range(n)}) for i in range(ncells)]

    def row_to_vector(self, row: Sequence[GRDict]) -> list[int]:
        n = self.order
        out = [0] * (len(row) * n)
        for i, u in enumerate(row):
            for h, c in u.items():
                out[i * n + h] += c
        return out

    def with_cells(self, q: int, rows: Sequence[Sequence[GRDict]]) -> "EquivariantChainComplex":
        """Append ``q``-cells (``q = top`` or ``top + 1``) with the given boundary rows."""
        if q == self.top + 1:
            cells = self.cells + (len(rows),)
            bds = dict(self._D)
            bds[q] = list(rows)
        elif q == self.top:
            cells = self.cells[:-1] + (self.cells[q] + len(rows),)
            bds = dict(self._D)
            bds[q] = list(self._D[q]) + list(rows)
        else:
            raise ValueError("cells can only be appended in the top degree or the next one")
        return EquivariantChainComplex(self.group, cells, bds)

    def truncate(self, top: int) -> "EquivariantChainComplex":
        return EquivariantChainComplex(self.group, self.cells[: top + 1],
                                       {q: self._D[q] for q in range(1, top + 1)}, check=False)

    def pushforward(self, hom: GroupHom, target: CayleyTable) -> "EquivariantChainComplex":
        """``C ⊗_{Z[π]} Z[G]`` along a homomorphism of finite groups."""
        emap = pushforward_elements(self.group, hom, target)
        bds = {}
        for q, rows in self._D.items():
            new = []
            for r in rows:
                out_row = []
                for u in r:
                    acc: GRDict = {}
                    for h, c in u.items():
                        acc[emap[h]] = acc.get(emap[h], 0) + c
                    out_row.append(acc)
                new.append(out_row)
            bds[q] = new
        return EquivariantChainComplex(target, self.cells, bds)

    def __repr__(self):
        return f"EquivariantChainComplex(order={self.order}, cells={self.cells})"


def equivariant_chains(space: SpaceModel, alpha: GroupHom, cayley: CayleyTable) -> EquivariantChainComplex:
    """Chains of the G-cover of ``space`` determined by ``alpha`` (Fox calculus)."""
    if alpha.source.generators != space.base.generators:
        raise HomomorphismError("homomorphism source does not match the space's generators")
    if alpha.target.generators != cayley.presentation.generators:
        raise HomomorphismError("homomorphism target does not match the Cayley table")
    elem = [cayley.evaluate(w) for w in alpha.images]
    mult, inv = cayley.mult, cayley.inverses
    n1 = space.base.ngens
    D1 = [[{} if e == 0 else {e: 1, 0: -1}] for e in elem]
    D2 = []
    for w in space.cells2:
        row: list[GRDict] = [{} for _ in range(n1)]
        cur = 0
        for g, s in w:
            if s == 1:
                row[g][cur] = row[g].get(cur, 0) + 1
                cur = mult[cur][elem[g]]
            else:
                cur = mult[cur][inv[elem[g]]]
                row[g][cur] = row[g].get(cur, 0) - 1
        if cur != 0:
            raise HomomorphismError(
                f"2-cell {space.base.format_word(w)} does not map to the identity of G")
        D2.append(row)
    return EquivariantChainComplex(cayley, (1, n1, len(D2)), {1: D1, 2: D2})


def extend_to_degree3(E: EquivariantChainComplex, prune: bool = True) -> EquivariantChainComplex:
    """Add 3-cells whose boundaries generate ``ker d_2`` as a Z[G]-module.

    Candidates are the integer kernel basis vectors, shortest first; a
    candidate's G-orbit is added whenever it enlarges the lattice, until the
    lattice equals the kernel.  With ``prune`` redundant choices are dropped.
    """
    if E.top >= 3:
        return E
    if E.top < 2:
        raise ValueError("need cells through degree 2")
    n = E.order
    K = kernel_basis(E.blowup(2))
    kernel = K.columns()
    rank = len(kernel)

    def spans(chosen) -> bool:
        L = IntegerLattice(E.cells[2] * n)
        for v in chosen:
            for g in range(n):
                L.add_vector(E.act(g, v))
        return L.rank == rank and all(v in L for v in kernel)

    order = sorted(range(rank), key=lambda i: (sum(map(abs, kernel[i])),
                                                sum(1 for x in kernel[i] if x), i))
    chosen: list[list[int]] = []
    L = IntegerLattice(E.cells[2] * n)
    for i in order:
        if L.rank == rank and all(v in L for v in kernel):
            break
        v = kernel[i]
        if v in L:
            continue
        chosen.append(v)
        for g in range(n):
            L.add_vector(E.act(g, v))
    if prune and len(chosen) > 1:
        k = len(chosen) - 1
        while k >= 0:
            trial = chosen[:k] + chosen[k + 1:]
            if spans(trial):
                chosen = trial
            k -= 1
    rows = [E.vector_to_row(v, E.cells[2]) for v in chosen]
    return E.with_cells(3, rows)


# -- group models ---------------------------------------------------------


@dataclass(frozen=True)
class FiniteVia:
    table: CayleyTable = field(compare=False)


@dataclass(frozen=True)
class Aspherical2Complex:
    pass


class GroupModel:
    """A presentation together with a way to compute its homology."""

    def __init__(self, presentation: Presentation, realization: FiniteVia | Aspherical2Complex):
        if isinstance(realization, FiniteVia):
            t = realization.table
            if t.presentation.generators != presentation.generators or \
                    t.presentation.relators != presentation.relators:
                raise ValueError("Cayley table belongs to a different presentation")
        self.presentation = presentation
        self.realization = realization
        self._resolution: EquivariantChainComplex | None = None

    @classmethod
    def realize(cls, P: Presentation, aspherical: bool = False,
                max_cosets: int = DEFAULT_MAX_COSETS) -> "GroupModel":
        """Asserted-aspherical presentations use their 2-complex; otherwise enumerate cosets."""
        if aspherical:
            return cls(P, Aspherical2Complex())
        t = todd_coxeter(P, max_cosets)
        if isinstance(t, Overflow):
            raise TierRejection(f"coset enumeration overflowed at {t.budget} cosets and the "
                                f"presentation is not asserted aspherical")
        return cls(P, FiniteVia(t))

    @property
    def is_finite(self) -> bool:
        return isinstance(self.realization, FiniteVia)

    @property
    def tier(self) -> str:
        return "finite" if self.is_finite else "aspherical"

    @property
    def table(self) -> CayleyTable:
        if not self.is_finite:
            raise TierRejection("group is not realized by a finite Cayley table")
        return self.realization.table

    @property
    def order(self) -> int | None:
        return self.table.order if self.is_finite else None

    @property
    def space(self) -> SpaceModel:
        return SpaceModel(self.presentation, aspherical=not self.is_finite)

    def equivariant_complex(self) -> EquivariantChainComplex:
        return equivariant_chains(self.space, GroupHom.identity(self.presentation), self.table)

    def resolution(self) -> EquivariantChainComplex:
        """Free Z[G]-resolution prefix through degree 3 (finite tier)."""
        if self._resolution is None:
            self._resolution = extend_to_degree3(self.equivariant_complex())
        return self._resolution

    def complex(self, coeffs: CoefficientSpec = ZZ, degree: int = 2) -> ChainComplexR:
        """A complex whose homology is ``H_q(G; coeffs)`` for ``q <= degree``."""
        if self.is_finite:
            E = self.resolution() if degree >= 2 else self.equivariant_complex()
            return E.tensor(coeffs)
        if isinstance(coeffs, GroupRingCoefficients):
            raise TierRejection("group-ring coefficients need a finite group")
        return self.space.cellular_complex(coeffs)


def group_homology(G: GroupModel, R: CoefficientSpec, q: int) -> ModulePresentation:
    if q not in (0, 1, 2):
        raise ValueError("group homology is available in degrees 0, 1, 2")
    return G.complex(R, degree=q).homology_group(q).module


def space_homology(space: SpaceModel | EquivariantChainComplex,
                   coeffs: CoefficientSpec = ZZ) -> list[ModulePresentation]:
    """Homology in every degree ``0..top``."""
    if isinstance(space, SpaceModel):
        if isinstance(coeffs, GroupRingCoefficients):
            raise TierRejection("group-ring coefficients need an equivariant complex")
        C = space.cellular_complex(coeffs)
        return [C.homology_group(q).module for q in range(3)]
    C = space.tensor(coeffs)
    return [C.homology_group(q).module for q in range(C.top + 1)]


# -- chain maps ---------------------------------------------------------------


class LiftError(ArithmeticError):
    """A lifting equation had no solution: the target is not exact there."""


class EquivariantChainMap:
    """Z[G]-chain map given by row matrices: ``F_q[i][k]`` is the coefficient of target cell ``k``."""

    def __init__(self, source: EquivariantChainComplex, target: EquivariantChainComplex,
                 components: dict[int, Sequence[Sequence[GRDict]]]):
        if source.group is not target.group:
            raise ValueError("equivariant chain map between complexes over different groups")
        self.source = source
        self.target = target
        self.components = {q: tuple(tuple(_clean(u) for u in r) for r in rows)
                           for q, rows in components.items()}
        for q in range(1, source.top + 1):
            if q > target.top:
                break
            lhs = target.blowup(q) @ self.blowup(q)
            rhs = self.blowup(q - 1) @ source.blowup(q)
            if lhs != rhs:
                raise LiftError(f"chain map does not commute in degree {q}")

    def blowup(self, q: int) -> MatrixR:
        return _blowup(self.components[q], self.target.cells[q], self.source.group.mult)

    def tensor(self, coeffs: CoefficientSpec, source: ChainComplexR | None = None,
               target: ChainComplexR | None = None) -> ChainMapR:
        src = source or self.source.tensor(coeffs)
        tgt = target or self.target.tensor(coeffs)
        comps = {}
        for q, rows in self.components.items():
            if isinstance(coeffs, GroupRingCoefficients):
                M = self.blowup(q)
                comps[q] = M if coeffs.field == ZZ else M.map(coeffs.field)
            else:
                M = [[sum(rows[i][k].values()) for i in range(self.source.cells[q])]
                     for k in range(self.target.cells[q])]
                comps[q] = MatrixR.from_rows(ZZ, M, self.source.cells[q]).map(coeffs)
        return ChainMapR(src, tgt, comps)


def source_over(source, along: GroupHom, table: CayleyTable, degree: int = 3) -> EquivariantChainComplex:
    """Push a space, a group model or a complex over another group to ``table``'s group."""
    if isinstance(source, EquivariantChainComplex):
        if source.group is table:
            return source
        return source.pushforward(along, table)
    if isinstance(source, GroupModel):
        if source.is_finite:
            E = source.resolution() if degree >= 3 else source.equivariant_complex()
            return E.pushforward(along, table)
        return equivariant_chains(source.space, along, table)
    if isinstance(source, SpaceModel):
        return equivariant_chains(source, along, table)
    raise TypeError(f"cannot build chains from {type(source).__name__}")


_SMITH_CACHE: dict[int, tuple] = {}


def lift_equivariant(source: EquivariantChainComplex, target: EquivariantChainComplex,
                     top: int | None = None) -> EquivariantChainMap:
    """Lift the identity of ``H_0`` to a chain map, degree by degree.

    Each generator's image solves ``d'_q x = F_{q-1}(d_q e_i)`` on the
    regular blowup; any solution works because the target is exact there.
    """
    if source.cells[0] != 1 or target.cells[0] != 1:
        raise ValueError("lifting expects connected complexes with one 0-cell")
    top = source.top if top is None else top
    if top > target.top:
        raise LiftError(f"target complex stops at degree {target.top}, cannot lift degree {top}")
    mult = target.group.mult
    n = target.order
    F: dict[int, list[list[GRDict]]] = {0: [[{0: 1}]]}
    for q in range(1, top + 1):
        B = target.blowup(q)
        key = id(B)
        if key not in _SMITH_CACHE or _SMITH_CACHE[key][0] is not B:
            _SMITH_CACHE[key] = (B, smith_normal_form(B))
        S = _SMITH_CACHE[key][1]
        rows = []
        for i, drow in enumerate(source.rows(q)):
            t: list[GRDict] = [{} for _ in range(target.cells[q - 1])]
            for j, u in enumerate(drow):
                if not u:
                    continue
                for k, v in enumerate(F[q - 1][j]):
                    if v:
                        _gr_add_into(t[k], _gr_mul(u, v, mult))
            T = [0] * (target.cells[q - 1] * n)
            for k, u in enumerate(t):
                for g, c in u.items():
                    T[k * n + g] += c
            x = solve(B, T, S)
            if x is None:
                raise LiftError(f"no lift for cell {i} in degree {q}")
            rows.append([_clean({g: x[k * n + g] for g in range(n)}) for k in range(target.cells[q])])
        F[q] = rows
    return EquivariantChainMap(source.truncate(top) if top < source.top else source, target, F)


def lift_chain_map(source, target: EquivariantChainComplex, along: GroupHom,
                   coeffs: CoefficientSpec = ZZ) -> ChainMapR:
    """Chain map ``source ⊗ coeffs -> target ⊗ coeffs`` inducing ``along``."""
    E = source_over(source, along, target.group, degree=target.top)
    return lift_equivariant(E, target).tensor(coeffs)


def _inclusion_map(A: ChainComplexR, B: ChainComplexR) -> ChainMapR:
    """Cellular inclusion when ``A``'s cells are a prefix of ``B``'s in each degree."""
    R = A.ring
    comps = {}
    for q in range(A.top + 1):
        if A.rank(q) > B.rank(q):
            raise ValueError("not a subcomplex")
        comps[q] = MatrixR.identity(R, A.rank(q)).vstack(MatrixR.zeros(R, B.rank(q) - A.rank(q), A.rank(q)))
    return ChainMapR(A, B, comps)


def _is_name_inclusion(hom: GroupHom) -> bool:
    src, tgt = hom.source, hom.target
    if tgt.generators[: src.ngens] != src.generators:
        return False
    if any(w != Word.gen(i) for i, w in enumerate(hom.images)):
        return False
    remaining = list(tgt.relators)
    for r in src.relators:
        if r not in remaining:
            return False
        remaining.remove(r)
    return True


def homology_chain_map(source: GroupModel | SpaceModel, G: GroupModel, along: GroupHom,
                       coeffs: CoefficientSpec = ZZ) -> ChainMapR:
    """Chain map from ``source`` to a complex computing ``H_*(G)`` through degree 2."""
    if G.is_finite:
        E = source_over(source, along, G.table)
        return lift_equivariant(E, G.resolution()).tensor(coeffs, target=G.complex(coeffs))
    if isinstance(coeffs, GroupRingCoefficients):
        raise TierRejection("group-ring coefficients need a finite target group")
    src_space = source.space if isinstance(source, GroupModel) else source
    if isinstance(source, GroupModel) and source.is_finite:
        raise TierRejection("no cellular model for a finite group mapping to an aspherical one")
    if not _is_name_inclusion(along):
        raise TierRejection("aspherical targets are supported only for quotient presentations")
    tgt = G.space
    # reorder target 2-cells so the source relators come first
    remaining = list(tgt.base.relators)
    for r in src_space.cells2:
        if not r.is_trivial():
            remaining.remove(r)
    A = src_space.cellular_complex(coeffs)
    n1s, n1t = src_space.base.ngens, tgt.base.ngens
    f2 = [[0] * len(src_space.cells2) for _ in range(len(tgt.base.relators))]
    used = set()
    for i, w in enumerate(src_space.cells2):
        if w.is_trivial():
            continue
        k = next(k for k, r in enumerate(tgt.base.relators) if r == w and k not in used)
        used.add(k)
        f2[k][i] = 1
    B = tgt.cellular_complex(coeffs)
    R = base_ring(coeffs)
    comps = {0: MatrixR.identity(R, 1),
             1: MatrixR.identity(R, n1s).vstack(MatrixR.zeros(R, n1t - n1s, n1s)),
             2: MatrixR.from_rows(ZZ, f2, len(src_space.cells2)).map(R)}
    return ChainMapR(A, B, comps)


# -- exact-sequence certificates ---------------------------------------------


@dataclass
class HopfCertificate:
    coefficients: str
    A: ModulePresentation  # H_2(cover) ⊗ V
    B: ModulePresentation  # H_2(X; V)
    C: ModulePresentation  # H_2(G; V)
    first: ModuleMap = field(repr=False)
    second: ModuleMap = field(repr=False)
    exact_middle: bool = False
    surjective_right: bool = False

    @property
    def exact(self) -> bool:
        return self.exact_middle and self.surjective_right


def hopf_check(space: SpaceModel, V: CoefficientSpec = ZZ,
               max_cosets: int = DEFAULT_MAX_COSETS) -> HopfCertificate:
    """Compute ``H_2(cover) ⊗_{Z[G]} V -> H_2(X; V) -> H_2(G; V) -> 0`` and check exactness."""
    G = GroupModel.realize(space.fundamental_group, max_cosets=max_cosets)
    table = G.table
    alpha = GroupHom.by_names(space.base, G.presentation)
    E = equivariant_chains(space, alpha, table)
    R = base_ring(V)
    n = E.order
    L = kernel_basis(E.blowup(2))
    m = L.cols
    CX = E.tensor(V)
    HB = CX.homology_group(2)
    if isinstance(V, GroupRingCoefficients):
        A_mod = FGModule.free(R, m)
        images = [list(col) for col in L.columns()]
    else:
        S = smith_normal_form(L) if m else None
        rel_cols = []
        gens = table.generator_elements()
        for col in L.columns():
            for g in gens:
                moved = E.act(g, col)
                diff = [a - b for a, b in zip(moved, col)]
                x = solve(L, diff, S)
                if x is None:
                    raise ArithmeticError("kernel lattice is not G-stable")
                rel_cols.append(x)
        rel = MatrixR.from_columns(ZZ, rel_cols, m).map(R) if rel_cols else MatrixR.zeros(R, m, 0)
        A_mod = FGModule(R, m, rel)
        images = [[sum(col[i * n:(i + 1) * n]) for i in range(E.cells[2])] for col in L.columns()]
    cols = [HB.coordinates([R.coerce(x) for x in v]) for v in images]
    M = MatrixR.from_columns(R, cols, HB.ngens) if cols else MatrixR.zeros(R, HB.ngens, 0)
    first = ModuleMap(A_mod, HB.as_fgmodule(), M)
    f = lift_equivariant(E, G.resolution()).tensor(V, source=CX, target=G.complex(V))
    second = induced_homology_map(f, 2)
    return HopfCertificate(
        coefficients=getattr(V, "token", str(V)), A=A_mod.presentation(), B=HB.module,
        C=second.target_homology.module, first=first, second=second,
        exact_middle=exact_at(first, second), surjective_right=second.surjective)


@dataclass
class FiveTermReport:
    """``H_2(π) -> H_2(π/N) -> N/[π,N] -> H_1(π) -> H_1(π/N) -> 0``."""

    H2_pi: ModulePresentation
    H2_Q: ModulePresentation
    middle: ModulePresentation
    H1_pi: ModulePresentation
    H1_Q: ModulePresentation
    maps: dict[str, ModuleMap] = field(repr=False)
    joints: dict[str, bool]
    tiers: tuple[str, str]

    @property
    def exact(self) -> bool:
        return all(self.joints.values())


def connecting_map(f: ChainMapR, cone: ChainComplexR, q: int) -> ModuleMap:
    """``H_q(cone f) -> H_{q-1}(source)`` from the source component of cone cycles."""
    A, B = f.source, f.target
    Hc = cone.homology_group(q)
    Ha = A.homology_group(q - 1)
    cols = [Ha.coordinates(list(g[B.rank(q):])) for g in Hc.generators.columns()]
    R = A.ring
    M = MatrixR.from_columns(R, cols, Ha.ngens) if cols else MatrixR.zeros(R, Ha.ngens, 0)
    return ModuleMap(Hc.as_fgmodule(), Ha.as_fgmodule(), M)


def quotient_model(pi: GroupModel, N_gens: Sequence[Word],
                   max_cosets: int = DEFAULT_MAX_COSETS) -> tuple[GroupModel, GroupHom]:
    Q_pres = quotient_presentation(pi.presentation, list(N_gens))
    keep_aspherical = not pi.is_finite and all(w.is_trivial() for w in N_gens)
    if keep_aspherical:
        Q = GroupModel(Q_pres, Aspherical2Complex())
    else:
        Q = GroupModel.realize(Q_pres, max_cosets=max_cosets)
    return Q, GroupHom.by_names(pi.presentation, Q_pres)


def five_term(pi: GroupModel, N_gens: Sequence[Word], max_cosets: int = DEFAULT_MAX_COSETS) -> FiveTermReport:
    """Five-term sequence of ``N ⊴ π`` over Z, middle term from a mapping cone."""
    Q, hom = quotient_model(pi, N_gens, max_cosets)
    if pi.is_finite and Q.is_finite:
        E = source_over(pi, hom, Q.table)
        f = lift_equivariant(E, Q.resolution()).tensor(ZZ, source=pi.complex(ZZ), target=Q.complex(ZZ))
    else:
        f = homology_chain_map(pi, Q, hom)
    cone = mapping_cone(f)
    h2 = induced_homology_map(f, 2)
    h1 = induced_homology_map(f, 1)
    inc = induced_homology_map(cone_inclusion(f, cone), 2)
    delta = connecting_map(f, cone, 2)
    joints = {
        "H2(pi/N)": exact_at(h2, inc),
        "N/[pi,N]": exact_at(inc, delta),
        "H1(pi)": exact_at(delta, h1),
        "H1(pi/N)": h1.surjective,
    }
    return FiveTermReport(
        H2_pi=h2.source_homology.module, H2_Q=h2.target_homology.module,
        middle=cone.homology_group(2).module, H1_pi=h1.source_homology.module,
        H1_Q=h1.target_homology.module,
        maps={"H2": h2, "into_middle": inc, "connecting": delta, "H1": h1},
        joints=joints, tiers=(pi.tier, Q.tier))
