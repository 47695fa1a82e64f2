"""Chain complexes over a Euclidean ring, their homology and induced maps.

Conventions: vectors are columns, and a boundary ``d_q : C_q -> C_{q-1}``
is a ``rank C_{q-1} x rank C_q`` matrix.  Homology generators are read off
the Smith normal form in column order, so they are stable across runs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Sequence

from .matrix import MatrixR, SmithForm, kernel_basis, smith_normal_form, solve
from .rings import RingError, RingSpec, ZZ, parse_ring


@dataclass(frozen=True)
class ModulePresentation:
    """``R^free_rank + R/(d_1) + R/(d_2) + ...`` with a divisibility chain."""

    ring: RingSpec
    free_rank: int = 0
    invariant_factors: tuple = ()

    def __post_init__(self):
        R = self.ring
        factors = []
        for d in self.invariant_factors:
            d = R.coerce(d)
            if R.is_zero(d):
                raise RingError("zero invariant factor: count it in free_rank")
            if R.is_unit(d):
                continue
            factors.append(R.normalize(d)[1])
        for a, b in zip(factors, factors[1:]):
            if not R.divides(a, b):
                raise RingError("invariant factors do not form a divisibility chain")
        object.__setattr__(self, "invariant_factors", tuple(factors))

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def __str__(self) -> str:
        return format_module(self)


def format_module(M: ModulePresentation) -> str:
    """Serialize as ``Z^r + Z/d1 + ...``; the zero module is ``0``."""
    R = M.ring
    tok = R.token
    base = f"({tok})" if tok.startswith("Z/") else tok
    parts = []
    if M.free_rank:
        parts.append(base if M.free_rank == 1 else f"{base}^{M.free_rank}")
    for d in M.invariant_factors:
        s = R.format(d)
        if not re.fullmatch(r"[0-9]+", s):
            s = f"({s})"
        parts.append(f"{base}/{s}")
    return " + ".join(parts) if parts else "0"


def parse_module(text: str, ring: RingSpec) -> ModulePresentation:
    """Inverse of :func:`format_module` for a known ring."""
    text = text.strip()
    if text == "0":
        return ModulePresentation(ring)
    tok = ring.token
    base = f"({tok})" if tok.startswith("Z/") else tok
    free = 0
    factors = []
    for part in (p.strip() for p in text.split(" + ")):
        if part == base:
            free += 1
        elif part.startswith(base + "^"):
            free += int(part[len(base) + 1:])
        elif part.startswith(base + "/"):
            s = part[len(base) + 1:]
            if s.startswith("(") and s.endswith(")"):
                s = s[1:-1]
            factors.append(ring.parse(s))
        else:
            raise ValueError(f"cannot parse module summand {part!r} over {tok}")
    return ModulePresentation(ring, free, tuple(factors))


def module_from_diagonal(ring: RingSpec, diagonal: Sequence, size: int) -> ModulePresentation:
    """Module ``R^size / (d_1 e_1, ..., d_k e_k)`` for a Smith diagonal."""
    nonzero = [d for d in diagonal if not ring.is_zero(d)]
    return ModulePresentation(ring, size - len(nonzero), tuple(nonzero))


def cokernel(A: MatrixR) -> ModulePresentation:
    """``R^cols`` modulo the row space of ``A``."""
    S = smith_normal_form(A)
    return module_from_diagonal(A.ring, S.diagonal[: S.rank], A.cols)


def module_iso_test(M1: ModulePresentation, M2: ModulePresentation) -> bool:
    if M1.ring != M2.ring:
        raise RingError(f"ring mismatch: {M1.ring} vs {M2.ring}")
    return M1.free_rank == M2.free_rank and M1.invariant_factors == M2.invariant_factors


# -- finitely generated modules given by generators and relations -------


@dataclass
class FGModule:
    """``R^n / span(relations)`` where ``relations`` is an ``n x k`` matrix."""

    ring: RingSpec
    ngens: int
    relations: MatrixR

    @classmethod
    def free(cls, ring: RingSpec, n: int) -> "FGModule":
        return cls(ring, n, MatrixR.zeros(ring, n, 0))

    def presentation(self) -> ModulePresentation:
        return cokernel(self.relations.transpose())

    def contains(self, vectors: MatrixR, extra: MatrixR | None = None) -> bool:
        """Do the columns of ``vectors`` lie in ``span(extra) + span(relations)``?"""
        span = self.relations if extra is None else extra.hstack(self.relations)
        if span.cols == 0:
            return vectors.is_zero()
        S = smith_normal_form(span)
        return all(solve(span, col, S) is not None for col in vectors.columns())


@dataclass
class ModuleMap:
    """R-linear map between :class:`FGModule` s, given on generators."""

    source: FGModule
    target: FGModule
    matrix: MatrixR  # target.ngens x source.ngens

    def image_generators(self) -> MatrixR:
        return self.matrix

    def kernel_generators(self) -> MatrixR:
        """Generators (in source coordinates) of the kernel."""
        T = self.target
        big = self.matrix.hstack(T.relations)
        K = kernel_basis(big)
        return K.submatrix(rows=range(self.source.ngens))

    @property
    def injective(self) -> bool:
        return self.source.contains(self.kernel_generators())

    @property
    def surjective(self) -> bool:
        T = self.target
        return T.contains(MatrixR.identity(T.ring, T.ngens), extra=self.matrix)

    @property
    def iso(self) -> bool:
        return self.injective and self.surjective


def exact_at(f: ModuleMap, g: ModuleMap) -> bool:
    """Exactness of ``A --f--> B --g--> C`` at ``B``: ``im f == ker g``."""
    B = f.target
    if B.ngens != g.source.ngens:
        raise ValueError("maps do not compose")
    ker = g.kernel_generators()
    im = f.matrix
    # both submodules contain the relations of B
    return B.contains(im, extra=ker) and B.contains(ker, extra=im)


# -- chain complexes -----------------------------------------------------


class ChainComplexR:
    """Free chain complex over ``ring`` in degrees ``0..top``.

    ``boundaries[q]`` is ``d_q : C_q -> C_{q-1}`` for ``q = 1..top``.
    Construction rejects ``d_{q} d_{q+1} != 0``.
    """

    def __init__(self, ring: RingSpec, ranks: Sequence[int], boundaries: dict[int, MatrixR] | None = None,
                 check: bool = True):
        self.ring = ring
        self.ranks = tuple(ranks)
        self.boundaries: dict[int, MatrixR] = {}
        boundaries = boundaries or {}
        for q in range(1, len(self.ranks)):
            d = boundaries.get(q)
            if d is None:
                d = MatrixR.zeros(ring, self.ranks[q - 1], self.ranks[q])
            if d.shape != (self.ranks[q - 1], self.ranks[q]):
                raise ValueError(f"d_{q} has shape {d.shape}, expected {(self.ranks[q - 1], self.ranks[q])}")
            if d.ring != ring:
                raise RingError(f"d_{q} is over {d.ring}, complex over {ring}")
            self.boundaries[q] = d
        if check:
            for q in range(2, len(self.ranks)):
                if not (self.boundaries[q - 1] @ self.boundaries[q]).is_zero():
                    raise ValueError(f"d_{q - 1} d_{q} != 0")
        self._homology: dict[int, HomologyGroup] = {}

    @property
    def top(self) -> int:
        return len(self.ranks) - 1

    def d(self, q: int) -> MatrixR:
        """Boundary out of degree ``q`` (zero maps outside the range)."""
        if 1 <= q <= self.top:
            return self.boundaries[q]
        src = self.ranks[q] if 0 <= q <= self.top else 0
        tgt = self.ranks[q - 1] if 0 <= q - 1 <= self.top else 0
        return MatrixR.zeros(self.ring, tgt, src)

    def rank(self, q: int) -> int:
        return self.ranks[q] if 0 <= q <= self.top else 0

    def euler_characteristic(self) -> int:
        return sum((-1) ** q * r for q, r in enumerate(self.ranks))

    def homology_group(self, q: int) -> "HomologyGroup":
        if q not in self._homology:
            self._homology[q] = HomologyGroup(self, q)
        return self._homology[q]

    def tensor(self, ring: RingSpec) -> "ChainComplexR":
        """Change of rings along the canonical map from Z (entries must be integers)."""
        return ChainComplexR(ring, self.ranks, {q: d.map(ring) for q, d in self.boundaries.items()})


class HomologyGroup:
    """``H_q = ker d_q / im d_{q+1}`` with canonical generators and coordinates."""

    def __init__(self, C: ChainComplexR, q: int):
        if not 0 <= q <= C.top:
            raise ValueError(f"degree {q} outside 0..{C.top}")
        R = C.ring
        self.complex = C
        self.degree = q
        self.ring = R
        n = C.rank(q)
        dq = C.d(q)
        S1 = smith_normal_form(dq)
        r = S1.rank
        self._V = S1.V
        self._Vinv = S1.V_inv
        self._r = r
        z = n - r  # number of cycle basis vectors: columns r.. of V
        B = C.d(q + 1)
        Bz = (S1.V_inv @ B).submatrix(rows=range(r, n)) if B.cols else MatrixR.zeros(R, z, 0)
        S2 = smith_normal_form(Bz)
        self._S2 = S2
        diag = S2.diagonal
        keep = []
        orders = []
        for i in range(z):
            d = diag[i] if i < S2.rank else R.zero
            if i < S2.rank and R.is_unit(d):
                continue
            keep.append(i)
            orders.append(d)
        self._keep = keep
        self.orders = orders  # zero entry = free generator
        # generator i is column keep[i] of Z @ U2^{-1}
        Z = self._V.submatrix(cols=range(r, n))
        G = Z @ S2.U_inv if z else MatrixR.zeros(R, n, 0)
        self.generators = G.submatrix(cols=keep)
        self.module = ModulePresentation(
            R, sum(1 for d in orders if R.is_zero(d)), tuple(d for d in orders if not R.is_zero(d)))

    @property
    def ngens(self) -> int:
        return len(self._keep)

    def coordinates(self, cycle: Sequence[Any]) -> list:
        """Coordinates of a cycle's class on the canonical generators (torsion reduced)."""
        R = self.ring
        c = self._Vinv.apply(list(cycle))
        for i in range(self._r):
            if not R.is_zero(c[i]):
                raise ValueError("vector is not a cycle")
        w = self._S2.U.apply(c[self._r:])
        out = []
        for i, d in zip(self._keep, self.orders):
            x = w[i]
            if not R.is_zero(d):
                x = R.divmod(x, d)[1]
            out.append(x)
        return out

    def as_fgmodule(self) -> FGModule:
        R = self.ring
        k = self.ngens
        rels = [i for i, d in enumerate(self.orders) if not R.is_zero(d)]
        M = MatrixR.zeros(R, k, len(rels)).entries
        for c, i in enumerate(rels):
            M[i][c] = self.orders[i]
        return FGModule(R, k, MatrixR(R, k, len(rels), M))


def homology(C: ChainComplexR, q: int) -> ModulePresentation:
    return C.homology_group(q).module


def homology_all(C: ChainComplexR) -> list[ModulePresentation]:
    return [homology(C, q) for q in range(C.top + 1)]


class ChainMapR:
    """Degreewise matrices ``f_q : C_q -> C'_q`` commuting with boundaries."""

    def __init__(self, source: ChainComplexR, target: ChainComplexR, components: dict[int, MatrixR],
                 check: bool = True):
        if source.ring != target.ring:
            raise RingError("chain map between complexes over different rings")
        self.source = source
        self.target = target
        R = source.ring
        self.components: dict[int, MatrixR] = {}
        for q in range(max(source.top, target.top) + 1):
            f = components.get(q)
            if f is None:
                f = MatrixR.zeros(R, target.rank(q), source.rank(q))
            if f.shape != (target.rank(q), source.rank(q)):
                raise ValueError(f"f_{q} has shape {f.shape}")
            self.components[q] = f
        if check:
            for q in range(1, max(source.top, target.top) + 1):
                lhs = target.d(q) @ self.components[q]
                rhs = self.components[q - 1] @ source.d(q)
                if lhs != rhs:
                    raise ValueError(f"chain map does not commute in degree {q}")

    def f(self, q: int) -> MatrixR:
        return self.components.get(q) or MatrixR.zeros(self.source.ring, self.target.rank(q), self.source.rank(q))

    @classmethod
    def identity(cls, C: ChainComplexR) -> "ChainMapR":
        return cls(C, C, {q: MatrixR.identity(C.ring, C.rank(q)) for q in range(C.top + 1)})


@dataclass
class InducedMap(ModuleMap):
    """Map on homology in one degree, on canonical generators."""

    degree: int = 0
    source_homology: HomologyGroup | None = field(default=None, repr=False)
    target_homology: HomologyGroup | None = field(default=None, repr=False)

    @property
    def flags(self) -> dict[str, bool]:
        inj, sur = self.injective, self.surjective
        return {"injective": inj, "surjective": sur, "iso": inj and sur}


def induced_homology_map(f: ChainMapR, q: int) -> InducedMap:
    Hs = f.source.homology_group(q)
    Ht = f.target.homology_group(q)
    R = f.source.ring
    fq = f.f(q)
    cols = [Ht.coordinates(fq.apply(g)) for g in Hs.generators.columns()]
    M = MatrixR.from_columns(R, cols, Ht.ngens) if cols else MatrixR.zeros(R, Ht.ngens, 0)
    return InducedMap(source=Hs.as_fgmodule(), target=Ht.as_fgmodule(), matrix=M, degree=q,
                      source_homology=Hs, target_homology=Ht)


def mapping_cone(f: ChainMapR) -> ChainComplexR:
    """``cone_n = B_n + A_{n-1}`` with ``d(b, a) = (d b + f a, -d a)``."""
    A, B = f.source, f.target
    R = A.ring
    top = max(B.top, A.top + 1)
    ranks = [B.rank(n) + A.rank(n - 1) for n in range(top + 1)]
    bds = {}
    for n in range(1, top + 1):
        dB = B.d(n)
        fa = f.f(n - 1)
        dA = -A.d(n - 1) if n - 1 >= 1 else MatrixR.zeros(R, A.rank(n - 2), A.rank(n - 1))
        top_block = dB.hstack(fa)
        bottom = MatrixR.zeros(R, A.rank(n - 2), B.rank(n)).hstack(dA)
        bds[n] = top_block.vstack(bottom)
    return ChainComplexR(R, ranks, bds)


def cone_inclusion(f: ChainMapR, cone: ChainComplexR) -> ChainMapR:
    """``B -> cone(f)``, ``b -> (b, 0)``."""
    A, B = f.source, f.target
    R = A.ring
    comps = {}
    for n in range(cone.top + 1):
        comps[n] = MatrixR.identity(R, B.rank(n)).vstack(MatrixR.zeros(R, A.rank(n - 1), B.rank(n)))
    return ChainMapR(B, cone, comps)


def shift_down(A: ChainComplexR, top: int) -> ChainComplexR:
    """``A[-1]_n = A_{n-1}`` with differential ``-d``, up to degree ``top``."""
    R = A.ring
    ranks = [A.rank(n - 1) for n in range(top + 1)]
    bds = {n: -A.d(n - 1) for n in range(2, top + 1)}
    return ChainComplexR(R, ranks, bds)


def cone_projection(f: ChainMapR, cone: ChainComplexR) -> tuple[ChainMapR, ChainComplexR]:
    """``cone(f) -> A[-1]``, ``(b, a) -> a``; H_n of the target is H_{n-1}(A)."""
    A, B = f.source, f.target
    R = A.ring
    shifted = shift_down(A, cone.top)
    comps = {n: MatrixR.zeros(R, A.rank(n - 1), B.rank(n)).hstack(MatrixR.identity(R, A.rank(n - 1)))
             for n in range(cone.top + 1)}
    return ChainMapR(cone, shifted, comps), shifted


def integer_complex(ranks: Sequence[int], boundaries: dict[int, Sequence[Sequence[int]]]) -> ChainComplexR:
    """Convenience constructor for complexes over Z from nested lists."""
    return ChainComplexR(ZZ, ranks, {q: MatrixR.from_rows(ZZ, rows, ranks[q]) for q, rows in boundaries.items()})


__all__ = [
    "ModulePresentation", "format_module", "parse_module", "cokernel", "module_iso_test",
    "FGModule", "ModuleMap", "exact_at", "ChainComplexR", "HomologyGroup", "homology",
    "homology_all", "ChainMapR", "InducedMap", "induced_homology_map", "mapping_cone",
    "cone_inclusion", "cone_projection", "shift_down", "integer_complex", "SmithForm", "parse_ring",
]
