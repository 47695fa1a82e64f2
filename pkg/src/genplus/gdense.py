"""Density criteria for coefficient rings and basis extraction over Z[G]."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Any, Iterator, Sequence

from .groups import CayleyTable, GroupHom, pushforward_elements
from .matrix import MatrixR, is_invertible, smith_normal_form, solve
from .rings import (GaussianInteger, GaussianIntegers, IntegerRing, LocalizedIntegers, ModPField,
                    RationalField, RingError, RingSpec, ZZ)


@dataclass(frozen=True)
class DenseRingSpec:
    """A ring ``R`` with ``φ: Z[G] -> R``.

    For a constant ring ``φ`` is the augmentation (trivial action).  When
    ``coefficient_group`` is set, ``R`` stands for ``ring[H]`` and
    ``element_map[g]`` is the image of ``g`` in ``H``.
    """

    ring: RingSpec
    group: CayleyTable | None = field(default=None, compare=False)
    element_map: tuple[int, ...] | None = None
    coefficient_group: CayleyTable | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.element_map is not None:
            if self.group is None or self.coefficient_group is None:
                raise ValueError("an element map needs both groups")
            if len(self.element_map) != self.group.order:
                raise ValueError("element map must cover every group element")
            H = self.coefficient_group
            mult, mult_h = self.group.mult, H.mult
            m = self.element_map
            if any(not 0 <= x < H.order for x in m):
                raise ValueError("element map leaves the coefficient group")
            if m[0] != 0:
                raise ValueError("element map must send the identity to the identity")
            for g in range(self.group.order):
                for h in range(self.group.order):
                    if m[mult[g][h]] != mult_h[m[g]][m[h]]:
                        raise ValueError("element map is not a homomorphism")

    @property
    def trivial_action(self) -> bool:
        return self.element_map is None

    def phi(self, u: dict[int, int]) -> Any:
        """Image of ``Σ c_g g`` when the action is trivial."""
        if not self.trivial_action:
            raise ValueError("phi lands in a group ring; use phi_group")
        return self.ring.coerce(sum(u.values()))

    def phi_group(self, u: dict[int, int]) -> dict[int, Any]:
        """Image of ``Σ c_g g`` in ``ring[H]`` as a coefficient dictionary."""
        if self.trivial_action:
            return {0: self.phi(u)}
        out: dict[int, Any] = {}
        R = self.ring
        for g, c in u.items():
            h = self.element_map[g]
            out[h] = R.add(out.get(h, R.zero), R.coerce(c))
        return {h: c for h, c in out.items() if not R.is_zero(c)}


def induced_spec(spec: DenseRingSpec, quotient: GroupHom, source_table: CayleyTable) -> DenseRingSpec:
    """Compose ``φ`` with a quotient map ``G -> G/N``."""
    if spec.group is None:
        return DenseRingSpec(spec.ring, source_table)
    if quotient.target.generators != spec.group.presentation.generators:
        raise ValueError("quotient map does not land in the spec's group")
    if not quotient.is_surjective(spec.group):
        raise ValueError("quotient map is not surjective")
    q = pushforward_elements(source_table, quotient, spec.group)
    if spec.element_map is None:
        return DenseRingSpec(spec.ring, source_table)
    return DenseRingSpec(spec.ring, source_table, tuple(spec.element_map[x] for x in q),
                         spec.coefficient_group)


# -- verdicts ---------------------------------------------------------------


@dataclass(frozen=True)
class UnitCase:
    unit: Any
    system: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    solution: tuple[int, ...] | None
    reason: str

    def describe(self, ring: RingSpec) -> str:
        eqs = []
        for row, r in zip(self.system, self.rhs):
            terms = " + ".join(f"{c}*b{j + 1}" for j, c in enumerate(row) if c) or "0"
            eqs.append(f"{terms} = {r}")
        head = f"u = {ring.format(self.unit)}: " + ", ".join(eqs)
        if self.solution is None:
            return f"{head} -> no integer solution ({self.reason})"
        return f"{head} -> solution b = {list(self.solution)}"


@dataclass(frozen=True)
class Witness:
    B: MatrixR
    product: MatrixR

    kind = "witness"


@dataclass(frozen=True)
class Refuted:
    cases: tuple
    ring: RingSpec

    kind = "refuted"

    def transcript(self) -> list[str]:
        return [c.describe(self.ring) if isinstance(c, UnitCase) else str(c) for c in self.cases]


@dataclass(frozen=True)
class Unknown:
    budget: int
    searched: int

    kind = "unknown"


CriterionVerdict = Witness | Refuted | Unknown


def _make_witness(B: MatrixR, Ak: MatrixR) -> Witness:
    P = B @ Ak
    if not is_invertible(P):
        raise ArithmeticError("witness does not give an invertible product")
    return Witness(B, P)


def _value_order(m: int) -> list[int]:
    out = [0]
    for k in range(1, m + 1):
        out += [k, -k]
    return out


def coefficient_vectors(length: int, budget: int) -> Iterator[tuple[int, ...]]:
    """Integer vectors by increasing max-norm, lexicographic in the order 0, 1, -1, 2, -2, ..."""
    for m in range(budget + 1):
        values = _value_order(m)
        for v in itertools.product(values, repeat=length):
            if max((abs(x) for x in v), default=0) == m:
                yield v


def _check_invertible_square(A: MatrixR) -> None:
    if A.rows != A.cols or not is_invertible(A):
        raise RingError("matrix criterion needs an invertible square matrix")


def matrix_criterion(A: MatrixR, k: int, spec: DenseRingSpec | RingSpec, budget: int = 3) -> CriterionVerdict:
    """Look for ``B`` with ``φ(B) A_k`` invertible, ``A_k`` the first ``k`` columns of ``A``.

    With a trivial action ``φ(B)`` is an integer matrix, so the search runs
    over integer matrices.  Rings whose units can be enumerated get an
    exhaustive answer when the search fails; otherwise the verdict is
    :class:`Unknown`.
    """
    if isinstance(spec, RingSpec):
        spec = DenseRingSpec(spec)
    R = spec.ring
    if A.ring != R:
        raise RingError(f"matrix over {A.ring.token} but spec over {R.token}")
    _check_invertible_square(A)
    n = A.rows
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in 1..{n}")
    if not spec.trivial_action:
        return Unknown(budget, 0)
    Ak = A.submatrix(cols=range(k))
    searched = 0
    for v in coefficient_vectors(k * n, budget):
        searched += 1
        B = MatrixR.from_rows(R, [v[r * n:(r + 1) * n] for r in range(k)], n)
        if is_invertible(B @ Ak):
            return _make_witness(B, Ak)
    if isinstance(R, GaussianIntegers) and k == 1:
        return gaussian_refuter(A)
    if isinstance(R, ModPField):
        return _exhaust_mod_p(Ak, R, searched, budget)
    if isinstance(R, IntegerRing):
        # rows of A^{-1} always work over Z
        from .matrix import inverse
        return _make_witness(inverse(A).submatrix(rows=range(k)), Ak)
    return Unknown(budget, searched)


def _exhaust_mod_p(Ak: MatrixR, R: ModPField, searched: int, budget: int) -> CriterionVerdict:
    n, k = Ak.rows, Ak.cols
    if R.p ** (n * k) > 200000:
        return Unknown(budget, searched)
    for v in itertools.product(range(R.p), repeat=n * k):
        B = MatrixR.from_rows(R, [v[r * n:(r + 1) * n] for r in range(k)], n)
        if is_invertible(B @ Ak):
            return _make_witness(B, Ak)
    return Refuted((f"all {R.p ** (n * k)} integer matrices mod {R.p} give a singular product",), R)


def gaussian_units() -> list[GaussianInteger]:
    """The elements of norm 1 in Z[i], ordered 1, -1, i, -i."""
    return [GaussianInteger(1, 0), GaussianInteger(-1, 0), GaussianInteger(0, 1), GaussianInteger(0, -1)]


def gaussian_refuter(A: MatrixR) -> CriterionVerdict:
    """Decide ``k = 1`` over Z[i] with integer coefficients, one unit at a time.

    ``Σ b_j a_j = u`` splits into real and imaginary integer equations;
    the verdict is Refuted exactly when none of the four systems is solvable.
    """
    if not isinstance(A.ring, GaussianIntegers):
        raise RingError("gaussian_refuter needs a matrix over Z[i]")
    col = A.column(0)
    units = gaussian_units()
    system = (tuple(a.re for a in col), tuple(a.im for a in col))
    M = MatrixR.from_rows(ZZ, system, len(col))
    S = smith_normal_form(M)
    cases = []
    for u in units:
        rhs = (u.re, u.im)
        x = solve(M, rhs, S)
        if x is not None:
            B = MatrixR.from_rows(A.ring, [x], A.rows)
            return _make_witness(B, A.submatrix(cols=[0]))
        cases.append(UnitCase(u, system, rhs, None, _obstruction(M, rhs, S)))
    return Refuted(tuple(cases), A.ring)


def _obstruction(M: MatrixR, rhs, S) -> str:
    y = S.U.apply(list(rhs))
    for i, yi in enumerate(y):
        if i < S.rank:
            d = S.D.entries[i][i]
            if yi % d:
                return f"after row reduction the equation {d}*y{i + 1} = {yi} has no integer root"
        elif yi:
            return f"after row reduction the equation 0 = {yi} is inconsistent"
    return "no solution"


# -- basis extraction ---------------------------------------------------------


@dataclass(frozen=True)
class ExtractedBasis:
    """Integer combinations of the generators whose images form a basis.

    ``lifted[:, λ]`` are integer coefficients on the generators; its image
    equals ``scales[λ]`` times the requested element ``λ``.
    """

    lifted: MatrixR
    scales: tuple
    case: str


def extract_basis(images: MatrixR, coefficients: MatrixR, ring: RingSpec,
                  group_action=None) -> ExtractedBasis:
    """Absorb ``R``-coefficients into integer combinations of the generators.

    ``images`` holds integer vectors ``f(x_i ⊗ 1)`` as columns and column
    ``λ`` of ``coefficients`` expresses the basis element
    ``b_λ = Σ_i f(x_i ⊗ 1) a_{iλ}``.  Over ``Z/p`` the coefficients are
    lifted to integers; over localizations of Z the denominators are
    cleared (they are units of ``R``); over Z[i] the real part is used when
    the targets are integral.  The result is re-checked to span the same
    ``R``-module as the targets with an invertible change of basis.
    ``group_action(g, vec)`` enables the check over a group ring ``ring[G]``
    whose generators have been expanded along G-orbits.
    """
    if images.ring != ZZ:
        raise RingError("generator images must be integral")
    if coefficients.rows != images.cols:
        raise ValueError("one coefficient row per generator is required")
    R = ring
    lam = coefficients.cols
    lifted_cols: list[list[int]] = []
    scales = []
    if isinstance(R, IntegerRing):
        case = "direct"
        for col in coefficients.columns():
            lifted_cols.append([int(a) for a in col])
            scales.append(1)
    elif isinstance(R, ModPField):
        case = "lift"
        for col in coefficients.columns():
            lifted_cols.append([int(a) % R.p for a in col])
            scales.append(1)
    elif isinstance(R, (RationalField, LocalizedIntegers)):
        case = "denominator"
        for col in coefficients.columns():
            fr = [Fraction(a) for a in col]
            n_i = lcm(*(f.denominator for f in fr)) if fr else 1
            if not R.is_unit(R.coerce(n_i)):
                raise RingError(f"denominator {n_i} is not a unit of {R.token}")
            lifted_cols.append([int(f * n_i) for f in fr])
            scales.append(n_i)
    elif isinstance(R, GaussianIntegers):
        case = "real-part"
        for col in coefficients.columns():
            lifted_cols.append([a.re for a in col])
            scales.append(1)
    else:
        raise RingError(f"no extraction rule for {R.token}")
    lifted = MatrixR.from_columns(ZZ, lifted_cols, images.cols) if lam else MatrixR.zeros(ZZ, images.cols, 0)
    result = ExtractedBasis(lifted, tuple(scales), case)
    _verify_extraction(images, coefficients, result, R, group_action)
    return result


def _verify_extraction(images: MatrixR, coefficients: MatrixR, result: ExtractedBasis, R: RingSpec,
                       group_action) -> None:
    targets = images.map(R) @ coefficients
    got = (images @ result.lifted).map(R)
    if group_action is None:
        for j, s in enumerate(result.scales):
            if got.column(j) != [R.mul(R.coerce(s), x) for x in targets.column(j)]:
                raise ArithmeticError("extracted element does not match its target")
            if not R.is_unit(R.coerce(s)):
                raise ArithmeticError("rescaling factor is not a unit")
        return
    # over ring[G]: compare the R-spans of the G-orbits
    from .matrix import rank
    orbit_t, orbit_g = [], []
    for tcol, gcol in zip(targets.columns(), got.columns()):
        for g in group_action.elements:
            orbit_t.append(group_action(g, tcol))
            orbit_g.append(group_action(g, gcol))
    if not orbit_t:
        return
    T = MatrixR.from_columns(R, orbit_t, targets.rows)
    Gm = MatrixR.from_columns(R, orbit_g, targets.rows)
    r = rank(T)
    if rank(Gm) != r or rank(T.hstack(Gm)) != r:
        raise ArithmeticError("extracted elements span a different module")


class RegularAction:
    """Left multiplication of a finite group on cell-major coordinate vectors."""

    def __init__(self, table: CayleyTable):
        self.table = table
        self.elements = range(table.order)

    def __call__(self, g: int, vec: Sequence[Any]) -> list:
        n = self.table.order
        row = self.table.mult[g]
        out = list(vec)
        for i in range(len(vec) // n):
            for h in range(n):
                out[i * n + row[h]] = vec[i * n + h]
        return out
