"""Dense exact matrices over the Euclidean rings and Smith normal form."""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .rings import RingError, RingSpec, Scalar, ZZ


class MatrixR:
    """Row-major dense matrix of raw ring payloads.

    Entries are stored as raw payloads of ``ring`` (``int``, ``Fraction``,
    ``GaussianInteger``); use :meth:`scalar` for a tagged :class:`Scalar`.
    Treat instances as immutable: operations return new matrices.
    """

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: RingSpec, rows: int, cols: int, entries: list[list[Any]] | None = None):
        self.ring = ring
        self.rows = rows
        self.cols = cols
        if entries is None:
            z = ring.zero
            entries = [[z] * cols for _ in range(rows)]
        if len(entries) != rows or any(len(r) != cols for r in entries):
            raise ValueError(f"entries do not form a {rows}x{cols} matrix")
        self.entries = entries

    @classmethod
    def from_rows(cls, ring: RingSpec, rows: Sequence[Sequence[Any]], cols: int | None = None) -> "MatrixR":
        rows = list(rows)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(ring, len(rows), cols, [[ring.coerce(x) for x in r] for r in rows])

    @classmethod
    def from_columns(cls, ring: RingSpec, columns: Sequence[Sequence[Any]], rows: int) -> "MatrixR":
        cols = list(columns)
        return cls.from_rows(ring, [[c[i] for c in cols] for i in range(rows)], len(cols))

    @classmethod
    def identity(cls, ring: RingSpec, n: int) -> "MatrixR":
        z, o = ring.zero, ring.one
        return cls(ring, n, n, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring: RingSpec, rows: int, cols: int) -> "MatrixR":
        return cls(ring, rows, cols)

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def scalar(self, i: int, j: int) -> Scalar:
        return Scalar(self.ring, self.entries[i][j])

    def copy(self) -> "MatrixR":
        return MatrixR(self.ring, self.rows, self.cols, [list(r) for r in self.entries])

    def column(self, j: int) -> list:
        return [r[j] for r in self.entries]

    def columns(self) -> list[list]:
        return [self.column(j) for j in range(self.cols)]

    def transpose(self) -> "MatrixR":
        return MatrixR(self.ring, self.cols, self.rows, [self.column(j) for j in range(self.cols)])

    @property
    def T(self) -> "MatrixR":
        return self.transpose()

    def submatrix(self, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None) -> "MatrixR":
        ri = list(range(self.rows)) if rows is None else list(rows)
        ci = list(range(self.cols)) if cols is None else list(cols)
        return MatrixR(self.ring, len(ri), len(ci), [[self.entries[i][j] for j in ci] for i in ri])

    def hstack(self, other: "MatrixR") -> "MatrixR":
        if self.rows != other.rows:
            raise ValueError("hstack: row counts differ")
        return MatrixR(self.ring, self.rows, self.cols + other.cols,
                       [a + b for a, b in zip(self.entries, other.entries)])

    def vstack(self, other: "MatrixR") -> "MatrixR":
        if self.cols != other.cols:
            raise ValueError("vstack: column counts differ")
        return MatrixR(self.ring, self.rows + other.rows, self.cols,
                       [list(r) for r in self.entries] + [list(r) for r in other.entries])

    def map(self, ring: RingSpec, fn=None) -> "MatrixR":
        """Coerce entries into ``ring`` (optionally through ``fn``)."""
        fn = fn or ring.coerce
        return MatrixR(ring, self.rows, self.cols, [[fn(x) for x in r] for r in self.entries])

    def __matmul__(self, other: "MatrixR") -> "MatrixR":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.ring != other.ring:
            raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
        R = self.ring
        out = [[R.zero] * other.cols for _ in range(self.rows)]
        ocols = [other.column(j) for j in range(other.cols)]
        if R == ZZ:
            for i, row in enumerate(self.entries):
                nz = [(k, a) for k, a in enumerate(row) if a]
                if not nz:
                    continue
                out[i] = [sum(a * col[k] for k, a in nz) for col in ocols]
            return MatrixR(R, self.rows, other.cols, out)
        add, mul, isz = R.add, R.mul, R.is_zero
        for i, row in enumerate(self.entries):
            nz = [(k, a) for k, a in enumerate(row) if not isz(a)]
            if not nz:
                continue
            orow = out[i]
            for j, col in enumerate(ocols):
                acc = R.zero
                for k, a in nz:
                    b = col[k]
                    if not isz(b):
                        acc = add(acc, mul(a, b))
                orow[j] = acc
        return MatrixR(R, self.rows, other.cols, out)

    def apply(self, vec: Sequence[Any]) -> list:
        """Matrix times column vector."""
        R = self.ring
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        nz = [(k, v) for k, v in enumerate(vec) if not R.is_zero(v)]
        out = []
        for row in self.entries:
            acc = R.zero
            for k, v in nz:
                a = row[k]
                if not R.is_zero(a):
                    acc = R.add(acc, R.mul(a, v))
            out.append(acc)
        return out

    def __add__(self, other: "MatrixR") -> "MatrixR":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        R = self.ring
        return MatrixR(R, self.rows, self.cols,
                       [[R.add(a, b) for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "MatrixR":
        R = self.ring
        return MatrixR(R, self.rows, self.cols, [[R.neg(a) for a in r] for r in self.entries])

    def __sub__(self, other: "MatrixR") -> "MatrixR":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MatrixR):
            return NotImplemented
        return (self.ring == other.ring and self.shape == other.shape
                and all(self.ring.eq(a, b) for r, s in zip(self.entries, other.entries) for a, b in zip(r, s)))

    def __hash__(self):
        return hash((self.ring, self.shape, tuple(tuple(r) for r in self.entries)))

    def is_zero(self) -> bool:
        isz = self.ring.is_zero
        return all(isz(a) for r in self.entries for a in r)

    def is_diagonal(self) -> bool:
        isz = self.ring.is_zero
        return all(isz(a) for i, r in enumerate(self.entries) for j, a in enumerate(r) if i != j)

    def diagonal(self) -> list:
        return [self.entries[i][i] for i in range(min(self.rows, self.cols))]

    def det(self):
        """Determinant by fraction-free (Bareiss) elimination for domains."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        R = self.ring
        n = self.rows
        if n == 0:
            return R.one
        M = [list(r) for r in self.entries]
        sign = R.one
        prev = R.one
        for k in range(n - 1):
            if R.is_zero(M[k][k]):
                for i in range(k + 1, n):
                    if not R.is_zero(M[i][k]):
                        M[k], M[i] = M[i], M[k]
                        sign = R.neg(sign)
                        break
                else:
                    return R.zero
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    num = R.sub(R.mul(M[i][j], M[k][k]), R.mul(M[i][k], M[k][j]))
                    M[i][j] = R.exact_div(num, prev)
            prev = M[k][k]
        return R.mul(sign, M[n - 1][n - 1])

    def __repr__(self):
        body = ", ".join("[" + ", ".join(self.ring.format(a) for a in r) + "]" for r in self.entries)
        return f"{self.ring.token}: [{body}]"

    def to_literal(self) -> str:
        body = ",".join("[" + ",".join(self.ring.format(a) for a in r) + "]" for r in self.entries)
        return f"{self.ring.token}: [{body}]"


@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == D`` with unimodular ``U``, ``V`` and a divisibility chain on ``D``.

    ``U_inv`` and ``V_inv`` are the exact inverses of ``U`` and ``V``.
    """

    U: MatrixR
    D: MatrixR
    V: MatrixR
    U_inv: MatrixR
    V_inv: MatrixR
    rank: int

    @property
    def diagonal(self) -> list:
        return self.D.diagonal()


def smith_normal_form(A: MatrixR) -> SmithForm:
    """Smith normal form with pivot = smallest nonzero norm, earliest position.

    Runs over any ring implementing the Euclidean contract (Z, Q, Z/p,
    Z[1/S], Z[i]).  Pivots are normalized to canonical associates.
    """
    R = A.ring
    m, n = A.rows, A.cols
    D = [list(r) for r in A.entries]
    U = MatrixR.identity(R, m).entries
    Ui = MatrixR.identity(R, m).entries
    V = MatrixR.identity(R, n).entries
    Vi = MatrixR.identity(R, n).entries
    add, sub, mul, isz, norm = R.add, R.sub, R.mul, R.is_zero, R.norm

    def row_swap(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]
        for r in Ui:
            r[i], r[j] = r[j], r[i]

    def col_swap(i, j):
        for r in D:
            r[i], r[j] = r[j], r[i]
        for r in V:
            r[i], r[j] = r[j], r[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def row_addmul(dst, src, c, start=0):
        # row_dst += c * row_src ; inverse: col_src of Ui -= c * col_dst
        rd, rs = D[dst], D[src]
        for k in range(start, n):
            if not isz(rs[k]):
                rd[k] = add(rd[k], mul(c, rs[k]))
        ud, us = U[dst], U[src]
        for k in range(m):
            if not isz(us[k]):
                ud[k] = add(ud[k], mul(c, us[k]))
        for r in Ui:
            if not isz(r[dst]):
                r[src] = sub(r[src], mul(c, r[dst]))

    def col_addmul(dst, src, c, start=0):
        # col_dst += c * col_src ; inverse: row_src of Vi -= c * row_dst
        for k in range(start, m):
            r = D[k]
            if not isz(r[src]):
                r[dst] = add(r[dst], mul(c, r[src]))
        for r in V:
            if not isz(r[src]):
                r[dst] = add(r[dst], mul(c, r[src]))
        vd, vs = Vi[dst], Vi[src]
        for k in range(n):
            if not isz(vd[k]):
                vs[k] = sub(vs[k], mul(c, vd[k]))

    def row_scale(i, u, uinv):
        D[i] = [mul(u, a) for a in D[i]]
        U[i] = [mul(u, a) for a in U[i]]
        for r in Ui:
            r[i] = mul(r[i], uinv)

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero norm in the trailing block, earliest row-major
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                a = row[j]
                if not isz(a):
                    nv = norm(a)
                    if best is None or nv < best[0]:
                        best = (nv, i, j)
                        if nv == 1:
                            break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        while True:
            changed = False
            p = D[t][t]
            for i in range(t + 1, m):
                a = D[i][t]
                if isz(a):
                    continue
                q, r = R.divmod(a, p)
                row_addmul(i, t, R.neg(q), t)
                if not isz(r):
                    changed = True
            for j in range(t + 1, n):
                a = D[t][j]
                if isz(a):
                    continue
                q, r = R.divmod(a, p)
                col_addmul(j, t, R.neg(q), t)
                if not isz(r):
                    changed = True
            if changed:
                # a remainder of smaller norm survived: move it to the pivot
                best = None
                for i in range(t + 1, m):
                    a = D[i][t]
                    if not isz(a) and (best is None or norm(a) < best[0]):
                        best = (norm(a), i, t)
                for j in range(t + 1, n):
                    a = D[t][j]
                    if not isz(a) and (best is None or norm(a) < best[0]):
                        best = (norm(a), t, j)
                _, bi, bj = best
                if bi != t:
                    row_swap(t, bi)
                if bj != t:
                    col_swap(t, bj)
                continue
            # divisibility: every trailing entry must be a multiple of the pivot
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    a = row[j]
                    if not isz(a) and not isz(R.divmod(a, p)[1]):
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_addmul(t, bad, R.one, t)
        u, _ = R.normalize(D[t][t])
        if not R.eq(u, R.one):
            row_scale(t, u, R.unit_inverse(u))
        t += 1

    mk = lambda rows, k, l: MatrixR(R, k, l, rows)
    return SmithForm(U=mk(U, m, m), D=mk(D, m, n), V=mk(V, n, n),
                     U_inv=mk(Ui, m, m), V_inv=mk(Vi, n, n), rank=t)


def invariant_factors(A: MatrixR) -> list:
    """Nonzero diagonal entries of the Smith form (units included)."""
    S = smith_normal_form(A)
    return S.diagonal[: S.rank]


def kernel_basis(A: MatrixR) -> MatrixR:
    """Columns form an R-basis of ``{x : A x = 0}`` (saturated over Z)."""
    S = smith_normal_form(A)
    return S.V.submatrix(cols=range(S.rank, A.cols))


def solve(A: MatrixR, b: Sequence[Any], smith: SmithForm | None = None) -> list | None:
    """One solution ``x`` of ``A x = b`` over the ring of ``A``, or ``None``."""
    R = A.ring
    S = smith or smith_normal_form(A)
    y = S.U.apply(list(b))
    z = [R.zero] * A.cols
    for i, yi in enumerate(y):
        if i < S.rank:
            d = S.D.entries[i][i]
            q, r = R.divmod(yi, d)
            if not R.is_zero(r):
                return None
            z[i] = q
        elif not R.is_zero(yi):
            return None
    return S.V.apply(z)


def rank(A: MatrixR) -> int:
    return smith_normal_form(A).rank


def is_invertible(A: MatrixR) -> bool:
    """Square with every invariant factor a unit."""
    if A.rows != A.cols:
        return False
    S = smith_normal_form(A)
    return S.rank == A.rows and all(A.ring.is_unit(d) for d in S.diagonal)


def inverse(A: MatrixR) -> MatrixR:
    """Exact inverse of an invertible square matrix."""
    if not is_invertible(A):
        raise RingError("matrix is not invertible over its ring")
    S = smith_normal_form(A)
    R = A.ring
    Dinv = MatrixR(R, A.rows, A.rows, [[R.unit_inverse(S.D.entries[i][i]) if i == j else R.zero
                                        for j in range(A.rows)] for i in range(A.rows)])
    return S.V @ Dinv @ S.U


class IntegerLattice:
    """Incremental integer lattice in Z^N kept in row-echelon form.

    Supports membership tests and adding generators; ``rank`` is the
    number of echelon rows.
    """

    __slots__ = ("N", "basis", "pivots")

    def __init__(self, ambient_dimension: int):
        self.N = ambient_dimension
        self.basis: list[list[int]] = []
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.basis)

    def __contains__(self, vec) -> bool:
        v = list(vec)
        for row, j in zip(self.basis, self.pivots):
            first = next((k for k in range(self.N) if v[k]), None)
            if first is None:
                return True
            if first < j:
                return False
            if first > j:
                continue
            a, b = row[j], v[j]
            if b % a:
                return False
            q = b // a
            for k in range(j, self.N):
                if row[k]:
                    v[k] -= q * row[k]
        return not any(v)

    def add_vector(self, vec) -> None:
        vec = list(vec)
        while True:
            j = next((k for k in range(self.N) if vec[k]), None)
            if j is None:
                return
            where = bisect_left(self.pivots, j)
            if where == len(self.pivots) or self.pivots[where] != j:
                if vec[j] < 0:
                    vec = [-x for x in vec]
                self.basis.insert(where, vec)
                self.pivots.insert(where, j)
                return
            row = self.basis[where]
            a, b = row[j], vec[j]
            if b % a == 0:
                q = b // a
                vec = [x - q * y for x, y in zip(vec, row)]
                continue
            # extended gcd step replaces the pivot row by a row with pivot gcd(a, b)
            x, y, g = _xgcd(a, b)
            new_row = [x * s + y * t for s, t in zip(row, vec)]
            vec = [(-b // g) * s + (a // g) * t for s, t in zip(row, vec)]
            self.basis[where] = new_row


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g
