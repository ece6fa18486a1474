"""Exact integer and rational linear algebra.

Everything here works on Python integers (arbitrary precision) and
``fractions.Fraction``. Matrices are dense and small, a few hundred rows
at most, so plain lists of lists are the working representation and
:class:`IntMatrix` is an immutable wrapper around a tuple of rows.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


class SingularMatrixError(ArithmeticError):
    pass


class IntMatrix:
    """Immutable dense integer matrix, row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]], cols: int | None = None):
        rows = tuple(tuple(operator.index(x) for x in row) for row in data)
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for row in rows:
            if len(row) != cols:
                raise DimensionError("ragged rows")
        self._data = rows
        self.rows = len(rows)
        self.cols = cols

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(([int(i == j) for j in range(n)] for i in range(n)), cols=n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(([0] * cols for _ in range(rows)), cols=cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls(([col[i] for col in columns] for i in range(rows)), cols=len(columns))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        if isinstance(ij, tuple):
            i, j = ij
            return self._data[i][j]
        return self._data[ij]

    def __iter__(self):
        return iter(self._data)

    def __eq__(self, other):
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        return hash((self.cols, self._data))

    def __repr__(self):
        return f"IntMatrix({[list(r) for r in self._data]!r}, cols={self.cols})"

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._data]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self._data), cols=self.rows) if self.rows else IntMatrix.zeros(self.cols, 0)

    def __matmul__(self, other):
        if isinstance(other, IntMatrix):
            if self.cols != other.rows:
                raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
            ocols = other.columns()
            return IntMatrix(
                ([sum(a * b for a, b in zip(row, col)) for col in ocols] for row in self._data),
                cols=other.cols,
            )
        vec = list(other)
        if len(vec) != self.cols:
            raise DimensionError(f"cannot multiply {self.shape} by vector of length {len(vec)}")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self._data)

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix((self._data[i] for i in idx), cols=self.cols)

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix(([row[j] for j in idx] for row in self._data), cols=len(idx))

    def hstack(self, other: IntMatrix) -> IntMatrix:
        if self.rows != other.rows:
            raise DimensionError("row counts differ")
        return IntMatrix((a + b for a, b in zip(self._data, other._data)), cols=self.cols + other.cols)


def _as_matrix(A) -> IntMatrix:
    return A if isinstance(A, IntMatrix) else IntMatrix(A)


@dataclass(frozen=True)
class GroupStructure:
    """Finitely generated abelian group ``Z^free_rank + Z/d1 + ... + Z/dk``.

    ``invariant_factors`` are all > 1 and each divides the next.
    """

    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self):
        d = self.invariant_factors
        if any(x <= 1 for x in d):
            raise ValueError("invariant factors must exceed 1")
        if any(b % a for a, b in zip(d, d[1:])):
            raise ValueError(f"divisibility chain broken: {d}")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @property
    def order(self) -> int:
        """Order of the torsion part."""
        return prod(self.invariant_factors)

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors and self.free_rank == 0

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) or "0"


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == S`` with U, V unimodular and S in Smith form."""

    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.S[i, i] for i in range(min(self.S.shape)))

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def det_exact(A) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    A = _as_matrix(A)
    n = A.rows
    if n != A.cols:
        raise DimensionError(f"determinant of non-square {A.shape} matrix")
    a = A.tolist()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            if aik:
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            else:
                # aik == 0 reduces to a pure rescale of the row
                for j in range(k + 1, n):
                    if rowi[j]:
                        rowi[j] = rowi[j] * akk // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1] if n else 1


def _swap_rows(m, i, j):
    m[i], m[j] = m[j], m[i]


def _swap_cols(m, i, j):
    for row in m:
        row[i], row[j] = row[j], row[i]


def _row_axpy(m, dst, src, q):
    """row[dst] -= q * row[src]"""
    if q:
        rd, rs = m[dst], m[src]
        for k, v in enumerate(rs):
            if v:
                rd[k] -= q * v


def _col_axpy(m, dst, src, q):
    """col[dst] -= q * col[src]"""
    if q:
        for row in m:
            if row[src]:
                row[dst] -= q * row[src]


def _identity_list(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def snf(A) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting picks the entry of least absolute value in the active block.
    After a pivot clears its row and column, any entry it fails to divide
    is folded back into the pivot row, which strictly shrinks the pivot.
    """
    A = _as_matrix(A)
    r, c = A.shape
    a = A.tolist()
    U = _identity_list(r)
    V = _identity_list(c)

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            row = a[i]
            for j in range(t, c):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        _swap_rows(a, t, i)
        _swap_rows(U, t, i)
        _swap_cols(a, t, j)
        _swap_cols(V, t, j)

        while True:
            piv = a[t][t]
            clean = True
            for i in range(t + 1, r):
                if a[i][t]:
                    q = a[i][t] // piv
                    _row_axpy(a, i, t, q)
                    _row_axpy(U, i, t, q)
                    if a[i][t]:
                        clean = False
            for j in range(t + 1, c):
                if a[t][j]:
                    q = a[t][j] // piv
                    _col_axpy(a, j, t, q)
                    _col_axpy(V, j, t, q)
                    if a[t][j]:
                        clean = False
            if not clean:
                cands = [(abs(a[i][t]), i, t) for i in range(t + 1, r) if a[i][t]]
                cands += [(abs(a[t][j]), t, j) for j in range(t + 1, c) if a[t][j]]
                _, i, j = min(cands)
                if i != t:
                    _swap_rows(a, t, i)
                    _swap_rows(U, t, i)
                else:
                    _swap_cols(a, t, j)
                    _swap_cols(V, t, j)
                continue
            bad = next(
                (i for i in range(t + 1, r) if any(a[i][j] % piv for j in range(t + 1, c))),
                None,
            )
            if bad is None:
                break
            _row_axpy(a, t, bad, -1)
            _row_axpy(U, t, bad, -1)

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            U[t] = [-x for x in U[t]]

    return SmithDecomposition(IntMatrix(U, cols=r), IntMatrix(a, cols=c), IntMatrix(V, cols=c))


def hnf(A) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form: returns ``(H, U)`` with ``U @ A == H``.

    Pivots are positive, entries above each pivot lie in ``[0, pivot)``,
    zero rows sit at the bottom. Two matrices have the same row lattice
    exactly when their nonzero HNF rows agree.
    """
    A = _as_matrix(A)
    r, c = A.shape
    h = A.tolist()
    U = _identity_list(r)
    pr = 0
    for j in range(c):
        if pr == r:
            break
        while True:
            nz = [i for i in range(pr, r) if h[i][j]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][j]))
            _swap_rows(h, pr, i0)
            _swap_rows(U, pr, i0)
            done = True
            for i in range(pr + 1, r):
                if h[i][j]:
                    q = h[i][j] // h[pr][j]
                    _row_axpy(h, i, pr, q)
                    _row_axpy(U, i, pr, q)
                    if h[i][j]:
                        done = False
            if done:
                break
        if h[pr][j] == 0:
            continue
        if h[pr][j] < 0:
            h[pr] = [-x for x in h[pr]]
            U[pr] = [-x for x in U[pr]]
        piv = h[pr][j]
        for i in range(pr):
            q = h[i][j] // piv
            _row_axpy(h, i, pr, q)
            _row_axpy(U, i, pr, q)
        pr += 1
    return IntMatrix(h, cols=c), IntMatrix(U, cols=r)


def _rational_gauss_jordan(A: IntMatrix, rhs: list[list[Fraction]]) -> list[list[Fraction]]:
    n = A.rows
    if n != A.cols:
        raise DimensionError(f"expected square matrix, got {A.shape}")
    a = [[Fraction(x) for x in row] + extra for row, extra in zip(A, rhs)]
    width = len(a[0]) if a else 0
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[k], a[piv] = a[piv], a[k]
        inv = 1 / a[k][k]
        rowk = a[k] = [x * inv for x in a[k]]
        for i in range(n):
            f = a[i][k]
            if i != k and f:
                rowi = a[i]
                for j in range(k, width):
                    if rowk[j]:
                        rowi[j] -= f * rowk[j]
    return [row[n:] for row in a]


def solve_rational(A, b: Sequence[int]) -> tuple[Fraction, ...]:
    """Exact solution of ``A x = b`` for square nonsingular A."""
    A = _as_matrix(A)
    if len(b) != A.rows:
        raise DimensionError("right-hand side length mismatch")
    sol = _rational_gauss_jordan(A, [[Fraction(x)] for x in b])
    return tuple(row[0] for row in sol)


def inverse_rational(A) -> list[list[Fraction]]:
    A = _as_matrix(A)
    n = A.rows
    return _rational_gauss_jordan(A, [[Fraction(int(i == j)) for j in range(n)] for i in range(n)])


def kernel_basis(A) -> IntMatrix:
    """Columns form a basis of the integer kernel ``{x : A x = 0}``.

    Read off from the row HNF of ``A.T``: rows of the transform that land
    on zero rows span the kernel, and since the transform is unimodular
    the resulting lattice is saturated.
    """
    A = _as_matrix(A)
    H, U = hnf(A.T)
    rank = sum(1 for row in H if any(row))
    return IntMatrix.from_columns([U[i] for i in range(rank, A.cols)], rows=A.cols)


def rank(A) -> int:
    H, _ = hnf(_as_matrix(A))
    return sum(1 for row in H if any(row))


def cokernel_structure(A) -> GroupStructure:
    """Structure of ``Z^rows / (column span of A)``."""
    A = _as_matrix(A)
    d = snf(A).diagonal
    rk = sum(1 for x in d if x)
    return GroupStructure(tuple(x for x in d if x > 1), A.rows - rk)


def lattice_basis(B) -> IntMatrix:
    """Canonical basis (as rows) of the lattice generated by the columns of B."""
    B = _as_matrix(B)
    H, _ = hnf(B.T)
    return IntMatrix((row for row in H if any(row)), cols=B.rows)


def lattice_equal(B1, B2) -> bool:
    B1, B2 = _as_matrix(B1), _as_matrix(B2)
    if B1.rows != B2.rows:
        raise DimensionError(f"ambient dimensions differ: {B1.rows} vs {B2.rows}")
    return lattice_basis(B1) == lattice_basis(B2)


def lattice_index(B) -> int:
    """Index of the column lattice of B in ``Z^rows``; 0 if not full rank."""
    g = cokernel_structure(B)
    return 0 if g.free_rank else g.order
