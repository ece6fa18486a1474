from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import in_row_lattice, invariant_factors, leibniz_det
from sandpile.graph import rectangle_graph
from sandpile.linalg import (
    DimensionError,
    GroupStructure,
    IntMatrix,
    SingularMatrixError,
    cokernel_structure,
    det_exact,
    hnf,
    kernel_basis,
    lattice_equal,
    rank,
    snf,
    solve_rational,
)

GAMMA33 = [[-4, 1, 1, 0], [1, -4, 0, 1], [1, 0, -4, 1], [0, 1, 1, -4]]


def matrices(max_rows=4, max_cols=4, lo=-9, hi=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def square_matrices(max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)
    )


def is_snf_diagonal(S):
    r, c = S.shape
    diag = [S[i, i] for i in range(min(r, c))]
    off = all(S[i, j] == 0 for i in range(r) for j in range(c) if i != j)
    chain = all(d >= 0 for d in diag) and all(
        (b % a == 0) if a else b == 0 for a, b in zip(diag, diag[1:])
    )
    return off and chain


class TestDet:
    def test_examples(self):
        assert det_exact([[-4]]) == -4
        assert det_exact(IntMatrix.identity(3)) == 1
        assert det_exact(GAMMA33) == 192

    def test_non_square(self):
        with pytest.raises(DimensionError):
            det_exact([[1, 2]])

    def test_empty(self):
        assert det_exact(IntMatrix.zeros(0, 0)) == 1

    @given(square_matrices(5))
    def test_matches_leibniz(self, a):
        assert det_exact(a) == leibniz_det(a)

    def test_big_entries(self):
        a = [[10**40, 3], [7, 10**30 + 1]]
        assert det_exact(a) == 10**40 * (10**30 + 1) - 21


class TestSNF:
    def test_examples(self):
        assert snf([[-4]]).S == IntMatrix([[4]])
        z = snf(IntMatrix.zeros(2, 3))
        assert z.S == IntMatrix.zeros(2, 3)
        d = snf(rectangle_graph(3, 3).laplacian).diagonal
        assert d == (1, 1, 8, 24)
        assert d[2] * d[3] == det_exact(GAMMA33)

    @settings(max_examples=200)
    @given(matrices())
    def test_decomposition(self, a):
        A = IntMatrix(a)
        dec = snf(A)
        assert dec.U @ A @ dec.V == dec.S
        assert abs(det_exact(dec.U)) == 1
        assert abs(det_exact(dec.V)) == 1
        assert is_snf_diagonal(dec.S)

    @settings(max_examples=100)
    @given(matrices(max_rows=3, max_cols=3))
    def test_against_determinantal_divisors(self, a):
        assert list(snf(a).diagonal) == invariant_factors(a)

    @given(square_matrices(4))
    def test_product_is_det(self, a):
        d = det_exact(a)
        if d:
            diag = snf(a).diagonal
            prod = 1
            for x in diag:
                prod *= x
            assert prod == abs(d)


class TestHNF:
    def test_identity(self):
        H, U = hnf(IntMatrix.identity(3))
        assert H == IntMatrix.identity(3) and U == IntMatrix.identity(3)

    def test_example(self):
        a = [[2, 0], [0, 2], [1, 1]]
        H, U = hnf(a)
        assert H == IntMatrix([[1, 1], [0, 2], [0, 0]])
        assert U @ IntMatrix(a) == H
        # brute force: both bases generate each other's rows
        for row in a:
            assert in_row_lattice([[1, 1], [0, 2]], row, box=3)
        for row in ([1, 1], [0, 2]):
            assert in_row_lattice(a, row, box=3)
        assert not in_row_lattice(a, [0, 1], box=3)

    def test_row_permutation_invariance(self):
        a = [[3, 6, 1], [2, 4, 5], [7, 1, 0]]
        assert hnf(a)[0] == hnf([a[2], a[0], a[1]])[0]

    @settings(max_examples=200)
    @given(matrices())
    def test_properties(self, a):
        A = IntMatrix(a)
        H, U = hnf(A)
        assert U @ A == H
        assert abs(det_exact(U)) == 1
        assert hnf(H)[0] == H
        # pivots positive, entries above reduced, zeros below
        last = -1
        for i, row in enumerate(H):
            nz = [j for j, x in enumerate(row) if x]
            if not nz:
                assert all(not any(r) for r in H[i:])
                break
            j = nz[0]
            assert j > last and row[j] > 0
            assert all(0 <= H[k, j] < row[j] for k in range(i))
            last = j

    @given(matrices(max_rows=3, max_cols=3), st.integers(-3, 3))
    def test_unimodular_row_op_invariance(self, a, k):
        if len(a) < 2:
            return
        b = [row[:] for row in a]
        b[0] = [x + k * y for x, y in zip(b[0], b[1])]
        assert hnf(a)[0] == hnf(b)[0]


class TestSolve:
    def test_examples(self):
        assert solve_rational([[-4]], [1]) == (Fraction(-1, 4),)
        assert solve_rational(IntMatrix.identity(3), [4, -5, 6]) == (4, -5, 6)
        b = [1, 0, 0, 0]
        x = solve_rational(GAMMA33, b)
        assert IntMatrix(GAMMA33) @ x == tuple(b)

    def test_singular(self):
        with pytest.raises(SingularMatrixError):
            solve_rational([[1, 2], [2, 4]], [1, 1])

    @given(square_matrices(4), st.lists(st.integers(-20, 20), min_size=4, max_size=4))
    def test_residual(self, a, b):
        b = b[: len(a)]
        if det_exact(a) == 0:
            return
        x = solve_rational(a, b)
        assert IntMatrix(a) @ x == tuple(b)


class TestKernel:
    def test_examples(self):
        assert kernel_basis(IntMatrix.identity(3)).cols == 0
        k = kernel_basis([[1, -1]])
        assert k.cols == 1 and set(k.column(0)) in ({1}, {-1})
        g = rectangle_graph(3, 3)
        from sandpile.graph import interior_laplacian

        assert kernel_basis(interior_laplacian(g)).cols == 4

    @settings(max_examples=150)
    @given(matrices())
    def test_properties(self, a):
        A = IntMatrix(a)
        K = kernel_basis(A)
        assert K.cols == A.cols - rank(A)
        for col in K.columns():
            assert not any(A @ col)
        # saturated: Smith factors of the basis are all 1
        if K.cols:
            assert all(d == 1 for d in snf(K).diagonal)


class TestCokernel:
    def test_examples(self):
        assert cokernel_structure([[-4]]) == GroupStructure((4,), 0)
        assert cokernel_structure(IntMatrix.identity(3)).is_trivial
        assert cokernel_structure(rectangle_graph(3, 4).laplacian).order == 2415

    def test_free_rank(self):
        assert cokernel_structure([[2, 0], [0, 0]]) == GroupStructure((2,), 1)

    @given(square_matrices(4))
    def test_order_matches_det(self, a):
        d = det_exact(a)
        g = cokernel_structure(a)
        if d:
            assert g.free_rank == 0 and g.order == abs(d)
        else:
            assert g.free_rank > 0

    def test_invalid_structure(self):
        with pytest.raises(ValueError):
            GroupStructure((4, 6))
        with pytest.raises(ValueError):
            GroupStructure((1,))


class TestLatticeEqual:
    def test_examples(self):
        B = [[1, 0, 2], [0, 1, 3]]
        assert lattice_equal(B, [[2, 1, 0], [3, 0, 1]])
        assert not lattice_equal([[1]], [[2]])
        with pytest.raises(DimensionError):
            lattice_equal([[1]], [[1], [0]])

    def test_laplacian_plus_boundary_is_everything(self):
        g = rectangle_graph(3, 3)
        n = len(g)
        E = IntMatrix.from_columns([[int(i == b) for i in range(n)] for b in g.boundary], rows=n)
        assert lattice_equal(g.laplacian.hstack(E), IntMatrix.identity(n))


def test_intmatrix_rejects_floats():
    with pytest.raises(TypeError):
        IntMatrix([[1.5]])
    with pytest.raises(DimensionError):
        IntMatrix([[1, 2], [3]])
