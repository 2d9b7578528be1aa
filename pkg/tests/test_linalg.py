from fractions import Fraction

import sympy
from hypothesis import given
from hypothesis import strategies as st

from diagcat.linalg import (Matrix, SubspaceBasis, block_diag, dual, kernel_basis, kron, rank,
                            rref, solve, swap_matrix)
from strategies import matrices, square_matrices


def sym(M: Matrix):
    return sympy.Matrix(M.rows, M.cols, [sympy.Rational(x.numerator, x.denominator)
                                         for x in M.flat()])


def test_kernel_of_identity_is_empty():
    assert kernel_basis(Matrix.identity(2)).dim == 0


def test_kernel_of_zero_is_everything():
    K = kernel_basis(Matrix.zeros(2, 2))
    assert [list(v) for v in K] == [[1, 0], [0, 1]]


def test_kernel_of_rank_one():
    K = kernel_basis(Matrix([[1, 2], [2, 4]]))
    assert K.dim == 1
    v = K.vectors[0]
    # echelon normalization: leading coefficient 1, proportional to (-2, 1)
    assert v[0] * 1 - v[1] * (-2) == 0
    assert Matrix([[1, 2], [2, 4]]).apply(v) == (0, 0)


def test_solve_examples():
    assert solve(Matrix.identity(3), (1, 2, 3)) == (1, 2, 3)
    assert solve(Matrix([[1, 1]]), (2,)) == (2, 0)
    assert solve(Matrix([[0]]), (1,)) is None


def test_kron_examples():
    assert kron(Matrix.identity(2), Matrix.identity(3)) == Matrix.identity(6)
    B = Matrix([[1, 2], [3, 4]])
    assert kron(Matrix([[2]]), B) == B * 2
    s = Matrix([[0, 1], [1, 0]])
    expected = Matrix([[0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0], [1, 0, 0, 0]])
    assert kron(s, s) == expected


def test_dual_examples():
    assert dual(Matrix.identity(3)) == Matrix.identity(3)
    assert dual(Matrix([[1, 2], [3, 4]])) == Matrix([[1, 3], [2, 4]])


def test_exact_fractions_survive():
    M = Matrix([["1/3", 0], [0, 3]])
    assert M @ M.inverse() == Matrix.identity(2)
    assert M[0, 0] == Fraction(1, 3)


def test_zero_sized_shapes():
    Z = Matrix.zeros(0, 3)
    assert Z.shape == (0, 3)
    assert (Matrix.zeros(2, 0) @ Z).shape == (2, 3)
    assert kernel_basis(Z).dim == 3
    assert rank(Z) == 0


def test_swap_matrix_swaps_tensors():
    A = Matrix([[1, 2], [3, 4]])
    B = Matrix([[0, 1, 5], [2, 0, 1], [1, 1, 1]])
    S1, S2 = swap_matrix(2, 3), swap_matrix(3, 2)
    assert S1 @ kron(A, B) == kron(B, A) @ S1
    assert S2 @ S1 == Matrix.identity(6)


@given(matrices())
def test_rank_matches_sympy(M):
    assert rank(M) == sym(M).rank()


@given(matrices())
def test_kernel_matches_sympy(M):
    K = kernel_basis(M)
    assert K.dim == M.cols - sym(M).rank()
    for v in K:
        assert all(x == 0 for x in M.apply(v))


@given(matrices())
def test_rref_matches_sympy(M):
    red, piv = rref(M)
    R, spiv = sym(M).rref()
    assert tuple(piv) == tuple(spiv)
    for i, row in enumerate(red):
        assert [sympy.Rational(x.numerator, x.denominator) for x in row] == list(R.row(i))


@given(matrices(), st.data())
def test_solve_is_consistent(M, data):
    x0 = [data.draw(st.integers(-3, 3)) for _ in range(M.cols)]
    b = M.apply(x0)
    x = solve(M, b)
    assert x is not None and M.apply(x) == b


@given(matrices())
def test_dual_is_involution(M):
    assert dual(dual(M)) == M


@given(matrices(max_dim=3), matrices(max_dim=3), matrices(max_dim=3), matrices(max_dim=3))
def test_kron_mixed_product(A, B, C, D):
    if A.cols == C.rows and B.cols == D.rows:
        assert kron(A, B) @ kron(C, D) == kron(A @ C, B @ D)


@given(square_matrices())
def test_det_and_inverse_match_sympy(M):
    S = sym(M)
    assert M.det() == S.det()
    inv = M.inverse()
    if S.det() == 0:
        assert inv is None
    else:
        assert inv @ M == Matrix.identity(M.rows)
        assert sym(inv) == S.inv()


@given(st.lists(matrices(max_dim=3), min_size=1, max_size=3))
def test_block_diag_rank_adds(blocks):
    assert rank(block_diag(*blocks)) == sum(rank(b) for b in blocks)


@given(matrices(), st.data())
def test_span_coordinates(M, data):
    S = SubspaceBasis.span(M.data, M.cols)
    coeffs = [data.draw(st.integers(-2, 2)) for _ in range(M.rows)]
    v = [sum((c * r[k] for c, r in zip(coeffs, M.data)), Fraction(0)) for k in range(M.cols)]
    c = S.coords(v)
    assert c is not None and list(S.combine(c)) == v
