from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from diagcat.linalg import Matrix
from diagcat.rigidity import (Pairing, distinct_equations, finite_order_generators,
                              generate_monoid, is_isometry, isometry_equations, isometry_inverse,
                              monoid_is_group, orthogonal_sum, perfect_duality_check,
                              sample_isometries, sample_monoids, symmetric_extension)
from strategies import square_matrices

I2 = Matrix.identity(2)
J = Matrix([[0, 1], [-1, 0]])
DIAG = Matrix([[1, 0], [0, 2]])


def test_perfect_duality_examples():
    assert perfect_duality_check(I2)
    assert perfect_duality_check(J)
    assert not perfect_duality_check(Matrix([[1, 1], [1, 1]]))
    assert Pairing(J).perfect and Pairing(J).n == 2


def test_equation_for_one_by_one():
    eqs = isometry_equations(Matrix.identity(1))
    assert len(eqs) == 1
    assert repr(eqs[0]) == "X11^2 - 1"
    assert eqs[0].to_dict() == {"X11^2": "1", "1": "-1"}


def test_orthogonal_group_equations():
    eqs = isometry_equations(I2)
    assert len(eqs) == 4
    assert len(distinct_equations(eqs)) == 3
    assert eqs[1] == eqs[2]
    assert repr(eqs[0]) == "X11^2 + X21^2 - 1"


def test_degenerate_pairing_rejected():
    with pytest.raises(ValueError):
        isometry_equations(Matrix([[1, 1], [1, 1]]))


def sym_equations(A: Matrix, dual=False):
    n = A.rows
    X = sympy.Matrix(n, n, lambda s, t: sympy.Symbol(f"X{s + 1}{t + 1}"))
    S = sympy.Matrix(n, n, [sympy.Rational(a.numerator, a.denominator) for a in A.flat()])
    E = (X * S * X.T - S) if dual else (X.T * S * X - S)
    return [sympy.expand(E[i, j]) for i in range(n) for j in range(n)]


def to_sym(p):
    out = 0
    for mono, c in p.to_dict().items():
        term = sympy.Rational(Fraction(c).numerator, Fraction(c).denominator)
        if mono != "1":
            for part in mono.split("*"):
                name, _, k = part.partition("^")
                term *= sympy.Symbol(name) ** int(k or 1)
        out += term
    return sympy.expand(out)


@pytest.mark.parametrize("A", [I2, J, DIAG, Matrix([[2, 1, 0], [1, 1, 0], [0, 0, -1]])])
@pytest.mark.parametrize("dual", [False, True])
def test_equations_match_sympy_expansion(A, dual):
    ours = isometry_equations(A, dual=dual)
    assert len(ours) == A.rows ** 2
    for p, q in zip(ours, sym_equations(A, dual)):
        assert to_sym(p) == q


def test_isometry_inverse_examples():
    assert isometry_inverse(I2, I2) == I2
    R = Matrix([["3/5", "-4/5"], ["4/5", "3/5"]])
    assert R.T @ R == I2
    Y = isometry_inverse(I2, R)
    assert Y == R.T and Y @ R == I2
    X = Matrix([[1, 1], [0, 1]])
    assert X.T @ J @ X == J
    Y = isometry_inverse(J, X)
    assert Y == Matrix([[1, -1], [0, 1]]) and Y @ X == I2


@pytest.mark.parametrize("A", [I2, J, DIAG], ids=["I2", "J", "diag12"])
@given(seed=st.integers(0, 10_000))
def test_sampled_solutions_have_two_sided_inverse(A, seed):
    eqs = isometry_equations(A)
    for X in sample_isometries(A, count=5, seed=seed):
        assert is_isometry(A, X)
        assert all(p(X) == 0 for p in eqs)
        Y = isometry_inverse(A, X)
        assert Y @ X == I2 and X @ Y == I2


@given(square_matrices(max_dim=3))
def test_random_forms(M):
    A = M + M.T  # symmetric; skip the degenerate ones
    if not perfect_duality_check(A):
        with pytest.raises(ValueError):
            isometry_equations(A)
        return
    for X in sample_isometries(A, count=3, seed=1):
        assert is_isometry(A, X)
        assert isometry_inverse(A, X) @ X == Matrix.identity(A.rows)


def test_cayley_needs_symmetry():
    with pytest.raises(ValueError):
        sample_isometries(Matrix([[1, 1], [0, 1]]))


def test_orthogonal_sum_and_extension():
    S = orthogonal_sum(I2, J)
    assert S.shape == (4, 4) and perfect_duality_check(S)
    E, perfect = symmetric_extension(Matrix([[1, 2], [3, 4]]))
    assert perfect and E == E.T
    E, perfect = symmetric_extension(Matrix([[1, 2]]))
    assert not perfect


def test_monoid_examples():
    assert monoid_is_group([I2]).ok
    rot = Matrix([[0, -1], [1, 0]])
    M = generate_monoid([rot])
    assert len(M) == 4
    r = monoid_is_group(M)
    assert r.ok
    assert r.details["inverse_powers"][M.index(rot)] == 3
    P = Matrix([[1, 0], [0, 0]])
    with pytest.raises(ValueError):
        monoid_is_group([I2, P])


def test_not_closed_reports_counterexample():
    rot = Matrix([[0, -1], [1, 0]])
    r = monoid_is_group([I2, rot])
    assert not r.ok and r.details["counterexample"] is not None


def test_monoid_limit():
    with pytest.raises(ValueError):
        generate_monoid([Matrix([[1, 1], [0, 1]])], limit=24)


def test_all_sample_monoids_are_groups():
    monoids = sample_monoids(24)
    assert len(monoids) >= 10
    assert max(len(M) for M in monoids) <= 24
    for M in monoids:
        r = monoid_is_group(M)
        assert r.ok
        for k, h in enumerate(r.details["inverses"]):
            assert M[k] @ M[h] == Matrix.identity(M[k].rows)


def test_generators_have_finite_order():
    for g in finite_order_generators():
        p, k = g, 1
        while p != I2:
            p, k = p @ g, k + 1
            assert k <= 6
