from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagcat.bialgebra import bialgebra, comultiplication, counit
from diagcat.diagram import (Diagram, GradedRepresentation, ProductStructure, validate_graded)
from diagcat.endo import end_algebra
from diagcat.fixtures import group_graded_fixture, localization_corpus, odd_sign_fixtures
from diagcat.linalg import Matrix


def one_vertex():
    D = Diagram.build({"f": 0})
    P = ProductStructure({("f", "f"): "f"}, {("f", "f"): "id:f"},
                         {("f", "f", "f"): "id:f"}, "f", {"f": "id:f"})
    T = GradedRepresentation.build(D, {"f": 1}, {}, {("f", "f"): Matrix([[1]])})
    return D, P, T


def short_words(D):
    return [v for v in D.sorted_vertices() if len(v) <= 1]


def test_trivial_unit_component():
    D, P, T = group_graded_fixture(1)
    r = comultiplication(D, P, T, ["0"], ["0"])
    assert r.coords == [[[1]]] and r.ok
    b = bialgebra(D, P, T, ["0"], ["0"])
    assert b.ok and b.details["multiplication"] == [["1"]]


def test_even_rank_one_duplicates_scalar():
    D, P, T = one_vertex()
    r = comultiplication(D, P, T, ["f"], ["f"])
    # a -> a (x) a: the single basis element maps to 1 (x) 1
    assert r.coords == [[[1]]]
    assert r.multiplication() == Matrix([[1]])
    assert r.multiply((Fraction(2),), (Fraction(3),)) == (6,)


def test_odd_square_sign_honoured_and_flipped():
    D, P, T = group_graded_fixture(2)
    r = comultiplication(D, P, T, ["1"], ["0", "1"])
    assert r.cocommutative and r.koszul_face
    D, P, T = group_graded_fixture(2, flip=True)
    r = comultiplication(D, P, T, ["1"], ["0", "1"])
    assert not r.koszul_face and not r.cocommutative and not r.ok


def flip_alpha(D, P, T):
    """Negate T(alpha_{f,g}) whenever both f and g are odd."""
    mats = dict(T.mats)
    for (f, g), e in P.alpha.items():
        if D.grade(f) and D.grade(g):
            mats[e] = -mats[e]
    return GradedRepresentation(dict(T.dims), mats, dict(T.tau))


@pytest.mark.parametrize("fx", odd_sign_fixtures(), ids=lambda fx: fx[0])
def test_odd_geometric_fixtures(fx):
    name, D, P, T, _ = fx
    assert validate_graded(D, P, T, total=False).ok
    F = short_words(D)
    assert any(D.grade(v) for v in F)
    r = comultiplication(D, P, T, F, D.sorted_vertices())
    assert r.well_defined and r.cocommutative and r.coassociative and r.counital, r.notes
    # without the Koszul sign the same data is no longer a graded representation
    T2 = flip_alpha(D, P, T)
    assert not validate_graded(D, P, T2, total=False).ok
    assert not comultiplication(D, P, T2, F, D.sorted_vertices()).koszul_face


def test_counit_of_identity_is_one():
    D, P, T = group_graded_fixture(4)
    F = D.sorted_vertices()
    E = end_algebra(D, T, F)
    eps = counit(D, T, F, "0", E)
    assert sum(e * u for e, u in zip(eps, E.unit)) == 1


def test_counit_without_unit_vertex_faults():
    D, P, T = group_graded_fixture(2)
    with pytest.raises(ValueError):
        counit(D, T, ["1"], "0")


def test_products_must_land_in_big_subdiagram():
    D, P, T = group_graded_fixture(4)
    with pytest.raises(ValueError):
        comultiplication(D, P, T, ["1"], ["1"])


@pytest.mark.parametrize("fx", localization_corpus(), ids=lambda fx: fx[0])
def test_group_fixtures_are_bialgebras(fx):
    name, D, P, T, _ = fx
    F = D.sorted_vertices()
    r = bialgebra(D, P, T, F, F)
    assert r.ok, r.violations
    assert r.details["commutative"]


@given(st.sampled_from([2, 4, 6]), st.data())  # parity is a grading only for even n
def test_random_tau_keeps_laws(n, data):
    vals = data.draw(st.lists(st.sampled_from([1, -1, 2, Fraction(1, 3), -3]),
                              min_size=n * n, max_size=n * n))
    tau = lambda a, b: 1 if 0 in (a, b) else vals[a * n + b]  # noqa: E731
    D, P, T = group_graded_fixture(n, tau=tau)
    assert validate_graded(D, P, T).ok
    F = D.sorted_vertices()
    r = comultiplication(D, P, T, F, F)
    assert r.ok
    # commutativity: the dual multiplication is symmetric in its two inputs
    k = r.small.dim
    M = r.multiplication()
    for i in range(k):
        for j in range(k):
            assert M.col(i * k + j) == M.col(j * k + i)
