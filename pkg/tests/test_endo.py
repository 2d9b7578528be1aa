import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from diagcat.diagram import Diagram, Representation
from diagcat.endo import (base_change, coaction, coalgebra, end_algebra, intertwiners, restrict,
                          root_injectivity)
from diagcat.fixtures import a2_fixture, corpus, random_fixture, single_vertex_fixture
from diagcat.linalg import Matrix
from strategies import oracle_hom_dim

seeds = st.integers(0, 100_000)


def test_full_matrix_algebra():
    D, T, _ = single_vertex_fixture(2)
    assert end_algebra(D, T, ["p"]).dim == 4


def test_identity_edge_pairs():
    D, T, _ = a2_fixture(1, 1)
    assert end_algebra(D, T, ["v", "w"]).dim == 1


def test_zero_edge_is_vacuous():
    D, T, _ = a2_fixture(0, 0)
    assert end_algebra(D, T, ["v", "w"]).dim == 2


def test_dim_one_coalgebra_trivial():
    D, T, _ = single_vertex_fixture(1)
    C = coalgebra(D, T, ["p"])
    assert C.dim == 1 and C.delta(0) == {(0, 0): 1} and C.counit == (1,)


def test_matrix_coalgebra():
    D, T, _ = single_vertex_fixture(2)
    C = coalgebra(D, T, ["p"])
    idx = lambda i, j: 2 * i + j  # noqa: E731  basis E_ij, row-major
    for i, j in itertools.product(range(2), repeat=2):
        want = {(idx(i, k), idx(k, j)): 1 for k in range(2)}
        assert C.delta(idx(i, j)) == want
    assert C.is_coassociative() and C.is_counital()


def test_coaction_examples():
    D, T, _ = single_vertex_fixture(1)
    rho = coaction(D, T, ["p"], "p")
    assert rho.matrix == Matrix([[1]])
    D, T, _ = single_vertex_fixture(2)
    rho = coaction(D, T, ["p"], "p")
    k = 4
    for i, j, l in itertools.product(range(2), range(2), range(k)):
        assert rho.matrix[i * k + l, j] == (1 if l == 2 * i + j else 0)
    C = coalgebra(D, T, ["p"])
    assert rho.is_counital(C) and rho.is_coassociative(C)


def test_coaction_needs_vertex_in_F():
    D, T, _ = a2_fixture()
    with pytest.raises(KeyError):
        coaction(D, T, ["v"], "w")


def test_restrict_to_self_is_identity():
    D, T, _ = a2_fixture(0, 0)
    R = restrict(D, T, ["v", "w"], ["v", "w"])
    assert R.matrix == Matrix.identity(2)


def test_restrict_isolated_vertex():
    D = Diagram.build(["v", "w", "x"], [("e", "v", "w")])
    T = Representation.build(D, {"v": 1, "w": 1, "x": 1}, {"e": Matrix([[1]])})
    R = restrict(D, T, ["v", "w"], ["v", "w", "x"])
    assert (R.small.dim, R.big.dim) == (1, 2)
    assert R.matrix.rank() == 1  # surjective, one-dimensional kernel
    assert R.is_algebra_morphism() and R.is_coalgebra_morphism()


def test_restrict_needs_inclusion():
    D, T, _ = a2_fixture()
    with pytest.raises(ValueError):
        restrict(D, T, ["v", "w"], ["v"])


def test_base_change_examples():
    D, T, _ = single_vertex_fixture(2)
    r = base_change(D, T, ["p"], (-2, 0, 1))
    assert r.ok and r.details["dim_Q"] == r.details["dim_K"] == 4
    D, T, _ = a2_fixture(1, 1)
    r = base_change(D, T, ["v", "w"], (1, 0, 1))
    assert r.ok and r.details["dim_K"] == 1


def test_root_injectivity_on_invertible_chain():
    D = Diagram.build(["a", "b"], [("e", "a", "b")])
    T = Representation.build(D, {"a": 2, "b": 2}, {"e": Matrix([[1, 1], [0, 1]])})
    assert root_injectivity(D, T, ["a", "b"], "a").ok


def test_corpus_end_dims_match_oracle():
    for name, D, T1, T2 in corpus():
        F = D.sorted_vertices()
        assert end_algebra(D, T1, F).dim == oracle_hom_dim(D, T1, T1, F), name
        assert intertwiners(D, T1, T2, F).dim == oracle_hom_dim(D, T1, T2, F), name


@given(seeds)
def test_end_dim_matches_oracle(seed):
    D, T, _ = random_fixture(seed)
    F = D.sorted_vertices()
    E = end_algebra(D, T, F)
    assert E.dim == oracle_hom_dim(D, T, T, F)
    assert E.satisfies_constraints(D, T, T)


@given(seeds)
def test_algebra_and_coalgebra_laws(seed):
    D, T, _ = random_fixture(seed, max_dim=3)
    F = D.sorted_vertices()
    E = end_algebra(D, T, F)
    assert E.is_associative()
    elems = E.elements()
    unit = lambda i: [Fraction(int(k == i)) for k in range(E.dim)]  # noqa: E731
    for i, j in itertools.product(range(E.dim), repeat=2):
        # structure constants reproduce the composite exactly
        prod = {p: elems[i][p] @ elems[j][p] for p in F}
        assert E.combine(E.multiply(unit(i), unit(j))) == prod
    assert E.combine(E.unit) == {p: Matrix.identity(T.dims[p]) for p in F}
    C = coalgebra(D, T, F)
    assert C.is_coassociative() and C.is_counital()
    for p in F:
        rho = coaction(D, T, F, p)
        assert rho.is_counital(C) and rho.is_coassociative(C)


@given(seeds, st.data())
def test_restriction_is_morphism(seed, data):
    D, T, _ = random_fixture(seed, max_dim=3)
    verts = D.sorted_vertices()
    big = data.draw(st.lists(st.sampled_from(verts), unique=True, min_size=1))
    small = data.draw(st.lists(st.sampled_from(sorted(big)), unique=True))
    R = restrict(D, T, small, big)
    assert R.is_algebra_morphism() and R.is_coalgebra_morphism()


@given(seeds, st.data())
def test_restriction_composes(seed, data):
    D, T, _ = random_fixture(seed, max_dim=3)
    verts = D.sorted_vertices()
    F3 = data.draw(st.lists(st.sampled_from(verts), unique=True, min_size=1))
    F2 = data.draw(st.lists(st.sampled_from(sorted(F3)), unique=True))
    F1 = data.draw(st.lists(st.sampled_from(sorted(F2)), unique=True)) if F2 else []
    assert restrict(D, T, F1, F2).matrix @ restrict(D, T, F2, F3).matrix == \
        restrict(D, T, F1, F3).matrix


@given(st.integers(0, 1000), st.sampled_from([(1, 0, 1), (-2, 0, 1)]))
def test_base_change_random(seed, m):
    D, T, _ = random_fixture(seed, max_vertices=3, max_edges=4, max_dim=3)
    r = base_change(D, T, D.sorted_vertices(), m)
    assert r.ok, r.violations
