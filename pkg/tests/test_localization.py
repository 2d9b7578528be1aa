import pytest

from diagcat.diagram import validate_graded
from diagcat.endo import end_algebra
from diagcat.fixtures import group_graded_fixture, localization_corpus
from diagcat.linalg import Matrix
from diagcat.localization import (chi_and_transitions, chi_squared_check, extend_representation,
                                  localization_report, localize_diagram)

CORPUS = localization_corpus()


def even(n, **kw):
    return group_graded_fixture(n, grading=lambda a: 0, **kw)


def test_level_zero_is_embedded_copy():
    D, P, T, f0 = CORPUS[1][1:]
    L = localize_diagram(D, P, f0, 0)
    assert sorted(L.diagram.vertices) == sorted(f"{v}@0" for v in D.vertices)
    assert sorted(L.diagram.edges) == sorted(f"{e}@0" for e in D.edges)
    assert L.twist_edges() == []
    assert L.product.unit == f"{P.unit}@0"


def test_two_vertices_one_level():
    D, P, T = even(2)
    L = localize_diagram(D, P, "1", 1)
    assert sorted(L.diagram.vertices) == ["0@-1", "0@0", "0@1", "1@-1", "1@0", "1@1"]
    # f(n) x f0 -> f(n+1) for n = -1, 0
    assert len(L.twist_edges()) == 4
    for (v, n), e in L.twist.items():
        assert L.diagram.edges[e][1] == f"{v}@{n + 1}"


def test_odd_vertex_faults():
    D, P, T = group_graded_fixture(2)
    with pytest.raises(ValueError):
        localize_diagram(D, P, "1", 1)


def test_trivial_tau_gives_identity_twists():
    D, P, T = even(3, tau=lambda a, b: 1)
    L = localize_diagram(D, P, "1", 2)
    TL = extend_representation(L, T)
    assert all(TL(e) == Matrix([[1]]) for e in L.twist_edges())


def test_edge_scalars_repeat_per_level():
    D, P, T, f0 = CORPUS[2][1:]  # Z/4 at 2, nontrivial tau
    L = localize_diagram(D, P, f0, 2)
    TL = extend_representation(L, T)
    scaled = [e for e in D.edges if D.edges[e][1] == f0 and T(e) != Matrix([[1]])]
    assert scaled
    for e in scaled:
        for n in range(-2, 3):
            assert TL(f"{e}@{n}") == T(e)


@pytest.mark.parametrize("fx", CORPUS, ids=lambda fx: fx[0])
def test_extension_stays_valid(fx):
    name, D, P, T, f0 = fx
    assert validate_graded(D, P, T).ok
    L = localize_diagram(D, P, f0, 1)
    assert validate_graded(L.diagram, L.product, extend_representation(L, T), total=False).ok


def test_transition_on_f0_is_chi():
    D, P, T, f0 = CORPUS[2][1:]
    r = chi_and_transitions(D, P, T, f0, [f0], D.sorted_vertices())
    assert r.ok
    assert r.chi_multiplication == r.transition.T


def test_transition_from_unit_hits_chi():
    D, P, T, f0 = CORPUS[2][1:]
    u = P.unit
    F_big = sorted({u, f0})
    r = chi_and_transitions(D, P, T, f0, [u], F_big)
    assert r.ok
    # the dual of eps goes to chi, the functional a -> a_f0 on End(T|F')
    Eb = end_algebra(D, T, F_big)
    image = r.coalgebra_transition().col(0)
    assert list(image) == [Eb.element(idx)[f0][0, 0] for idx in range(Eb.dim)]


@pytest.mark.parametrize("fx", CORPUS, ids=lambda fx: fx[0])
def test_chi_squared(fx):
    name, D, P, T, f0 = fx
    V = D.sorted_vertices()
    r = chi_squared_check(D, P, T, f0, V, V, V)
    assert r.ok, r.violations


@pytest.mark.parametrize("N", [1, 2, 3])
@pytest.mark.parametrize("fx", CORPUS, ids=lambda fx: fx[0])
def test_localization_report(fx, N):
    name, D, P, T, f0 = fx
    r = localization_report(D, P, T, f0, N)
    assert r.ok, r.violations
    assert r.details["twists_invertible"] and all(r.details["transitions"])
