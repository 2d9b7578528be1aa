
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from diagcat.endo import intertwiners
from diagcat.linalg import Matrix
from diagcat.periods import psi
from diagcat.simplicial import (SimplicialComplex, SimplicialPair, boundary, cech_total_complex,
                                cochain_complex, cohomology_dims, connecting_map,
                                disjoint_union, filtration_complex, induced_map, is_good_pair,
                                long_exact_sequence, make_diagram_fixture, point, random_complex,
                                random_cover, relative_cohomology, simplex, skeletal_filtration)
from diagcat.torsor import matrix_torsor_check

SC = SimplicialComplex
EMPTY = SC.empty()
NAMED = {"interval": simplex(1), "circle": boundary(2), "triangle": simplex(2),
         "sphere": boundary(3)}


def oracle_betti(X, Y=EMPTY) -> dict:
    """Relative Betti numbers from sympy ranks of freshly built coboundary matrices."""
    top = X.dim
    cells = {k: sorted(s for s in X.simplices if len(s) == k + 1 and s not in Y.simplices)
             for k in range(-1, top + 2)}
    ranks = {}
    for k in range(-1, top + 1):
        src, dst = cells[k], cells[k + 1]
        if not src or not dst:
            ranks[k] = 0
            continue
        M = sympy.zeros(len(dst), len(src))
        pos = {s: j for j, s in enumerate(src)}
        for r, t in enumerate(dst):
            for i in range(len(t)):
                face = t[:i] + t[i + 1:]
                if face in pos:
                    M[r, pos[face]] = (-1) ** i
        ranks[k] = M.rank()
    return {k: len(cells[k]) - ranks[k] - ranks.get(k - 1, 0) for k in range(top + 1)}


def betti(C):
    return {i: C.betti(i) for i in C.degrees}


def nonzero(d):
    return {k: v for k, v in d.items() if v}


def test_interval_relative():
    I, dI = simplex(1), boundary(1)
    assert relative_cohomology(I, dI, 1)[0] == 1
    assert relative_cohomology(I, dI, 0)[0] == 0
    assert relative_cohomology(point(), None, 0)[0] == 1


def test_circle():
    C = boundary(2)
    assert relative_cohomology(C, EMPTY, 0)[0] == 1
    assert relative_cohomology(C, EMPTY, 1)[0] == 1


def test_simplex_is_closed_under_faces():
    with pytest.raises(ValueError):
        SC(frozenset({(0, 1)}))


def test_good_pairs():
    assert is_good_pair(simplex(1), boundary(1), 1)
    assert not is_good_pair(boundary(2), EMPTY, 1)
    for X in NAMED.values():
        for i in range(4):
            assert is_good_pair(X, X, i)


def test_connecting_map_examples():
    I, dI, pt = simplex(1), boundary(1), SC.from_maximal([(0,)])
    assert connecting_map(I, dI, dI, 0).is_zero()
    d = connecting_map(I, dI, pt, 0)
    assert d.shape == (1, 1) and d.rank() == 1


@given(st.integers(0, 10_000))
def test_les_exact_on_random_triples(seed):
    X = random_complex(seed, max_vertices=5, max_triangles=3)
    U = random_cover(X, seed, parts=2)[0]
    Y = U | X.skeleton(0)
    Z = Y.skeleton(0) & SC.from_maximal([(v,) for v in X.vertices[:2]])
    assert long_exact_sequence(X, Y, Z).ok


def test_skeletal_filtration_examples():
    steps, r = skeletal_filtration(simplex(2))
    assert len(steps) == 3 and r.ok
    steps, r = skeletal_filtration(point())
    assert len(steps) == 1 and r.ok
    steps, r = skeletal_filtration(boundary(3))
    assert len(steps) == 3 and r.ok


def test_filtration_examples():
    assert nonzero(betti(filtration_complex(boundary(2)))) == {0: 1, 1: 1}
    assert nonzero(betti(filtration_complex(simplex(2)))) == {0: 1}
    assert nonzero(betti(filtration_complex(boundary(3)))) == {0: 1, 2: 1}


def test_cech_examples():
    C = boundary(2)
    assert nonzero(betti(cech_total_complex(C, [C]))) == {0: 1, 1: 1}
    arcs = [SC.from_maximal([(0, 1), (1, 2)]), SC.from_maximal([(0, 2)])]
    assert arcs[0] & arcs[1] == SC.from_maximal([(0,), (2,)])
    assert nonzero(betti(cech_total_complex(C, arcs))) == {0: 1, 1: 1}
    halves = [SC.from_maximal([(0, 1)]), SC.from_maximal([(1, 2)])]
    assert nonzero(betti(cech_total_complex(SC.from_maximal([(0, 1), (1, 2)]), halves))) == {0: 1}


def test_cech_rejects_non_cover():
    with pytest.raises(ValueError):
        cech_total_complex(boundary(2), [SC.from_maximal([(0, 1)])])


@pytest.mark.parametrize("name", sorted(NAMED))
def test_named_complexes_against_oracle(name):
    X = NAMED[name]
    want = oracle_betti(X)
    assert cohomology_dims(X) == want
    assert betti(filtration_complex(X)) == want
    assert cochain_complex(X).is_complex()


@given(st.integers(0, 100_000), st.integers(1, 3))
def test_random_complexes(seed, parts):
    X = random_complex(seed)
    want = oracle_betti(X)
    assert cohomology_dims(X) == want
    F = filtration_complex(X)
    assert F.is_complex()
    assert {i: F.betti(i) for i in want} == want
    C = cech_total_complex(X, random_cover(X, seed, parts))
    assert C.is_complex()
    assert {i: C.betti(i) for i in want} == want
    assert all(C.betti(i) == 0 for i in C.degrees if i not in want)


@given(st.integers(0, 100_000))
def test_euler_characteristic(seed):
    X = random_complex(seed)
    C = cochain_complex(X)
    alt = sum((-1) ** k * len(X.cells(k)) for k in range(X.dim + 1))
    assert C.euler() == alt


def test_induced_maps():
    C = boundary(2)
    P = SimplicialPair(C, EMPTY)
    rot = {0: 1, 1: 2, 2: 0}
    assert induced_map(rot, P, P, 1) == Matrix([[1]])
    ref = {0: 0, 1: 2, 2: 1}
    assert induced_map(ref, P, P, 1) == Matrix([[-1]])
    with pytest.raises(ValueError):
        induced_map({0: 0, 1: 0, 2: 5}, P, P, 1)


def test_diagram_fixture_single_pair():
    D, T = make_diagram_fixture({"I": (simplex(1), boundary(1), 1)})
    assert D.sorted_vertices() == ["I"] and T.dims == {"I": 1}
    assert D.grade("I") == 1


def test_diagram_fixture_triple_chain():
    pt = SC.from_maximal([(0,)])
    pairs = {"I": (simplex(1), boundary(1), 1), "dI": (boundary(1), pt, 0)}
    D, T = make_diagram_fixture(pairs, triples=[("delta", "dI", "I")])
    assert D.edges["delta"] == ("dI", "I")
    assert T("delta").shape == (1, 1) and T("delta").inverse() is not None


def test_conjugated_fixture_runs_end_to_end():
    pt = SC.from_maximal([(0,)])
    pairs = {"I": (simplex(1), boundary(1), 1), "dI": (boundary(1), pt, 0)}
    D, T1, T2 = make_diagram_fixture(pairs, triples=[("delta", "dI", "I")],
                                     conjugate={"I": Matrix([[2]])})
    F = D.sorted_vertices()
    assert intertwiners(D, T1, T2, F).dim == 1
    assert psi(D, T1, T2, F).bijective
    r = matrix_torsor_check(D, T1, T2, F, samples=100)
    assert r.ok and r.details["triples"] >= 100


def test_disjoint_union_adds_components():
    X = disjoint_union(boundary(2), simplex(1))
    assert cohomology_dims(X)[0] == 2
