"""Bundled fixtures: small diagrams, graded structures and random generators."""

from __future__ import annotations

import random
from fractions import Fraction

from .diagram import Diagram, GradedRepresentation, ProductStructure, Representation
from .linalg import Matrix

__all__ = [
    "group_graded_fixture",
    "a2_fixture",
    "single_vertex_fixture",
    "random_representation_pair",
    "random_fixture",
    "interval_fixture",
    "circle_fixture",
    "sphere_fixture",
    "sqrt2_torsor_fixture",
    "cyclic_torsor",
    "odd_sign_fixture",
    "odd_sign_fixtures",
    "localization_corpus",
    "corpus",
    "fixture_names",
    "fixture_document",
    "bundled_dir",
    "load_bundled",
]


def _one(x) -> Matrix:
    return Matrix([[x]])


def group_graded_fixture(n: int = 2, grading=None, tau=None, flip: bool = False,
                         group=None):
    """Rank-one graded fixture over a finite abelian group.

    Vertices are the elements of ``group`` (default Z/n), ``a x b = a + b``,
    every space is Q, and ``tau[(a, b)]`` is a nonzero scalar (1 when the unit
    is involved). Commutativity and associativity edges are loops whose
    scalars are forced by the axioms. ``flip`` negates the commutativity
    scalars on odd pairs, which breaks the Koszul sign.
    Returns ``(D, P, T)``.
    """
    if group is None:
        elems = list(range(n))
        add = lambda a, b: (a + b) % n  # noqa: E731
        zero = 0
    else:
        elems, add, zero = group
    grading = grading or (lambda a: a % 2 if isinstance(a, int) else 0)
    name = {a: str(a) for a in elems}
    if tau is None:
        def tau(a, b):
            if a == zero or b == zero:
                return Fraction(1)
            return Fraction(1 + (elems.index(a) * 2 + elems.index(b)) % 3, 1 + elems.index(b) % 2)
    t = {(a, b): Fraction(tau(a, b)) for a in elems for b in elems}
    verts = {name[a]: grading(a) % 2 for a in elems}
    edges = []
    mats = {}
    table, alpha, beta = {}, {}, {}
    for a in elems:
        for b in elems:
            table[(name[a], name[b])] = name[add(a, b)]
            e = f"alpha:{name[a]},{name[b]}"
            edges.append((e, name[add(a, b)], name[add(b, a)]))
            sign = -1 if verts[name[a]] * verts[name[b]] % 2 else 1
            if flip and sign == -1:
                sign = 1
            mats[e] = _one(sign * t[(a, b)] / t[(b, a)])
            alpha[(name[a], name[b])] = e
            for c in elems:
                e = f"beta:{name[a]},{name[b]},{name[c]}"
                s = name[add(a, add(b, c))]
                edges.append((e, s, name[add(add(a, b), c)]))
                mats[e] = _one(t[(b, c)] * t[(a, add(b, c))] / (t[(a, b)] * t[(add(a, b), c)]))
                beta[(name[a], name[b], name[c])] = e
    D = Diagram.build(verts, edges)
    unit_edges = {name[a]: D.identities[name[a]] for a in elems}
    P = ProductStructure(table, alpha, beta, name[zero], unit_edges)
    taus = {(name[a], name[b]): _one(t[(a, b)]) for a in elems for b in elems}
    T = GradedRepresentation.build(D, {v: 1 for v in verts}, mats, taus)
    return D, P, T


def single_vertex_fixture(dim: int = 1):
    D = Diagram.build(["p"])
    T = Representation.build(D, {"p": dim}, {})
    return D, T, T


def a2_fixture(m1=1, m2=1):
    """Two vertices ``v -> w``, 1-dimensional, edge scalars ``m1`` and ``m2``."""
    D = Diagram.build(["v", "w"], [("e", "v", "w")])
    T1 = Representation.build(D, {"v": 1, "w": 1}, {"e": _one(m1)})
    T2 = Representation.build(D, {"v": 1, "w": 1}, {"e": _one(m2)})
    return D, T1, T2


# -- random ------------------------------------------------------------------

def _rand_matrix(rng: random.Random, rows: int, cols: int, lo=-2, hi=2, zero_bias=0.3):
    return Matrix([[0 if rng.random() < zero_bias else Fraction(rng.randint(lo, hi),
                                                                   rng.choice((1, 1, 1, 2)))
                    for _ in range(cols)] for _ in range(rows)], rows=rows, cols=cols)


def random_diagram(rng: random.Random, max_vertices=5, max_edges=8) -> Diagram:
    nv = rng.randint(1, max_vertices)
    verts = [f"v{i}" for i in range(nv)]
    ne = rng.randint(0, max_edges)
    edges = [(f"e{j}", rng.choice(verts), rng.choice(verts)) for j in range(ne)]
    return Diagram.build(verts, edges)


def random_representation(rng: random.Random, D: Diagram, dims=None, max_dim=4,
                          structured: float = 0.5) -> Representation:
    """Random representation. With probability ``structured`` an edge map is
    sparse, which leaves room for nontrivial intertwiners."""
    if dims is None:
        dims = {v: rng.randint(0, max_dim) for v in D.sorted_vertices()}
    mats = {}
    for e in sorted(D.edges):
        if D.is_identity(e):
            continue
        s, t = D.edges[e]
        if rng.random() < structured:
            # sparse, low-rank maps leave room for intertwiners
            mats[e] = _rand_matrix(rng, dims[t], dims[s], zero_bias=0.7)
        else:
            mats[e] = _rand_matrix(rng, dims[t], dims[s])
    return Representation.build(D, dims, mats)


def random_representation_pair(rng: random.Random, D: Diagram, max_dim=4):
    """Two random representations: a conjugate pair, an equal pair, or independent maps."""
    T1 = random_representation(rng, D, max_dim=max_dim)
    r = rng.random()
    if r < 0.4:
        g = {}
        for v in D.sorted_vertices():
            n = T1.dims[v]
            while True:
                m = _rand_matrix(rng, n, n, zero_bias=0.4)
                if m.inverse() is not None:
                    break
            g[v] = m
        T2 = T1.conjugated(D, g)
    elif r < 0.6:
        T2 = T1
    else:
        T2 = random_representation(rng, D, dims=dict(T1.dims))
    return T1, T2


def random_fixture(seed: int, max_vertices=5, max_edges=8, max_dim=4):
    rng = random.Random(seed)
    D = random_diagram(rng, max_vertices, max_edges)
    T1, T2 = random_representation_pair(rng, D, max_dim=max_dim)
    return D, T1, T2


# -- bundled corpus ------------------------------------------------------------

def interval_fixture():
    """(I, dI) in degree 1 and (dI, pt) in degree 0 joined by the coboundary edge.

    The second representation is the first conjugated by [[2]] on the
    degree-1 vertex. Returns ``(D, T1, T2)``.
    """
    from .simplicial import SimplicialComplex, boundary, make_diagram_fixture, simplex
    pt = SimplicialComplex.from_maximal([(0,)])
    pairs = {"I": (simplex(1), boundary(1), 1), "dI": (boundary(1), pt, 0)}
    return make_diagram_fixture(pairs, triples=[("delta", "dI", "I")],
                                conjugate={"I": Matrix([[2]])})


def circle_fixture():
    """The triangle boundary in degrees 0 and 1, with rotation and reflection edges."""
    from .simplicial import SimplicialComplex, boundary, make_diagram_fixture
    C = boundary(2)
    pt = SimplicialComplex.from_maximal([(0,)])
    empty = SimplicialComplex.empty()
    pairs = {"H0": (C, empty, 0), "H1": (C, empty, 1), "H1rel": (C, pt, 1)}
    rot = {0: 1, 1: 2, 2: 0}
    ref = {0: 0, 1: 2, 2: 1}
    maps = [("rot0", "H0", "H0", rot), ("rot1", "H1", "H1", rot), ("ref1", "H1", "H1", ref),
            ("ref1rel", "H1rel", "H1rel", ref), ("forget", "H1", "H1rel", {0: 0, 1: 1, 2: 2})]
    return make_diagram_fixture(pairs, maps, conjugate={"H1": Matrix([[3]]),
                                                        "H1rel": Matrix([[-1]])})


def sphere_fixture():
    """Boundary of the tetrahedron: skeletal pairs, a reflection and a coboundary edge."""
    from .simplicial import SimplicialComplex, boundary, make_diagram_fixture
    S = boundary(3)
    sk0, sk1 = S.skeleton(0), S.skeleton(1)
    empty = SimplicialComplex.empty()
    pairs = {"H0": (S, empty, 0), "H2": (S, empty, 2), "E1": (sk1, sk0, 1),
             "E2": (S, sk1, 2)}
    swap = {0: 1, 1: 0, 2: 2, 3: 3}
    maps = [("swap0", "H0", "H0", swap), ("swap2", "H2", "H2", swap),
            ("forget", "H2", "E2", {v: v for v in range(4)})]
    g = Matrix([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 2]])
    return make_diagram_fixture(pairs, maps, triples=[("delta", "E1", "E2")],
                                conjugate={"E2": g})


def sqrt2_torsor_fixture():
    """Loop ``e`` at v and an edge ``f: v -> w``.

    T1(e) = [[0, 2], [1, 0]] and T2(e) = [[0, 1], [2, 0]] both square to 2, so
    invertible intertwiners exist and can be sampled over Q(sqrt 2).
    Returns ``(D, T1, T2, minpoly)``.
    """
    D = Diagram.build(["v", "w"], [("e", "v", "v"), ("f", "v", "w")])
    I = Matrix.identity(2)
    T1 = Representation.build(D, {"v": 2, "w": 2}, {"e": Matrix([[0, 2], [1, 0]]), "f": I})
    T2 = Representation.build(D, {"v": 2, "w": 2}, {"e": Matrix([[0, 1], [2, 0]]), "f": I})
    return D, T1, T2, (-2, 0, 1)


def cyclic_torsor(n: int):
    from .torsor import FiniteTorsor
    return FiniteTorsor.from_function(n, lambda x, y, z: (x - y + z) % n)


def _odd_generators() -> dict:
    from .simplicial import SimplicialComplex, boundary
    SC = SimplicialComplex
    arc = (SC.from_maximal([(0, 1), (1, 2)]), SC.from_maximal([(0,), (2,)]), 1)
    two = SC.from_maximal([(0, 1), (1, 2), (3, 4), (4, 5)])
    arcs = (two, SC.from_maximal([(0,), (2,), (3,), (5,)]), 1)
    pts = (two, SC.empty(), 0)
    circle = (boundary(2), SC.from_maximal([(0,)]), 1)
    return {"arc": ({"a": arc}, 3), "two-arcs": ({"b": arcs}, 3),
            "arc+two-arcs": ({"a": arc, "b": arcs}, 3),
            "circle+points": ({"c": circle, "e": pts}, 3)}


def odd_sign_fixture(name: str):
    from .simplicial import kunneth_fixture
    gens, length = _odd_generators()[name]
    return kunneth_fixture(gens, length)


def odd_sign_fixtures():
    """Graded fixtures of geometric origin with odd vertices of rank 1 and 2.

    Each entry is ``(name, D, P, T, length)``; products are concatenations of
    words of total length at most ``length``.
    """
    return [(name, *odd_sign_fixture(name), length)
            for name, (_, length) in _odd_generators().items()]


def localization_corpus():
    """``(name, D, P, T, f0)`` for rank-one graded fixtures with an even vertex f0."""
    z22 = ([(a, b) for a in range(2) for b in range(2)],
           lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), (0, 0))
    out = []
    D, P, T = group_graded_fixture(1)
    out.append(("Z1", D, P, T, "0"))
    D, P, T = group_graded_fixture(2)
    out.append(("Z2", D, P, T, "0"))
    D, P, T = group_graded_fixture(4)
    out.append(("Z4@2", D, P, T, "2"))
    out.append(("Z4@0", D, P, T, "0"))
    D, P, T = group_graded_fixture(group=z22, grading=lambda a: a[0])
    out.append(("Z2xZ2", D, P, T, "(0, 1)"))
    return out


def _corpus_builders() -> dict:
    return {"single-vertex": lambda: single_vertex_fixture(1),
            "single-vertex-2": lambda: single_vertex_fixture(2),
            "a2-identity": lambda: a2_fixture(1, 1),
            "a2-scaled": lambda: a2_fixture(2, 3),
            "a2-zero": lambda: a2_fixture(0, 1),
            "interval": interval_fixture,
            "circle": circle_fixture,
            "sphere": sphere_fixture,
            "sqrt2-torsor": lambda: sqrt2_torsor_fixture()[:3]}


def corpus():
    """Named ungraded fixtures ``(name, D, T1, T2)`` that ship with the package."""
    return [(name, *build()) for name, build in _corpus_builders().items()]


def _documents() -> dict:
    from . import io
    from .rigidity import finite_order_generators
    from .simplicial import SimplicialComplex, boundary, simplex
    SC = SimplicialComplex
    docs = {}
    for name, build in _corpus_builders().items():
        docs[name] = lambda build=build: _emit_pair(build())
    for n in (1, 2, 4):
        docs[f"graded-z{n}"] = lambda n=n: _emit_graded(group_graded_fixture(n))
    docs["graded-z2xz2"] = lambda: _emit_graded(next(
        (D, P, T) for nm, D, P, T, _ in localization_corpus() if nm == "Z2xZ2"))
    odd = {"arc": "odd-arc", "two-arcs": "odd-two-arcs", "arc+two-arcs": "odd-mixed",
           "circle+points": "odd-circle-points"}
    for name, doc_name in odd.items():
        docs[doc_name] = lambda name=name: _emit_graded(odd_sign_fixture(name))
    for n in (1, 2, 3, 4):
        docs[f"torsor-z{n}"] = lambda n=n: io.emit_torsor(cyclic_torsor(n))
    arcs = [SC.from_maximal([(0, 1), (1, 2)]), SC.from_maximal([(0, 2)])]
    docs["complex-interval"] = lambda: io.emit_complex(simplex(1), boundary(1))
    docs["complex-circle"] = lambda: io.emit_complex(boundary(2), cover=arcs)
    docs["complex-triangle"] = lambda: io.emit_complex(simplex(2))
    docs["complex-sphere"] = lambda: io.emit_complex(
        boundary(3), cover=[SC.from_maximal([f for f in boundary(3).maximal() if 3 in f]),
                            SC.from_maximal([(0, 1, 2)])])
    docs["pairing-euclidean"] = lambda: io.emit_pairing(
        Matrix.identity(2), [Matrix([["3/5", "-4/5"], ["4/5", "3/5"]])])
    docs["pairing-symplectic"] = lambda: io.emit_pairing(
        Matrix([[0, 1], [-1, 0]]), [Matrix([[1, 1], [0, 1]])])
    docs["pairing-diagonal"] = lambda: io.emit_pairing(Matrix([[1, 0], [0, 2]]))
    docs["monoid-rotation"] = lambda: io.emit_monoid([finite_order_generators()[0]], True)
    docs["monoid-hexagonal"] = lambda: io.emit_monoid(finite_order_generators()[2:4], True)
    return docs


def _emit_pair(fx) -> dict:
    from . import io
    D, T1, T2 = fx
    return io.emit_diagram(D, [T1, T2])


def _emit_graded(fx) -> dict:
    from . import io
    D, P, T = fx
    return io.emit_diagram(D, [T], P)


def fixture_names() -> list[str]:
    return sorted(_documents())


def fixture_document(name: str) -> dict:
    docs = _documents()
    if name not in docs:
        raise KeyError(f"unknown fixture {name!r}; try one of: {', '.join(sorted(docs))}")
    return docs[name]()


def bundled_dir():
    from pathlib import Path
    return Path(__file__).with_name("data") / "fixtures"


def load_bundled(name: str) -> dict:
    """The shipped JSON file for ``name``; it matches ``fixture_document(name)``."""
    import json
    path = bundled_dir() / f"{name}.json"
    if not path.exists():
        raise KeyError(f"no bundled file for fixture {name!r}")
    with path.open() as fh:
        return json.load(fh)
