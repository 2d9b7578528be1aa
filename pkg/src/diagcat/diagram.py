"""Diagrams, graded product structures and their representations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .linalg import Matrix, kron, swap_matrix

__all__ = [
    "Report",
    "Diagram",
    "ProductStructure",
    "Representation",
    "GradedRepresentation",
    "validate_diagram",
    "validate_representation",
    "validate_graded",
    "product_diagram",
    "finite_subdiagram",
]


@dataclass
class Report:
    """Outcome of a check: a verdict, the violations found, and extra data."""

    ok: bool
    violations: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), **self.details}

    def __bool__(self):
        return self.ok


@dataclass(frozen=True, eq=False)
class Diagram:
    """Directed graph with ``Z/2`` vertex grades and distinguished identity edges.

    ``edges`` maps edge id to ``(src, dst)``; ``identities`` maps a vertex to
    the id of its identity edge.
    """

    vertices: Mapping[str, int]
    edges: Mapping[str, tuple[str, str]]
    identities: Mapping[str, str]

    @classmethod
    def build(cls, vertices, edges: Iterable = (), add_identities: bool = True,
              identities: Mapping[str, str] | None = None) -> "Diagram":
        """Build from ``vertices`` (list of ids or id -> grade) and ``(id, src, dst)`` edges.

        With ``add_identities`` every vertex without an identity edge gets
        one named ``id:<vertex>``.
        """
        if not isinstance(vertices, Mapping):
            vertices = {v: 0 for v in vertices}
        verts = {str(v): int(g) % 2 for v, g in vertices.items()}
        eds: dict[str, tuple[str, str]] = {}
        for e, s, t in edges:
            if e in eds:
                raise ValueError(f"duplicate edge id {e!r}")
            eds[e] = (s, t)
        ids = dict(identities or {})
        if add_identities:
            for v in verts:
                if v not in ids:
                    e = f"id:{v}"
                    ids[v] = e
                    eds.setdefault(e, (v, v))
        return cls(verts, eds, ids)

    def sorted_vertices(self) -> list[str]:
        return sorted(self.vertices)

    def grade(self, v: str) -> int:
        return self.vertices[v]

    def edge_grade(self, e: str) -> int:
        s, t = self.edges[e]
        return (self.vertices[s] - self.vertices[t]) % 2

    def is_identity(self, e: str) -> bool:
        s, t = self.edges[e]
        return s == t and self.identities.get(s) == e

    def edges_within(self, subset) -> list[str]:
        subset = set(subset)
        return sorted(e for e, (s, t) in self.edges.items() if s in subset and t in subset)

    def non_identity_edges(self, subset=None) -> list[str]:
        es = self.edges_within(self.vertices if subset is None else subset)
        return [e for e in es if not self.is_identity(e)]

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        return (dict(self.vertices) == dict(other.vertices)
                and dict(self.edges) == dict(other.edges)
                and dict(self.identities) == dict(other.identities))

    def __len__(self):
        return len(self.vertices)


@dataclass(frozen=True, eq=False)
class ProductStructure:
    """Commutative product structure on a graded diagram.

    ``table[(f, g)]`` is the vertex ``f x g``; ``alpha[(f, g)]`` the edge
    ``f x g -> g x f``; ``beta[(f, g, h)]`` the edge ``f x (g x h) -> (f x g) x h``.
    ``left[(gamma, g)]`` is the edge ``gamma x id_g`` and ``right[(g, gamma)]``
    the edge ``id_g x gamma``; products with identity edges are identities
    and need not be listed. The table may be partial for fixtures that only
    materialise the products a computation needs.
    """

    table: Mapping[tuple[str, str], str]
    alpha: Mapping[tuple[str, str], str] = field(default_factory=dict)
    beta: Mapping[tuple[str, str, str], str] = field(default_factory=dict)
    unit: str | None = None
    unit_edges: Mapping[str, str] = field(default_factory=dict)
    left: Mapping[tuple[str, str], str] = field(default_factory=dict)
    right: Mapping[tuple[str, str], str] = field(default_factory=dict)

    def __eq__(self, other):
        if not isinstance(other, ProductStructure):
            return NotImplemented
        names = ("table", "alpha", "beta", "unit_edges", "left", "right")
        return self.unit == other.unit and all(
            dict(getattr(self, n)) == dict(getattr(other, n)) for n in names)

    __hash__ = None

    def prod(self, f: str, g: str) -> str:
        try:
            return self.table[(f, g)]
        except KeyError:
            raise KeyError(f"product {f} x {g} is not defined") from None

    def has(self, f: str, g: str) -> bool:
        return (f, g) in self.table

    def edge_left(self, D: Diagram, gamma: str, g: str) -> str | None:
        s, t = D.edges[gamma]
        if D.is_identity(gamma) and (s, g) in self.table:
            return D.identities[self.table[(s, g)]]
        return self.left.get((gamma, g))

    def edge_right(self, D: Diagram, g: str, gamma: str) -> str | None:
        s, t = D.edges[gamma]
        if D.is_identity(gamma) and (g, s) in self.table:
            return D.identities[self.table[(g, s)]]
        return self.right.get((g, gamma))


@dataclass(frozen=True, eq=False)
class Representation:
    """Covariant representation: ``mats[e]`` maps ``T(src)`` to ``T(dst)``."""

    dims: Mapping[str, int]
    mats: Mapping[str, Matrix]

    @classmethod
    def build(cls, D: Diagram, dims: Mapping[str, int], mats: Mapping[str, Matrix],
              **kw) -> "Representation":
        """Fill in identity matrices for identity edges not given explicitly."""
        full = dict(mats)
        for v, e in D.identities.items():
            if e not in full and v in dims:
                full[e] = Matrix.identity(dims[v])
        return cls(dict(dims), full, **kw)

    def __call__(self, e: str) -> Matrix:
        return self.mats[e]

    def dim(self, v: str) -> int:
        return self.dims[v]

    def restricted(self, D: Diagram, subset) -> "Representation":
        subset = set(subset)
        es = set(D.edges_within(subset))
        kw = {}
        if isinstance(self, GradedRepresentation):
            kw["tau"] = self.tau
        return type(self)({v: n for v, n in self.dims.items() if v in subset},
                          {e: m for e, m in self.mats.items() if e in es}, **kw)

    def conjugated(self, D: Diagram, g: Mapping[str, Matrix]) -> "Representation":
        """Transport along vertexwise isomorphisms: ``g[dst] T(e) g[src]^-1``."""
        inv = {}
        for v, m in g.items():
            mi = m.inverse()
            if mi is None:
                raise ValueError(f"conjugating matrix at {v!r} is singular")
            inv[v] = mi
        mats = {}
        for e, m in self.mats.items():
            s, t = D.edges[e]
            mats[e] = g[t] @ m @ inv[s]
        return Representation(dict(self.dims), mats)

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (dict(self.dims) == dict(other.dims) and dict(self.mats) == dict(other.mats)
                and dict(getattr(self, "tau", {})) == dict(getattr(other, "tau", {})))


@dataclass(frozen=True, eq=False)
class GradedRepresentation(Representation):
    """Representation with isomorphisms ``tau[(f, g)]: T(f x g) -> T(f) (x) T(g)``."""

    tau: Mapping[tuple[str, str], Matrix] = field(default_factory=dict)

    @classmethod
    def build(cls, D: Diagram, dims, mats, tau=None) -> "GradedRepresentation":
        return super().build(D, dims, mats, tau=dict(tau or {}))

    def tau_inv(self, f: str, g: str) -> Matrix:
        m = self.tau[(f, g)].inverse()
        if m is None:
            raise ValueError(f"tau[{f},{g}] is not invertible")
        return m


# -- validation --------------------------------------------------------------

def validate_diagram(D: Diagram) -> Report:
    bad = []
    for e, (s, t) in sorted(D.edges.items()):
        for end in (s, t):
            if end not in D.vertices:
                bad.append(f"edge {e!r} references unknown vertex {end!r}")
    for v in D.sorted_vertices():
        e = D.identities.get(v)
        if e is None:
            bad.append(f"vertex {v!r} has no identity edge")
        elif D.edges.get(e) != (v, v):
            bad.append(f"identity edge {e!r} of {v!r} is not a loop at {v!r}")
    for v in D.identities:
        if v not in D.vertices:
            bad.append(f"identity edge declared for unknown vertex {v!r}")
    return Report(not bad, bad, {"vertices": len(D.vertices), "edges": len(D.edges)})


def validate_representation(D: Diagram, T: Representation) -> Report:
    bad = []
    for v in D.sorted_vertices():
        n = T.dims.get(v)
        if n is None:
            bad.append(f"no dimension for vertex {v!r}")
        elif n < 0:
            bad.append(f"negative dimension at {v!r}")
    for e in sorted(D.edges):
        s, t = D.edges[e]
        m = T.mats.get(e)
        if m is None:
            bad.append(f"no matrix for edge {e!r}")
            continue
        if s not in T.dims or t not in T.dims:
            continue
        if m.shape != (T.dims[t], T.dims[s]):
            bad.append(f"edge {e!r} has shape {m.shape}, expected {(T.dims[t], T.dims[s])}")
        elif D.is_identity(e) and not m.is_identity():
            bad.append(f"identity edge {e!r} is not mapped to the identity")
    for e in T.mats:
        if e not in D.edges:
            bad.append(f"matrix given for unknown edge {e!r}")
    return Report(not bad, bad)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def validate_graded(D: Diagram, P: ProductStructure, T: GradedRepresentation,
                    sign_rule: str = "degree", total: bool = True) -> Report:
    """Check the graded-representation axioms as exact matrix identities.

    Axiom 3 carries the sign ``(-1)^|gamma|`` with ``sign_rule="degree"`` or
    ``(-1)^(|g||gamma|)`` with ``sign_rule="koszul"``.  With ``total=False``
    the product table may be partial and each axiom is checked wherever its
    ingredients are defined.
    """
    if sign_rule not in ("degree", "koszul"):
        raise ValueError("sign_rule must be 'degree' or 'koszul'")
    bad: list[str] = []
    axioms = {"structure": True, "tau": True, "1": True, "2": True, "3": True, "4": True,
              "unit": True}
    counts = {k: 0 for k in axioms}

    def fail(key, msg):
        axioms[key] = False
        bad.append(f"[{key}] {msg}")

    verts = set(D.vertices)
    dims = T.dims

    def edge_ok(e, s, t, what):
        if e not in D.edges:
            fail("structure", f"{what}: edge {e!r} does not exist")
            return False
        if D.edges[e] != (s, t):
            fail("structure", f"{what}: edge {e!r} goes {D.edges[e]}, expected {(s, t)}")
            return False
        return True

    for (f, g), h in sorted(P.table.items()):
        counts["structure"] += 1
        if f not in verts or g not in verts or h not in verts:
            fail("structure", f"product {f} x {g} = {h} references unknown vertices")
            continue
        if D.grade(h) != (D.grade(f) + D.grade(g)) % 2:
            fail("structure", f"|{f} x {g}| != |{f}| + |{g}|")
    if total:
        for f in D.sorted_vertices():
            for g in D.sorted_vertices():
                if (f, g) not in P.table:
                    fail("structure", f"product {f} x {g} is not defined")

    tau_inv = {}
    for (f, g), h in sorted(P.table.items()):
        if h not in verts or f not in verts or g not in verts:
            continue
        t = T.tau.get((f, g))
        counts["tau"] += 1
        if t is None:
            fail("tau", f"missing tau[{f},{g}]")
            continue
        if t.shape != (dims[f] * dims[g], dims[h]):
            fail("tau", f"tau[{f},{g}] has shape {t.shape}")
            continue
        ti = t.inverse()
        if ti is None:
            fail("tau", f"tau[{f},{g}] is not invertible")
            continue
        tau_inv[(f, g)] = ti

    # (1) commutativity constraint
    for (f, g), a in sorted(P.alpha.items()):
        if (f, g) not in P.table or (g, f) not in P.table:
            fail("structure", f"alpha[{f},{g}] given but a product is undefined")
            continue
        if not edge_ok(a, P.table[(f, g)], P.table[(g, f)], f"alpha[{f},{g}]"):
            continue
        if (f, g) not in tau_inv or (g, f) not in tau_inv:
            continue
        counts["1"] += 1
        lhs = T.tau[(g, f)] @ T(a) @ tau_inv[(f, g)]
        rhs = swap_matrix(dims[f], dims[g]) * _sign(D.grade(f) * D.grade(g))
        if lhs != rhs:
            fail("1", f"tau alpha tau^-1 != (-1)^(|{f}||{g}|) swap for ({f},{g})")
    if total:
        for f in D.sorted_vertices():
            for g in D.sorted_vertices():
                if (f, g) not in P.alpha:
                    fail("structure", f"missing alpha[{f},{g}]")

    # (2) gamma x id
    for (gamma, g), e in sorted(P.left.items()):
        if gamma not in D.edges:
            fail("structure", f"left product of unknown edge {gamma!r}")
            continue
        f, f2 = D.edges[gamma]
        if (f, g) not in P.table or (f2, g) not in P.table:
            fail("structure", f"{gamma} x id_{g}: products undefined")
            continue
        if not edge_ok(e, P.table[(f, g)], P.table[(f2, g)], f"{gamma} x id_{g}"):
            continue
        if (f, g) not in tau_inv or (f2, g) not in tau_inv:
            continue
        counts["2"] += 1
        lhs = T.tau[(f2, g)] @ T(e) @ tau_inv[(f, g)]
        if lhs != kron(T(gamma), Matrix.identity(dims[g])):
            fail("2", f"axiom 2 fails for {gamma} x id_{g}")

    # (3) id x gamma, with the configured sign
    for (g, gamma), e in sorted(P.right.items()):
        if gamma not in D.edges:
            fail("structure", f"right product of unknown edge {gamma!r}")
            continue
        f, f2 = D.edges[gamma]
        if (g, f) not in P.table or (g, f2) not in P.table:
            fail("structure", f"id_{g} x {gamma}: products undefined")
            continue
        if not edge_ok(e, P.table[(g, f)], P.table[(g, f2)], f"id_{g} x {gamma}"):
            continue
        if (g, f) not in tau_inv or (g, f2) not in tau_inv:
            continue
        counts["3"] += 1
        dg = D.edge_grade(gamma)
        s = _sign(dg) if sign_rule == "degree" else _sign(D.grade(g) * dg)
        lhs = T.tau[(g, f2)] @ T(e) @ tau_inv[(g, f)]
        if lhs != kron(Matrix.identity(dims[g]), T(gamma)) * s:
            fail("3", f"axiom 3 fails for id_{g} x {gamma}")

    # (4) associativity
    for (f, g, h), b in sorted(P.beta.items()):
        try:
            gh, fg = P.prod(g, h), P.prod(f, g)
            src, dst = P.prod(f, gh), P.prod(fg, h)
        except KeyError as exc:
            fail("structure", f"beta[{f},{g},{h}]: {exc.args[0]}")
            continue
        if not edge_ok(b, src, dst, f"beta[{f},{g},{h}]"):
            continue
        if any(k not in tau_inv for k in [(g, h), (f, g), (f, gh), (fg, h)]):
            continue
        counts["4"] += 1
        via_left = kron(T.tau[(f, g)], Matrix.identity(dims[h])) @ T.tau[(fg, h)] @ T(b)
        via_right = kron(Matrix.identity(dims[f]), T.tau[(g, h)]) @ T.tau[(f, gh)]
        if via_left != via_right:
            fail("4", f"associativity square fails for ({f},{g},{h})")

    # unit
    if P.unit is not None:
        u = P.unit
        if u not in verts:
            fail("structure", f"unit {u!r} is not a vertex")
        elif D.grade(u) != 0:
            fail("structure", "unit vertex is not of degree 0")
        else:
            for f in D.sorted_vertices():
                e = P.unit_edges.get(f)
                if e is None:
                    if (u, f) in P.table or total:
                        fail("unit", f"missing unit edge for {f}")
                    continue
                if (u, f) not in P.table:
                    fail("structure", f"unit edge for {f} but {u} x {f} undefined")
                    continue
                if not edge_ok(e, f, P.table[(u, f)], f"u_{f}"):
                    continue
                counts["unit"] += 1
                if T(e).inverse() is None:
                    fail("unit", f"T(u_{f}) is not invertible")

    return Report(not bad, bad, {"axioms": axioms, "checked": counts, "sign_rule": sign_rule})


# -- constructions -----------------------------------------------------------

def product_diagram(D1: Diagram, D2: Diagram) -> Diagram:
    """Product diagram: vertices are pairs, edges are ``a x id`` and ``id x b`` only."""
    verts = {}
    for f in D1.sorted_vertices():
        for g in D2.sorted_vertices():
            verts[f"({f},{g})"] = (D1.grade(f) + D2.grade(g)) % 2
    edges = []
    ids = {}
    for f in D1.sorted_vertices():
        for g in D2.sorted_vertices():
            v = f"({f},{g})"
            e = f"({D1.identities[f]},{D2.identities[g]})"
            edges.append((e, v, v))
            ids[v] = e
    for a in sorted(D1.edges):
        if D1.is_identity(a):
            continue
        s, t = D1.edges[a]
        for g in D2.sorted_vertices():
            edges.append((f"({a},{D2.identities[g]})", f"({s},{g})", f"({t},{g})"))
    for b in sorted(D2.edges):
        if D2.is_identity(b):
            continue
        s, t = D2.edges[b]
        for f in D1.sorted_vertices():
            edges.append((f"({D1.identities[f]},{b})", f"({f},{s})", f"({f},{t})"))
    return Diagram.build(verts, edges, add_identities=False, identities=ids)


def finite_subdiagram(D: Diagram, subset) -> Diagram:
    """Full subdiagram on ``subset``: all edges of D between its vertices."""
    subset = set(subset)
    unknown = subset - set(D.vertices)
    if unknown:
        raise KeyError(f"unknown vertices {sorted(unknown)}")
    verts = {v: g for v, g in D.vertices.items() if v in subset}
    edges = [(e, *D.edges[e]) for e in D.edges_within(subset)]
    ids = {v: e for v, e in D.identities.items() if v in subset}
    return Diagram.build(verts, edges, add_identities=False, identities=ids)
