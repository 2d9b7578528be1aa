"""Truncated localization of a graded diagram at an even rank-one vertex.

Vertex ``f(n)`` is named ``f@n``. With a fixed basis ``w`` of T(f0) the
space T(f) (x) T(f0)^n has the basis ``e_i (x) w^n`` (or ``(w^*)^|n|`` for
negative n), so every structure matrix of the extension is the matrix of
the corresponding structure map of the effective diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .bialgebra import hom_comultiplication
from .diagram import Diagram, GradedRepresentation, ProductStructure, Report
from .endo import EndAlgebra, end_algebra
from .linalg import Matrix

__all__ = [
    "LocalizedDiagram",
    "localize_diagram",
    "extend_representation",
    "TransitionReport",
    "chi_and_transitions",
    "chi_squared_check",
    "level_dimensions",
    "localization_report",
]

_ZERO = Fraction(0)


def at(v: str, n: int) -> str:
    return f"{v}@{n}"


@dataclass(frozen=True, eq=False)
class LocalizedDiagram:
    base: Diagram
    base_product: ProductStructure
    f0: str
    N: int
    diagram: Diagram
    product: ProductStructure
    twist: dict  # (f, n) -> edge (f x f0)(n) -> f(n+1)

    def level(self, n: int) -> list[str]:
        return [at(v, n) for v in self.base.sorted_vertices()]

    def twist_edges(self) -> list[str]:
        return [self.twist[k] for k in sorted(self.twist)]


def localize_diagram(D: Diagram, P: ProductStructure, f0: str, N: int) -> LocalizedDiagram:
    if f0 not in D.vertices:
        raise KeyError(f"unknown vertex {f0!r}")
    if D.grade(f0) % 2:
        raise ValueError(f"{f0!r} has odd degree; localize at {f0} x {f0} instead")
    if N < 0:
        raise ValueError("truncation bound must be non-negative")
    if P.unit is None:
        raise ValueError("localization needs a unit vertex")
    levels = range(-N, N + 1)
    verts = {at(v, n): D.grade(v) for v in D.sorted_vertices() for n in levels}
    edges, ids = [], {}
    for n in levels:
        for e in sorted(D.edges):
            s, t = D.edges[e]
            edges.append((at(e, n), at(s, n), at(t, n)))
        for v, e in D.identities.items():
            ids[at(v, n)] = at(e, n)
    twist = {}
    for n in range(-N, N):
        for v in D.sorted_vertices():
            if (v, f0) not in P.table:
                raise ValueError(f"{v} x {f0} is not defined")
            e = f"tw:{v}@{n}"
            edges.append((e, at(P.table[(v, f0)], n), at(v, n + 1)))
            twist[(v, n)] = e
    L = Diagram.build(verts, edges, add_identities=False, identities=ids)

    def ok(k):
        return -N <= k <= N

    table, alpha, beta, left, right = {}, {}, {}, {}, {}
    for (f, g), h in P.table.items():
        for n in levels:
            for m in levels:
                if ok(n + m):
                    table[(at(f, n), at(g, m))] = at(h, n + m)
                    if (f, g) in P.alpha:
                        alpha[(at(f, n), at(g, m))] = at(P.alpha[(f, g)], n + m)
    for (f, g, h), b in P.beta.items():
        for n in levels:
            for m in levels:
                for r in levels:
                    if all(ok(k) for k in (n + m, m + r, n + m + r)):
                        beta[(at(f, n), at(g, m), at(h, r))] = at(b, n + m + r)
    for (gamma, g), e in P.left.items():
        for n in levels:
            for m in levels:
                if ok(n + m):
                    left[(at(gamma, n), at(g, m))] = at(e, n + m)
    for (g, gamma), e in P.right.items():
        for n in levels:
            for m in levels:
                if ok(n + m):
                    right[(at(g, m), at(gamma, n))] = at(e, n + m)
    unit_edges = {at(f, n): at(u, n) for f, u in P.unit_edges.items() for n in levels}
    LP = ProductStructure(table, alpha, beta, at(P.unit, 0), unit_edges, left, right)
    return LocalizedDiagram(D, P, f0, N, L, LP, twist)


def extend_representation(L: LocalizedDiagram, T: GradedRepresentation) -> GradedRepresentation:
    if T.dims[L.f0] != 1:
        raise ValueError(f"T({L.f0}) must have dimension 1, not {T.dims[L.f0]}")
    D = L.base
    dims, mats, tau = {}, {}, {}
    levels = range(-L.N, L.N + 1)
    for n in levels:
        for v in D.sorted_vertices():
            dims[at(v, n)] = T.dims[v]
        for e in D.edges:
            mats[at(e, n)] = T(e)
    for (v, n), e in L.twist.items():
        # T(f x f0) -> T(f) (x) T(f0) = T(f) in the basis e_i (x) w
        mats[e] = T.tau[(v, L.f0)]
    for (fn, gm), _ in L.product.table.items():
        f, g = fn.rsplit("@", 1)[0], gm.rsplit("@", 1)[0]
        tau[(fn, gm)] = T.tau[(f, g)]
    return GradedRepresentation(dims, mats, tau)


# -- transitions -------------------------------------------------------------

@dataclass
class TransitionReport:
    F: tuple
    F_big: tuple
    chi: tuple  # coordinates of chi in A({f0})
    transition: Matrix  # End(T|F') -> End(T|F), k x k'
    chi_multiplication: Matrix  # x -> chi x as a k' x k matrix A(F) -> A(F')
    well_defined: bool
    agrees: bool
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.well_defined and self.agrees

    def coalgebra_transition(self) -> Matrix:
        return self.transition.T

    def to_dict(self) -> dict:
        return {"ok": self.ok, "F": list(self.F), "F_big": list(self.F_big),
                "chi": [str(x) for x in self.chi],
                "transition": [[str(x) for x in r] for r in self.coalgebra_transition().data],
                "well_defined": self.well_defined, "agrees": self.agrees,
                "notes": list(self.notes)}


def _chi(E0: EndAlgebra) -> tuple:
    """chi is the dual of id in End(T(f0)): its value on each basis element."""
    c = E0.coords({E0.F[0]: Matrix.identity(1)})
    # End(T(f0)) = Q id, so the basis is a single multiple of id
    if E0.dim != 1 or c is None:
        raise ValueError("End(T(f0)) must be one-dimensional")
    return (Fraction(1) / c[0],)


def chi_and_transitions(D: Diagram, P: ProductStructure, T: GradedRepresentation, f0: str, F,
                        F_big, small: EndAlgebra | None = None,
                        big: EndAlgebra | None = None) -> TransitionReport:
    """Transition ``a -> (tau a_{f x f0} tau^-1)_f`` and its comparison with ``x -> chi x``.

    The transition is computed directly from the endomorphism rule; the
    multiplication by chi goes through the mixed comultiplication
    End(T|F') -> End(T|F) (x) End(T|{f0}).
    """
    F, F_big = tuple(sorted(F)), tuple(sorted(F_big))
    if T.dims[f0] != 1:
        raise ValueError("the localizing vertex must be one-dimensional")
    missing = [f for f in F if (f, f0) not in P.table or P.table[(f, f0)] not in F_big]
    if missing:
        raise ValueError("products with f0 outside F': " + ", ".join(missing))
    E = small or end_algebra(D, T, F)
    Eb = big or end_algebra(D, T, F_big)
    E0 = end_algebra(D, T, [f0])
    chi = _chi(E0)
    cols = []
    well = True
    for idx in range(Eb.dim):
        a = Eb.element(idx)
        comp = {f: T.tau[(f, f0)] @ a[P.table[(f, f0)]] @ T.tau_inv(f, f0) for f in F}
        c = E.coords(comp)
        if c is None:
            well = False
            c = (_ZERO,) * E.dim
        cols.append(c)
    tr = Matrix._raw(tuple(zip(*cols)) if cols else tuple(() for _ in range(E.dim)),
                     E.dim, Eb.dim)
    coords, inside = hom_comultiplication(P, T, T, E, Eb, other=E0)
    # (chi x_i)(b'_a) = (x_i (x) chi)(mu*(b'_a)) = sum_j C^a_{ij} chi_j
    rows = []
    for C in coords:
        rows.append(tuple(sum((C[i][j] * chi[j] for j in range(E0.dim)), _ZERO)
                          for i in range(E.dim)))
    chi_mult = Matrix._raw(tuple(rows), Eb.dim, E.dim)
    notes = [] if inside else ["mixed comultiplication leaves End(T|F) (x) End(T|f0)"]
    return TransitionReport(F, F_big, chi, tr, chi_mult, well and inside,
                            chi_mult == tr.T, notes)


def chi_squared_check(D: Diagram, P: ProductStructure, T: GradedRepresentation, f0: str, F,
                      F1, F2) -> Report:
    """Two transitions F -> F1 -> F2 against multiplication by chi^2.

    chi^2 lives in A({f0 x f0}); multiplying by it uses the mixed
    comultiplication with components ``(f, f0 x f0)``, and the two
    bracketings are related by the associativity edges inside F2.
    """
    r1 = chi_and_transitions(D, P, T, f0, F, F1)
    r2 = chi_and_transitions(D, P, T, f0, F1, F2)
    composite = r2.coalgebra_transition() @ r1.coalgebra_transition()
    ff = P.prod(f0, f0)
    E = end_algebra(D, T, F)
    Eb = end_algebra(D, T, F2)
    Eff = end_algebra(D, T, [ff])
    # chi^2 = m(chi (x) chi): its value on id of T(f0 x f0)
    pair = end_algebra(D, T, [f0])
    c, inside0 = hom_comultiplication(P, T, T, pair, Eff)
    chi = _chi(pair)
    chi2 = tuple(sum((C[i][j] * chi[i] * chi[j] for i in range(pair.dim)
                      for j in range(pair.dim)), _ZERO) for C in c)
    coords, inside = hom_comultiplication(P, T, T, E, Eb, other=Eff)
    rows = [tuple(sum((C[i][j] * chi2[j] for j in range(Eff.dim)), _ZERO) for i in range(E.dim))
            for C in coords]
    direct = Matrix._raw(tuple(rows), Eb.dim, E.dim)
    ok = inside and inside0 and r1.ok and r2.ok and composite == direct
    return Report(ok, [] if ok else ["two transitions differ from multiplication by chi^2"],
                  {"chi2": [str(x) for x in chi2]})


def level_dimensions(L: LocalizedDiagram, T: GradedRepresentation) -> list[int]:
    """dim End(T|level n) for each level; the shift f(n) -> f(n+1) makes them equal."""
    return [end_algebra(L.diagram, T, L.level(n)).dim for n in range(-L.N, L.N + 1)]


def localization_report(D: Diagram, P: ProductStructure, T: GradedRepresentation, f0: str,
                        N: int) -> Report:
    from .diagram import validate_graded
    L = localize_diagram(D, P, f0, N)
    TL = extend_representation(L, T)
    v = validate_graded(L.diagram, L.product, TL, total=False)
    inv = all(TL(e).inverse() is not None for e in L.twist_edges())
    dims = level_dimensions(L, TL)
    checks = []
    for n in range(-N, N):
        F = L.level(n) + [at(f0, 0)]
        # the next level brings the twist edges into play
        F_big = sorted(set(F) | set(L.level(n + 1))
                       | {L.product.table[(f, at(f0, 0))] for f in F})
        r = chi_and_transitions(L.diagram, L.product, TL, at(f0, 0), F, F_big)
        checks.append(r.ok)
    ok = v.ok and inv and len(set(dims)) <= 1 and all(checks)
    bad = []
    if not v.ok:
        bad += v.violations
    if not inv:
        bad.append("a twist edge is not invertible")
    if len(set(dims)) > 1:
        bad.append(f"End dimensions differ across levels: {dims}")
    if not all(checks):
        bad.append("a transition differs from multiplication by chi")
    return Report(ok, bad, {"vertices": len(L.diagram.vertices), "edges": len(L.diagram.edges),
                            "valid": v.ok, "twists_invertible": inv, "level_dims": dims,
                            "transitions": checks})
