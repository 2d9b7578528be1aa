"""Comultiplication on End(T|F') induced by a graded product structure.

For ``a`` in End(T|F') the ``(f, g)`` component of ``mu*(a)`` is
``tau_{f,g} a_{f x g} tau_{f,g}^-1``, an endomorphism of T(f) (x) T(g).
Collecting components over F x F gives an element of
(prod_p End T(p)) (x) (prod_q End T(q)); it must lie in End(T|F) (x) End(T|F).
Because both bases are in reduced echelon form, the coordinates of such an
element are its entries at pairs of pivot positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .diagram import Diagram, GradedRepresentation, ProductStructure, Report
from .endo import EndAlgebra, IntertwinerSpace, end_algebra, restrict
from .linalg import Matrix, swap_matrix

__all__ = [
    "BialgebraReport",
    "comultiplication",
    "hom_comultiplication",
    "counit",
    "bialgebra",
    "mu_component",
]

_ZERO = Fraction(0)


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


def _check_products(P: ProductStructure, F, F_big) -> list[str]:
    missing = []
    for f in F:
        for g in F:
            if (f, g) not in P.table:
                missing.append(f"{f} x {g} (undefined)")
            elif P.table[(f, g)] not in F_big:
                missing.append(f"{f} x {g} = {P.table[(f, g)]}")
    return missing


def mu_component(T: GradedRepresentation, P: ProductStructure, a: dict, f: str, g: str) -> Matrix:
    t = T.tau[(f, g)]
    return t @ a[P.table[(f, g)]] @ T.tau_inv(f, g)


@dataclass
class BialgebraReport:
    F: tuple
    F_big: tuple
    small: EndAlgebra
    big: EndAlgebra
    coords: list  # per basis element of End(T|F'): k x k coordinate table
    well_defined: bool
    swap_invariant: bool
    koszul_face: bool
    coassociative: bool | None
    counital: bool | None
    counit: tuple | None
    notes: list = field(default_factory=list)

    @property
    def cocommutative(self) -> bool:
        return self.swap_invariant and self.koszul_face

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.cocommutative and self.coassociative is not False
                and self.counital is not False)

    def matrix(self) -> Matrix:
        """mu* as a (k*k) x k' matrix: row ``i*k + j``, column = basis of End(T|F')."""
        k = self.small.dim
        cols = [tuple(C[i][j] for i in range(k) for j in range(k)) for C in self.coords]
        if not cols:
            return Matrix.zeros(k * k, 0)
        return Matrix._raw(tuple(zip(*cols)), k * k, len(cols))

    def multiplication(self) -> Matrix:
        """Dual multiplication A(F) (x) A(F) -> A(F'), a k' x (k*k) matrix."""
        return self.matrix().T

    def multiply(self, x, y) -> tuple:
        """Product in the dual bases: A(F) x A(F) -> A(F')."""
        k = self.small.dim
        out = []
        for C in self.coords:
            s = _ZERO
            for i in range(k):
                if x[i] == 0:
                    continue
                for j in range(k):
                    if y[j] != 0 and C[i][j] != 0:
                        s = s + x[i] * y[j] * C[i][j]
            out.append(s)
        return tuple(out)

    def to_dict(self) -> dict:
        return {
            "ok": self.ok,
            "F": list(self.F),
            "F_big": list(self.F_big),
            "dim": self.small.dim,
            "dim_big": self.big.dim,
            "mu": [[[str(x) for x in row] for row in C] for C in self.coords],
            "counit": None if self.counit is None else [str(x) for x in self.counit],
            "well_defined": self.well_defined,
            "swap_invariant": self.swap_invariant,
            "koszul_face": self.koszul_face,
            "cocommutative": self.cocommutative,
            "coassociative": self.coassociative,
            "counital": self.counital,
            "notes": list(self.notes),
        }


def _tensor_entry_table(H1: IntertwinerSpace, H2: IntertwinerSpace, comps: dict) -> list[list]:
    """Dense N1 x N2 table of the element whose ``(f, g)`` block is ``comps[(f, g)]``.

    Blocks may be rectangular (Hom spaces); row ``(p, r1, c1)`` and column
    ``(q, r2, c2)`` read ``M[r1 * rows_q + r2, c1 * cols_q + c2]``.
    """
    W = [[_ZERO] * H2.ambient for _ in range(H1.ambient)]
    for bp in H1.blocks:
        for bq in H2.blocks:
            M = comps[(bp.vertex, bq.vertex)]
            for r1 in range(bp.rows):
                for c1 in range(bp.cols):
                    row = W[bp.offset + r1 * bp.cols + c1]
                    for r2 in range(bq.rows):
                        mrow = M.data[r1 * bq.rows + r2]
                        base = bq.offset + r2 * bq.cols
                        for c2 in range(bq.cols):
                            x = mrow[c1 * bq.cols + c2]
                            if x != 0:
                                row[base + c2] = x
    return W


def _split(H1: IntertwinerSpace, H2: IntertwinerSpace, W) -> tuple[list[list], bool]:
    """Coordinates of W in H1 (x) H2 and whether W actually lies there."""
    C = [[W[pi][pj] for pj in H2.basis.pivots] for pi in H1.basis.pivots]
    R = [[_ZERO] * H2.ambient for _ in range(H1.ambient)]
    nz1 = [[(t, x) for t, x in enumerate(v) if x != 0] for v in H1.basis.vectors]
    nz2 = [[(t, x) for t, x in enumerate(v) if x != 0] for v in H2.basis.vectors]
    for i, row in enumerate(C):
        for j, c in enumerate(row):
            if c == 0:
                continue
            for s, x in nz1[i]:
                Rs = R[s]
                cx = c * x
                for t, y in nz2[j]:
                    Rs[t] = Rs[t] + cx * y
    return C, R == W


def hom_comultiplication(P: ProductStructure, T1: GradedRepresentation,
                         T2: GradedRepresentation, small: IntertwinerSpace,
                         big: IntertwinerSpace, other: IntertwinerSpace | None = None
                         ) -> tuple[list, bool]:
    """``phi -> (tau2 phi_{f x g} tau1^-1)_{f,g}`` on each basis element of ``big``.

    The pairs ``(f, g)`` range over ``small.F x other.F`` (``other`` defaults
    to ``small``). Returns the coordinate tables in ``small (x) other`` and
    whether every image lies in that subspace.
    """
    other = other or small
    pairs = [(f, g) for f in small.F for g in other.F]
    inv = {fg: T1.tau_inv(*fg) for fg in pairs}
    coords = []
    inside = True
    for idx in range(big.dim):
        a = big.element(idx)
        comps = {fg: T2.tau[fg] @ a[P.table[fg]] @ inv[fg] for fg in pairs}
        C, ok = _split(small, other, _tensor_entry_table(small, other, comps))
        inside = inside and ok
        coords.append(C)
    return coords, inside


def _koszul_face(D, P, T, F) -> tuple[bool, list[str]]:
    notes = []
    for f in F:
        for g in F:
            a = P.alpha.get((f, g))
            if a is None:
                notes.append(f"no commutativity edge for ({f},{g})")
                return False, notes
            lhs = T.tau[(g, f)] @ T(a) @ T.tau_inv(f, g)
            rhs = swap_matrix(T.dims[f], T.dims[g]) * _sign(D.grade(f) * D.grade(g))
            if lhs != rhs:
                notes.append(f"commutativity constraint at ({f},{g}) lacks the Koszul sign")
                return False, notes
    return True, notes


def comultiplication(D: Diagram, P: ProductStructure, T: GradedRepresentation, F, F_big,
                     small: EndAlgebra | None = None, big: EndAlgebra | None = None
                     ) -> BialgebraReport:
    F, F_big = tuple(sorted(F)), tuple(sorted(F_big))
    missing = _check_products(P, F, F_big)
    if missing:
        raise ValueError("products outside F': " + ", ".join(missing))
    E = small or end_algebra(D, T, F)
    Eb = big or end_algebra(D, T, F_big)
    k = E.dim
    coords, well = hom_comultiplication(P, T, T, E, Eb)
    sym = all(C[i][j] == C[j][i] for C in coords for i in range(k) for j in range(i + 1, k))
    face, notes = _koszul_face(D, P, T, F)

    coassoc = _coassociativity(P, T, Eb, F, F_big, notes)

    eps = None
    counital = None
    if P.unit is not None and P.unit in F:
        eps = counit(D, T, F, P.unit, E)
        R = restrict(D, T, F, F_big, small=E, big=Eb).matrix
        counital = True
        for idx, C in enumerate(coords):
            target = R.col(idx)
            left = tuple(sum((eps[i] * C[i][j] for i in range(k)), _ZERO) for j in range(k))
            right = tuple(sum((C[i][j] * eps[j] for j in range(k)), _ZERO) for i in range(k))
            if left != target or right != target:
                counital = False
                break
    else:
        notes.append("unit vertex not in F; counit law not checked")
    return BialgebraReport(F, F_big, E, Eb, coords, well, sym, face, coassoc, counital, eps,
                           notes)


def _coassociativity(P, T, Eb, F, F_big, notes) -> bool | None:
    """Compare the two bracketings ``(f x g) x h`` and ``f x (g x h)`` componentwise.

    For ``a`` in End(T|F'), ``(mu* (x) id) mu*(a)`` has ``(f, g, h)`` component
    ``S a_{(fg)h} S^-1`` with ``S = (tau_fg (x) id) tau_{fg,h}``, and the other
    bracketing uses ``(id (x) tau_gh) tau_{f,gh}``.
    """
    from .linalg import kron
    triples = []
    for f in F:
        for g in F:
            for h in F:
                try:
                    fg, gh = P.prod(f, g), P.prod(g, h)
                    l, r = P.prod(fg, h), P.prod(f, gh)
                except KeyError:
                    notes.append(f"triple ({f},{g},{h}) lacks products; coassociativity skipped")
                    return None
                if l not in F_big or r not in F_big:
                    notes.append(f"triple ({f},{g},{h}) leaves F'; coassociativity skipped")
                    return None
                triples.append((f, g, h, fg, gh, l, r))
    dims = T.dims
    for f, g, h, fg, gh, l, r in triples:
        S = kron(T.tau[(f, g)], Matrix.identity(dims[h])) @ T.tau[(fg, h)]
        S2 = kron(Matrix.identity(dims[f]), T.tau[(g, h)]) @ T.tau[(f, gh)]
        Si, S2i = S.inverse(), S2.inverse()
        for idx in range(Eb.dim):
            a = Eb.element(idx)
            if S @ a[l] @ Si != S2 @ a[r] @ S2i:
                notes.append(f"bracketings differ at ({f},{g},{h})")
                return False
    return True


def counit(D: Diagram, T: GradedRepresentation, F, unit: str, E: EndAlgebra | None = None
           ) -> tuple:
    """Projection to the unit coordinate: ``eps(b_i) = (b_i)_unit`` as a 1x1 matrix."""
    if unit not in F:
        raise ValueError(f"unit vertex {unit!r} is not in F")
    if T.dims[unit] != 1:
        raise ValueError("the unit vertex must carry a one-dimensional space")
    E = E or end_algebra(D, T, F)
    off = E.block(unit).offset
    return tuple(v[off] for v in E.basis.vectors)


def bialgebra(D: Diagram, P: ProductStructure, T: GradedRepresentation, F, F_big) -> Report:
    """A(F,T) with comultiplication, counit and the dual multiplication into A(F',T)."""
    rep = comultiplication(D, P, T, F, F_big)
    commutative = rep.swap_invariant
    d = rep.to_dict()
    d["commutative"] = commutative
    d["multiplication"] = [[str(x) for x in row] for row in rep.multiplication().data]
    ok = rep.ok and commutative
    bad = [] if ok else ["bialgebra laws fail"] + rep.notes
    d.pop("ok")
    return Report(ok, bad, d)
