"""Formal period spaces P(F) by generators and relations, and the map Psi.

The generator ``(p, i, j)`` is the symbol ``(p, e_i, e_j^*)`` with ``e_i`` in
T1(p) and ``e_j^*`` in the dual of T2(p); it sits at coordinate
``offset_p + i * dim T2(p) + j`` of the ambient sum.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .bialgebra import hom_comultiplication
from .diagram import Diagram, GradedRepresentation, ProductStructure, Report, Representation
from .endo import EndAlgebra, IntertwinerSpace, end_algebra, intertwiners
from .linalg import Matrix, SubspaceBasis, rank

__all__ = [
    "PeriodSpace",
    "PsiReport",
    "hom_space",
    "period_space",
    "psi",
    "period_product",
    "HomCoaction",
    "left_coaction",
    "right_coaction",
    "coactions",
]

_ZERO = Fraction(0)


def hom_space(D: Diagram, T1: Representation, T2: Representation, F) -> IntertwinerSpace:
    return intertwiners(D, T1, T2, F)


@dataclass(frozen=True, eq=False)
class PeriodSpace:
    F: tuple[str, ...]
    offsets: dict  # vertex -> (offset, dim T1, dim T2)
    ambient: int
    relation_rows: tuple  # raw change-of-variables vectors
    relations: SubspaceBasis
    free: tuple[int, ...]  # non-pivot coordinates; their classes form a basis

    @property
    def dim(self) -> int:
        return len(self.free)

    def index(self, p: str, i: int, j: int) -> int:
        off, d1, d2 = self.offsets[p]
        if not (0 <= i < d1 and 0 <= j < d2):
            raise IndexError((p, i, j))
        return off + i * d2 + j

    def generator(self, p: str, i: int, j: int) -> tuple:
        v = [_ZERO] * self.ambient
        v[self.index(p, i, j)] = Fraction(1)
        return tuple(v)

    def reduce(self, v: Sequence) -> tuple:
        """Deterministic representative: subtract relations to clear pivot coordinates."""
        v = list(v)
        for row, p in zip(self.relations.vectors, self.relations.pivots):
            c = v[p]
            if c != 0:
                for t, x in enumerate(row):
                    if x != 0:
                        v[t] = v[t] - c * x
        return tuple(v)

    def classof(self, v: Sequence) -> tuple:
        r = self.reduce(v)
        return tuple(r[i] for i in self.free)

    def representative(self, coords: Sequence) -> tuple:
        v = [_ZERO] * self.ambient
        for i, c in zip(self.free, coords):
            v[i] = c
        return tuple(v)

    def symbols(self) -> list[tuple[str, int, int]]:
        out = []
        for p in self.F:
            off, d1, d2 = self.offsets[p]
            for i in range(d1):
                for j in range(d2):
                    out.append((p, i, j))
        return out

    def to_dict(self) -> dict:
        syms = self.symbols()
        return {"F": list(self.F), "dim": self.dim, "ambient": self.ambient,
                "relations": len(self.relation_rows),
                "relation_rank": self.relations.dim,
                "basis": [list(syms[i]) for i in self.free]}


def period_space(D: Diagram, T1: Representation, T2: Representation, F) -> PeriodSpace:
    F = tuple(sorted(F))
    offsets = {}
    n = 0
    for p in F:
        offsets[p] = (n, T1.dims[p], T2.dims[p])
        n += T1.dims[p] * T2.dims[p]
    rows = []
    for f in D.non_identity_edges(F):
        p, q = D.edges[f]
        A, B = T1(f), T2(f)
        op, d1p, d2p = offsets[p]
        oq, d1q, d2q = offsets[q]
        for i in range(d1p):
            for j in range(d2q):
                v = [_ZERO] * n
                # (q, T1(f) e_i, e_j^*)
                for a in range(d1q):
                    x = A[a, i]
                    if x != 0:
                        v[oq + a * d2q + j] += x
                # - (p, e_i, e_j^* o T2(f))
                for b in range(d2p):
                    x = B[j, b]
                    if x != 0:
                        v[op + i * d2p + b] -= x
                rows.append(tuple(v))
    rel = SubspaceBasis.span(rows, n)
    piv = set(rel.pivots)
    free = tuple(i for i in range(n) if i not in piv)
    return PeriodSpace(F, offsets, n, tuple(rows), rel, free)


@dataclass
class PsiReport:
    period: PeriodSpace
    hom: IntertwinerSpace
    matrix: Matrix  # dim Hom x ambient: value of each generator on each Hom basis element
    kills_relations: bool
    dim_period: int  # ambient minus rank of the relations, by forward elimination
    dim_hom: int  # from the echelon kernel of the constraint map
    rank_induced: int

    @property
    def bijective(self) -> bool:
        return (self.kills_relations and self.dim_period == self.dim_hom
                and self.rank_induced == self.dim_hom)

    def induced(self) -> Matrix:
        """Psi on the quotient basis: dim Hom x dim P."""
        return Matrix._raw(tuple(tuple(r[i] for i in self.period.free) for r in self.matrix.data),
                           self.matrix.rows, self.period.dim)

    def to_dict(self) -> dict:
        return {"dimP": self.dim_period, "dimHom": self.dim_hom, "bijective": self.bijective,
                "kills_relations": self.kills_relations, "rank": self.rank_induced}


def _psi_matrix(PS: PeriodSpace, H: IntertwinerSpace) -> Matrix:
    cols = []
    for p in PS.F:
        b = H.block(p)
        _, d1, d2 = PS.offsets[p]
        for i in range(d1):
            for j in range(d2):
                # gamma(phi_p(omega)) = (phi_p)[j, i]
                cols.append(b.offset + j * b.cols + i)
    rows = tuple(tuple(v[c] for c in cols) for v in H.basis.vectors)
    return Matrix._raw(rows, H.dim, PS.ambient)


def psi(D: Diagram, T1: Representation, T2: Representation, F) -> PsiReport:
    PS = period_space(D, T1, T2, F)
    H = hom_space(D, T1, T2, F)
    M = _psi_matrix(PS, H)
    kills = all(all(x == 0 for x in M.apply(r)) for r in PS.relation_rows)
    # two independent routes: forward-elimination rank of the relations
    # against the reduced echelon kernel of the constraint map
    rel_rank = rank(list(PS.relation_rows)) if PS.relation_rows else 0
    dim_p = PS.ambient - rel_rank
    rep = PsiReport(PS, H, M, kills, dim_p, H.dim, 0)
    ind = rep.induced()
    rep.rank_induced = rank(ind) if ind.rows and ind.cols else 0
    if not kills:
        raise ArithmeticError("Psi does not vanish on a relation; this is a bug")
    return rep


# -- product -----------------------------------------------------------------

@dataclass
class ProductReport:
    small: PeriodSpace
    big: PeriodSpace
    table: dict  # (a, b) indices into small.free -> class in big
    well_defined: bool
    psi_multiplicative: bool | None
    commutative: bool | None
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.well_defined and self.psi_multiplicative is not False

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        out = [_ZERO] * self.big.dim
        for a, xa in enumerate(x):
            if xa == 0:
                continue
            for b, yb in enumerate(y):
                if yb == 0:
                    continue
                for t, c in enumerate(self.table[(a, b)]):
                    if c != 0:
                        out[t] += xa * yb * c
        return tuple(out)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "dimP": self.small.dim, "dimP_big": self.big.dim,
                "well_defined": self.well_defined, "psi_multiplicative": self.psi_multiplicative,
                "commutative": self.commutative, "notes": list(self.notes)}


def _gen_product(P: ProductStructure, T1, T2, small: PeriodSpace, big: PeriodSpace, tinv,
                 g1, g2) -> tuple:
    """Product of two generators ``(p, i, j)``, ``(q, k, l)`` as a vector of ``big``."""
    p, i, j = g1
    q, k, l = g2
    pq = P.table[(p, q)]
    d1q, d2q = T1.dims[q], T2.dims[q]
    omega = tinv[(p, q)].col(i * d1q + k)  # in T1(p x q)
    gamma = T2.tau[(p, q)].row(j * d2q + l)  # functional on T2(p x q)
    v = [_ZERO] * big.ambient
    for a, x in enumerate(omega):
        if x == 0:
            continue
        for b, y in enumerate(gamma):
            if y != 0:
                v[big.index(pq, a, b)] += x * y
    return tuple(v)


def period_product(D: Diagram, P: ProductStructure, T1: GradedRepresentation,
                   T2: GradedRepresentation, F, F_big, check_psi: bool = True) -> ProductReport:
    """Multiplication P(F) x P(F) -> P(F') on generators, checked against relations and Psi."""
    F, F_big = tuple(sorted(F)), tuple(sorted(F_big))
    missing = [f"{p} x {q}" for p in F for q in F
               if (p, q) not in P.table or P.table[(p, q)] not in F_big]
    if missing:
        raise ValueError("products outside F': " + ", ".join(missing))
    small = period_space(D, T1, T2, F)
    big = period_space(D, T1, T2, F_big)
    tinv = {(p, q): T1.tau_inv(p, q) for p in F for q in F}
    syms = small.symbols()

    def prod_vec(u, w):
        out = [_ZERO] * big.ambient
        for s, x in enumerate(u):
            if x == 0:
                continue
            for t, y in enumerate(w):
                if y == 0:
                    continue
                v = _gen_product(P, T1, T2, small, big, tinv, syms[s], syms[t])
                for r, z in enumerate(v):
                    if z != 0:
                        out[r] += x * y * z
        return out

    notes = []
    well = True
    gens = [small.generator(*g) for g in syms]
    for r in small.relation_rows:
        for g in gens:
            if any(big.classof(prod_vec(r, g))) or any(big.classof(prod_vec(g, r))):
                well = False
                notes.append("a relation times a generator is not zero in P(F')")
                break
        if not well:
            break
    table = {}
    reps = [small.representative(tuple(Fraction(int(a == b)) for a in range(small.dim)))
            for b in range(small.dim)]
    for a in range(small.dim):
        for b in range(small.dim):
            table[(a, b)] = big.classof(prod_vec(reps[a], reps[b]))
    commutative = all(table[(a, b)] == table[(b, a)]
                      for a in range(small.dim) for b in range(small.dim))
    mult = None
    if check_psi:
        mult = _psi_multiplicative(D, P, T1, T2, F, F_big, small, big, reps, prod_vec)
    return ProductReport(small, big, table, well, mult, commutative, notes)


def _psi_multiplicative(D, P, T1, T2, F, F_big, small, big, reps, prod_vec) -> bool:
    Hs = hom_space(D, T1, T2, F)
    Hb = hom_space(D, T1, T2, F_big)
    coords, inside = hom_comultiplication(P, T1, T2, Hs, Hb)
    if not inside:
        return False
    Ms, Mb = _psi_matrix(small, Hs), _psi_matrix(big, Hb)
    k = Hs.dim
    for x in reps:
        px = Ms.apply(x)
        for y in reps:
            py = Ms.apply(y)
            lhs = Mb.apply(big.reduce(prod_vec(x, y)))
            rhs = tuple(sum((px[i] * py[j] * C[i][j] for i in range(k) for j in range(k)
                             if C[i][j] != 0), _ZERO) for C in coords)
            if lhs != rhs:
                return False
    return True


# -- coactions ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class HomCoaction:
    """Dual of a composition action; ``data[l][(i, m)]`` is the coefficient of
    ``x_i (x) y_m`` (left) or ``y_m (x) x_i`` (right) in the image of ``y_l``."""

    side: str
    hom: IntertwinerSpace
    algebra: EndAlgebra
    data: tuple

    def is_counital(self) -> bool:
        u = self.algebra.unit
        for l, d in enumerate(self.data):
            acc: dict = {}
            for (i, m), c in d.items():
                if u[i] != 0:
                    acc[m] = acc.get(m, _ZERO) + u[i] * c
            if {a: b for a, b in acc.items() if b != 0} != {l: 1}:
                return False
        return True

    def is_coassociative(self, opposite: bool = True) -> bool:
        """Coassociativity against the algebra's comultiplication.

        Composition on the right turns into a left coaction for the opposite
        comultiplication, hence ``opposite=True`` by default; the right
        coaction is the mirror case.
        """
        E = self.algebra
        for d in self.data:
            # apply the coaction twice
            twice: dict = {}
            for (i, m), c in d.items():
                for (j, n), e in self.data[m].items():
                    key = (i, j, n)
                    twice[key] = twice.get(key, _ZERO) + c * e
            # apply the comultiplication to the algebra factor
            split: dict = {}
            for (i, m), c in d.items():
                for (a, b), mc in E.mult.items():
                    e = mc.get(i)
                    if e is None:
                        continue
                    # x_i -> sum c^i_{ab} x_a (x) x_b; opposite swaps the factors
                    key = (b, a, m) if opposite else (a, b, m)
                    split[key] = split.get(key, _ZERO) + c * e
            if {k: v for k, v in twice.items() if v != 0} != \
                    {k: v for k, v in split.items() if v != 0}:
                return False
        return True


def left_coaction(H: IntertwinerSpace, E1: EndAlgebra) -> HomCoaction:
    """A12 -> A1 (x) A12, dual to (a, h) -> h o a."""
    data = [dict() for _ in range(H.dim)]
    hs, bs = H.elements(), E1.elements()
    for m, h in enumerate(hs):
        for i, a in enumerate(bs):
            c = H.coords({p: h[p] @ a[p] for p in H.F})
            if c is None:
                raise ArithmeticError("composite is not an intertwiner; this is a bug")
            for l, x in enumerate(c):
                if x != 0:
                    data[l][(i, m)] = x
    return HomCoaction("left", H, E1, tuple(data))


def right_coaction(H: IntertwinerSpace, E2: EndAlgebra) -> HomCoaction:
    """A12 -> A12 (x) A2, dual to (h, b) -> b o h; stored with the A2 index first."""
    data = [dict() for _ in range(H.dim)]
    hs, bs = H.elements(), E2.elements()
    for m, h in enumerate(hs):
        for i, b in enumerate(bs):
            c = H.coords({p: b[p] @ h[p] for p in H.F})
            if c is None:
                raise ArithmeticError("composite is not an intertwiner; this is a bug")
            for l, x in enumerate(c):
                if x != 0:
                    data[l][(i, m)] = x
    return HomCoaction("right", H, E2, tuple(data))


def coactions(D: Diagram, T1: Representation, T2: Representation, F) -> Report:
    H = hom_space(D, T1, T2, F)
    E1, E2 = end_algebra(D, T1, F), end_algebra(D, T2, F)
    L, R = left_coaction(H, E1), right_coaction(H, E2)
    # Both coactions are coassociative for the opposite comultiplication in
    # their natural factor order. The right one stores the A2 index first,
    # which already reverses the order, so it is compared with plain Delta.
    checks = {
        "left_counital": L.is_counital(),
        "left_coassociative": L.is_coassociative(opposite=True),
        "right_counital": R.is_counital(),
        "right_coassociative": R.is_coassociative(opposite=False),
    }
    ok = all(checks.values())
    return Report(ok, [k for k, v in checks.items() if not v],
                  {"dim_hom": H.dim, "dim_end1": E1.dim, "dim_end2": E2.dim, **checks})
