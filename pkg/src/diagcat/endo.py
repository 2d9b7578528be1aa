"""Intertwiner spaces, End(T|F), its dual coalgebra, coactions and restrictions.

Coordinates: the ambient space of Hom(T1|F, T2|F) is the product of the
matrix spaces Hom(T1(p), T2(p)) over p in F (sorted), each block flattened
row-major.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .diagram import Diagram, Report, Representation
from .field import NumberField, format_scalar
from .linalg import Matrix, SubspaceBasis, kernel_basis, rank

__all__ = [
    "Block",
    "IntertwinerSpace",
    "EndAlgebra",
    "Coalgebra",
    "Coaction",
    "Restriction",
    "intertwiner_system",
    "intertwiners",
    "end_algebra",
    "coalgebra",
    "coaction",
    "coaction_of",
    "coalgebra_of",
    "restrict",
    "base_change",
    "root_injectivity",
    "to_field",
]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Block:
    vertex: str
    offset: int
    rows: int  # dim T2(p)
    cols: int  # dim T1(p)

    @property
    def size(self) -> int:
        return self.rows * self.cols


def _layout(F, T1: Representation, T2: Representation) -> tuple[tuple[Block, ...], int]:
    blocks = []
    off = 0
    for p in F:
        b = Block(p, off, T2.dims[p], T1.dims[p])
        blocks.append(b)
        off += b.size
    return tuple(blocks), off


def intertwiner_system(D: Diagram, T1: Representation, T2: Representation, F):
    """The constraint matrix phi: one row per entry of ``e_q T1(m) - T2(m) e_p``.

    Returns ``(blocks, phi)``. Identity edges are included; they give zero rows.
    """
    F = sorted(F)
    blocks, n = _layout(F, T1, T2)
    where = {b.vertex: b for b in blocks}
    rows = []
    for m in D.edges_within(F):
        p, q = D.edges[m]
        A, B = T1(m), T2(m)  # A: T1(p) -> T1(q), B: T2(p) -> T2(q)
        bp, bq = where[p], where[q]
        for r in range(bq.rows):
            for c in range(bp.cols):
                row = [_ZERO] * n
                # (e_q A)[r, c] = sum_k e_q[r, k] A[k, c]
                for k in range(bq.cols):
                    a = A[k, c]
                    if a != 0:
                        i = bq.offset + r * bq.cols + k
                        row[i] = row[i] + a
                # (B e_p)[r, c] = sum_k B[r, k] e_p[k, c]
                for k in range(bp.rows):
                    b = B[r, k]
                    if b != 0:
                        i = bp.offset + k * bp.cols + c
                        row[i] = row[i] - b
                rows.append(tuple(row))
    return blocks, Matrix._raw(tuple(rows), len(rows), n)


@dataclass(frozen=True, eq=False)
class IntertwinerSpace:
    """Basis-presented Hom(T1|F, T2|F)."""

    F: tuple[str, ...]
    blocks: tuple[Block, ...]
    basis: SubspaceBasis
    phi: Matrix

    @property
    def dim(self) -> int:
        return self.basis.dim

    @property
    def ambient(self) -> int:
        return self.basis.ambient

    def block(self, p: str) -> Block:
        for b in self.blocks:
            if b.vertex == p:
                return b
        raise KeyError(p)

    def unflatten(self, vec: Sequence) -> dict[str, Matrix]:
        return {b.vertex: Matrix.from_flat(vec[b.offset:b.offset + b.size], b.rows, b.cols)
                for b in self.blocks}

    def flatten(self, comps: Mapping[str, Matrix]) -> tuple:
        out = []
        for b in self.blocks:
            out.extend(comps[b.vertex].flat())
        return tuple(out)

    def element(self, i: int) -> dict[str, Matrix]:
        return self.unflatten(self.basis.vectors[i])

    def elements(self) -> list[dict[str, Matrix]]:
        return [self.element(i) for i in range(self.dim)]

    def coords(self, comps: Mapping[str, Matrix]):
        return self.basis.coords(self.flatten(comps))

    def combine(self, coeffs: Sequence) -> dict[str, Matrix]:
        return self.unflatten(self.basis.combine(coeffs))

    def satisfies_constraints(self, D: Diagram, T1, T2) -> bool:
        """Check every basis element against every edge directly, not via phi."""
        for e in self.elements():
            for m in D.edges_within(self.F):
                p, q = D.edges[m]
                if e[q] @ T1(m) != T2(m) @ e[p]:
                    return False
        return True

    def to_dict(self) -> dict:
        return {"F": list(self.F), "dim": self.dim, "ambient": self.ambient,
                "basis": [[format_scalar(x) for x in v] for v in self.basis.vectors]}


def intertwiners(D: Diagram, T1: Representation, T2: Representation, F) -> IntertwinerSpace:
    F = tuple(sorted(F))
    blocks, phi = intertwiner_system(D, T1, T2, F)
    return IntertwinerSpace(F, blocks, kernel_basis(phi), phi)


def _sparse(v) -> dict[int, object]:
    return {i: x for i, x in enumerate(v) if x != 0}


def _matmul_blocks(a: Mapping[str, Matrix], b: Mapping[str, Matrix]) -> dict[str, Matrix]:
    return {p: a[p] @ b[p] for p in a}


@dataclass(frozen=True, eq=False)
class EndAlgebra(IntertwinerSpace):
    """End(T|F) with structure constants ``b_i b_j = sum_l mult[(i, j)][l] b_l``.

    ``mult`` stores only nonzero coefficients.
    """

    mult: Mapping[tuple[int, int], Mapping[int, Fraction]] = field(default_factory=dict)
    unit: tuple = ()

    def const(self, i: int, j: int, l: int):
        return self.mult.get((i, j), {}).get(l, _ZERO)

    def multiply(self, x: Sequence, y: Sequence) -> tuple:
        """Product of two elements given in basis coordinates."""
        out = [_ZERO] * self.dim
        xs, ys = _sparse(x), _sparse(y)
        for i, a in xs.items():
            for j, b in ys.items():
                for l, c in self.mult.get((i, j), {}).items():
                    out[l] = out[l] + a * b * c
        return tuple(out)

    def is_associative(self) -> bool:
        k = self.dim
        for i in range(k):
            for j in range(k):
                ij = self.mult.get((i, j), {})
                for n in range(k):
                    left: dict[int, Fraction] = {}
                    for m, c in ij.items():
                        for l, d in self.mult.get((m, n), {}).items():
                            left[l] = left.get(l, _ZERO) + c * d
                    right: dict[int, Fraction] = {}
                    for m, c in self.mult.get((j, n), {}).items():
                        for l, d in self.mult.get((i, m), {}).items():
                            right[l] = right.get(l, _ZERO) + c * d
                    if _strip(left) != _strip(right):
                        return False
        return True


def _strip(d: Mapping) -> dict:
    return {k: v for k, v in d.items() if v != 0}


def end_algebra(D: Diagram, T: Representation, F) -> EndAlgebra:
    H = intertwiners(D, T, T, F)
    elems = H.elements()
    mult = {}
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            c = H.coords(_matmul_blocks(a, b))
            if c is None:
                raise ArithmeticError(
                    f"End(T|F) not closed under composition at ({i},{j}); this is a bug")
            s = _sparse(c)
            if s:
                mult[(i, j)] = s
    unit = H.coords({b.vertex: Matrix.identity(b.rows) for b in H.blocks})
    if unit is None:
        raise ArithmeticError("identity tuple is not in End(T|F); this is a bug")
    return EndAlgebra(H.F, H.blocks, H.basis, H.phi, mult, unit)


@dataclass(frozen=True, eq=False)
class Coalgebra:
    """Coalgebra on the dual basis ``x_l``: ``Delta(x_l) = sum c[(i, j)][l] x_i (x) x_j``.

    ``comult`` is keyed by the output pair for each ``l``: ``comult[l][(i, j)]``.
    """

    dim: int
    comult: tuple[Mapping[tuple[int, int], Fraction], ...]
    counit: tuple

    def comult_matrix(self) -> Matrix:
        k = self.dim
        rows = [[_ZERO] * k for _ in range(k * k)]
        for l, d in enumerate(self.comult):
            for (i, j), c in d.items():
                rows[i * k + j][l] = c
        return Matrix._raw(tuple(tuple(r) for r in rows), k * k, k)

    def delta(self, l: int) -> dict[tuple[int, int], Fraction]:
        return dict(self.comult[l])

    def is_coassociative(self) -> bool:
        # (Delta (x) id) Delta(x_l) versus (id (x) Delta) Delta(x_l)
        for d in self.comult:
            left: dict = {}
            right: dict = {}
            for (m, n), c in d.items():
                for (i, j), e in self.comult[m].items():
                    key = (i, j, n)
                    left[key] = left.get(key, _ZERO) + c * e
                for (i, j), e in self.comult[n].items():
                    key = (m, i, j)
                    right[key] = right.get(key, _ZERO) + c * e
            if _strip(left) != _strip(right):
                return False
        return True

    def is_counital(self) -> bool:
        u = self.counit
        for l, d in enumerate(self.comult):
            left: dict = {}
            right: dict = {}
            for (i, j), c in d.items():
                if u[i] != 0:
                    left[j] = left.get(j, _ZERO) + u[i] * c
                if u[j] != 0:
                    right[i] = right.get(i, _ZERO) + u[j] * c
            if _strip(left) != {l: 1} or _strip(right) != {l: 1}:
                return False
        return True

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "comult": [[[i, j, str(c)] for (i, j), c in sorted(d.items())] for d in self.comult],
            "counit": [str(c) for c in self.counit],
        }


def coalgebra_of(E: EndAlgebra) -> Coalgebra:
    comult: list[dict] = [{} for _ in range(E.dim)]
    for (i, j), d in E.mult.items():
        for l, c in d.items():
            comult[l][(i, j)] = c
    return Coalgebra(E.dim, tuple(comult), tuple(E.unit))


def coalgebra(D: Diagram, T: Representation, F) -> Coalgebra:
    return coalgebra_of(end_algebra(D, T, F))


@dataclass(frozen=True, eq=False)
class Coaction:
    """``rho(e_j) = sum matrix[i * k + l][j] e_i (x) x_l`` for T(p) -> T(p) (x) A."""

    vertex: str
    dim: int
    k: int
    matrix: Matrix

    def is_counital(self, C: Coalgebra) -> bool:
        d, k = self.dim, self.k
        for j in range(d):
            for i in range(d):
                s = sum((C.counit[l] * self.matrix[i * k + l, j] for l in range(k)), _ZERO)
                if s != (1 if i == j else 0):
                    return False
        return True

    def is_coassociative(self, C: Coalgebra) -> bool:
        d, k, M = self.dim, self.k, self.matrix
        for j in range(d):
            # (rho (x) id) rho(e_j)
            left: dict = {}
            for i in range(d):
                for l in range(k):
                    a = M[i * k + l, j]
                    if a == 0:
                        continue
                    for r in range(d):
                        for m in range(k):
                            b = M[r * k + m, i]
                            if b != 0:
                                key = (r, m, l)
                                left[key] = left.get(key, _ZERO) + a * b
            # (id (x) Delta) rho(e_j)
            right: dict = {}
            for r in range(d):
                for n in range(k):
                    a = M[r * k + n, j]
                    if a == 0:
                        continue
                    for (m, l), c in C.comult[n].items():
                        key = (r, m, l)
                        right[key] = right.get(key, _ZERO) + a * c
            if _strip(left) != _strip(right):
                return False
        return True


def coaction_of(E: EndAlgebra, p: str) -> Coaction:
    b = E.block(p)
    d, k = b.rows, E.dim
    rows = [[_ZERO] * d for _ in range(d * k)]
    for l in range(k):
        vec = E.basis.vectors[l]
        for i in range(d):
            for j in range(d):
                rows[i * k + l][j] = vec[b.offset + i * d + j]
    return Coaction(p, d, k, Matrix._raw(tuple(tuple(r) for r in rows), d * k, d))


def coaction(D: Diagram, T: Representation, F, p: str) -> Coaction:
    if p not in F:
        raise KeyError(f"vertex {p!r} is not in the subdiagram")
    return coaction_of(end_algebra(D, T, F), p)


# -- restriction -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Restriction:
    """End(T|F') -> End(T|F); column ``i`` holds the image of the ``i``-th basis element."""

    small: EndAlgebra
    big: EndAlgebra
    matrix: Matrix

    def image(self, coeffs: Sequence) -> tuple:
        return self.matrix.apply(coeffs)

    def dual(self) -> Matrix:
        """A(F,T) -> A(F',T) in the dual bases."""
        return self.matrix.T

    def is_algebra_morphism(self) -> bool:
        S, B = self.small, self.big
        cols = [self.matrix.col(i) for i in range(B.dim)]
        for i in range(B.dim):
            for j in range(B.dim):
                prod = B.multiply(_unit_vec(B.dim, i), _unit_vec(B.dim, j))
                if self.image(prod) != S.multiply(cols[i], cols[j]):
                    return False
        return self.image(B.unit) == tuple(S.unit)

    def is_coalgebra_morphism(self) -> bool:
        """Check Delta' R^T = (R^T (x) R^T) Delta and eps' R^T = eps on every x_l."""
        S, B = self.small, self.big
        cs, cb = coalgebra_of(S), coalgebra_of(B)
        R = self.matrix  # k x k'
        for l in range(S.dim):
            row = _sparse(R.row(l))
            left: dict = {}
            for lp, r in row.items():
                for key, c in cb.comult[lp].items():
                    left[key] = left.get(key, _ZERO) + r * c
            right: dict = {}
            for (m, n), c in cs.comult[l].items():
                rm, rn = _sparse(R.row(m)), _sparse(R.row(n))
                for i, a in rm.items():
                    for j, b in rn.items():
                        right[(i, j)] = right.get((i, j), _ZERO) + c * a * b
            if _strip(left) != _strip(right):
                return False
            if sum((r * cb.counit[lp] for lp, r in row.items()), _ZERO) != cs.counit[l]:
                return False
        return True


def _unit_vec(n: int, i: int) -> tuple:
    return tuple(Fraction(1) if k == i else _ZERO for k in range(n))


def restrict(D: Diagram, T: Representation, F, F_big, small: EndAlgebra | None = None,
             big: EndAlgebra | None = None) -> Restriction:
    F, F_big = set(F), set(F_big)
    if not F <= F_big:
        raise ValueError("restriction needs F to be contained in F'")
    S = small or end_algebra(D, T, F)
    B = big or end_algebra(D, T, F_big)
    cols = []
    for i in range(B.dim):
        e = B.element(i)
        c = S.coords({p: e[p] for p in S.F})
        if c is None:
            raise ArithmeticError("restriction of an intertwiner is not an intertwiner")
        cols.append(c)
    M = Matrix._raw(tuple(zip(*cols)) if cols else tuple(() for _ in range(S.dim)),
                    S.dim, B.dim)
    return Restriction(S, B, M)


# -- base change -------------------------------------------------------------

def to_field(M: Matrix, K: NumberField) -> Matrix:
    return Matrix._raw(tuple(tuple(K(x) for x in r) for r in M.data), M.rows, M.cols)


def _twist_matrix(n: int, K: NumberField) -> Matrix:
    # I + x N with N the strictly upper triangular all-ones matrix; invertible
    x = K.gen
    return Matrix._raw(tuple(tuple(K(1) if i == j else (x if j > i else K(0))
                                   for j in range(n)) for i in range(n)), n, n)


def base_change(D: Diagram, T: Representation, F, minpoly, twist: bool = True) -> Report:
    """Compare End over Q with End computed directly over K = Q[x]/(m).

    With ``twist`` the K-side representation is first conjugated by
    ``I + x N`` at every vertex, so the K computation works with genuinely
    non-rational entries; the Q basis is transported along the same matrices.
    """
    K = NumberField(minpoly)
    F = tuple(sorted(F))
    EQ = intertwiners(D, T, T, F)
    mats = {e: to_field(m, K) for e, m in T.mats.items()}
    TK = Representation(dict(T.dims), mats)
    g = {p: (_twist_matrix(T.dims[p], K) if twist else to_field(Matrix.identity(T.dims[p]), K))
         for p in D.vertices if p in T.dims}
    TK = TK.conjugated(D, g)
    EK = intertwiners(D, TK, TK, F)
    ginv = {p: m.inverse() for p, m in g.items()}
    spans = True
    moved = []
    for e in EQ.elements():
        moved.append(EK.flatten({p: g[p] @ to_field(e[p], K) @ ginv[p] for p in F}))
    for v in moved:
        if EK.basis.coords(v) is None:
            spans = False
            break
    independent = rank([list(v) for v in moved]) == EQ.dim if moved else True
    ok = EQ.dim == EK.dim and spans and independent
    bad = [] if ok else [f"dim_Q = {EQ.dim}, dim_K = {EK.dim}, spans = {spans}"]
    return Report(ok, bad, {"dim_Q": EQ.dim, "dim_K": EK.dim, "spans": spans,
                            "field": repr(K)})


def root_injectivity(D: Diagram, T: Representation, F, root: str) -> Report:
    """End(T|F) -> End(T(root)) is injective when every edge is invertible and F is connected."""
    F = tuple(sorted(F))
    if root not in F:
        raise KeyError(root)
    invertible = all(T(m).rows == T(m).cols and T(m).inverse() is not None
                     for m in D.non_identity_edges(F))
    adj: dict[str, set] = {p: set() for p in F}
    for m in D.edges_within(F):
        s, t = D.edges[m]
        adj[s].add(t)
        adj[t].add(s)
    seen, todo = {root}, [root]
    while todo:
        for q in adj[todo.pop()]:
            if q not in seen:
                seen.add(q)
                todo.append(q)
    connected = len(seen) == len(F)
    H = intertwiners(D, T, T, F)
    b = H.block(root)
    proj = [v[b.offset:b.offset + b.size] for v in H.basis.vectors]
    injective = (rank(proj) if proj else 0) == H.dim
    hyp = invertible and connected
    ok = injective or not hyp
    return Report(ok, [] if ok else ["hypotheses hold but projection is not injective"],
                  {"hypotheses": hyp, "injective": injective, "dim": H.dim})
