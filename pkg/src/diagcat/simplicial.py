"""Finite simplicial complexes, relative cochains and the complexes built from them.

Simplices are sorted vertex tuples; the lexicographic vertex order orients
them and the coboundary is the alternating face sum
``(dc)(s) = sum_i (-1)^i c(s minus its i-th vertex)``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .diagram import Diagram, GradedRepresentation, ProductStructure, Report, Representation
from .linalg import Matrix, SubspaceBasis, kernel_basis, rank

__all__ = [
    "SimplicialComplex",
    "SimplicialPair",
    "CochainComplex",
    "Cohomology",
    "simplex",
    "boundary",
    "point",
    "disjoint_union",
    "cochain_complex",
    "relative_cohomology",
    "cohomology_dims",
    "is_good_pair",
    "connecting_map",
    "long_exact_sequence",
    "induced_map",
    "skeletal_filtration",
    "filtration_complex",
    "cech_total_complex",
    "make_diagram_fixture",
    "random_complex",
    "random_cover",
    "tensor_complex",
    "kunneth_fixture",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- complexes ---------------------------------------------------------------

@dataclass(frozen=True)
class SimplicialComplex:
    simplices: frozenset

    @classmethod
    def from_maximal(cls, maximal) -> "SimplicialComplex":
        out = set()
        for s in maximal:
            s = tuple(sorted(set(s)))
            if not s:
                continue
            for k in range(1, len(s) + 1):
                out.update(itertools.combinations(s, k))
        return cls(frozenset(out))

    @classmethod
    def empty(cls) -> "SimplicialComplex":
        return cls(frozenset())

    def __post_init__(self):
        for s in self.simplices:
            if list(s) != sorted(set(s)):
                raise ValueError(f"simplex {s} is not a sorted vertex tuple")
            if len(s) > 1:
                for i in range(len(s)):
                    if s[:i] + s[i + 1:] not in self.simplices:
                        raise ValueError(f"face of {s} missing: not closed under faces")

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    def cells(self, k: int) -> list[tuple]:
        return sorted(s for s in self.simplices if len(s) == k + 1)

    @cached_property
    def vertices(self) -> list:
        return sorted(s[0] for s in self.simplices if len(s) == 1)

    def skeleton(self, k: int) -> "SimplicialComplex":
        return SimplicialComplex(frozenset(s for s in self.simplices if len(s) <= k + 1))

    def maximal(self) -> list[tuple]:
        return sorted(s for s in self.simplices
                      if not any(len(t) > len(s) and set(s) <= set(t) for t in self.simplices))

    def __le__(self, other: "SimplicialComplex") -> bool:
        return self.simplices <= other.simplices

    def __or__(self, other):
        return SimplicialComplex(self.simplices | other.simplices)

    def __and__(self, other):
        return SimplicialComplex(self.simplices & other.simplices)

    def __len__(self):
        return len(self.simplices)

    def __repr__(self):
        return f"SimplicialComplex({self.maximal()})"


def simplex(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_maximal([range(n + 1)])


def boundary(n: int) -> SimplicialComplex:
    return SimplicialComplex.from_maximal(itertools.combinations(range(n + 1), n))


def point() -> SimplicialComplex:
    return simplex(0)


def disjoint_union(*parts: SimplicialComplex) -> SimplicialComplex:
    """Relabel vertex v of part k as ``(k, v)``."""
    out = set()
    for k, X in enumerate(parts):
        out.update(tuple((k, v) for v in s) for s in X.simplices)
    return SimplicialComplex(frozenset(out))


@dataclass(frozen=True)
class SimplicialPair:
    X: SimplicialComplex
    Y: SimplicialComplex = field(default_factory=SimplicialComplex.empty)

    def __post_init__(self):
        if not self.Y <= self.X:
            raise ValueError("Y is not a subcomplex of X")

    def cells(self, k: int) -> list[tuple]:
        return [s for s in self.X.cells(k) if s not in self.Y.simplices]


# -- cochain complexes -------------------------------------------------------

class Cohomology:
    """H^i of a complex with representatives and coordinates of cocycle classes."""

    def __init__(self, ambient: int, cocycles: SubspaceBasis, boundaries: SubspaceBasis):
        self.ambient = ambient
        reps: list[tuple] = []
        cur = boundaries
        for z in cocycles.vectors:
            if not cur.contains(z):
                reps.append(z)
                cur = SubspaceBasis.span(list(cur.vectors) + [z], ambient)
        self.reps = tuple(reps)
        self.boundaries = boundaries
        self._span = cur
        # coordinates of [reps | boundary basis] in the echelon basis of their span
        gens = list(reps) + list(boundaries.vectors)
        if gens:
            G = Matrix([cur.coords(g) for g in gens])
            self._inv = G.inverse()
        else:
            self._inv = Matrix.zeros(0, 0)

    @property
    def dim(self) -> int:
        return len(self.reps)

    def coords(self, z) -> tuple | None:
        """Coordinates of the class of cocycle z, or None if z is not a cocycle of this span."""
        c = self._span.coords(tuple(z))
        if c is None:
            return None
        full = Matrix([c]) @ self._inv if c else Matrix.zeros(1, 0)
        return tuple(full.row(0)[: self.dim]) if full.cols else ()


@dataclass(frozen=True, eq=False)
class CochainComplex:
    """Cochain spaces of dimension ``dims[i]`` and coboundaries ``d[i]: C^i -> C^(i+1)``."""

    dims: tuple
    d: tuple
    start: int = 0

    def __post_init__(self):
        if len(self.d) != max(len(self.dims) - 1, 0):
            raise ValueError("need one coboundary per consecutive pair of degrees")
        for i, m in enumerate(self.d):
            if m.shape != (self.dims[i + 1], self.dims[i]):
                raise ValueError(f"d[{i}] has shape {m.shape}, expected "
                                 f"{(self.dims[i + 1], self.dims[i])}")

    @property
    def degrees(self) -> range:
        return range(self.start, self.start + len(self.dims))

    def dim(self, i: int) -> int:
        k = i - self.start
        return self.dims[k] if 0 <= k < len(self.dims) else 0

    def coboundary(self, i: int) -> Matrix:
        k = i - self.start
        if 0 <= k < len(self.d):
            return self.d[k]
        return Matrix.zeros(self.dim(i + 1), self.dim(i))

    def is_complex(self) -> bool:
        return all((self.d[k + 1] @ self.d[k]).is_zero() for k in range(len(self.d) - 1))

    def cohomology(self, i: int) -> Cohomology:
        n = self.dim(i)
        Z = kernel_basis(self.coboundary(i)) if n else SubspaceBasis(0, (), ())
        prev = self.coboundary(i - 1)
        B = SubspaceBasis.span([prev.col(j) for j in range(prev.cols)], n)
        return Cohomology(n, Z, B)

    def betti(self, i: int) -> int:
        """dim H^i by ranks alone (independent of the representative choice)."""
        return self.dim(i) - rank(self.coboundary(i)) - rank(self.coboundary(i - 1))

    def betti_numbers(self) -> dict:
        return {i: self.betti(i) for i in self.degrees}

    def euler(self) -> int:
        return sum((-1) ** i * self.dim(i) for i in self.degrees)

    def to_dict(self) -> dict:
        return {"start": self.start, "dims": list(self.dims),
                "d": [[[str(x) for x in r] for r in m.data] for m in self.d]}


def _coboundary(P: SimplicialPair, k: int) -> Matrix:
    src, dst = P.cells(k), P.cells(k + 1)
    pos = {s: j for j, s in enumerate(src)}
    rows = []
    for t in dst:
        row = [_ZERO] * len(src)
        for i in range(len(t)):
            face = t[:i] + t[i + 1:]
            j = pos.get(face)
            if j is not None:
                row[j] += 1 if i % 2 == 0 else -1
        rows.append(row)
    return Matrix(rows, rows=len(dst), cols=len(src))


def cochain_complex(X, Y=None) -> CochainComplex:
    """Relative cochains C^*(X, Y): functions on simplices of X not in Y."""
    P = X if isinstance(X, SimplicialPair) else SimplicialPair(X, Y or SimplicialComplex.empty())
    top = P.X.dim
    if top < 0:
        return CochainComplex((0,), ())
    dims = tuple(len(P.cells(k)) for k in range(top + 1))
    d = tuple(_coboundary(P, k) for k in range(top))
    return CochainComplex(dims, d)


def relative_cohomology(X, Y=None, i: int = 0) -> tuple[int, tuple]:
    """``(dim H^i(X, Y), representative cocycles)``."""
    H = cochain_complex(X, Y).cohomology(i)
    return H.dim, H.reps


def cohomology_dims(X, Y=None) -> dict:
    C = cochain_complex(X, Y)
    return {i: C.betti(i) for i in C.degrees}


def is_good_pair(X, Y=None, i: int = 0) -> bool:
    return all(b == 0 for j, b in cohomology_dims(X, Y).items() if j != i)


# -- maps --------------------------------------------------------------------

def _cochain_restriction(big: SimplicialPair, small: SimplicialPair, k: int) -> Matrix:
    """Restriction C^k(big) -> C^k(small) when small's cells are among big's."""
    src, dst = big.cells(k), small.cells(k)
    pos = {s: j for j, s in enumerate(src)}
    rows = []
    for s in dst:
        row = [_ZERO] * len(src)
        if s in pos:
            row[pos[s]] = _ONE
        rows.append(row)
    return Matrix(rows, rows=len(dst), cols=len(src))


def _class_map(Csrc: CochainComplex, Cdst: CochainComplex, chain: Matrix, i: int,
               Hs: Cohomology | None = None, Ht: Cohomology | None = None) -> Matrix:
    Hs = Hs or Csrc.cohomology(i)
    Ht = Ht or Cdst.cohomology(i)
    cols = []
    for z in Hs.reps:
        c = Ht.coords(chain.apply(z))
        if c is None:
            raise ArithmeticError("image of a cocycle is not a cocycle")
        cols.append(c)
    if not cols:
        return Matrix.zeros(Ht.dim, 0)
    return Matrix(list(zip(*cols)), rows=Ht.dim, cols=Hs.dim) if Ht.dim else \
        Matrix.zeros(0, Hs.dim)


def connecting_map(X: SimplicialComplex, Y: SimplicialComplex, Z: SimplicialComplex,
                   i: int) -> Matrix:
    """Snake map ``H^i(Y, Z) -> H^(i+1)(X, Y)`` in the chosen representative bases.

    A relative cocycle on Y is extended by zero to X, its coboundary is
    taken in C(X, Z), and the result lies in C(X, Y).
    """
    if not (Z <= Y <= X):
        raise ValueError("need X >= Y >= Z")
    YZ, XZ, XY = SimplicialPair(Y, Z), SimplicialPair(X, Z), SimplicialPair(X, Y)
    Hs = cochain_complex(YZ).cohomology(i)
    Ht = cochain_complex(XY).cohomology(i + 1)
    src_cells = YZ.cells(i)
    xz = XZ.cells(i)
    pos = {s: j for j, s in enumerate(xz)}
    d = _coboundary(XZ, i) if xz else Matrix.zeros(len(XZ.cells(i + 1)), 0)
    tgt_pos = {s: j for j, s in enumerate(XZ.cells(i + 1))}
    cols = []
    for z in Hs.reps:
        ext = [_ZERO] * len(xz)
        for s, v in zip(src_cells, z):
            ext[pos[s]] = v
        dz = d.apply(ext)
        # dz vanishes on Y \ Z; read it on the cells of X \ Y
        lifted = [dz[tgt_pos[s]] for s in XY.cells(i + 1)]
        if any(dz[tgt_pos[s]] != 0 for s in YZ.cells(i + 1)):
            raise ArithmeticError("extension of a relative cocycle is not relative to Y")
        c = Ht.coords(lifted)
        if c is None:
            raise ArithmeticError("snake image is not a cocycle")
        cols.append(c)
    if not cols or not Ht.dim:
        return Matrix.zeros(Ht.dim, Hs.dim)
    return Matrix(list(zip(*cols)), rows=Ht.dim, cols=Hs.dim)


def long_exact_sequence(X, Y, Z) -> Report:
    """Exactness of ``... H^i(X,Y) -> H^i(X,Z) -> H^i(Y,Z) -> H^(i+1)(X,Y) -> ...``.

    Checked by rank bookkeeping: consecutive maps compose to zero and the
    kernel of each map has the dimension of the previous image.
    """
    XY, XZ, YZ = SimplicialPair(X, Y), SimplicialPair(X, Z), SimplicialPair(Y, Z)
    Cxy, Cxz, Cyz = cochain_complex(XY), cochain_complex(XZ), cochain_complex(YZ)
    top = X.dim
    maps = []
    for i in range(top + 1):
        # j: C(X,Y) -> C(X,Z) is extension by zero, the transpose of restriction
        ext = _cochain_restriction(XZ, XY, i).T
        res = _cochain_restriction(XZ, YZ, i)
        maps.append(("j", i, _class_map(Cxy, Cxz, ext, i)))
        maps.append(("r", i, _class_map(Cxz, Cyz, res, i)))
        maps.append(("d", i, connecting_map(X, Y, Z, i)))
    bad = []
    for (n1, i1, A), (n2, i2, B) in zip(maps, maps[1:]):
        if A.rows != B.cols:
            bad.append(f"shape mismatch between {n1}{i1} and {n2}{i2}")
            continue
        if not (B @ A).is_zero():
            bad.append(f"{n2}{i2} o {n1}{i1} != 0")
        if B.cols - rank(B) != rank(A):
            bad.append(f"not exact at the target of {n1}{i1}")
    # the sequence starts at H^0(X,Y), where j must be injective
    A0 = maps[0][2]
    if rank(A0) != A0.cols:
        bad.append("H^0(X,Y) -> H^0(X,Z) is not injective")
    return Report(not bad, bad, {"terms": len(maps)})


def induced_map(f: dict, src: SimplicialPair, dst: SimplicialPair, i: int) -> Matrix:
    """``f^*: H^i(dst) -> H^i(src)`` for a simplicial map ``f: src -> dst`` of pairs.

    ``f`` maps vertices of src.X to vertices of dst.X; degenerate images
    contribute zero, others the sign of the sorting permutation.
    """
    for s in src.X.simplices:
        img = tuple(sorted(set(f[v] for v in s)))
        if img not in dst.X.simplices:
            raise ValueError(f"not simplicial: {s} maps to {img}")
        if s in src.Y.simplices and img not in dst.Y.simplices:
            raise ValueError(f"{s} lies in the subcomplex but its image does not")
    src_cells, dst_cells = src.cells(i), dst.cells(i)
    pos = {s: j for j, s in enumerate(dst_cells)}
    rows = []
    for s in src_cells:
        row = [_ZERO] * len(dst_cells)
        img = [f[v] for v in s]
        if len(set(img)) == len(img):
            srt = sorted(img)
            j = pos.get(tuple(srt))
            if j is not None:
                perm = [srt.index(v) for v in img]
                inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
                row[j] = _ONE if inv % 2 == 0 else -_ONE
        rows.append(row)
    chain = Matrix(rows, rows=len(src_cells), cols=len(dst_cells))
    return _class_map(cochain_complex(dst), cochain_complex(src), chain, i)


# -- filtrations -------------------------------------------------------------

def skeletal_filtration(X: SimplicialComplex) -> tuple[list[SimplicialComplex], Report]:
    """``F_j X`` = j-skeleton for j = 0..dim X, each step certified as a good pair."""
    steps = [X.skeleton(j) for j in range(X.dim + 1)]
    bad = []
    prev = SimplicialComplex.empty()
    for j, Fj in enumerate(steps):
        if not is_good_pair(Fj, prev, j):
            bad.append(f"(F_{j}, F_{j - 1}) is not good in degree {j}")
        prev = Fj
    return steps, Report(not bad, bad, {"steps": len(steps)})


def filtration_complex(X: SimplicialComplex, steps=None) -> CochainComplex:
    """``H^0(F_0) -> H^1(F_1, F_0) -> H^2(F_2, F_1) -> ...`` with connecting maps."""
    if steps is None:
        steps, rep = skeletal_filtration(X)
        if not rep.ok:
            raise ValueError("; ".join(rep.violations))
    steps = list(steps)
    if steps and steps[-1].simplices != X.simplices:
        raise ValueError("the filtration must end at X")
    chain = [SimplicialComplex.empty()] + steps
    for j in range(len(steps)):
        if not chain[j] <= chain[j + 1]:
            raise ValueError("filtration is not increasing")
        if not is_good_pair(chain[j + 1], chain[j], j):
            raise ValueError(f"step {j} is not a good pair in degree {j}")
    dims = tuple(relative_cohomology(chain[j + 1], chain[j], j)[0] for j in range(len(steps)))
    d = tuple(connecting_map(chain[j + 2], chain[j + 1], chain[j], j)
              for j in range(len(steps) - 1))
    return CochainComplex(dims, d)


# -- Cech ----------------------------------------------------------------------

def cech_total_complex(X: SimplicialComplex, cover) -> CochainComplex:
    """Total complex of ``C^{p,q} = prod_{|I| = p+1} C^q(U_I)``, ``D = d_Cech + (-1)^p d``.

    The Cech differential is ``(dc)_J = sum_k (-1)^k c_{J - j_k}`` restricted
    to U_J. Basis of degree n: by p, then the index set I, then the simplex.
    """
    cover = list(cover)
    if not cover:
        raise ValueError("empty cover")
    union = SimplicialComplex.empty()
    for U in cover:
        if not U <= X:
            raise ValueError("cover member is not a subcomplex of X")
        union = union | U
    if union.simplices != X.simplices:
        raise ValueError("the cover does not cover X")
    m = len(cover)
    inter = {}
    for r in range(1, m + 1):
        for I in itertools.combinations(range(m), r):
            U = cover[I[0]]
            for k in I[1:]:
                U = U & cover[k]
            inter[I] = U
    top_q = X.dim
    # index of (p, I, q, simplex) in total degree p + q
    layout: dict[int, list] = {}
    for I, U in sorted(inter.items(), key=lambda kv: (len(kv[0]), kv[0])):
        p = len(I) - 1
        for q in range(top_q + 1):
            for s in U.cells(q):
                layout.setdefault(p + q, []).append((p, I, q, s))
    top = max(layout) if layout else 0
    pos = {n: {key: j for j, key in enumerate(layout.get(n, []))} for n in range(top + 2)}
    dims = tuple(len(layout.get(n, [])) for n in range(top + 1))
    ds = []
    for n in range(top):
        rows = [[_ZERO] * dims[n] for _ in range(dims[n + 1])]
        tgt = pos[n + 1]
        for col, (p, I, q, s) in enumerate(layout.get(n, [])):
            # Cech part: contributes to every J = I + {j}
            for j in range(m):
                if j in I:
                    continue
                J = tuple(sorted(I + (j,)))
                if s not in inter[J].simplices:
                    continue
                k = J.index(j)
                rows[tgt[(p + 1, J, q, s)]][col] += 1 if k % 2 == 0 else -1
            # simplicial part on U_I, with sign (-1)^p
            sign = 1 if p % 2 == 0 else -1
            U = inter[I]
            for v in X.vertices:
                if v in s:
                    continue
                t = tuple(sorted(s + (v,)))
                if t not in U.simplices:
                    continue
                i = t.index(v)
                rows[tgt[(p, I, q + 1, t)]][col] += sign * (1 if i % 2 == 0 else -1)
        ds.append(Matrix(rows, rows=dims[n + 1], cols=dims[n]))
    return CochainComplex(dims, tuple(ds))


# -- random complexes ----------------------------------------------------------

def random_complex(seed: int, max_vertices: int = 6, max_triangles: int = 5,
                   max_edges: int = 4) -> SimplicialComplex:
    """A random complex of dimension <= 2 on at most ``max_vertices`` vertices."""
    rng = random.Random(seed)
    n = rng.randint(3, max_vertices)
    tris = list(itertools.combinations(range(n), 3))
    pairs = list(itertools.combinations(range(n), 2))
    maximal = rng.sample(tris, rng.randint(1, min(max_triangles, len(tris))))
    maximal += rng.sample(pairs, rng.randint(0, min(max_edges, len(pairs))))
    maximal += [(v,) for v in range(n) if rng.random() < 0.2]
    return SimplicialComplex.from_maximal(maximal)


def random_cover(X: SimplicialComplex, seed: int, parts: int = 2) -> list[SimplicialComplex]:
    """Cover X by subcomplexes generated from random groups of maximal simplices."""
    rng = random.Random(seed)
    maximal = X.maximal()
    groups = [[] for _ in range(parts)]
    for s in maximal:
        groups[rng.randrange(parts)].append(s)
        if rng.random() < 0.3:
            groups[rng.randrange(parts)].append(s)
    return [SimplicialComplex.from_maximal(g) for g in groups if g]


# -- diagram fixtures ------------------------------------------------------------

def make_diagram_fixture(pairs: dict, maps=(), triples=(), conjugate: dict | None = None):
    """Diagram of cohomology of pairs, with functoriality and coboundary edges.

    ``pairs`` maps a vertex name to ``(X, Y, i)``; the vertex has grade i mod 2
    and T = H^i(X, Y). ``maps`` lists ``(edge, src, dst, f)`` for a simplicial
    map ``f: pairs[src] -> pairs[dst]`` in the same degree; the edge runs
    ``dst -> src`` with matrix ``f^*``. ``triples`` lists ``(edge, low, high)``
    with ``low = (Y, Z, i)`` and ``high = (X, Y, i + 1)``; the edge carries the
    connecting map. With ``conjugate`` (vertex -> invertible matrix) a second
    representation ``g T g^-1`` is returned as well.
    """
    verts, edges, mats, dims = {}, [], {}, {}
    sp = {}
    for name, (X, Y, i) in pairs.items():
        P = SimplicialPair(X, Y)
        sp[name] = (P, i)
        verts[name] = i % 2
        dims[name] = relative_cohomology(P, None, i)[0]
    for e, src, dst, f in maps:
        (Ps, i), (Pd, j) = sp[src], sp[dst]
        if i != j:
            raise ValueError(f"map {e} changes the degree")
        edges.append((e, dst, src))
        mats[e] = induced_map(f, Ps, Pd, i)
    for e, low, high in triples:
        (Pl, i), (Ph, j) = sp[low], sp[high]
        if j != i + 1 or Pl.X != Ph.Y:
            raise ValueError(f"{e}: need (Y, Z, i) and (X, Y, i + 1)")
        edges.append((e, low, high))
        mats[e] = connecting_map(Ph.X, Ph.Y, Pl.Y, i)
    D = Diagram.build(verts, edges)
    T = Representation.build(D, dims, mats)
    if conjugate is None:
        return D, T
    g = {v: conjugate.get(v, Matrix.identity(dims[v])) for v in D.sorted_vertices()}
    return D, T, T.conjugated(D, g)


# -- Kunneth graded fixtures ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class _Graded:
    """Cochain complex flattened to one space: per-basis-vector degrees, d of degree +1."""

    deg: tuple
    d: Matrix

    @classmethod
    def of(cls, C: CochainComplex) -> "_Graded":
        deg = tuple(i for i in C.degrees for _ in range(C.dim(i)))
        n = len(deg)
        rows = [[_ZERO] * n for _ in range(n)]
        off = {}
        o = 0
        for i in C.degrees:
            off[i] = o
            o += C.dim(i)
        for i in C.degrees:
            M = C.coboundary(i)
            if i + 1 not in off:
                continue
            for r in range(M.rows):
                for c in range(M.cols):
                    rows[off[i + 1] + r][off[i] + c] = M[r, c]
        return cls(deg, Matrix(rows, rows=n, cols=n))

    def complex(self) -> tuple[CochainComplex, dict]:
        """Back to a CochainComplex; also returns degree -> list of flat indices."""
        by = {}
        for k, g in enumerate(self.deg):
            by.setdefault(g, []).append(k)
        lo, hi = (min(by), max(by)) if by else (0, 0)
        degs = range(lo, hi + 1)
        dims = tuple(len(by.get(i, [])) for i in degs)
        ds = []
        for i in list(degs)[:-1]:
            src, dst = by.get(i, []), by.get(i + 1, [])
            ds.append(Matrix([[self.d[r, c] for c in src] for r in dst],
                             rows=len(dst), cols=len(src)))
        return CochainComplex(dims, tuple(ds), lo), by


def tensor_complex(A, B):
    """``A (x) B`` with ``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``; index ``a * |B| + b``."""
    from .linalg import kron
    A = A if isinstance(A, _Graded) else _Graded.of(A)
    B = B if isinstance(B, _Graded) else _Graded.of(B)
    eps = Matrix([[(-1) ** A.deg[i] if i == j else 0 for j in range(len(A.deg))]
                  for i in range(len(A.deg))], rows=len(A.deg), cols=len(A.deg))
    d = kron(A.d, Matrix.identity(len(B.deg))) + kron(eps, B.d)
    deg = tuple(a + b for a in A.deg for b in B.deg)
    return _Graded(deg, d)


def _top_cohomology(G: _Graded, n: int):
    C, by = G.complex()
    H = C.cohomology(n)
    idx = by.get(n, [])
    N = len(G.deg)

    def lift(v):
        out = [_ZERO] * N
        for k, x in zip(idx, v):
            out[k] = x
        return tuple(out)

    def coords(z):
        return H.coords([z[k] for k in idx])

    return H, [lift(r) for r in H.reps], coords


def kunneth_fixture(generators: dict, length: int = 2):
    """Graded fixture from tensor products of relative cochain complexes.

    ``generators`` maps a one-letter name to ``(X, Y, i)`` with H^*(X, Y)
    concentrated in degree i. Vertices are words of length <= ``length``
    (the empty word ``1`` is the unit, a point in degree 0), ``u x v`` is
    concatenation when it fits, and T(w) = H^*(C_w) for the tensor complex
    C_w, in its own echelon basis. tau is the Kunneth isomorphism, alpha the
    signed swap ``a (x) b -> (-1)^(|a||b|) b (x) a``, beta the identity of
    C_{uvw}. Returns ``(D, P, T)`` with a partial product table.
    """
    base = {}
    for g, (X, Y, i) in generators.items():
        if len(g) != 1 or g == "1":
            raise ValueError("generator names must be single characters other than '1'")
        dims = cohomology_dims(X, Y)
        if any(b for j, b in dims.items() if j != i) or not dims.get(i):
            raise ValueError(f"H^*({g}) is not concentrated in degree {i}")
        base[g] = (_Graded.of(cochain_complex(X, Y)), i)
    unit = _Graded((0,), Matrix.zeros(1, 1))
    words = ["1"]
    for k in range(1, length + 1):
        words += ["".join(w) for w in itertools.product(sorted(base), repeat=k)]

    def letters(w):
        return "" if w == "1" else w

    def cx(w):
        G = unit
        for c in letters(w):
            G = tensor_complex(G, base[c][0]) if G is not unit else base[c][0]
        return G

    def degree(w):
        return sum(base[c][1] for c in letters(w))

    def cat(u, v):
        return letters(u) + letters(v) or "1"

    cache = {}

    def coh(w):
        if w not in cache:
            G = cx(w)
            cache[w] = (G, *_top_cohomology(G, degree(w)))
        return cache[w]

    verts = {w: degree(w) % 2 for w in words}
    dims = {w: coh(w)[1].dim for w in words}
    table, tau, alpha, beta = {}, {}, {}, {}
    edges, mats = [], {}
    for u in words:
        for v in words:
            w = cat(u, v)
            if w not in verts:
                continue
            table[(u, v)] = w
            # tau: T(uv) -> T(u) (x) T(v), coordinates in the basis r_i (x) r_j
            _, Hu, Ru, _ = coh(u)
            _, Hv, Rv, _ = coh(v)
            Gw, Hw, Rw, cw = coh(w)
            prods = [tuple(a * b for a in x for b in y) for x in Ru for y in Rv]
            basis = _product_basis(prods, cw)
            tau[(u, v)] = Matrix([list(r) for r in zip(*[basis(z) for z in Rw])],
                                 rows=len(prods), cols=Hw.dim) if Hw.dim else \
                Matrix.zeros(len(prods), 0)
    for u in words:
        for v in words:
            if (u, v) not in table:
                continue
            uv, vu = table[(u, v)], table[(v, u)]
            e = f"alpha:{u},{v}"
            edges.append((e, uv, vu))
            alpha[(u, v)] = e
            Gu, Gv = coh(u)[0], coh(v)[0]
            nu, nv = len(Gu.deg), len(Gv.deg)
            _, _, Ruv, _ = coh(uv)
            _, Hvu, _, cvu = coh(vu)
            cols = []
            for z in Ruv:
                out = [_ZERO] * (nu * nv)
                for a in range(nu):
                    for b in range(nv):
                        x = z[a * nv + b]
                        if x:
                            s = -1 if Gu.deg[a] * Gv.deg[b] % 2 else 1
                            out[b * nu + a] = s * x
                cols.append(cvu(out))
            mats[e] = Matrix([list(r) for r in zip(*cols)], rows=Hvu.dim, cols=len(cols)) \
                if cols and Hvu.dim else Matrix.zeros(Hvu.dim, len(cols))
    for u in words:
        for v in words:
            for w in words:
                if (u, v) in table and (v, w) in table and (table[(u, v)], w) in table \
                        and (u, table[(v, w)]) in table:
                    e = f"beta:{u},{v},{w}"
                    src = table[(u, table[(v, w)])]
                    edges.append((e, src, table[(table[(u, v)], w)]))
                    mats[e] = Matrix.identity(dims[src])
                    beta[(u, v, w)] = e
    D = Diagram.build(verts, edges)
    unit_edges = {w: D.identities[w] for w in words}
    P = ProductStructure(table, alpha, beta, "1", unit_edges)
    T = GradedRepresentation.build(D, dims, mats, tau)
    return D, P, T


def _product_basis(prods, coords_fn):
    """Coordinates of a class in the basis given by the cocycles ``prods``."""
    cols = [coords_fn(p) for p in prods]
    if any(c is None for c in cols):
        raise ArithmeticError("a product of cocycles is not a cocycle")
    M = Matrix([list(r) for r in zip(*cols)]) if cols and cols[0] else None
    Mi = M.inverse() if M is not None else Matrix.zeros(0, 0)
    if Mi is None:
        raise ArithmeticError("products of representatives do not form a basis")

    def basis(z):
        c = coords_fn(z)
        return Mi.apply(c) if c else ()

    return basis
