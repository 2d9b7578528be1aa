"""Finite torsors (heaps), their groups, and the ternary operation on intertwiners."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .diagram import Diagram, Report, Representation
from .endo import intertwiners, to_field
from .field import NumberField
from .linalg import Matrix

__all__ = [
    "FiniteTorsor",
    "FiniteGroup",
    "check_torsor",
    "torsor_of_group",
    "group_at",
    "gl_group",
    "gr_group",
    "QuotientGroup",
    "matrix_torsor_check",
    "groups_up_to",
    "cyclic_group",
    "direct_product",
    "dihedral_group",
    "quaternion_group",
    "symmetric_group",
]


@dataclass(frozen=True)
class FiniteTorsor:
    """Ternary table on ``range(n)``: ``table[x][y][z] = (x, y, z)``."""

    table: tuple
    labels: tuple = ()

    @classmethod
    def from_function(cls, n: int, op, labels=()) -> "FiniteTorsor":
        return cls(tuple(tuple(tuple(op(x, y, z) for z in range(n)) for y in range(n))
                         for x in range(n)), tuple(labels))

    @property
    def n(self) -> int:
        return len(self.table)

    def __call__(self, x, y, z) -> int:
        return self.table[x][y][z]

    def to_list(self) -> list:
        return [[list(r) for r in m] for m in self.table]


@dataclass(frozen=True)
class FiniteGroup:
    mul: tuple  # mul[g][h]
    identity: int
    inverse: tuple
    name: str = ""

    @classmethod
    def from_mul(cls, mul, name="") -> "FiniteGroup":
        mul = tuple(tuple(r) for r in mul)
        n = len(mul)
        e = next(g for g in range(n) if all(mul[g][h] == h for h in range(n)))
        inv = tuple(next(h for h in range(n) if mul[g][h] == e) for g in range(n))
        return cls(mul, e, inv, name)

    @property
    def order(self) -> int:
        return len(self.mul)

    def is_group(self) -> bool:
        n, m, e = self.order, self.mul, self.identity
        if any(m[e][g] != g or m[g][e] != g for g in range(n)):
            return False
        if any(m[g][self.inverse[g]] != e or m[self.inverse[g]][g] != e for g in range(n)):
            return False
        return all(m[m[a][b]][c] == m[a][m[b][c]]
                   for a in range(n) for b in range(n) for c in range(n))

    def is_abelian(self) -> bool:
        return all(self.mul[a][b] == self.mul[b][a]
                   for a in range(self.order) for b in range(self.order))


def check_torsor(X: FiniteTorsor) -> Report:
    n, t = X.n, X.table
    bad = []
    for x in range(n):
        for y in range(n):
            if t[x][y][y] != x:
                bad.append(f"({x},{y},{y}) = {t[x][y][y]} != {x}")
            if t[y][y][x] != x:
                bad.append(f"({y},{y},{x}) = {t[y][y][x]} != {x}")
            if len(bad) > 20:
                break
    ax1 = not bad
    ax2 = True
    for x, y, z, u, v in itertools.product(range(n), repeat=5):
        a = t[t[x][y][z]][u][v]
        if a != t[x][t[u][z][y]][v] or a != t[x][y][t[z][u][v]]:
            bad.append(f"para-associativity fails at {(x, y, z, u, v)}")
            ax2 = False
            break
    return Report(not bad, bad, {"order": n, "axiom1": ax1, "axiom2": ax2})


def torsor_of_group(G: FiniteGroup) -> FiniteTorsor:
    m, inv = G.mul, G.inverse
    return FiniteTorsor.from_function(G.order, lambda g, h, k: m[m[g][inv[h]]][k])


def group_at(X: FiniteTorsor, e: int) -> tuple[FiniteGroup, Report]:
    """G_e with ``gh = (g, e, h)`` and ``g^-1 = (e, g, e)``; raises on a non-torsor."""
    chk = check_torsor(X)
    if not chk.ok:
        raise ValueError("not a torsor: " + "; ".join(chk.violations[:3]))
    n, t = X.n, X.table
    mul = tuple(tuple(t[g][e][h] for h in range(n)) for g in range(n))
    inv = tuple(t[e][g][e] for g in range(n))
    G = FiniteGroup(mul, e, inv, f"G_{e}")
    laws = G.is_group()
    round_trip = torsor_of_group(G) == FiniteTorsor(X.table)
    ok = laws and round_trip
    bad = [] if ok else ["group laws" if not laws else "torsor round trip"]
    return G, Report(ok, bad, {"group_laws": laws, "round_trip": round_trip})


class _UnionFind:
    def __init__(self, n):
        self.p = list(range(n))

    def find(self, a):
        while self.p[a] != a:
            self.p[a] = self.p[self.p[a]]
            a = self.p[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


@dataclass(frozen=True)
class QuotientGroup:
    """X^2 modulo the generated relation, with multiplication and action tables."""

    side: str
    classes: tuple  # class index -> sorted tuple of pairs
    cls_of: dict  # pair -> class index
    group: FiniteGroup
    action: tuple  # action[g][x]


def _quotient(X: FiniteTorsor, side: str):
    n, t = X.n, X.table
    pairs = [(a, b) for a in range(n) for b in range(n)]
    idx = {p: i for i, p in enumerate(pairs)}
    uf = _UnionFind(len(pairs))
    rel = {}
    for a, b in pairs:
        if side == "left":
            # (a, b) ~ (a, b)(x, x) = ((a, b, x), x)
            rel[(a, b)] = {(t[a][b][x], x) for x in range(n)}
        else:
            # (a, b) ~ (x, x)(a, b) = (x, (x, a, b))
            rel[(a, b)] = {(x, t[x][a][b]) for x in range(n)}
        for q in rel[(a, b)]:
            uf.union(idx[(a, b)], idx[q])
    roots = sorted({uf.find(i) for i in range(len(pairs))})
    rindex = {r: k for k, r in enumerate(roots)}
    cls_of = {p: rindex[uf.find(idx[p])] for p in pairs}
    classes = [[] for _ in roots]
    for p in pairs:
        classes[cls_of[p]].append(p)
    # the generating relation is already an equivalence relation
    is_equiv = all(rel[p] == set(classes[cls_of[p]]) for p in pairs)
    return tuple(tuple(c) for c in classes), cls_of, is_equiv


def _quotient_group(X: FiniteTorsor, side: str) -> tuple[QuotientGroup, Report]:
    chk = check_torsor(X)
    if not chk.ok:
        raise ValueError("not a torsor: " + "; ".join(chk.violations[:3]))
    n, t = X.n, X.table
    classes, cls_of, is_equiv = _quotient(X, side)
    k = len(classes)

    def prod(p, q):
        (a, b), (c, d) = p, q
        if side == "left":
            return (t[a][b][c], d)  # mu_l((a,b),(c,d)) = ((a,b,c), d)
        return (a, t[b][c][d])  # mu_r((a,b),(c,d)) = (a, (b,c,d))

    mul = [[None] * k for _ in range(k)]
    well_mul = True
    for i in range(k):
        for j in range(k):
            vals = {cls_of[prod(p, q)] for p in classes[i] for q in classes[j]}
            if len(vals) != 1:
                well_mul = False
            mul[i][j] = min(vals)
    act = [[None] * n for _ in range(k)]
    well_act = True
    for i in range(k):
        for x in range(n):
            if side == "left":
                vals = {t[a][b][x] for a, b in classes[i]}  # (a,b)x = (a,b,x)
            else:
                vals = {t[x][a][b] for a, b in classes[i]}  # x(a,b) = (x,a,b)
            if len(vals) != 1:
                well_act = False
            act[i][x] = min(vals)
    G = FiniteGroup.from_mul(mul, f"G{side[0]}")
    laws = G.is_group()
    e = G.identity
    unit_ok = all(cls_of[(x, x)] == e for x in range(n))
    simply = all(sum(1 for g in range(k) if act[g][x] == y) == 1
                 for x in range(n) for y in range(n))
    act_law = all(act[mul[g][h]][x] == (act[g][act[h][x]] if side == "left"
                                         else act[h][act[g][x]])
                  for g in range(k) for h in range(k) for x in range(n))
    iso_ok = True
    for b in range(n):
        Gb = tuple(tuple(t[g][b][h] for h in range(n)) for g in range(n))
        if side == "left":
            i_b = [cls_of[(x, b)] for x in range(n)]  # x -> (x, e)
            back = [t[a][c][b] for a, c in (classes[g][0] for g in range(k))]  # (a,c) -> (a,c,e)
        else:
            i_b = [cls_of[(b, x)] for x in range(n)]
            back = [t[b][a][c] for a, c in (classes[g][0] for g in range(k))]
        hom = all(i_b[Gb[x][y]] == mul[i_b[x]][i_b[y]] for x in range(n) for y in range(n))
        bij = sorted(i_b) == list(range(k))
        inverse = all(back[i_b[x]] == x for x in range(n)) and \
            all(i_b[back[g]] == g for g in range(k))
        iso_ok = iso_ok and hom and bij and inverse
    checks = {"equivalence": is_equiv, "well_defined": well_mul and well_act,
              "group_laws": laws, "unit_class": unit_ok, "action_law": act_law,
              "simply_transitive": simply, "order_matches": k == n, "i_e_iso": iso_ok}
    ok = all(checks.values())
    Q = QuotientGroup(side, classes, cls_of, G, tuple(tuple(r) for r in act))
    return Q, Report(ok, [c for c, v in checks.items() if not v], {"order": k, **checks})


def gl_group(X: FiniteTorsor) -> tuple[QuotientGroup, Report]:
    return _quotient_group(X, "left")


def gr_group(X: FiniteTorsor) -> tuple[QuotientGroup, Report]:
    return _quotient_group(X, "right")


# -- group catalogue ---------------------------------------------------------

def cyclic_group(n: int) -> FiniteGroup:
    return FiniteGroup.from_mul([[(a + b) % n for b in range(n)] for a in range(n)], f"Z{n}")


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    m = H.order
    n = G.order * m
    mul = [[G.mul[a // m][b // m] * m + H.mul[a % m][b % m] for b in range(n)]
           for a in range(n)]
    return FiniteGroup.from_mul(mul, f"{G.name}x{H.name}")


def _perm_group(perms, name) -> FiniteGroup:
    perms = sorted(perms)
    idx = {p: i for i, p in enumerate(perms)}
    mul = [[idx[tuple(p[q[i]] for i in range(len(p)))] for q in perms] for p in perms]
    return FiniteGroup.from_mul(mul, name)


def _closure(gens):
    n = len(gens[0])
    seen = {tuple(range(n))}
    todo = [tuple(range(n))]
    while todo:
        p = todo.pop()
        for g in gens:
            q = tuple(p[g[i]] for i in range(n))
            if q not in seen:
                seen.add(q)
                todo.append(q)
    return seen


def symmetric_group(n: int) -> FiniteGroup:
    return _perm_group(list(itertools.permutations(range(n))), f"S{n}")


def dihedral_group(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n."""
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return _perm_group(_closure([rot, ref]), f"D{n}")


def quaternion_group() -> FiniteGroup:
    # elements (s, u) = s * u with s in {1, -1}, u in {1, i, j, k}
    table = {("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"),
             ("1", "k"): (1, "k"), ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"),
             ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"), ("j", "1"): (1, "j"),
             ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
             ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"),
             ("k", "k"): (-1, "1")}
    elems = [(s, u) for s in (1, -1) for u in ("1", "i", "j", "k")]
    idx = {e: i for i, e in enumerate(elems)}
    mul = []
    for s1, u1 in elems:
        row = []
        for s2, u2 in elems:
            s, u = table[(u1, u2)]
            row.append(idx[(s1 * s2 * s, u)])
        mul.append(row)
    return FiniteGroup.from_mul(mul, "Q8")


def groups_up_to(n: int = 8) -> list[FiniteGroup]:
    """One representative of every isomorphism class of groups of order <= n (n <= 8)."""
    if n > 8:
        raise ValueError("catalogue stops at order 8")
    Z = cyclic_group
    gs = [Z(1), Z(2), Z(3), Z(4), direct_product(Z(2), Z(2)), Z(5), Z(6), symmetric_group(3),
          Z(7), Z(8), direct_product(Z(4), Z(2)), direct_product(direct_product(Z(2), Z(2)), Z(2)),
          dihedral_group(4), quaternion_group()]
    return [g for g in gs if g.order <= n]


# -- matrix torsors ----------------------------------------------------------

def _det_nonzero(M: Matrix) -> bool:
    return M.rows == M.cols and M.inverse() is not None


def _ternary(x: dict, y_inv: dict, z: dict) -> dict:
    return {p: x[p] @ y_inv[p] @ z[p] for p in x}


def matrix_torsor_check(D: Diagram, T1: Representation, T2: Representation, F,
                        samples: int = 100, minpoly: Sequence | None = None, seed: int = 0,
                        coeff_range: int = 2, candidates: int = 400) -> Report:
    """Point-level torsor structure on Hom(T1|F, T2|F): ``(x, y, z) -> x y^-1 z``.

    Points are combinations of the intertwiner basis with coefficients in
    ``[-coeff_range, coeff_range]`` (coefficients in K when ``minpoly`` is
    given), drawn from a seeded generator so runs are reproducible.
    """
    F = tuple(sorted(F))
    if minpoly is not None:
        K = NumberField(minpoly)
        conv = {e: to_field(m, K) for e, m in T1.mats.items()}
        T1 = Representation(dict(T1.dims), conv)
        T2 = Representation(dict(T2.dims), {e: to_field(m, K) for e, m in T2.mats.items()})
        scal = lambda rng: K([rng.randint(-coeff_range, coeff_range)  # noqa: E731
                              for _ in range(K.degree)])
    else:
        K = None
        scal = lambda rng: rng.randint(-coeff_range, coeff_range)  # noqa: E731
    H = intertwiners(D, T1, T2, F)
    rng = random.Random(seed)
    pts, invs = [], []
    tries = 0
    while len(pts) < max(3, samples // 10 + 3) and tries < candidates and H.dim:
        tries += 1
        c = [scal(rng) for _ in range(H.dim)]
        x = H.combine(c)
        if all(_det_nonzero(x[p]) for p in F):
            pts.append(x)
            invs.append({p: x[p].inverse() for p in F})
    if len(pts) < 1:
        return Report(False, ["no invertible intertwiner among the samples"],
                      {"inconclusive": True, "dim": H.dim, "triples": 0})
    closure = formula = True
    n = 0
    triples = itertools.product(range(len(pts)), repeat=3)
    for a, b, c in triples:
        if n >= samples:
            break
        n += 1
        x, yi, z = pts[a], invs[b], pts[c]
        r = _ternary(x, yi, z)
        if H.coords(r) is None:
            closure = False
        for p in F:
            X, Y, Z = x[p], yi[p], z[p]
            for i in range(X.rows):
                for j in range(Z.cols):
                    s = 0
                    for k in range(X.cols):
                        for l in range(Y.cols):
                            s = s + X[i, k] * Y[k, l] * Z[l, j]
                    if s != r[p][i, j]:
                        formula = False
    # torsor axioms on the sampled points
    def t(a, b, c):
        return _ternary(pts[a], invs[b], pts[c])

    def key(x):
        return tuple(x[p] for p in F)

    axiom1 = all(key(t(a, b, b)) == key(pts[a]) and key(t(b, b, a)) == key(pts[a])
                 for a in range(len(pts)) for b in range(len(pts)))
    axiom2 = True
    m = min(len(pts), 3)
    for x, y, z, u, v in itertools.product(range(m), repeat=5):
        xyz = t(x, y, z)
        uzy = _ternary(pts[u], invs[z], pts[y])
        zuv = _ternary(pts[z], invs[u], pts[v])
        lhs = _ternary(xyz, invs[u], pts[v])
        uzy_inv = {p: uzy[p].inverse() for p in F}
        mid = _ternary(pts[x], uzy_inv, pts[v])
        rhs = _ternary(pts[x], invs[y], zuv)
        if not (key(lhs) == key(mid) == key(rhs)):
            axiom2 = False
            break
    ok = closure and formula and axiom1 and axiom2 and n >= samples
    bad = [k for k, v in {"closure": closure, "formula": formula, "axiom1": axiom1,
                          "axiom2": axiom2, "enough_triples": n >= samples}.items() if not v]
    return Report(ok, bad, {"inconclusive": False, "dim": H.dim, "points": len(pts),
                            "triples": n, "closure": closure, "formula": formula,
                            "axiom1": axiom1, "axiom2": axiom2,
                            "field": repr(K) if K else "Q"})
