"""Isometry equations of a bilinear pairing and the finite monoid-is-group lemma."""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .diagram import Report
from .linalg import Matrix, block_diag

__all__ = [
    "Pairing",
    "Polynomial",
    "perfect_duality_check",
    "isometry_equations",
    "distinct_equations",
    "isometry_inverse",
    "is_isometry",
    "sample_isometries",
    "orthogonal_sum",
    "symmetric_extension",
    "generate_monoid",
    "monoid_is_group",
    "finite_order_generators",
    "sample_monoids",
]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Pairing:
    gram: Matrix

    def __post_init__(self):
        if self.gram.rows != self.gram.cols:
            raise ValueError(f"Gram matrix must be square, got {self.gram.shape}")

    @property
    def n(self) -> int:
        return self.gram.rows

    @property
    def perfect(self) -> bool:
        return self.gram.det() != 0


def _gram(A) -> Matrix:
    if isinstance(A, Pairing):
        return A.gram
    M = A if isinstance(A, Matrix) else Matrix(A)
    if M.rows != M.cols:
        raise ValueError(f"Gram matrix must be square, got {M.shape}")
    return M


def perfect_duality_check(A) -> bool:
    return _gram(A).det() != 0


class Polynomial:
    """Sparse polynomial in the n*n variables X_st, stored as {exponents: coefficient}.

    Variable ``X_st`` (0-based) has index ``s * n + t``; terms are kept in
    descending lexicographic order of exponent tuples.
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict):
        self.n = n
        clean = {e: Fraction(c) for e, c in terms.items() if c != 0}
        self.terms = dict(sorted(clean.items(), reverse=True))

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, tuple(self.terms.items())))

    def __call__(self, X: Matrix):
        vals = X.flat()
        total = _ZERO
        for exps, c in self.terms.items():
            term = c
            for v, k in enumerate(exps):
                if k:
                    term = term * vals[v] ** k
            total = total + term
        return total

    def _mono(self, exps) -> str:
        parts = []
        for v, k in enumerate(exps):
            if k:
                name = f"X{v // self.n + 1}{v % self.n + 1}"
                parts.append(name if k == 1 else f"{name}^{k}")
        return "*".join(parts) or "1"

    def to_dict(self) -> dict:
        return {self._mono(e): str(c) for e, c in self.terms.items()}

    def __repr__(self):
        if not self.terms:
            return "0"
        out = []
        for e, c in self.terms.items():
            m = self._mono(e)
            if m == "1":
                out.append(str(c))
            elif c == 1:
                out.append(m)
            elif c == -1:
                out.append("-" + m)
            else:
                out.append(f"{c}*{m}")
        return " + ".join(out).replace("+ -", "- ")


def isometry_equations(A, dual: bool = False) -> list[Polynomial]:
    """Entries of ``X^t A X - A`` in row-major (i, j) order, n^2 polynomials.

    With ``dual`` the pairing is read as a copairing into V (x) V and the
    constraint becomes ``X A X^t = A``, i.e. the same equations in X^t.
    """
    A = _gram(A)
    if not perfect_duality_check(A):
        raise ValueError("pairing is degenerate (det = 0)")
    n = A.rows
    nv = n * n

    def var(s, t):
        return s * n + t if not dual else t * n + s

    eqs = []
    for i in range(n):
        for j in range(n):
            terms: dict = {}
            for r in range(n):
                for r2 in range(n):
                    a = A[r, r2]
                    if a == 0:
                        continue
                    e = [0] * nv
                    e[var(r, i)] += 1
                    e[var(r2, j)] += 1
                    e = tuple(e)
                    terms[e] = terms.get(e, _ZERO) + a
            const = (0,) * nv
            terms[const] = terms.get(const, _ZERO) - A[i, j]
            eqs.append(Polynomial(n, terms))
    return eqs


def distinct_equations(eqs) -> list[Polynomial]:
    seen, out = set(), []
    for p in eqs:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def is_isometry(A, X: Matrix) -> bool:
    A = _gram(A)
    return X.T @ A @ X == A


def isometry_inverse(A, X: Matrix) -> Matrix:
    """``Y = A^-1 X^t A``; a two-sided inverse whenever ``X^t A X = A``."""
    A = _gram(A)
    B = A.inverse()
    if B is None:
        raise ValueError("pairing is degenerate (det = 0)")
    return B @ X.T @ A


def sample_isometries(A, count: int = 20, seed: int = 0, coeff_range: int = 3) -> list[Matrix]:
    """Rational points of the isometry group by a Cayley transform.

    For symmetric A take B skew (and the other way round), ``M = A + B``;
    then ``X = M^-1 M^t`` satisfies ``X^t A X = A`` whenever M is invertible.
    """
    A = _gram(A)
    n = A.rows
    if A.T == A:
        sign = -1  # B skew
    elif A.T == A * -1:
        sign = 1  # B symmetric
    else:
        raise ValueError("Cayley sampling needs a symmetric or alternating pairing")
    rng = random.Random(seed)
    out, tries = [], 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        b = [[_ZERO] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                if i == j and sign == -1:
                    continue
                x = Fraction(rng.randint(-coeff_range, coeff_range), rng.randint(1, 3))
                b[i][j] = x
                b[j][i] = sign * x
        M = A + Matrix(b)
        Mi = M.inverse()
        if Mi is None:
            continue
        out.append(Mi @ M.T)
    return out


def orthogonal_sum(*grams) -> Matrix:
    return block_diag(*[_gram(A) for A in grams])


def symmetric_extension(Q) -> tuple[Matrix, bool]:
    """The symmetric form ``[[0, Q], [Q^t, 0]]`` on V (+) W and its perfectness."""
    Q = Q if isinstance(Q, Matrix) else Matrix(Q)
    m, n = Q.shape
    rows = [[_ZERO] * m + list(Q.row(i)) for i in range(m)]
    rows += [list(Q.T.row(j)) + [_ZERO] * n for j in range(n)]
    S = Matrix(rows, rows=m + n, cols=m + n)
    return S, perfect_duality_check(S)


# -- finite monoids ------------------------------------------------------------

def generate_monoid(gens, limit: int = 24) -> list[Matrix]:
    """Multiplicative closure of ``gens`` and the identity; ValueError past ``limit``."""
    gens = [g if isinstance(g, Matrix) else Matrix(g) for g in gens]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].rows
    I = Matrix.identity(n)
    seen = {I}
    order = [I]
    todo = [I]
    while todo:
        m = todo.pop()
        for g in gens:
            p = m @ g
            if p not in seen:
                seen.add(p)
                order.append(p)
                todo.append(p)
                if len(order) > limit:
                    raise ValueError(f"monoid exceeds {limit} elements")
    return order


def monoid_is_group(M) -> Report:
    """Inverses inside a finite monoid of invertible matrices via ``M > gM > g^2M > ...``.

    Closure and the identity are checked first. For each g the chain of
    subsets is followed until it stabilizes; the stable set then contains the
    identity and the element h with gh = I is read off. Raises ValueError on
    a singular member.
    """
    M = [m if isinstance(m, Matrix) else Matrix(m) for m in M]
    if not M:
        raise ValueError("empty monoid")
    for k, m in enumerate(M):
        if m.rows != m.cols or m.inverse() is None:
            raise ValueError(f"member {k} is not invertible")
    S = set(M)
    index = {m: k for k, m in enumerate(M)}
    I = Matrix.identity(M[0].rows)
    if I not in S:
        return Report(False, ["identity missing"], {"counterexample": None})
    for a, b in itertools.product(range(len(M)), repeat=2):
        if M[a] @ M[b] not in S:
            return Report(False, [f"not closed: product of members {a} and {b}"],
                          {"counterexample": [a, b]})
    inverses, chains, powers = [], [], []
    for g in M:
        cur = S
        length = 0
        while True:
            nxt = frozenset(g @ m for m in cur)
            length += 1
            if nxt == cur:
                break
            cur = nxt
        h = next((m for m in cur if g @ m == I), None)
        if h is None or h @ g != I:
            return Report(False, ["no inverse found in the stable set"],
                          {"counterexample": index[g]})
        inverses.append(index[h])
        chains.append(length)
        # smallest k >= 0 with g^k = g^-1
        p, k = I, 0
        while p != h:
            p, k = p @ g, k + 1
        powers.append(k)
    return Report(True, [], {"order": len(M), "inverses": inverses, "chain_lengths": chains,
                             "inverse_powers": powers})


def finite_order_generators() -> list[Matrix]:
    """Integer matrices of finite order used to build test monoids."""
    return [
        Matrix([[0, -1], [1, 0]]),  # order 4
        Matrix([[0, -1], [1, -1]]),  # order 3
        Matrix([[1, -1], [1, 0]]),  # order 6
        Matrix([[0, 1], [1, 0]]),  # order 2
        Matrix([[-1, 0], [0, 1]]),  # order 2
        Matrix([[1, 0], [0, -1]]),  # order 2
        Matrix([[-1, 0], [0, -1]]),  # order 2
    ]


def sample_monoids(limit: int = 24) -> list[list[Matrix]]:
    """Closures of all one- and two-element generator sets of order at most ``limit``."""
    gens = finite_order_generators()
    out, seen = [], set()
    for r in (1, 2):
        for combo in itertools.combinations(gens, r):
            try:
                M = generate_monoid(combo, limit)
            except ValueError:
                continue
            key = frozenset(M)
            if key not in seen:
                seen.add(key)
                out.append(M)
    return out
