"""Exact dense linear algebra over Q and simple number fields.

Entries are ``Fraction`` (for Q) or ``ExtElement``. Rational matrices go
through a fraction-free integer elimination; anything else uses plain
Gauss-Jordan with field division.

Tensor convention: the basis of V (x) W is ``v_i (x) w_j`` with ``j`` varying
fastest, which is exactly what :func:`kron` produces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .field import ExtElement, Q

__all__ = [
    "Matrix",
    "SubspaceBasis",
    "rref",
    "rank",
    "kernel_basis",
    "solve",
    "kron",
    "dual",
    "swap_matrix",
    "block_diag",
    "is_rational",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _coerce(x):
    if isinstance(x, (Fraction, ExtElement)):
        return x
    return Q(x)


def is_rational(x) -> bool:
    t = type(x)
    if t is Fraction or t is int:
        return True
    return isinstance(x, ExtElement) and x.is_rational()


def _all_rational(rows) -> bool:
    for r in rows:
        for x in r:
            t = type(x)
            if t is not Fraction and t is not int:
                return False
    return True


class Matrix:
    """Immutable rows x cols matrix. Zero-sized shapes are allowed."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Sequence] = (), rows: int | None = None,
                 cols: int | None = None):
        data = tuple(tuple(_coerce(x) for x in row) for row in data)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValueError(f"entries do not form a {rows}x{cols} matrix")
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def _raw(cls, data, rows, cols):
        m = object.__new__(cls)
        m.rows, m.cols, m.data = rows, cols, data
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._raw(tuple((_ZERO,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(
            tuple(tuple(_ONE if i == j else _ZERO for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def scalar(cls, c) -> "Matrix":
        return cls([[c]])

    @classmethod
    def from_flat(cls, flat: Sequence, rows: int, cols: int) -> "Matrix":
        flat = tuple(flat)
        if len(flat) != rows * cols:
            raise ValueError("flat data has the wrong length")
        return cls._raw(tuple(tuple(flat[i * cols:(i + 1) * cols]) for i in range(rows)),
                        rows, cols)

    @classmethod
    def column(cls, v: Sequence) -> "Matrix":
        return cls([[x] for x in v], rows=len(v), cols=1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> tuple:
        return self.data[i]

    def col(self, j: int) -> tuple:
        return tuple(r[j] for r in self.data)

    def flat(self) -> tuple:
        """Row-major entries."""
        return tuple(x for r in self.data for x in r)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.data]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.data == other.data

    def __hash__(self):
        return hash((self.rows, self.cols, self.data))

    def __repr__(self):
        if self.rows == 0 or self.cols == 0:
            return f"Matrix.zeros({self.rows}, {self.cols})"
        body = "; ".join(" ".join(str(x) for x in r) for r in self.data)
        return f"Matrix[{body}]"

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix._raw(tuple(tuple((a + b if b else a) if a else b for a, b in zip(r, s))
                                 for r, s in zip(self.data, other.data)), self.rows, self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in subtraction")
        return Matrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                 for r, s in zip(self.data, other.data)), self.rows, self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self.data), self.rows, self.cols)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return Matrix._raw(tuple(tuple(a * c for a in r) for r in self.data), self.rows, self.cols)

    __rmul__ = __mul__

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot compose {self.shape} with {other.shape}")
        cols = list(zip(*other.data)) if other.rows else [()] * other.cols
        out = []
        for r in self.data:
            out.append(tuple(_dot(r, c) for c in cols))
        return Matrix._raw(tuple(out), self.rows, other.cols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length does not match")
        return tuple(_dot(r, v) for r in self.data)

    @property
    def T(self) -> "Matrix":
        return Matrix._raw(tuple(zip(*self.data)) if self.rows else
                           tuple(() for _ in range(self.cols)), self.cols, self.rows)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.data for x in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.rows)

    def rank(self) -> int:
        return rank(self)

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.data]
        det = _ONE
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c] != 0), None)
            if p is None:
                return _ZERO
            if p != c:
                a[c], a[p] = a[p], a[c]
                det = -det
            pv = a[c][c]
            det = det * pv
            for i in range(c + 1, n):
                f = a[i][c]
                if f != 0:
                    f = f / pv
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        return det

    def inverse(self) -> "Matrix | None":
        """Exact inverse, or None for singular matrices."""
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [_ONE if i == j else _ZERO for j in range(n)]
               for i, r in enumerate(self.data)]
        red, piv = rref(aug, 2 * n)
        if piv[:n] != list(range(n)) or len(piv) < n:
            return None
        return Matrix._raw(tuple(tuple(red[i][n:]) for i in range(n)), n, n)

    def kron(self, other: "Matrix") -> "Matrix":
        return kron(self, other)


def _dot(r, c):
    s = _ZERO
    for a, b in zip(r, c):
        if a != 0 and b != 0:
            s = s + a * b
    return s


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Kronecker product; row/col index (i, j) -> i * B.rows + j."""
    out = []
    zero = (_ZERO,) * B.cols
    for ra in A.data:
        for rb in B.data:
            row = []
            for a in ra:
                # coboundaries and identities are mostly zeros and ones
                if a == 0:
                    row.extend(zero)
                elif a == 1:
                    row.extend(rb)
                else:
                    row.extend(a * b if b else _ZERO for b in rb)
            out.append(tuple(row))
    return Matrix._raw(tuple(out), A.rows * B.rows, A.cols * B.cols)


def dual(M: Matrix) -> Matrix:
    """Matrix of the dual map in dual bases: the transpose."""
    return M.T


def swap_matrix(m: int, n: int) -> Matrix:
    """Permutation V (x) W -> W (x) V for dim V = m, dim W = n."""
    size = m * n
    rows = [[_ZERO] * size for _ in range(size)]
    for i in range(m):
        for j in range(n):
            rows[j * m + i][i * n + j] = _ONE
    return Matrix._raw(tuple(tuple(r) for r in rows), size, size)


def block_diag(*blocks: Matrix) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = []
    off = 0
    for b in blocks:
        for r in b.data:
            out.append((_ZERO,) * off + tuple(r) + (_ZERO,) * (cols - off - b.cols))
        off += b.cols
    return Matrix._raw(tuple(out), rows, cols)


# -- elimination -------------------------------------------------------------

def _to_int_row(row) -> list[int] | None:
    den = 1
    for x in row:
        if type(x) is Fraction and x.denominator != 1:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) if type(x) is int else x.numerator * (den // x.denominator)
            for x in row]
    g = math.gcd(*ints) if ints else 0
    if g == 0:
        return None
    if g != 1:
        ints = [v // g for v in ints]
    return ints


def _rref_rational(rows, ncols):
    irows = [r for r in (_to_int_row(r) for r in rows) if r is not None]
    n = len(irows)
    pivots: list[int] = []
    rk = 0
    for c in range(ncols):
        if rk == n:
            break
        best = None
        for i in range(rk, n):
            v = irows[i][c]
            if v and (best is None or abs(v) < abs(irows[best][c])):
                best = i
                if abs(v) == 1:
                    break
        if best is None:
            continue
        irows[rk], irows[best] = irows[best], irows[rk]
        prow = irows[rk]
        pv = prow[c]
        for i in range(n):
            if i == rk:
                continue
            row = irows[i]
            v = row[c]
            if not v:
                continue
            g = math.gcd(pv, v)
            a, b = pv // g, v // g
            new = [a * x - b * y for x, y in zip(row, prow)]
            g2 = math.gcd(*new)
            if g2 > 1:
                new = [x // g2 for x in new]
            irows[i] = new
        pivots.append(c)
        rk += 1
    out = []
    for k in range(rk):
        pv = irows[k][pivots[k]]
        out.append(tuple(Fraction(x, pv) if x else _ZERO for x in irows[k]))
    return out, pivots


def _rref_generic(rows, ncols):
    a = [list(r) for r in rows]
    n = len(a)
    pivots: list[int] = []
    rk = 0
    for c in range(ncols):
        if rk == n:
            break
        p = next((i for i in range(rk, n) if a[i][c] != 0), None)
        if p is None:
            continue
        a[rk], a[p] = a[p], a[rk]
        pv = a[rk][c]
        a[rk] = [x / pv for x in a[rk]]
        prow = a[rk]
        for i in range(n):
            if i != rk:
                f = a[i][c]
                if f != 0:
                    a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        rk += 1
    return [tuple(r) for r in a[:rk]], pivots


def rref(rows, ncols: int | None = None):
    """Reduced row echelon form.

    Accepts a Matrix or a list of rows; returns ``(nonzero_rows, pivots)``.
    """
    if isinstance(rows, Matrix):
        ncols = rows.cols
        rows = rows.data
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if _all_rational(rows):
        return _rref_rational(rows, ncols)
    return _rref_generic(rows, ncols)


def _rank_rational(rows) -> int:
    # Forward elimination only; deliberately separate from _rref_rational so
    # that rank and kernel dimensions are computed by different code.
    work = [r for r in (_to_int_row(r) for r in rows) if r is not None]
    rk = 0
    ncols = len(work[0]) if work else 0
    for c in range(ncols):
        p = next((i for i in range(rk, len(work)) if work[i][c]), None)
        if p is None:
            continue
        work[rk], work[p] = work[p], work[rk]
        prow = work[rk]
        pv = prow[c]
        nxt = []
        for row in work[rk + 1:]:
            v = row[c]
            if v:
                row = [pv * x - v * y for x, y in zip(row, prow)]
                g = math.gcd(*row)
                if g == 0:
                    continue
                if g > 1:
                    row = [x // g for x in row]
            nxt.append(row)
        work = work[:rk + 1] + nxt
        rk += 1
    return rk


def rank(M) -> int:
    rows = M.data if isinstance(M, Matrix) else list(M)
    if _all_rational(rows):
        return _rank_rational(rows)
    return len(_rref_generic(rows, len(rows[0]) if rows else 0)[1])


# -- subspaces ---------------------------------------------------------------

@dataclass(frozen=True)
class SubspaceBasis:
    """A subspace of K^ambient, stored by its reduced row echelon basis."""

    ambient: int
    vectors: tuple[tuple, ...]
    pivots: tuple[int, ...]

    @classmethod
    def span(cls, vectors, ambient: int) -> "SubspaceBasis":
        vectors = [tuple(v) for v in vectors]
        for v in vectors:
            if len(v) != ambient:
                raise ValueError("vector length does not match ambient dimension")
        red, piv = rref(vectors, ambient)
        return cls(ambient, tuple(red), tuple(piv))

    @classmethod
    def full(cls, ambient: int) -> "SubspaceBasis":
        return cls(ambient, tuple(Matrix.identity(ambient).data), tuple(range(ambient)))

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def __len__(self):
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def coords(self, v: Sequence):
        """Coordinates of v in this basis, or None if v is not in the span."""
        if len(v) != self.ambient:
            raise ValueError("vector length does not match ambient dimension")
        c = tuple(v[p] for p in self.pivots)
        recon = self.combine(c)
        if any(a != b for a, b in zip(recon, v)):
            return None
        return c

    def combine(self, coeffs: Sequence) -> tuple:
        out = [_ZERO] * self.ambient
        for a, b in zip(coeffs, self.vectors):
            if a != 0:
                for k, x in enumerate(b):
                    if x != 0:
                        out[k] = out[k] + a * x
        return tuple(out)

    def contains(self, v: Sequence) -> bool:
        return self.coords(v) is not None

    def contains_subspace(self, other: "SubspaceBasis") -> bool:
        return all(self.contains(v) for v in other.vectors)

    def matrix(self) -> Matrix:
        """Basis vectors as rows (dim x ambient)."""
        return Matrix._raw(self.vectors, self.dim, self.ambient)


def kernel_basis(M: Matrix) -> SubspaceBasis:
    """Echelonized basis of {v : M v = 0}."""
    red, piv = rref(M)
    n = M.cols
    pivset = set(piv)
    vecs = []
    for f in range(n):
        if f in pivset:
            continue
        v = [_ZERO] * n
        v[f] = _ONE
        for r, p in zip(red, piv):
            v[p] = -r[f]
        vecs.append(v)
    return SubspaceBasis.span(vecs, n)


def solve(M: Matrix, b: Sequence):
    """Some x with M x = b (free variables zero), or None if inconsistent."""
    if len(b) != M.rows:
        raise ValueError("right-hand side has the wrong length")
    aug = [tuple(r) + (_coerce(bi),) for r, bi in zip(M.data, b)]
    red, piv = rref(aug, M.cols + 1)
    if piv and piv[-1] == M.cols:
        return None
    x = [_ZERO] * M.cols
    for r, p in zip(red, piv):
        x[p] = r[M.cols]
    return tuple(x)
