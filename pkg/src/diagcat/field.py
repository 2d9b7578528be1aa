"""Exact scalars: rationals and simple extensions Q[x]/(m)."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Sequence

__all__ = [
    "Q",
    "NumberField",
    "ExtElement",
    "ZeroDivisorError",
    "ext_arith",
    "parse_scalar",
    "format_scalar",
]

_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def Q(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


def parse_scalar(text: str) -> Fraction:
    """Parse ``"p"`` or ``"p/q"``. Decimal literals are rejected."""
    m = _FRACTION_RE.match(text)
    if m is None:
        raise ValueError(f"not an exact fraction literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ValueError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_scalar(x) -> str | list[str]:
    if isinstance(x, ExtElement):
        return [format_scalar(c) for c in x.coeffs]
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# -- polynomials over Q, coefficient lists lowest degree first ---------------

def _trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _trim(out)


def poly_sub(a, b) -> list[Fraction]:
    n = max(len(a), len(b))
    out = [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]
    return _trim([Fraction(c) for c in out])


def poly_divmod(a, b) -> tuple[list[Fraction], list[Fraction]]:
    b = _trim(list(b))
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = _trim([Fraction(c) for c in a])
    q = [Fraction(0)] * max(len(r) - len(b) + 1, 0)
    lead = b[-1]
    while len(r) >= len(b):
        shift = len(r) - len(b)
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[i + shift] -= f * c
        _trim(r)
    return _trim(q), r


def poly_xgcd(a, b):
    """Return (g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = _trim([Fraction(c) for c in a]), _trim([Fraction(c) for c in b])
    s0, s1 = [Fraction(1)], []
    t0, t1 = [], [Fraction(1)]
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
        t0, t1 = t1, poly_sub(t0, poly_mul(q, t1))
    if not r0:
        return [], s0, t0
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0], [c / lead for c in t0]


def _poly_str(p, var="x") -> str:
    terms = []
    for i, c in enumerate(p):
        if c == 0:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        coef = format_scalar(c)
        if mono and coef == "1":
            terms.append(mono)
        elif mono and coef == "-1":
            terms.append("-" + mono)
        else:
            terms.append(coef + ("*" + mono if mono else ""))
    return " + ".join(terms) if terms else "0"


class ZeroDivisorError(ZeroDivisionError):
    """Raised when inversion meets a zero divisor of a reducible modulus."""

    def __init__(self, element, factor):
        self.element = element
        self.factor = factor
        super().__init__(
            f"{element!r} is a zero divisor: it shares the factor "
            f"{_poly_str(factor)} with the modulus"
        )


class NumberField:
    """Arithmetic in Q[x]/(m) for a monic m of degree >= 1.

    Irreducibility of m is not checked up front; inverting a zero divisor
    raises ZeroDivisorError naming the common factor.
    """

    def __init__(self, minpoly: Sequence, name: str = "x"):
        m = _trim([Q(c) for c in minpoly])
        if len(m) < 2:
            raise ValueError("minimal polynomial must have degree >= 1")
        if m[-1] != 1:
            raise ValueError("minimal polynomial must be monic")
        self.minpoly = tuple(m)
        self.degree = len(m) - 1
        self.name = name
        # x^k mod m for degree <= k <= 2*degree - 2, used by fast multiplication
        d = self.degree
        self._powers = [self.reduce([0] * k + [1]) for k in range(d, 2 * d - 1)]

    def __repr__(self):
        return f"NumberField({_poly_str(self.minpoly, self.name)})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and self.minpoly == other.minpoly

    def __hash__(self):
        return hash(self.minpoly)

    def reduce(self, coeffs) -> tuple[Fraction, ...]:
        c = _trim([Q(x) for x in coeffs])
        if len(c) > self.degree:
            _, c = poly_divmod(c, self.minpoly)
        c = list(c) + [Fraction(0)] * (self.degree - len(c))
        return tuple(c)

    def _mul(self, a, b) -> tuple[Fraction, ...]:
        d = self.degree
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:d]
        for k, c in enumerate(prod[d:]):
            if c:
                for i, r in enumerate(self._powers[k]):
                    if r:
                        out[i] += c * r
        return tuple(Fraction(x) for x in out)

    def __call__(self, coeffs) -> "ExtElement":
        if isinstance(coeffs, ExtElement):
            return coeffs
        if isinstance(coeffs, (int, Fraction, str)):
            coeffs = [coeffs]
        return ExtElement(self, self.reduce(coeffs))

    @property
    def gen(self) -> "ExtElement":
        return self([0, 1])

    def zero(self):
        return self([0])

    def one(self):
        return self([1])

    def add(self, a, b):
        return self(a) + self(b)

    def mul(self, a, b):
        return self(a) * self(b)

    def inv(self, a):
        return self(a).inverse()


def ext_arith(minpoly: Sequence) -> NumberField:
    return NumberField(minpoly)


class ExtElement:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: NumberField, coeffs: tuple[Fraction, ...]):
        self.field = field
        self.coeffs = coeffs

    def _coerce(self, other):
        if isinstance(other, ExtElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.coeffs
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return (Fraction(other),) + (Fraction(0),) * (self.field.degree - 1)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.field, tuple(a + b for a, b in zip(self.coeffs, o)))

    __radd__ = __add__

    def __neg__(self):
        return ExtElement(self.field, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.field, tuple(a - b for a, b in zip(self.coeffs, o)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return ExtElement(self.field, tuple(a * other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return ExtElement(self.field, self.field._mul(self.coeffs, o))

    __rmul__ = __mul__

    def inverse(self) -> "ExtElement":
        a = _trim(list(self.coeffs))
        if not a:
            raise ZeroDivisionError("inverse of zero")
        g, s, _ = poly_xgcd(a, self.field.minpoly)
        if len(g) > 1:
            raise ZeroDivisorError(self, g)
        return ExtElement(self.field, self.field.reduce(s))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return ExtElement(self.field, tuple(a / other for a in self.coeffs))
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * ExtElement(self.field, o).inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field, self.coeffs))

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def __repr__(self):
        return f"[{_poly_str(self.coeffs, self.field.name)}]"
