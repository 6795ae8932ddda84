"""Exact coefficient fields.

Three kinds are supported: the rationals, the Gaussian rationals and
cyclotomic fields Q(zeta_n).  Rationals are plain :class:`fractions.Fraction`
values; cyclotomic elements are :class:`CyclotomicElement` instances.  Both
support ``+ - * /`` and ``==`` so series code never needs to know which field
it is working over.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
import re
from typing import Iterable, Sequence


class FieldError(ValueError):
    pass


class FieldTooSmall(FieldError):
    """A requested root does not exist in the configured field."""


@lru_cache(maxsize=None)
def _cyclotomic_modulus(n: int) -> tuple[Fraction, ...]:
    # coefficients of Phi_n, lowest degree first
    from sympy import Poly, Symbol, cyclotomic_poly

    x = Symbol("x")
    coeffs = Poly(cyclotomic_poly(n, x), x).all_coeffs()
    return tuple(Fraction(int(c)) for c in reversed(coeffs))


class CyclotomicElement:
    """Element of Q(zeta_n) = Q[x]/(Phi_n), stored in the power basis."""

    __slots__ = ("n", "c")

    def __init__(self, n: int, coeffs: Sequence):
        self.n = n
        deg = len(_cyclotomic_modulus(n)) - 1
        c = [Fraction(v) for v in coeffs]
        self.c = tuple(_reduce(c, n) + [Fraction(0)] * max(0, deg - len(c)))[:deg]

    # construction helpers
    @classmethod
    def zeta(cls, n: int, power: int = 1) -> "CyclotomicElement":
        power %= n
        return cls(n, [0] * power + [1])

    def _coerce(self, other):
        if isinstance(other, CyclotomicElement):
            if other.n != self.n:
                raise FieldError(f"mixing Q(zeta_{self.n}) and Q(zeta_{other.n})")
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.n, [other])
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement(self.n, [a + b for a, b in zip(self.c, o.c)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicElement(self.n, [-a for a in self.c])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return CyclotomicElement(self.n, [a - b for a, b in zip(self.c, o.c)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.n, [a * other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        prod = [Fraction(0)] * (2 * len(self.c))
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(o.c):
                    if b:
                        prod[i + j] += a * b
        return CyclotomicElement(self.n, prod)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicElement":
        if not self:
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        # solve self * y = 1 through the multiplication matrix
        deg = len(self.c)
        cols = []
        for j in range(deg):
            basis = [0] * deg
            basis[j] = 1
            cols.append((self * CyclotomicElement(self.n, basis)).c)
        mat = [[cols[j][i] for j in range(deg)] for i in range(deg)]
        rhs = [Fraction(1)] + [Fraction(0)] * (deg - 1)
        return CyclotomicElement(self.n, _dense_solve(mat, rhs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicElement(self.n, [a / other for a in self.c])
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CyclotomicElement(self.n, [1])
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, CyclotomicElement) else other
        if o is NotImplemented:
            return False
        return self.n == o.n and self.c == o.c

    def __hash__(self):
        if all(v == 0 for v in self.c[1:]):
            return hash(self.c[0])
        return hash((self.n, self.c))

    def __bool__(self):
        return any(self.c)

    def is_rational(self) -> bool:
        return all(v == 0 for v in self.c[1:])

    def __repr__(self):
        return f"CyclotomicElement({self.n}, {self})"

    def __str__(self):
        return format_element(self)


def _reduce(c: list[Fraction], n: int) -> list[Fraction]:
    mod = _cyclotomic_modulus(n)
    deg = len(mod) - 1
    c = list(c)
    for top in range(len(c) - 1, deg - 1, -1):
        lead = c[top]
        if lead:
            shift = top - deg
            for k in range(deg + 1):
                c[shift + k] -= lead * mod[k]
    return c[:deg]


def _dense_solve(mat: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(mat)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col])
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


class CoefficientField:
    """Descriptor for one of the supported exact fields."""

    def __init__(self, kind: str, order: int = 1):
        if kind not in ("QQ", "cyclotomic"):
            raise FieldError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.order = order if kind == "cyclotomic" else 1

    @classmethod
    def parse(cls, text: str) -> "CoefficientField":
        t = text.strip().replace(" ", "")
        if t in ("QQ", "Q", "rationals"):
            return QQ
        if t in ("QQ(i)", "gaussian"):
            return GAUSSIAN
        m = re.fullmatch(r"QQ\(zeta_?(\d+)\)", t)
        if m:
            return cyclotomic(int(m.group(1)))
        raise FieldError(f"cannot parse field descriptor {text!r}")

    @property
    def descriptor(self) -> str:
        if self.kind == "QQ":
            return "QQ"
        if self.order == 4:
            return "QQ(i)"
        return f"QQ(zeta_{self.order})"

    def __repr__(self):
        return f"CoefficientField({self.descriptor})"

    def __eq__(self, other):
        return isinstance(other, CoefficientField) and self.descriptor == other.descriptor

    def __hash__(self):
        return hash(self.descriptor)

    def __call__(self, value):
        """Coerce ``value`` into the field."""
        if isinstance(value, CyclotomicElement):
            if self.kind == "QQ":
                if value.is_rational():
                    return value.c[0]
                raise FieldError(f"{value} is not rational")
            if value.n != self.order:
                raise FieldError("cyclotomic order mismatch")
            return value
        if isinstance(value, str):
            return self.parse_element(value)
        v = Fraction(value)
        if self.kind == "QQ":
            return v
        return CyclotomicElement(self.order, [v])

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def gen(self):
        """The chosen primitive root zeta_n (i for the Gaussian rationals)."""
        if self.kind == "QQ":
            raise FieldTooSmall("QQ has no cyclotomic generator")
        return CyclotomicElement.zeta(self.order)

    def contains(self, value) -> bool:
        if isinstance(value, CyclotomicElement):
            return self.kind == "cyclotomic" and (value.n == self.order or value.is_rational())
        return True

    def sqrt(self, value):
        """Exact square root inside the field, or raise FieldTooSmall."""
        value = self(value)
        if self.kind == "QQ":
            return _rational_sqrt(value)
        if value.is_rational():
            q = value.c[0]
            try:
                return self(_rational_sqrt(q))
            except FieldTooSmall:
                pass
        # brute search among small combinations is hopeless in general; use
        # the norm trick only for elements of the form r * zeta^k
        for k in range(self.order):
            z = CyclotomicElement.zeta(self.order, k)
            ratio = value / (z * z)
            if ratio.is_rational():
                try:
                    return z * _rational_sqrt(ratio.c[0])
                except FieldTooSmall:
                    continue
        raise FieldTooSmall(f"no square root of {value} found in {self.descriptor}")

    def parse_element(self, text: str):
        text = text.strip()
        if self.kind == "QQ":
            return Fraction(text)
        return parse_cyclotomic(text, self.order)


def _rational_sqrt(q: Fraction) -> Fraction:
    from math import isqrt

    q = Fraction(q)
    if q < 0:
        raise FieldTooSmall(f"{q} has no rational square root")
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn != n or rd * rd != d:
        raise FieldTooSmall(f"{q} is not a rational square")
    return Fraction(rn, rd)


QQ = CoefficientField("QQ")


def cyclotomic(n: int) -> CoefficientField:
    if n < 3:
        raise FieldError("cyclotomic order must be at least 3")
    return CoefficientField("cyclotomic", n)


GAUSSIAN = cyclotomic(4)


def format_element(x) -> str:
    """Canonical text form; rationals print as ``p/q``, cyclotomic elements as
    ``[a0,a1,...]`` in the power basis of zeta."""
    if isinstance(x, CyclotomicElement):
        return "[" + ",".join(str(v) for v in x.c) + "]"
    return str(Fraction(x))


def parse_cyclotomic(text: str, n: int) -> CyclotomicElement:
    text = text.strip()
    if text.startswith("["):
        parts = [p for p in text[1:-1].split(",") if p.strip()]
        return CyclotomicElement(n, [Fraction(p.strip()) for p in parts])
    return CyclotomicElement(n, [Fraction(text)])


def common_field(values: Iterable) -> CoefficientField:
    for v in values:
        if isinstance(v, CyclotomicElement):
            return cyclotomic(v.n)
    return QQ
