"""Sparse multivariate polynomials with exact coefficients.

Used for structure constants that depend polynomially on parameters (the
coefficients of the quartic, for instance), so identities can be checked
once symbolically and then specialised to any coefficient ring.
"""
from __future__ import annotations

from fractions import Fraction


class MPoly:
    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: dict | None = None):
        self.nvars = nvars
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, nvars: int, c) -> "MPoly":
        return cls(nvars, {(0,) * nvars: Fraction(c)}) if c else cls(nvars)

    @classmethod
    def var(cls, nvars: int, i: int) -> "MPoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): Fraction(1)})

    def _lift(self, other):
        if isinstance(other, MPoly):
            return other
        return MPoly.const(self.nvars, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return MPoly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return MPoly(self.nvars, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, MPoly):
            if isinstance(other, (int, Fraction)):
                return MPoly(self.nvars, {k: v * other for k, v in self.terms.items()})
            return NotImplemented
        out: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                out[k] = out.get(k, 0) + v1 * v2
        return MPoly(self.nvars, out)

    def __rmul__(self, other):
        return self * other

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MPoly):
            return self.terms == other.terms
        return (self - other).terms == {}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def evaluate(self, values, zero=None):
        """Substitute ``values`` (any ring supporting + and *) for the variables."""
        total = zero
        for k, c in self.terms.items():
            term = c
            for v, e in zip(values, k):
                if e:
                    term = term * (v ** e)
            total = term if total is None else total + term
        if total is None:
            return 0 if zero is None else zero
        return total

    def max_abs(self) -> Fraction:
        return max((abs(v) for v in self.terms.values()), default=Fraction(0))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, v in sorted(self.terms.items()):
            mono = "*".join(f"c{i}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(k) if e)
            parts.append(f"{v}" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)
