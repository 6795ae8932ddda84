"""Truncated arithmetic in the Novikov field and the Laurent ring F.

A :class:`NovikovScalar` is a finite sum ``sum c_k h^{m_k}`` with rational
exponents, known modulo ``h^N`` (open cutoff: only ``m < N`` is kept).  A
precision of ``None`` means the value is exact.

A :class:`LaurentNovikov` is an element of the ring of series in ``h`` and a
Laurent variable ``t``.  Inside the window ``|n| <= t_window`` every
``t^n``-coefficient is stored as a NovikovScalar with its own precision.
Outside the window nothing is stored; instead a quadratic lower bound
``alpha n^2 - beta |n| + gamma`` on the h-exponents of the omitted terms is
carried along.  That bound is what makes translation and products sound:
theta-type series decay quadratically, and every operation transports the
bound, so the reported precision never claims terms that were not computed.

>>> h = NovikovScalar.monomial(1, 1)
>>> (1 + h) * (1 - h) == 1 - h * h
True
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json
import math
import re
from typing import Iterable, Mapping

from .errors import WindowTooSmall, ZeroDivisor
from .fields import (
    QQ,
    CoefficientField,
    CyclotomicElement,
    FieldTooSmall,
    common_field,
    format_element,
)

INF = math.inf


def _p(x):
    return INF if x is None else x


def _unp(x):
    return None if x == INF else Fraction(x)


def _q(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip().strip("()"))
    return Fraction(x)


def _is_coeff(x) -> bool:
    return isinstance(x, (int, Fraction, CyclotomicElement))


class NovikovScalar:
    """Truncated element of the Novikov field with exact coefficients."""

    __slots__ = ("terms", "precision")

    def __init__(self, terms: Iterable | Mapping = (), precision=None):
        prec = None if precision is None else _q(precision)
        acc: dict[Fraction, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for m, c in items:
            m = _q(m)
            if prec is not None and m >= prec:
                continue
            acc[m] = acc[m] + c if m in acc else c
        self.terms = tuple(
            (m, c if isinstance(c, CyclotomicElement) else Fraction(c))
            for m, c in sorted(acc.items())
            if c
        )
        self.precision = prec

    # construction
    @classmethod
    def monomial(cls, coeff, exponent, precision=None) -> "NovikovScalar":
        return cls([(exponent, coeff)], precision)

    @classmethod
    def constant(cls, coeff) -> "NovikovScalar":
        return cls([(0, coeff)])

    @classmethod
    def coerce(cls, x) -> "NovikovScalar":
        if isinstance(x, NovikovScalar):
            return x
        if _is_coeff(x):
            return cls.constant(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to NovikovScalar")

    def _fast(self, terms: list, precision) -> "NovikovScalar":
        # terms already sorted, nonzero and below precision
        out = object.__new__(NovikovScalar)
        out.terms = tuple(terms)
        out.precision = precision
        return out

    # inspection
    def valuation(self):
        """Leading exponent; for a zero series the precision (or inf)."""
        if self.terms:
            return self.terms[0][0]
        return _p(self.precision)

    def leading(self):
        if not self.terms:
            raise ZeroDivisor("series has no term below its precision")
        return self.terms[0]

    def coefficient(self, m):
        m = _q(m)
        if self.precision is not None and m >= self.precision:
            raise WindowTooSmall(f"exponent {m} is beyond precision {self.precision}")
        for e, c in self.terms:
            if e == m:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    @property
    def exact(self) -> bool:
        return self.precision is None

    @property
    def field(self) -> CoefficientField:
        return common_field(c for _, c in self.terms)

    def truncate(self, precision) -> "NovikovScalar":
        prec = min(_p(self.precision), _q(precision))
        return NovikovScalar(self.terms, _unp(prec))

    # arithmetic
    def __add__(self, other):
        try:
            o = NovikovScalar.coerce(other)
        except TypeError:
            return NotImplemented
        prec = min(_p(self.precision), _p(o.precision))
        acc = dict(self.terms)
        for m, c in o.terms:
            acc[m] = acc[m] + c if m in acc else c
        return NovikovScalar(
            ((m, c) for m, c in acc.items() if m < prec), _unp(prec)
        )

    __radd__ = __add__

    def __neg__(self):
        return self._fast([(m, -c) for m, c in self.terms], self.precision)

    def __sub__(self, other):
        try:
            o = NovikovScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if _is_coeff(other):
            if not other:
                return NovikovScalar((), self.precision)
            return self._fast([(m, c * other) for m, c in self.terms], self.precision)
        if not isinstance(other, NovikovScalar):
            return NotImplemented
        return _mul(self, other, INF)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if _is_coeff(other):
            return self * (1 / Fraction(other) if not isinstance(other, CyclotomicElement) else other.inverse())
        o = NovikovScalar.coerce(other)
        return self * o.inverse(precision=self._div_precision(o))

    def __rtruediv__(self, other):
        return NovikovScalar.coerce(other) / self

    def _div_precision(self, o: "NovikovScalar"):
        if o.precision is not None or len(o.terms) <= 1:
            return None
        if self.precision is None:
            raise ValueError("dividing exact series by an exact non-monomial needs a precision")
        return self.precision

    def inverse(self, precision=None) -> "NovikovScalar":
        """Two-sided inverse; ``a * a.inverse() == 1 + O(h^(N - val a))``.

        For an exact non-monomial input ``precision`` (absolute precision of
        the result) is required."""
        if not self.terms:
            raise ZeroDivisor("cannot invert a series with no term below its precision")
        v, c = self.terms[0]
        cinv = c.inverse() if isinstance(c, CyclotomicElement) else 1 / c
        if len(self.terms) == 1 and self.precision is None:
            return NovikovScalar.monomial(cinv, -v)
        if self.precision is not None:
            target = self.precision - 2 * v
            if precision is not None:
                target = min(target, _q(precision))
        elif precision is None:
            raise ValueError("inverse of an exact non-monomial needs a precision")
        else:
            target = _q(precision)
        rel = target + v  # relative precision of the unit part
        # a = c h^v (1 + x), val(x) > 0
        x = NovikovScalar(
            [(m - v, cc * cinv) for m, cc in self.terms[1:]], _unp(rel)
        )
        result = NovikovScalar([(0, 1)], _unp(rel))
        power = NovikovScalar([(0, 1)], _unp(rel))
        negx = -x
        while power.terms:
            power = _mul(power, negx, rel)
            result = result + power
        return NovikovScalar(
            [(m - v, cc * cinv) for m, cc in result.terms], _unp(rel - v)
        )

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = NovikovScalar.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def sqrt(self, field: CoefficientField | None = None) -> "NovikovScalar":
        """Square root with positive leading coefficient choice from
        ``field.sqrt``; binomial series on the unit part."""
        if not self.terms:
            raise ZeroDivisor("square root of a series that vanishes to precision")
        field = field or self.field
        v, c = self.terms[0]
        root_c = field.sqrt(c)
        cinv = c.inverse() if isinstance(c, CyclotomicElement) else 1 / c
        rel = _p(self.precision) - v
        x = NovikovScalar([(m - v, cc * cinv) for m, cc in self.terms[1:]], _unp(rel))
        if x.is_zero() and self.precision is None:
            return NovikovScalar.monomial(root_c, v / 2)
        if rel == INF:
            raise ValueError("square root of an exact non-monomial needs a precision")
        result = NovikovScalar([(0, 1)], _unp(rel))
        power = NovikovScalar([(0, 1)], _unp(rel))
        binom = Fraction(1)
        k = 0
        while True:
            k += 1
            power = _mul(power, x, rel)
            if not power.terms:
                break
            binom = binom * (Fraction(1, 2) - (k - 1)) / k
            result = result + power * binom
        return NovikovScalar(
            [(m + v / 2, cc * root_c) for m, cc in result.terms], _unp(rel + v / 2)
        )

    def rescale(self, k) -> "NovikovScalar":
        """Replace every exponent m by k*m (k > 0)."""
        k = _q(k)
        if k <= 0:
            raise ValueError("rescale factor must be positive")
        return NovikovScalar(
            [(m * k, c) for m, c in self.terms],
            None if self.precision is None else self.precision * k,
        )

    def __eq__(self, other):
        try:
            o = NovikovScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return (self - o).is_zero()

    __hash__ = None

    def max_discrepancy(self, other) -> Fraction | None:
        """Lowest exponent at which the two disagree (None if they agree)."""
        d = self - NovikovScalar.coerce(other)
        return d.terms[0][0] if d.terms else None

    # text and json
    def to_text(self) -> str:
        parts = [f"{format_element(c)}*h^({m})" for m, c in self.terms]
        if self.precision is not None:
            parts.append(f"O(h^({self.precision}))")
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"NovikovScalar({self.to_text()})"

    @classmethod
    def from_text(cls, text: str, field: CoefficientField = QQ) -> "NovikovScalar":
        lin = LaurentNovikov.from_text(text, field)
        if any(n != 0 for (_, n) in lin.terms):
            raise ValueError("text contains t-powers")
        return lin.coefficient(0)

    def to_json(self) -> dict:
        return {
            "field": self.field.descriptor,
            "precision": None if self.precision is None else str(self.precision),
            "terms": [{"m": str(m), "c": format_element(c)} for m, c in self.terms],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NovikovScalar":
        field = CoefficientField.parse(data.get("field", "QQ"))
        return cls(
            [(Fraction(t["m"]), field.parse_element(t["c"])) for t in data["terms"]],
            data.get("precision"),
        )


def _mul(a: NovikovScalar, b: NovikovScalar, cap) -> NovikovScalar:
    pa, pb = _p(a.precision), _p(b.precision)
    va, vb = a.valuation(), b.valuation()
    prec = min(pa, pb, pa + vb, pb + va, cap)
    acc: dict[Fraction, object] = {}
    bt = b.terms
    for ea, ca in a.terms:
        for eb, cb in bt:
            e = ea + eb
            if e >= prec:
                break
            p = ca * cb
            if e in acc:
                acc[e] = acc[e] + p
            else:
                acc[e] = p
    return a._fast(sorted((m, c) for m, c in acc.items() if c), _unp(prec))


def h(exponent=1, coeff=1, precision=None) -> NovikovScalar:
    """Shorthand for ``coeff * h^exponent``."""
    return NovikovScalar.monomial(coeff, exponent, precision)


def scalar_arith(a: NovikovScalar, b: NovikovScalar, op: str) -> NovikovScalar:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    raise ValueError(f"unknown op {op!r}")


def scalar_invert(a: NovikovScalar, precision=None) -> NovikovScalar:
    return a.inverse(precision)


# ---------------------------------------------------------------------------
# Laurent series in t


@dataclass(frozen=True)
class Tail:
    """Lower bound alpha n^2 - beta |n| + gamma on h-exponents outside the window."""

    alpha: Fraction
    beta: Fraction
    gamma: Fraction

    def __post_init__(self):
        if self.alpha <= 0 or self.beta < 0:
            raise ValueError("tail needs alpha > 0 and beta >= 0")

    def at(self, n: int) -> Fraction:
        return self.alpha * n * n - self.beta * abs(n) + self.gamma

    def min_beyond(self, w: int) -> Fraction:
        """Minimum over |n| >= w + 1."""
        vertex = self.beta / (2 * self.alpha)
        cands = {w + 1, max(w + 1, math.floor(vertex)), max(w + 1, math.ceil(vertex))}
        return min(self.at(n) for n in cands)

    def lower(self) -> Fraction:
        """Global minimum over all integers n."""
        vertex = self.beta / (2 * self.alpha)
        return min(self.at(math.floor(vertex)), self.at(math.ceil(vertex)))


_ZERO = NovikovScalar()


class LaurentNovikov:
    """Truncated element of F: t-coefficients are NovikovScalars."""

    __slots__ = ("coeffs", "t_window", "tail", "loss")

    def __init__(self, coeffs: Mapping[int, NovikovScalar], t_window: int,
                 tail: Tail | None = None, loss: bool = False):
        self.t_window = int(t_window)
        self.coeffs = {
            int(n): c for n, c in coeffs.items()
            if abs(n) <= self.t_window and (c.terms or c.precision is not None)
        }
        self.tail = tail
        self.loss = loss

    # construction
    @classmethod
    def from_terms(cls, terms: Mapping, h_precision=None, t_window: int | None = None,
                   tail: Tail | None = None) -> "LaurentNovikov":
        """Build from a map (m, n) -> c.  Every coefficient inside the window
        gets precision ``h_precision``; ``tail=None`` declares that no terms
        exist outside the window."""
        by_n: dict[int, list] = {}
        for (m, n), c in terms.items():
            by_n.setdefault(int(n), []).append((m, c))
        if t_window is None:
            t_window = max((abs(n) for n in by_n), default=0)
        coeffs = {n: NovikovScalar(v, h_precision) for n, v in by_n.items()}
        if h_precision is not None:
            for n in range(-t_window, t_window + 1):
                coeffs.setdefault(n, NovikovScalar((), h_precision))
        lost = any(abs(n) > t_window for n in by_n)
        return cls(coeffs, t_window, tail, lost)

    @classmethod
    def scalar(cls, s) -> "LaurentNovikov":
        return cls({0: NovikovScalar.coerce(s)}, 0)

    @classmethod
    def monomial(cls, coeff=1, m=0, n=0) -> "LaurentNovikov":
        return cls({n: NovikovScalar.monomial(coeff, m)}, abs(n))

    # inspection
    def coefficient(self, n: int) -> NovikovScalar:
        if abs(n) <= self.t_window:
            return self.coeffs.get(n, _ZERO)
        if self.tail is None:
            return _ZERO
        return NovikovScalar((), self.tail.at(n))

    @property
    def terms(self) -> dict:
        out = {}
        for n, c in self.coeffs.items():
            for m, v in c.terms:
                out[(m, n)] = v
        return out

    @property
    def h_precision(self):
        p = min((_p(c.precision) for c in self.coeffs.values()), default=INF)
        if self.tail is not None:
            p = min(p, self.tail.min_beyond(self.t_window))
        return _unp(p)

    def _inner_precision(self):
        return min((_p(c.precision) for c in self.coeffs.values()), default=INF)

    def window_binding(self) -> bool:
        """True if the tail bound, not the stored coefficients, limits precision."""
        if self.tail is None:
            return False
        return self.tail.min_beyond(self.t_window) < self._inner_precision()

    def _vbound(self, n: int):
        """Lower bound on the valuation of the full t^n coefficient."""
        if abs(n) <= self.t_window:
            c = self.coeffs.get(n)
            return INF if c is None else c.valuation()
        return INF if self.tail is None else self.tail.at(n)

    def _global_tail(self) -> Tail | None:
        """Quadratic bound valid for every n (window included)."""
        if self.tail is None:
            return None
        t = self.tail
        g = t.gamma
        for n in range(-self.t_window, self.t_window + 1):
            v = self._vbound(n)
            if v != INF:
                g = min(g, v - t.alpha * n * n + t.beta * abs(n))
        return Tail(t.alpha, t.beta, g)

    def _vmin(self):
        v = min((self._vbound(n) for n in range(-self.t_window, self.t_window + 1)), default=INF)
        if self.tail is not None:
            v = min(v, self.tail.min_beyond(self.t_window))
        return v

    def _support(self) -> int:
        return max((n for n, c in self.coeffs.items() for n in (abs(n),)), default=0)

    # arithmetic
    def _coerce(self, other) -> "LaurentNovikov":
        if isinstance(other, LaurentNovikov):
            return other
        if isinstance(other, NovikovScalar) or _is_coeff(other):
            return LaurentNovikov.scalar(other)
        raise TypeError(f"cannot coerce {type(other).__name__}")

    def __add__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        w = max(self.t_window, o.t_window)
        coeffs = {}
        for n in range(-w, w + 1):
            a, b = self.coefficient(n), o.coefficient(n)
            if a.terms or b.terms or a.precision is not None or b.precision is not None:
                coeffs[n] = a + b
        tail = _tail_min(self.tail, o.tail)
        return LaurentNovikov(coeffs, w, tail, self.loss or o.loss)

    __radd__ = __add__

    def __neg__(self):
        return LaurentNovikov({n: -c for n, c in self.coeffs.items()}, self.t_window,
                              self.tail, self.loss)

    def __sub__(self, other):
        try:
            o = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, NovikovScalar) or _is_coeff(other):
            s = NovikovScalar.coerce(other)
            tail = None
            if self.tail is not None:
                vs = s.valuation()
                if vs == INF:
                    return LaurentNovikov({}, self.t_window)
                tail = Tail(self.tail.alpha, self.tail.beta, self.tail.gamma + vs)
            return LaurentNovikov({n: c * s for n, c in self.coeffs.items()},
                                  self.t_window, tail, self.loss)
        if not isinstance(other, LaurentNovikov):
            return NotImplemented
        return _series_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers of Laurent series are not supported")
        result = LaurentNovikov.scalar(1)
        for _ in range(k):
            result = result * self
        return result

    # substitutions
    def translate(self, d: int) -> "LaurentNovikov":
        """t^d f(h t): the term (m, n) goes to (m + n, n + d)."""
        d = int(d)
        moved = {n + d: c * NovikovScalar.monomial(1, n) for n, c in self.coeffs.items()}
        tail = None
        if self.tail is not None:
            a, b, g = self.tail.alpha, self.tail.beta, self.tail.gamma
            # q(n - d) + (n - d) bounded below in terms of n
            ad = abs(d)
            tail = Tail(a, b + 1 + 2 * a * ad, g + a * d * d - (b + 1) * ad)
        return _rewindow(moved, self.t_window, tail, self.loss,
                         grow=self.tail is None, pre=lambda n: n - d)

    def shift_t(self, k: int) -> "LaurentNovikov":
        """Multiply by t^k."""
        moved = {n + k: c for n, c in self.coeffs.items()}
        tail = None
        if self.tail is not None:
            a, b, g = self.tail.alpha, self.tail.beta, self.tail.gamma
            ak = abs(k)
            tail = Tail(a, b + 2 * a * ak, g + a * k * k - b * ak)
        return _rewindow(moved, self.t_window, tail, self.loss, grow=self.tail is None,
                         pre=lambda n: n - k)

    def substitute(self, coeff=1, h_shift=0, power: int = 1) -> "LaurentNovikov":
        """f(coeff * h^h_shift * t^power) for power in {1, -1, 2, -2}."""
        h_shift = _q(h_shift)
        if power not in (1, -1, 2, -2):
            raise ValueError("power must be one of 1, -1, 2, -2")
        out = {}
        for n, c in self.coeffs.items():
            factor = NovikovScalar.monomial(_cpow(coeff, n), h_shift * n)
            out[n * power] = c * factor
        tail = None
        if self.tail is not None:
            a, b, g = self.tail.alpha, self.tail.beta, self.tail.gamma
            b = b + abs(h_shift)
            if abs(power) == 2:
                tail = Tail(a / 4, b / 2, g)
            else:
                tail = Tail(a, b, g)
        w = self.t_window * abs(power)
        if abs(power) == 2:
            for n in range(-w, w + 1):
                if n % 2 and n not in out:
                    out[n] = _ZERO
        return LaurentNovikov(out, w, tail, self.loss)

    def derivative(self) -> "LaurentNovikov":
        """Formal d/dt."""
        out = {n - 1: c * n for n, c in self.coeffs.items() if n != 0}
        for n, c in self.coeffs.items():
            if n == 0 and c.precision is not None:
                out.setdefault(-1, _ZERO)
        tail = None
        if self.tail is not None:
            a, b, g = self.tail.alpha, self.tail.beta, self.tail.gamma
            tail = Tail(a, b + 2 * a, g + a - b)
        return _rewindow(out, self.t_window, tail, self.loss, grow=self.tail is None,
                         pre=lambda n: n + 1)

    def rescale(self, k) -> "LaurentNovikov":
        k = _q(k)
        tail = None
        if self.tail is not None:
            tail = Tail(self.tail.alpha * k, self.tail.beta * k, self.tail.gamma * k)
        return LaurentNovikov({n: c.rescale(k) for n, c in self.coeffs.items()},
                              self.t_window, tail, self.loss)

    def evaluate(self, u: NovikovScalar) -> NovikovScalar:
        """Substitute t = u (a unit) and sum, capping precision by the tail."""
        u = NovikovScalar.coerce(u)
        total = NovikovScalar()
        for n, c in sorted(self.coeffs.items()):
            total = total + c * (u ** n)
        cap = INF
        if self.tail is not None:
            vu = u.valuation()
            a, b, g = self.tail.alpha, self.tail.beta, self.tail.gamma
            # min over |n| > W of a n^2 - b|n| + g + n vu
            best = INF
            for sign in (1, -1):
                slope = b - sign * vu
                vertex = slope / (2 * a)
                for n in {self.t_window + 1, math.floor(vertex), math.ceil(vertex)}:
                    if n >= self.t_window + 1:
                        best = min(best, a * n * n - slope * n + g)
            cap = best
        return total.truncate(cap) if cap != INF else total

    # comparison
    def agree(self, other, h_precision=None, t_window: int | None = None) -> dict:
        """Termwise comparison inside the common window below h_precision.

        Returns a report with ``equal`` (bool), ``certified`` (both sides known
        to the requested precision everywhere in the window) and the first
        discrepancy found."""
        o = self._coerce(other)
        w = min(self.t_window, o.t_window) if t_window is None else t_window
        target = _p(None if h_precision is None else _q(h_precision))
        equal, certified, first = True, True, None
        for n in range(-w, w + 1):
            d = self.coefficient(n) - o.coefficient(n)
            known = _p(d.precision)
            if known < target:
                certified = False
            bad = [m for m, _ in d.terms if m < target]
            if bad:
                equal = False
                cand = (bad[0], n)
                if first is None or cand < first:
                    first = cand
        return {"equal": equal, "certified": certified, "first_discrepancy": first,
                "t_window": w, "h_precision": None if target == INF else target}

    def __eq__(self, other):
        try:
            return self.agree(other)["equal"]
        except TypeError:
            return NotImplemented

    __hash__ = None

    # text and json
    def to_text(self) -> str:
        items = sorted(self.terms.items())
        parts = [f"{format_element(c)}*h^({m})*t^{n}" for (m, n), c in items]
        p = self.h_precision
        if p is not None:
            parts.append(f"O(h^({p}))")
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"LaurentNovikov({self.to_text()}, t_window={self.t_window})"

    _TERM = re.compile(r"^(?P<c>\[[^\]]*\]|[-+]?\d+(?:/\d+)?)\*h\^\((?P<m>[-+]?\d+(?:/\d+)?)\)(?:\*t\^(?P<n>[-+]?\d+))?$")

    @classmethod
    def from_text(cls, text: str, field: CoefficientField = QQ,
                  t_window: int | None = None) -> "LaurentNovikov":
        text = text.strip()
        terms = {}
        prec = None
        if text == "0":
            return cls({}, t_window or 0)
        for chunk in text.split(" + "):
            chunk = chunk.strip()
            if chunk.startswith("O(h^("):
                prec = Fraction(chunk[5:-2])
                continue
            m = cls._TERM.match(chunk)
            if not m:
                raise ValueError(f"cannot parse term {chunk!r}")
            n = int(m.group("n") or 0)
            key = (Fraction(m.group("m")), n)
            terms[key] = field.parse_element(m.group("c"))
        return cls.from_terms(terms, prec, t_window)

    def to_json(self) -> dict:
        fld = common_field(c for c in self.terms.values())
        return {
            "field": fld.descriptor,
            "h_precision": None if self.h_precision is None else str(self.h_precision),
            "t_window": self.t_window,
            "terms": [
                {"m": str(m), "n": n, "c": format_element(c)}
                for (m, n), c in sorted(self.terms.items())
            ],
            "coefficient_precision": {
                str(n): str(c.precision)
                for n, c in sorted(self.coeffs.items()) if c.precision is not None
            },
            "tail": None if self.tail is None else
            [str(self.tail.alpha), str(self.tail.beta), str(self.tail.gamma)],
            "loss": self.loss,
        }

    @classmethod
    def from_json(cls, data: dict) -> "LaurentNovikov":
        field = CoefficientField.parse(data.get("field", "QQ"))
        by_n: dict[int, list] = {}
        for t in data["terms"]:
            by_n.setdefault(int(t["n"]), []).append((Fraction(t["m"]), field.parse_element(t["c"])))
        precs = {int(k): Fraction(v) for k, v in data.get("coefficient_precision", {}).items()}
        coeffs = {}
        for n in set(by_n) | set(precs):
            coeffs[n] = NovikovScalar(by_n.get(n, []), precs.get(n))
        tail = data.get("tail")
        tail = None if tail is None else Tail(*(Fraction(x) for x in tail))
        return cls(coeffs, data["t_window"], tail, data.get("loss", False))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _cpow(c, n: int):
    if n >= 0:
        return c ** n if not isinstance(c, int) or c != 1 else 1
    inv = c.inverse() if isinstance(c, CyclotomicElement) else 1 / Fraction(c)
    return inv ** (-n)


def _tail_min(a: Tail | None, b: Tail | None) -> Tail | None:
    if a is None:
        return b
    if b is None:
        return a
    return Tail(min(a.alpha, b.alpha), max(a.beta, b.beta), min(a.gamma, b.gamma))


def _rewindow(coeffs: dict, w: int, tail: Tail | None, loss: bool, grow: bool,
              pre=None) -> LaurentNovikov:
    """Place moved coefficients into a window; with a tail the window is kept
    and anything pushed out is absorbed into the tail bound (flagging loss if
    that lowers the overall precision)."""
    if grow:
        w2 = max([w] + [abs(n) for n, c in coeffs.items() if c.terms or c.precision is not None])
        return LaurentNovikov(coeffs, w2, None, loss)
    inner = {n: c for n, c in coeffs.items() if abs(n) <= w}
    # positions inside the window that received nothing are unknown only if the
    # preimage was outside the old window, i.e. covered by the tail
    for n in range(-w, w + 1):
        if n not in inner and tail is not None and abs(pre(n)) > w:
            inner[n] = NovikovScalar((), tail.at(n))
    dropped = [(n, c) for n, c in coeffs.items() if abs(n) > w and (c.terms or c.precision is not None)]
    if dropped and tail is not None:
        g = tail.gamma
        for n, c in dropped:
            g = min(g, c.valuation() - tail.alpha * n * n + tail.beta * abs(n))
        inner_prec = min((_p(c.precision) for c in inner.values()), default=INF)
        new_tail = Tail(tail.alpha, tail.beta, g)
        if new_tail.min_beyond(w) < min(inner_prec, tail.min_beyond(w)):
            loss = True
        tail = new_tail
    return LaurentNovikov(inner, w, tail, loss)


def _series_mul(f: LaurentNovikov, g: LaurentNovikov) -> LaurentNovikov:
    if f.tail is None and g.tail is None:
        w = f.t_window + g.t_window
        out: dict[int, NovikovScalar] = {}
        for n1, a in f.coeffs.items():
            for n2, b in g.coeffs.items():
                n = n1 + n2
                p = a * b
                out[n] = out[n] + p if n in out else p
        return LaurentNovikov(out, w, None, f.loss or g.loss)

    w = max(f.t_window, g.t_window)
    vmin_f, vmin_g = f._vmin(), g._vmin()
    out = {}
    for n in range(-w, w + 1):
        acc = NovikovScalar()
        for n1, a in f.coeffs.items():
            n2 = n - n1
            if abs(n2) <= g.t_window:
                b = g.coeffs.get(n2)
                if b is not None:
                    acc = acc + a * b
        cap = INF
        if f.tail is not None:
            cap = min(cap, _outer_bound(f, g, n, vmin_g))
        if g.tail is not None:
            cap = min(cap, _outer_bound(g, f, n, vmin_f))
        out[n] = acc.truncate(cap) if cap != INF else acc
    tail = _product_tail(f, g)
    res = LaurentNovikov(out, w, tail, f.loss or g.loss)
    if res.window_binding() and not (f.window_binding() or g.window_binding()):
        res.loss = True
    return res


def _outer_bound(f: LaurentNovikov, g: LaurentNovikov, n: int, vmin_g):
    """Lowest possible exponent of f_{n1} g_{n-n1} over n1 outside f's window."""
    best = INF
    t = f.tail
    if g.tail is None:
        for n2 in g.coeffs:
            n1 = n - n2
            if abs(n1) > f.t_window:
                best = min(best, t.at(n1) + g._vbound(n2))
        return best
    for sign in (1, -1):
        k = f.t_window + 1
        while True:
            n1 = sign * k
            qa = t.at(n1)
            if k > t.beta / (2 * t.alpha) and qa + vmin_g >= best:
                break
            if vmin_g == INF:
                break
            best = min(best, qa + g._vbound(n - n1))
            k += 1
            if k > 10_000:
                raise WindowTooSmall("tail bound search did not terminate")
    return best


def _product_tail(f: LaurentNovikov, g: LaurentNovikov) -> Tail | None:
    gf, gg = f._global_tail(), g._global_tail()
    if gf is not None and gg is not None:
        a = gf.alpha * gg.alpha / (2 * (gf.alpha + gg.alpha))
        c = (gf.gamma + gg.gamma - gf.beta ** 2 / (2 * gf.alpha)
             - gg.beta ** 2 / (2 * gg.alpha))
        return Tail(a, Fraction(0), c)
    if gf is None:
        gf, gg, f, g = gg, gf, g, f
    if gf is None:
        return None
    vmin = g._vmin()
    if vmin == INF:
        return Tail(gf.alpha, gf.beta, Fraction(10 ** 9))
    s = g._support()
    return Tail(gf.alpha, gf.beta + 2 * gf.alpha * s, gf.gamma - gf.beta * s + Fraction(vmin))


def translate(f: LaurentNovikov, d: int) -> LaurentNovikov:
    return f.translate(d)


def exponent_rescale(a, k):
    return a.rescale(k)


# ---------------------------------------------------------------------------
# equivariant Hom and Ext over F x| Z


def _chain_exponents(delta: int, start: int, lo: int, hi: int, dual: bool) -> dict[int, Fraction]:
    """Exponents along one residue chain of the recurrence for the kernel of
    id - T(delta) (or, with ``dual``, of its transpose), normalised to 0 at
    ``start``."""
    e = {start: Fraction(0)}
    n = start
    # forward in steps of +|delta|
    step = abs(delta)
    while n + step <= hi:
        m = n + step
        if not dual:
            # f_m = h^{m - delta} f_{m - delta} for delta > 0 ; for delta < 0 the
            # relation read upward is f_{n} = h^{n - delta} f_{n - delta} with
            # n - delta = m
            e[m] = e[n] + (m - delta) if delta > 0 else e[n] - (n - delta)
        else:
            # a_n = h^n a_{n + delta}
            e[m] = e[n] - n if delta > 0 else e[n] + m
        n = m
    n = start
    while n - step >= lo:
        m = n - step
        if not dual:
            e[m] = e[n] - (n - delta) if delta > 0 else e[n] + (m - delta)
        else:
            e[m] = e[n] + m if delta > 0 else e[n] - n
        n = m
    return e


def _classify(e: dict[int, Fraction], threshold) -> str:
    lo, hi = min(e), max(e)
    ends = (e[lo], e[hi])
    if all(x >= threshold for x in ends):
        return "decays"
    if any(x <= -threshold for x in ends):
        return "grows"
    return "undecided"


def equivariant_hom_dim(d0: int, d1: int, h_precision=10, t_window: int = 14) -> tuple[int, int]:
    """Dimensions over R of ker and coker of id - T(d1 - d0) acting on F.

    The operator splits into chains along residues of n mod |d1 - d0|.  Each
    chain has a one-dimensional solution space of the (transposed) recurrence;
    it contributes iff its exponents go to +infinity at both window ends,
    which is what membership in F requires.  Both the window and a window one
    step smaller must give the same verdict, else WindowTooSmall."""
    hom, ext = _equivariant(d0, d1, h_precision, t_window)
    delta = abs(d1 - d0) or 1
    if t_window - delta >= delta:
        again = _equivariant(d0, d1, h_precision, t_window - delta)
        if again != (hom, ext):
            raise WindowTooSmall("equivariant dimensions not stable under window growth")
    if hom - ext != d1 - d0:
        raise WindowTooSmall("index check failed; window too small")
    return hom, ext


def _equivariant(d0, d1, h_precision, t_window):
    delta = d1 - d0
    threshold = _q(h_precision)
    if delta == 0:
        # (1 - h^n) f_n = 0 : only n = 0 survives, on both sides
        return 1, 1
    hom = ext = 0
    for r in range(abs(delta)):
        for dual in (False, True):
            e = _chain_exponents(delta, r, -t_window, t_window, dual)
            verdict = _classify(e, threshold)
            if verdict == "undecided":
                raise WindowTooSmall(f"chain {r} undecided at window {t_window}")
            if verdict == "decays":
                if dual:
                    ext += 1
                else:
                    hom += 1
    return hom, ext


def equivariant_hom_basis(d0: int, d1: int, h_precision=10, t_window: int = 14) -> list[LaurentNovikov]:
    """Kernel vectors of id - T(d1 - d0), one per decaying chain, normalised
    so that the lowest exponent on each chain is zero."""
    delta = d1 - d0
    if delta == 0:
        return [LaurentNovikov.scalar(1)]
    basis = []
    prec = _q(h_precision)
    for r in range(abs(delta)):
        e = _chain_exponents(delta, r, -t_window, t_window, False)
        if _classify(e, prec) != "decays":
            continue
        low = min(e.values())
        terms = {(x - low, n): 1 for n, x in e.items() if x - low < prec}
        # exponents along the chain are exactly n^2/(2 delta) - n/2 + c
        alpha = Fraction(1, 2 * delta)
        c = e[r] - low - alpha * r * r + Fraction(r, 2)
        basis.append(LaurentNovikov.from_terms(terms, prec, t_window,
                                               Tail(alpha, Fraction(1, 2), c)))
    return basis
