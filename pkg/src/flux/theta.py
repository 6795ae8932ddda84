"""Theta series, their identities, the unit torus quartic and its curve.

``theta_series(n, k)`` is the Laurent series ``sum_{i = k mod n} h^{i^2/2n} t^i``;
``theta_eval`` substitutes a unit ``u = c h^m (1 + ...)`` for ``t`` exactly.
Every identity check expands both sides as truncated series and compares
them termwise; nothing is evaluated numerically.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Callable

from .errors import ExcludedPoint, WindowTooSmall
from .fields import GAUSSIAN, CyclotomicElement
from .novikov import INF, LaurentNovikov, NovikovScalar, Tail, _q

IDENTITIES = ("periodicity", "fractional", "symmetry", "addition",
              "specializations", "duplication", "derivative")


@dataclass(frozen=True)
class ThetaSpec:
    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("theta level must be positive")
        object.__setattr__(self, "k", self.k % self.n)


def _spec(n, k=None) -> ThetaSpec:
    if isinstance(n, ThetaSpec):
        return n
    if isinstance(n, tuple):
        return ThetaSpec(*n)
    return ThetaSpec(n, 0 if k is None else k)


def theta_series(spec, h_precision, t_window: int, k=None) -> LaurentNovikov:
    """Level-n theta series as a Laurent series, exact up to ``h^h_precision``.

    With ``h_precision=None`` every stored coefficient is exact and only the
    quadratic tail bound limits the precision."""
    s = _spec(spec, k)
    prec = None if h_precision is None else _q(h_precision)
    terms = {}
    for i in range(-t_window, t_window + 1):
        if i % s.n == s.k:
            e = Fraction(i * i, 2 * s.n)
            if prec is None or e < prec:
                terms[(e, i)] = 1
    return LaurentNovikov.from_terms(terms, prec, t_window, Tail(Fraction(1, 2 * s.n), Fraction(0), Fraction(0)))


def theta_derivative_series(spec, h_precision, t_window: int, k=None) -> LaurentNovikov:
    return theta_series(spec, h_precision, t_window, k).derivative()


def _index_range(n: int, m0: Fraction, bound: Fraction):
    """Integers i with i^2/2n + i m0 < bound."""
    # i^2 + 2n m0 i - 2n bound < 0
    b = 2 * n * m0
    disc = b * b + 8 * n * bound
    if disc < 0:
        return range(0)
    r = math.isqrt(int(disc)) + 2
    lo = math.floor((-b - r) / 2) - 1
    hi = math.ceil((-b + r) / 2) + 1
    return range(lo, hi + 1)


def theta_eval(spec, u, precision, k=None, derivative: int = 0) -> NovikovScalar:
    """Exact truncated value of theta_{n,k} (or its t-derivative) at t = u.

    ``u`` must be a unit; it is split as ``c h^m (1 + x)`` so the exponent of
    the i-th summand is ``i^2/2n + (i - derivative) m`` and only finitely many
    summands fall below the cutoff."""
    s = _spec(spec, k)
    prec = _q(precision)
    u = NovikovScalar.coerce(u)
    m0, _ = u.leading()
    vmin = _min_exponent(s.n, s.k, m0, derivative)
    # every power of u must be known to relative precision prec - vmin
    inv = None
    if len(u.terms) == 1 and u.exact:
        inv = u.inverse()
    total = NovikovScalar((), prec)
    for i in _index_range(s.n, m0, prec + derivative * m0):
        if i % s.n != s.k:
            continue
        e = Fraction(i * i, 2 * s.n)
        if e + (i - derivative) * m0 >= prec:
            continue
        mult = 1
        for j in range(derivative):
            mult *= i - j
        if mult == 0:
            continue
        power = i - derivative
        if power >= 0:
            up = u ** power
        else:
            if inv is None:
                inv = u.inverse(precision=prec - vmin - m0)
            up = inv ** (-power)
        total = total + up * NovikovScalar.monomial(mult, e)
    return total


def _min_exponent(n: int, k: int, m0: Fraction, derivative: int) -> Fraction:
    """Smallest i^2/2n + (i - derivative) m0 over i = k mod n."""
    centre = -n * m0
    best = None
    for i in range(math.floor(centre) - n - 1, math.ceil(centre) + n + 2):
        if i % n == k:
            e = Fraction(i * i, 2 * n) + (i - derivative) * m0
            best = e if best is None or e < best else best
    return best


def theta_prime_at_one(spec, precision, k=None) -> NovikovScalar:
    """theta'_{n,k}(1) = sum i h^{i^2/2n}."""
    return theta_eval(spec, 1, precision, k, derivative=1)


# ---------------------------------------------------------------------------
# identity suite


def _jacobi(w):
    return theta_series(1, None, w, 0)


def _compare(name, lhs: LaurentNovikov, rhs: LaurentNovikov, h_precision, t_window) -> dict:
    rep = lhs.agree(rhs, h_precision, t_window)
    rep = dict(rep)
    rep["name"] = name
    if rep["first_discrepancy"] is not None:
        m, n = rep["first_discrepancy"]
        rep["first_discrepancy"] = [str(m), n]
    rep["h_precision"] = str(h_precision)
    return rep


def _margin(h_precision) -> int:
    """Extra window used internally so that products are exact inside the
    reported window."""
    return 4 + int(math.isqrt(int(8 * _q(h_precision)) + 1))


def _check_periodicity(N, W):
    out = []
    Wi = W + _margin(N)
    for n in (1, 2, 4):
        for k in range(n):
            f = theta_series(n, None, Wi, k)
            lhs = f.substitute(1, 1, 1)
            rhs = f.shift_t(-n) * NovikovScalar.monomial(1, Fraction(-n, 2))
            out.append(_compare(f"theta_{n},{k}(h t)", lhs, rhs, N, W))
    return out


def _check_fractional(N, W):
    out = []
    Wi = W + _margin(N)
    for n in (1, 2, 4):
        for k in range(n):
            lhs = theta_series(n, None, Wi, k).substitute(1, Fraction(1, n), 1)
            rhs = theta_series(n, None, Wi, k + 1).shift_t(-1) * NovikovScalar.monomial(1, Fraction(-1, 2 * n))
            out.append(_compare(f"theta_{n},{k}(h^(1/{n}) t)", lhs, rhs, N, W))
    return out


def _check_symmetry(N, W):
    out = []
    for n in (1, 2, 4):
        for k in range(n):
            lhs = theta_series(n, None, W, k).substitute(1, 0, -1)
            rhs = theta_series(n, None, W, (n - k) % n)
            out.append(_compare(f"theta_{n},{k}(1/t)", lhs, rhs, N, W))
    return out


ADDITION_GRID = (Fraction(1, 3), Fraction(1, 5), Fraction(2, 7))


def _check_addition(N, W, grid=ADDITION_GRID):
    out = []
    Wi = W + _margin(N)
    work = N + 2
    t21 = theta_series(2, None, Wi, 1)
    t22 = theta_series(2, None, Wi, 0)
    jac = _jacobi(Wi)
    for m in grid:
        u = NovikovScalar.monomial(1, m)
        lhs = t21 * theta_eval(2, u, work, 1) + t22 * theta_eval(2, u, work, 0)
        rhs = jac.substitute(1, m, 1) * jac.substitute(1, -m, 1)
        out.append(_compare(f"addition at u = h^({m})", lhs, rhs, N, W))
    out.append(_addition_symbolic(N, W))
    return out


def _addition_symbolic(N, W) -> dict:
    """Both u and t symbolic: compare coefficients of u^j t^n for |j|, |n| <= W."""
    N = _q(N)

    def coeffs(n, k):
        return {i: Fraction(i * i, 2 * n) for i in range(-2 * W - 2, 2 * W + 3) if i % n == k}

    lhs: dict = {}
    for k in (0, 1):
        c = coeffs(2, k)
        for j, ej in c.items():
            for n, en in c.items():
                if abs(j) <= W and abs(n) <= W and ej + en < N:
                    key = (ej + en, j, n)
                    lhs[key] = lhs.get(key, 0) + 1
    rhs: dict = {}
    c = coeffs(1, 0)
    for a, ea in c.items():
        for b, eb in c.items():
            j, n = a - b, a + b
            if abs(j) <= W and abs(n) <= W and ea + eb < N:
                key = (ea + eb, j, n)
                rhs[key] = rhs.get(key, 0) + 1
    diff = {k: lhs.get(k, 0) - rhs.get(k, 0) for k in set(lhs) | set(rhs)}
    bad = sorted(k for k, v in diff.items() if v)
    return {"name": "addition, u and t symbolic", "equal": not bad, "certified": True,
            "first_discrepancy": None if not bad else [str(bad[0][0]), bad[0][1], bad[0][2]],
            "t_window": W, "h_precision": str(N)}


def _check_specializations(N, W):
    out = []
    Wi = W + _margin(N)
    work = N + 2
    t21 = theta_series(2, None, Wi, 1)
    t22 = theta_series(2, None, Wi, 0)
    jac = _jacobi(Wi)
    half = NovikovScalar.monomial(1, Fraction(1, 2))
    cases = [
        (half, jac.substitute(-1, 0, 1) ** 2 * NovikovScalar.monomial(-1, Fraction(-1, 4)), "u = h^(1/2)"),
        (-half, jac ** 2 * NovikovScalar.monomial(1, Fraction(-1, 4)), "u = -h^(1/2)"),
        (NovikovScalar.constant(1),
         jac.substitute(-1, Fraction(1, 2), 1).__pow__(2).shift_t(1) * NovikovScalar.monomial(1, Fraction(1, 4)),
         "u = 1"),
        (NovikovScalar.constant(-1),
         jac.substitute(1, Fraction(1, 2), 1).__pow__(2).shift_t(1) * NovikovScalar.monomial(1, Fraction(1, 4)),
         "u = -1"),
    ]
    for u, rhs, label in cases:
        lhs = t21 * theta_eval(2, u, work, 0) - t22 * theta_eval(2, u, work, 1)
        out.append(_compare(f"specialization {label}", lhs, rhs, N, W))
    return out


def _duplication_constant(work) -> NovikovScalar:
    half = NovikovScalar.monomial(1, Fraction(1, 2))
    return (theta_eval(1, 1, work, 0) * theta_eval(1, -1, work, 0)
            * theta_eval(1, half, work, 0) * Fraction(1, 2))


def _check_duplication(N, W):
    Wi = W + _margin(N)
    work = N + 2
    jac = _jacobi(Wi)
    lhs = (jac * jac.substitute(-1, 0, 1)) * (jac.substitute(1, Fraction(1, 2), 1)
                                               * jac.substitute(-1, Fraction(1, 2), 1))
    const = _duplication_constant(work)
    mid = jac.substitute(-1, Fraction(1, 2), 2) * const
    t41 = theta_series(4, None, Wi, 1)
    t43 = theta_series(4, None, Wi, 3)
    right = (t41 - t43).shift_t(-1) * (const * NovikovScalar.monomial(1, Fraction(-1, 8)))
    return [_compare("duplication, first equality", lhs, mid, N, W),
            _compare("duplication, second equality", mid, right, N, W)]


def _check_derivative(N, W):
    Wi = W + _margin(N)
    work = N + 2
    t21 = theta_series(2, None, Wi, 1)
    t22 = theta_series(2, None, Wi, 0)
    lhs = (t22.derivative() * t21 - t21.derivative() * t22).shift_t(1)
    d43 = theta_prime_at_one(4, work, 3)
    d41 = theta_prime_at_one(4, work, 1)
    t41 = theta_series(4, None, Wi, 1)
    t43 = theta_series(4, None, Wi, 3)
    mid = t41 * d43 + t43 * d41
    right = (t41 - t43) * d43
    return [_compare("derivative, first equality", lhs, mid, N, W),
            _compare("derivative, second equality", mid, right, N, W)]


_CHECKS: dict[str, Callable] = {
    "periodicity": _check_periodicity,
    "fractional": _check_fractional,
    "symmetry": _check_symmetry,
    "addition": _check_addition,
    "specializations": _check_specializations,
    "duplication": _check_duplication,
    "derivative": _check_derivative,
}


def theta_identity_check(which: str, h_precision=10, t_window: int = 14) -> dict:
    """Expand both sides of the named identity and compare termwise.

    Returns ``{"identity", "pass", "checks": [...]}`` where each check carries
    ``equal``, ``certified`` and the first discrepancy (m, n) if any.  A check
    that is equal but not certified means the window was too small."""
    if which not in _CHECKS:
        raise ValueError(f"unknown identity {which!r}; choose from {', '.join(IDENTITIES)}")
    N = _q(h_precision)
    checks = _CHECKS[which](N, int(t_window))
    for c in checks:
        if c["equal"] and not c["certified"]:
            raise WindowTooSmall(f"{c['name']}: window cannot certify precision {N}")
    return {"identity": which, "pass": all(c["equal"] for c in checks), "checks": checks}


# ---------------------------------------------------------------------------
# binary quartics over the Novikov field


class BinaryForm:
    """Homogeneous polynomial in (v1, v2); ``coeffs[a]`` multiplies v1^a v2^(d-a)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = tuple(NovikovScalar.coerce(c) for c in coeffs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "BinaryForm") -> "BinaryForm":
        if not isinstance(other, BinaryForm):
            return BinaryForm([c * other for c in self.coeffs])
        out = [NovikovScalar()] * (self.degree + other.degree + 1)
        for a, x in enumerate(self.coeffs):
            for b, y in enumerate(other.coeffs):
                out[a + b] = out[a + b] + x * y
        return BinaryForm(out)

    __rmul__ = __mul__

    def __sub__(self, other: "BinaryForm") -> "BinaryForm":
        return BinaryForm([x - y for x, y in zip(self.coeffs, other.coeffs)])

    def __call__(self, v1, v2) -> NovikovScalar:
        v1, v2 = NovikovScalar.coerce(v1), NovikovScalar.coerce(v2)
        d = self.degree
        total = NovikovScalar()
        for a, c in enumerate(self.coeffs):
            if c.terms or c.precision is not None:
                total = total + c * (v1 ** a) * (v2 ** (d - a))
        return total

    def swap_negate(self) -> "BinaryForm":
        """p(-v2, -v1)."""
        d = self.degree
        return BinaryForm([self.coeffs[d - a] * (-1) ** d for a in range(d + 1)])

    def negate_first(self) -> "BinaryForm":
        """p(-v1, v2)."""
        return BinaryForm([c * (-1) ** a for a, c in enumerate(self.coeffs)])

    def rescale(self, k) -> "BinaryForm":
        return BinaryForm([c.rescale(k) for c in self.coeffs])

    def truncate(self, precision) -> "BinaryForm":
        return BinaryForm([c.truncate(precision) for c in self.coeffs])

    def d_v2(self) -> "BinaryForm":
        d = self.degree
        return BinaryForm([self.coeffs[a] * (d - a) for a in range(d)])

    def d_v1(self) -> "BinaryForm":
        return BinaryForm([self.coeffs[a + 1] * (a + 1) for a in range(self.degree)])

    def __eq__(self, other):
        return isinstance(other, BinaryForm) and self.coeffs == other.coeffs

    __hash__ = None

    def to_json(self) -> dict:
        d = self.degree
        return {f"v1^{a} v2^{d - a}": c.to_text() for a, c in enumerate(self.coeffs)}


@dataclass
class UnitTorusPolynomial:
    form: BinaryForm
    c: NovikovScalar
    factored: BinaryForm

    @property
    def coeffs(self):
        return self.form.coeffs

    def __call__(self, v1, v2):
        return self.form(v1, v2)


def _linear(a: NovikovScalar, b: NovikovScalar) -> BinaryForm:
    # b v2 - a v1
    return BinaryForm([-a, b])


def _unit_torus_at(work) -> UnitTorusPolynomial:
    half = NovikovScalar.monomial(1, Fraction(1, 2))
    pts = [half, -half, NovikovScalar.constant(1), NovikovScalar.constant(-1)]
    d43 = theta_prime_at_one(4, work, 3)
    denom = theta_eval(1, 1, work, 0) * theta_eval(1, -1, work, 0) * theta_eval(1, half, work, 0)
    c = NovikovScalar.monomial(-1, Fraction(1, 4)) * (denom * denom).inverse() * d43 * d43
    factored = BinaryForm([c])
    for u in pts:
        factored = factored * _linear(theta_eval(2, u, work, 1), theta_eval(2, u, work, 0))
    a1, b1 = theta_eval(2, half, work, 1), theta_eval(2, half, work, 0)
    a2, b2 = theta_eval(2, 1, work, 1), theta_eval(2, 1, work, 0)
    q1 = BinaryForm([-(a1 * a1), 0, b1 * b1])
    q2 = BinaryForm([-(a2 * a2), 0, b2 * b2])
    form = BinaryForm([c]) * q1 * q2
    return UnitTorusPolynomial(form, c, factored)


def _precision_of(p: UnitTorusPolynomial):
    return min(INF, *(x.valuation() if x.precision is None else x.precision for x in p.form.coeffs),
               *(x.precision if x.precision is not None else INF for x in p.factored.coeffs))


def unit_torus_polynomial(precision) -> UnitTorusPolynomial:
    """The unit torus quartic, known to ``h^precision`` in every coefficient.

    Built from the product of the four linear factors and separately from
    the product of two quadratics; the two must agree."""
    N = _q(precision)
    work = N + 2
    while True:
        p = _unit_torus_at(work)
        if _precision_of(p) >= N:
            break
        work += 2
    form = p.form.truncate(N)
    factored = p.factored.truncate(N)
    if form != factored:
        raise AssertionError("factored and quadratic forms of the unit torus quartic disagree")
    return UnitTorusPolynomial(form, p.c.truncate(N), factored)


# ---------------------------------------------------------------------------
# theta parametrization of the affine curve s1^2 = p(1, s2)


@dataclass
class CurvePoint:
    s1: NovikovScalar
    s2: NovikovScalar
    u: NovikovScalar | None = None

    def residual(self, p: UnitTorusPolynomial) -> NovikovScalar:
        return self.s1 * self.s1 - p(1, self.s2)


def theta_parametrization(u, precision) -> CurvePoint:
    """Point (s1, s2) of the unit torus curve attached to the unit u."""
    u = NovikovScalar.coerce(u)
    N = _q(precision)
    work = N + 4
    for _ in range(8):
        pt = _param_at(u, work)
        if min(_p(pt.s1), _p(pt.s2)) >= N:
            return CurvePoint(pt.s1.truncate(N), pt.s2.truncate(N), u)
        work += 2
    raise WindowTooSmall("theta parametrization did not reach the requested precision")


def _p(x: NovikovScalar):
    return INF if x.precision is None else x.precision


def _param_at(u: NovikovScalar, work) -> CurvePoint:
    t22 = theta_eval(2, u, work, 0)
    t21 = theta_eval(2, u, work, 1)
    if t22.is_zero():
        raise ExcludedPoint("theta_2,2 vanishes at u (point at infinity)")
    diff = theta_eval(4, u, work, 1) - theta_eval(4, u, work, 3)
    if diff.is_zero():
        raise ExcludedPoint("theta_4,1 - theta_4,3 vanishes at u (branch point)")
    inv22 = t22.inverse()
    s2 = t21 * inv22
    s1 = inv22 * inv22 * theta_prime_at_one(4, work, 3) * diff * Fraction(1, 2)
    return CurvePoint(s1, s2, u)


def parametrization_derivative_form(u, precision) -> NovikovScalar:
    """s1 from the derivative expression (1/2) u theta22^-2 (theta22' theta21 - theta21' theta22)."""
    u = NovikovScalar.coerce(u)
    N = _q(precision) + 4
    t22 = theta_eval(2, u, N, 0)
    t21 = theta_eval(2, u, N, 1)
    d22 = theta_eval(2, u, N, 0, derivative=1)
    d21 = theta_eval(2, u, N, 1, derivative=1)
    inv22 = t22.inverse()
    return u * inv22 * inv22 * (d22 * t21 - d21 * t22) * Fraction(1, 2)


def curve_checks(u, precision) -> dict:
    """Curve equation, both involutions and the derivative form of s1 at u."""
    N = _q(precision)
    u = NovikovScalar.coerce(u)
    p = unit_torus_polynomial(N + 2)
    pt = theta_parametrization(u, N + 2)
    res = pt.residual(p)
    ok_curve = not res.truncate(N).terms and _p(res) >= N

    shifted = theta_parametrization(u * NovikovScalar.monomial(1, Fraction(1, 2)), N + 2)
    inv2 = pt.s2.inverse()
    exp1 = (-pt.s1 * inv2 * inv2, inv2)
    ok_half = (shifted.s1 - exp1[0]).truncate(N).is_zero() and (shifted.s2 - exp1[1]).truncate(N).is_zero()

    flipped = theta_parametrization(u.inverse(precision=None if u.exact and len(u.terms) == 1 else N + 4), N + 2)
    ok_inv = (flipped.s1 + pt.s1).truncate(N).is_zero() and (flipped.s2 - pt.s2).truncate(N).is_zero()

    alt = parametrization_derivative_form(u, N + 2)
    ok_alt = (alt - pt.s1).truncate(N).is_zero()
    return {
        "u": u.to_text(),
        "curve_equation": ok_curve,
        "half_period_involution": ok_half,
        "inversion_involution": ok_inv,
        "derivative_form_of_s1": ok_alt,
        "s1": pt.s1.truncate(N).to_text(),
        "s2": pt.s2.truncate(N).to_text(),
        "pass": ok_curve and ok_half and ok_inv and ok_alt,
    }


def branch_directions(precision) -> list[tuple[NovikovScalar, NovikovScalar]]:
    """The four directions (theta_2,2(x), theta_2,1(x)), x in {+-h^(1/2), +-1}."""
    half = NovikovScalar.monomial(1, Fraction(1, 2))
    out = []
    for x in (half, -half, NovikovScalar.constant(1), NovikovScalar.constant(-1)):
        out.append((theta_eval(2, x, precision, 0), theta_eval(2, x, precision, 1)))
    return out


def theta22_zero_check(precision) -> bool:
    """theta_2,2 vanishes at +-i h^(1/2) (Gaussian coefficients)."""
    i = GAUSSIAN.gen()
    ok = True
    for sign in (1, -1):
        u = NovikovScalar.monomial(i * sign, Fraction(1, 2))
        ok &= theta_eval(2, u, precision, 0).is_zero()
    return ok


# ---------------------------------------------------------------------------
# one-form identity


def oneform_check(p: UnitTorusPolynomial | BinaryForm | None) -> bool:
    """(s1 * theta) ^ d(s1^2 - p(1, s2)) == s1 ds1 ^ ds2 with theta = -1/2 s1^-1 ds2.

    Polynomials in (s1, s2) are dicts {(i, j): coefficient}; a one-form is a
    pair (coefficient of ds1, coefficient of ds2); the wedge of two one-forms
    is the ds1 ^ ds2 coefficient a1 b2 - a2 b1."""
    form = p.form if isinstance(p, UnitTorusPolynomial) else p
    coeffs = [] if form is None else list(form.coeffs)
    deg = len(coeffs) - 1
    # p(1, s2) as a polynomial in s2: coefficient of s2^(deg - a) is coeffs[a]
    p1 = {(0, deg - a): c for a, c in enumerate(coeffs) if c.terms}
    relation = {(2, 0): NovikovScalar.constant(1)}
    for key, c in p1.items():
        relation[key] = relation.get(key, NovikovScalar()) - c
    d_rel = (_pd(relation, 0), _pd(relation, 1))
    s1_theta = ({}, {(0, 0): NovikovScalar.constant(Fraction(-1, 2))})
    wedge = _padd(_pmul(s1_theta[0], d_rel[1]), _pneg(_pmul(s1_theta[1], d_rel[0])))
    target = {(1, 0): NovikovScalar.constant(1)}
    diff = _padd(wedge, _pneg(target))
    return all(c.is_zero() for c in diff.values())


def _pd(poly: dict, var: int) -> dict:
    out = {}
    for (i, j), c in poly.items():
        e = (i, j)[var]
        if e:
            key = (i - 1, j) if var == 0 else (i, j - 1)
            out[key] = out.get(key, NovikovScalar()) + c * e
    return out


def _pmul(a: dict, b: dict) -> dict:
    out = {}
    for (i, j), x in a.items():
        for (k, l), y in b.items():
            key = (i + k, j + l)
            out[key] = out.get(key, NovikovScalar()) + x * y
    return out


def _padd(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, NovikovScalar()) + v
    return out


def _pneg(a: dict) -> dict:
    return {k: -v for k, v in a.items()}


__all__ = [
    "ThetaSpec", "theta_series", "theta_eval", "theta_identity_check", "IDENTITIES",
    "BinaryForm", "UnitTorusPolynomial", "unit_torus_polynomial", "CurvePoint",
    "theta_parametrization", "curve_checks", "oneform_check", "branch_directions",
    "theta22_zero_check", "theta_prime_at_one", "CyclotomicElement",
]
