"""The double cover s1^2 = p(1, s2) as a parameter space for cones.

Functions on the curve are stored as (a(s2) + s1 b(s2)) / P(s2)^k with
P(s2) = p(1, s2); the one-form theta = -(1/2) s1^-1 ds2 trivialises the
cotangent bundle, so one-forms are just their theta-coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .ainf_tw import (ConeObject, _class_eq, _diff, _lin, _scaled, build_qp, gamma_tw,
                      standard_g)
from .errors import ObstructionNonexact
from .novikov import NovikovScalar
from .theta import theta_parametrization, unit_torus_polynomial


# ---------------------------------------------------------------------------
# polynomials in s2 (coefficient lists, lowest degree first)


def _trim(a: list) -> tuple:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return tuple(a)


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pscale(a, c):
    return _trim([x * c for x in a])


def _pmul(a, b):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return _trim(out)


def _pderiv(a):
    return _trim([a[i] * i for i in range(1, len(a))])


def _ppow(a, k):
    out = (1,)
    for _ in range(k):
        out = _pmul(out, a)
    return out


def _peval(a, x):
    total = 0
    for c in reversed(a):
        total = total * x + c
    return total


class CurveRing:
    """The ring of functions on the affine curve s1^2 = p(1, s2), s1 invertible."""

    def __init__(self, p):
        coeffs = p.coeffs if hasattr(p, "coeffs") else tuple(p)
        self.p = tuple(coeffs)
        # p(1, s2) = sum_a c_a s2^(4 - a)
        d = len(coeffs) - 1
        P = [0] * (d + 1)
        for a, c in enumerate(coeffs):
            P[d - a] = c
        self.P = _trim(P)
        self.dP = _pderiv(self.P)

    def element(self, a=(), b=(), k: int = 0) -> "CurveRingElement":
        return CurveRingElement(self, _trim(a), _trim(b), k)

    def const(self, c) -> "CurveRingElement":
        return self.element((c,))

    @property
    def one(self):
        return self.const(1)

    @property
    def s1(self):
        return self.element((), (1,))

    @property
    def s2(self):
        return self.element((0, 1))

    @property
    def s1_inverse(self):
        return self.element((), (1,), 1)


class CurveRingElement:
    __slots__ = ("ring", "a", "b", "k")

    def __init__(self, ring: CurveRing, a: tuple, b: tuple, k: int):
        self.ring, self.a, self.b, self.k = ring, a, b, k

    def _coerce(self, other) -> "CurveRingElement":
        if isinstance(other, CurveRingElement):
            return other
        return self.ring.const(other)

    def _lift(self, k: int):
        """Same element written over P^k (k >= self.k)."""
        f = _ppow(self.ring.P, k - self.k)
        return _pmul(self.a, f), _pmul(self.b, f)

    def __add__(self, other):
        o = self._coerce(other)
        k = max(self.k, o.k)
        a1, b1 = self._lift(k)
        a2, b2 = o._lift(k)
        return CurveRingElement(self.ring, _padd(a1, a2), _padd(b1, b2), k)

    __radd__ = __add__

    def __neg__(self):
        return CurveRingElement(self.ring, _pscale(self.a, -1), _pscale(self.b, -1), self.k)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, CurveRingElement):
            return CurveRingElement(self.ring, _pscale(self.a, other), _pscale(self.b, other), self.k)
        P = self.ring.P
        a = _padd(_pmul(self.a, other.a), _pmul(P, _pmul(self.b, other.b)))
        b = _padd(_pmul(self.a, other.b), _pmul(self.b, other.a))
        return CurveRingElement(self.ring, a, b, self.k + other.k)

    def __rmul__(self, other):
        return self * other

    def __pow__(self, n: int):
        out = self.ring.one
        for _ in range(n):
            out = out * self
        return out

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        return not (self - self._coerce(other))

    __hash__ = None

    def d_s2(self) -> "CurveRingElement":
        """Partial derivative in s2, using d s1 / d s2 = P' / (2 s1) = P' s1 / (2 P)."""
        R = self.ring
        half = Fraction(1, 2)
        # numerator N = a + s1 b over P^k
        num = R.element(_pderiv(self.a), _pderiv(self.b), self.k)
        from_s1 = R.element((), _pscale(_pmul(R.dP, self.b), half), self.k + 1)
        from_den = R.element(_pscale(_pmul(R.dP, self.a), -self.k),
                             _pscale(_pmul(R.dP, self.b), -self.k), self.k + 1)
        return num + from_s1 + from_den

    def evaluate(self, s1, s2):
        P = _peval(self.ring.P, s2)
        val = _peval(self.a, s2) + s1 * _peval(self.b, s2)
        for _ in range(self.k):
            val = val * _inverse(P)
        return val

    def truncate(self, precision):
        t = lambda c: c.truncate(precision) if isinstance(c, NovikovScalar) else c
        return CurveRingElement(self.ring, _trim([t(c) for c in self.a]),
                                _trim([t(c) for c in self.b]), self.k)

    def __repr__(self):
        return f"({self.a} + s1*{self.b}) / P^{self.k}"


def _inverse(x):
    return x.inverse() if isinstance(x, NovikovScalar) else 1 / Fraction(x)


@dataclass
class OneFormElement:
    """coefficient * theta."""
    coefficient: CurveRingElement

    def __eq__(self, other):
        return isinstance(other, OneFormElement) and self.coefficient == other.coefficient


def exterior_d(f: CurveRingElement) -> OneFormElement:
    """df in the theta frame: ds2 = -2 s1 theta."""
    return OneFormElement(f.d_s2() * (f.ring.s1 * -2))


# ---------------------------------------------------------------------------
# the family cone


@dataclass
class FamilyCone:
    ring: CurveRing
    cone: ConeObject

    @property
    def u(self) -> dict:
        return self.cone.element_u((0, 1))

    @property
    def t(self) -> dict:
        return self.cone.element_t()

    @property
    def e(self) -> dict:
        return self.cone.element_e()

    def projection(self) -> dict:
        """(e + s1^-1 t) / 2."""
        half = Fraction(1, 2)
        return _lin((self.e, half), (self.t, self.ring.s1_inverse * half))


def family_cone(h_precision=6, p=None) -> FamilyCone:
    """Cone((1, s2): X_1 -> X_2) over the curve ring of the unit torus quartic."""
    if p is None:
        p = unit_torus_polynomial(h_precision)
    R = CurveRing(p)
    structure = build_qp(p)
    return FamilyCone(R, ConeObject(structure, (R.one, R.s2)))


def deformation_cocycle(F: FamilyCone, delta=None) -> dict:
    """def(nabla) = -d_{s2}(delta) ds2 for the trivial pre-connection, theta frame.

    ``delta`` defaults to the cone differential; entries with coefficient
    s2-independent contribute nothing."""
    delta = F.cone.X.delta if delta is None else delta
    out = {}
    for key, c in delta.items():
        c = c if isinstance(c, CurveRingElement) else F.ring.const(c)
        coeff = exterior_d(c).coefficient * -1
        if coeff:
            out[key] = coeff
    return F.cone.flip(out)


def _solve_class_difference(F: FamilyCone, z: dict):
    """Whether z is a coboundary over the curve ring.

    The degree-0 cochains are spanned by e1, e2, w3, w4; the pivots used are
    unit constants, so the division is exact."""
    C = F.cone
    gens = [C.mu1({k: F.ring.one}) for k in C.entries if C.degree(k) == 0]
    gens = [g for g in gens if g]
    basis = []  # (pivot, inverse of pivot coefficient, generator)
    for g in sorted(gens, key=lambda g: not any(_unit_const(v) is not None for v in g.values())):
        for pivot, inv, b in basis:
            if g.get(pivot):
                g = _lin((g, 1), (b, -g[pivot] * inv))
        if not g:
            continue
        pivot = next((k for k, v in g.items() if _unit_const(v) is not None), None)
        if pivot is None:
            raise ObstructionNonexact("coboundary generator without a unit pivot")
        basis.append((pivot, _unit_const(g[pivot]), g))
    rest = dict(z)
    for pivot, inv, g in basis:
        lam = rest.get(pivot, 0) * inv
        if lam:
            rest = _lin((rest, 1), (g, -lam))
    return not rest


def _unit_const(v):
    """1/v if v is a nonzero rational constant of the curve ring."""
    if isinstance(v, CurveRingElement):
        if v.k == 0 and not v.b and len(v.a) == 1:
            c = v.a[0]
            if isinstance(c, NovikovScalar):
                if len(c.terms) == 1 and c.terms[0][0] == 0:
                    return 1 / Fraction(c.terms[0][1])
                return None
            return 1 / Fraction(c)
        return None
    return 1 / Fraction(v) if v else None


def classes_equal(F: FamilyCone, a: dict, b: dict) -> bool:
    return _solve_class_difference(F, _diff(a, b))


def gamma_leading(F: FamilyCone) -> dict:
    """gamma^{tw,0} for gamma = -2 theta (x) g_2, as a theta-coefficient."""
    g0, g1 = standard_g(F.cone, 2)
    g0 = {v: {k: F.ring.const(c * -2) for k, c in img.items()} for v, img in g0.items()}
    return gamma_tw(g0, g1, F.cone)


def deformation_class_check(h_precision=6) -> dict:
    """Deformation cocycle versus gamma^{tw,0}, before and after projecting."""
    F = family_cone(h_precision)
    C = F.cone
    R = F.ring
    u, t, e = F.u, F.t, F.e
    deform = deformation_cocycle(F)
    expected_def = _scaled(u, R.s1 * 2)
    gamma = gamma_leading(F)
    ut = C.mu2(u, t)
    pi = F.projection()

    pi_sq = _diff(C.mu2(pi, pi), pi)
    t_sq = _diff(C.mu2(t, t), _scaled(e, R.s1 * R.s1))
    cocycle = not C.mu1(deform)

    left = classes_equal(F, C.mu2(pi, deform), C.mu2(pi, gamma))
    right = classes_equal(F, C.mu2(deform, pi), C.mu2(gamma, pi))
    raw = classes_equal(F, deform, gamma)
    return {
        "def_equals_2theta_s1u": not _diff(deform, expected_def),
        "def_is_cocycle": cocycle,
        "gamma_equals_2theta_mu2_ut": classes_equal(F, gamma, _scaled(ut, 2)),
        "t_squared_is_s1_squared": not t_sq,
        "projection_idempotent": not pi_sq,
        "projected_equal_left": left,
        "projected_equal_right": right,
        "unprojected_differ": not raw,
        "pass": (not _diff(deform, expected_def)) and cocycle and left and right and not raw
                and not pi_sq and not t_sq,
    }


def constant_cone_check(h_precision=6) -> bool:
    """A cone with s2-independent v has zero deformation cocycle."""
    F = family_cone(h_precision)
    R = F.ring
    delta = {key: R.const(1) for key in F.cone.X.delta}
    return not deformation_cocycle(F, delta)


def specialization_check(u, h_precision=6) -> bool:
    """Evaluating mu^2 products of the family cone at a curve point agrees
    with the cone over the Novikov field at v = (1, s2)."""
    F = family_cone(h_precision)
    pt = theta_parametrization(u, h_precision)
    structure = F.cone.structure
    C = ConeObject(structure, (NovikovScalar.constant(1), pt.s2))
    ok = True
    for y in F.cone.basis_elements():
        for x in F.cone.basis_elements():
            yy = {k: NovikovScalar.constant(1) for k in y}
            xx = {k: NovikovScalar.constant(1) for k in x}
            fam = {k: v.evaluate(pt.s1, pt.s2) for k, v in
                   F.cone.mu2({k: F.ring.one for k in y}, {k: F.ring.one for k in x}).items()}
            num = C.mu2(yy, xx)
            d = _diff(fam, num)
            if any(v.truncate(h_precision - 1).terms for v in d.values()):
                ok = False
    return ok


__all__ = ["CurveRing", "CurveRingElement", "OneFormElement", "exterior_d", "family_cone",
           "deformation_cocycle", "deformation_class_check", "constant_cone_check", "specialization_check",
           "classes_equal", "FamilyCone"]
