from fractions import Fraction as F

from flux.family import (CurveRing, constant_cone_check, deformation_class_check, exterior_d,
                         specialization_check)
from flux.novikov import NovikovScalar


def ring():
    return CurveRing([1, 2, 3, 5, 7])


def test_exterior_derivative_frame():
    R = ring()
    assert exterior_d(R.s2).coefficient == R.s1 * -2
    assert exterior_d(R.s1).coefficient == R.element(R.dP) * -1
    # the curve equation is killed by d
    assert not exterior_d(R.s1 * R.s1 - R.element(R.P)).coefficient


def test_leibniz_rule():
    R = ring()
    f = R.s1_inverse * R.s2 + R.const(3)
    g = R.s2 * R.s2 + R.s1
    lhs = exterior_d(f * g).coefficient
    rhs = exterior_d(f).coefficient * g + f * exterior_d(g).coefficient
    assert lhs == rhs


def test_inverse_of_s1():
    R = ring()
    assert R.s1 * R.s1_inverse == R.one


def test_deformation_class():
    r = deformation_class_check(6)
    assert r["pass"]
    assert r["unprojected_differ"]


def test_constant_cone_has_no_deformation():
    assert constant_cone_check(6)


def test_specialization():
    assert specialization_check(NovikovScalar.monomial(1, F(1, 3)), 6)
