from fractions import Fraction

import pytest

from flux.novikov import NovikovScalar
from flux.theta import (IDENTITIES, branch_directions, curve_checks, oneform_check, theta22_zero_check,
                        theta_eval, theta_identity_check, unit_torus_polynomial)


@pytest.mark.parametrize("name", IDENTITIES)
def test_identities_low_precision(name):
    assert theta_identity_check(name, 4, 8)["pass"]


def test_unknown_identity():
    with pytest.raises(ValueError):
        theta_identity_check("jacobi", 2, 4)


@pytest.mark.parametrize("prec", [Fraction(1, 2), 2, 4])
def test_precision_monotone(prec):
    assert theta_identity_check("periodicity", prec, 8)["pass"]


def test_unit_torus_quartic_leading_terms():
    p = unit_torus_polynomial(2)
    c = [x.truncate(2) for x in p.coeffs]
    half = NovikovScalar([(Fraction(1, 2), -1), (Fraction(3, 2), -4)], 2)
    assert c[0] == half and c[4] == half
    assert c[1].is_zero() and c[3].is_zero()
    assert c[2] == NovikovScalar([(0, Fraction(1, 4)), (1, 6)], 2)


def test_unit_torus_quartic_vanishes_on_branch_directions():
    p = unit_torus_polynomial(5)
    for v in branch_directions(5):
        assert p(*v).truncate(4).is_zero()


def test_theta22_zeros():
    assert theta22_zero_check(6)


def test_curve_point():
    r = curve_checks(NovikovScalar.monomial(1, Fraction(1, 3)), 6)
    assert r["pass"]


def test_oneform():
    assert oneform_check(unit_torus_polynomial(6))


def test_theta_eval_constant_term():
    # theta_{1,0}(1) = sum h^(i^2/2): 1 + 2 h^(1/2) + 2 h^2 + ...
    v = theta_eval(1, NovikovScalar.constant(1), 3, 0)
    assert v == NovikovScalar([(0, 1), (Fraction(1, 2), 2), (2, 2)], 3)
