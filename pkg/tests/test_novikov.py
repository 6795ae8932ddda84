from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flux.errors import ZeroDivisor
from flux.novikov import (LaurentNovikov, NovikovScalar, equivariant_hom_basis, equivariant_hom_dim,
                          exponent_rescale, scalar_invert, translate)

PREC = Fraction(6)

exponents = st.fractions(min_value=-2, max_value=5, max_denominator=6)
coeffs = st.integers(-5, 5).filter(bool)
scalars = st.lists(st.tuples(exponents, coeffs), max_size=5).map(
    lambda ts: NovikovScalar(ts, PREC))


def same(a, b, prec=PREC - 4):
    # products of series starting at h^-2 only know their terms below h^(PREC - 4)
    return (a - b).truncate(prec).is_zero()


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert same(a + b, b + a)
    assert same(a * b, b * a)
    assert same((a * b) * c, a * (b * c), PREC - 6)
    assert same(a * (b + c), a * b + a * c)


@given(scalars)
def test_inverse_is_two_sided(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisor):
            scalar_invert(a)
        return
    inv = scalar_invert(a)
    lead = a.valuation()
    one = NovikovScalar.constant(1)
    prec = PREC - 2 * max(lead, 0) - 4
    assert same(a * inv, one, prec)
    assert same(inv * a, one, prec)


def test_truncation_is_open():
    x = NovikovScalar([(0, 1), (2, 3)], 2)
    assert x.terms == ((0, 1),)
    assert x.truncate(0).is_zero()


@given(scalars)
def test_text_and_json_round_trip(a):
    assert NovikovScalar.from_text(a.to_text()) == a
    assert NovikovScalar.from_json(a.to_json()) == a


def test_laurent_text_round_trip():
    f = LaurentNovikov.from_terms({(Fraction(1, 2), -1): 3, (0, 2): -1}, h_precision=4, t_window=3)
    assert LaurentNovikov.from_text(f.to_text(), t_window=3) == f
    assert LaurentNovikov.from_json(f.to_json()) == f


def test_translate_examples():
    one = LaurentNovikov.scalar(1)
    assert translate(one, 0) == one
    t = LaurentNovikov.monomial(1, 0, 1)
    assert translate(t, 0) == LaurentNovikov.monomial(1, 1, 1)


@given(st.integers(-2, 2), st.integers(-2, 2), st.integers(-2, 2), exponents)
def test_translate_composition(d, e, n, m):
    f = LaurentNovikov.from_terms({(m, n): 1}, t_window=6)
    g = translate(translate(f, d), e)
    # (m, n) -> (m + n, n + d) -> (m + 2n + d, n + d + e)
    assert g == LaurentNovikov.from_terms({(m + 2 * n + d, n + d + e): 1}, t_window=6)


def test_exponent_rescale():
    x = NovikovScalar.monomial(1, Fraction(1, 2))
    assert exponent_rescale(x, 1) == x
    assert exponent_rescale(x, 2) == NovikovScalar.monomial(1, 1)


@pytest.mark.parametrize("d0,d1,expected", [((0), 0, (1, 1)), (0, 2, (2, 0)), (2, 0, (0, 2)),
                                            (2, 2, (1, 1)), (1, 1, (1, 1))])
def test_equivariant_dims(d0, d1, expected):
    assert equivariant_hom_dim(d0, d1) == expected


def test_equivariant_basis_is_invariant():
    basis = equivariant_hom_basis(0, 2, h_precision=8, t_window=12)
    assert len(basis) == 2
    for f in basis:
        assert f.translate(2).agree(f, 6, 8)["equal"]
