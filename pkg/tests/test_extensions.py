from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flux.extensions import (clifford_confluence, clifford_idempotents, cyclotomic_sqrt, exterior_base,
                             hessian_matches_clifford, interval_base, les_h0_dimension, mt_checks,
                             mt_h0_dimension, point_base, superpotential_critical,
                             toy_quantum_checks)
from flux.fields import FieldTooSmall
from flux.novikov import equivariant_hom_dim

BASES = {"point": point_base, "exterior": lambda: exterior_base(F(2)), "interval": interval_base}


@pytest.mark.parametrize("name", sorted(BASES))
@given(seed=st.integers(0, 10 ** 6))
def test_mapping_torus_relations(name, seed):
    r = mt_checks(BASES[name](), seed=seed, trials=3)
    assert all(r.values()), r


@pytest.mark.parametrize("name", sorted(BASES))
def test_listed_signs_break_relations(name):
    r = mt_checks(BASES[name](), seed=1, trials=10, printed=True)
    assert r["d_squared_zero"]
    assert not r["ainf_leibniz"] and not r["unit"]


@pytest.mark.parametrize("d0,d1,dim", [(0, 0, 1), (0, 1, 1), (0, 2, 2), (0, 3, 3), (0, -2, 0)])
def test_mapping_torus_h0(d0, d1, dim):
    assert mt_h0_dimension(d0, d1) == dim


def test_h0_matches_equivariant_count():
    for d1 in (0, 2):
        assert mt_h0_dimension(0, d1) == equivariant_hom_dim(0, d1)[0]


@pytest.mark.parametrize("name", sorted(BASES))
def test_les(name):
    assert les_h0_dimension(BASES[name]()) == 1


def test_cyclotomic_sqrt():
    r = cyclotomic_sqrt(-3, 12)
    assert r * r == -3
    with pytest.raises(FieldTooSmall):
        cyclotomic_sqrt(5, 12)


@pytest.mark.parametrize("r,count", [(2, 1), (3, 2), (4, 3)])
def test_superpotential(r, count):
    res = superpotential_critical(r)
    assert res["count"] == count
    assert all(p["gradient_zero"] and p["nondegenerate"] for p in res["points"])
    assert not res["generic_gradient_zero"]


def test_hessian_matches_clifford():
    assert hessian_matches_clifford(4)["pass"]


def test_clifford_idempotents():
    r = clifford_idempotents(4)
    assert r["count"] == 4
    assert r["idempotent"] and r["orthogonal"] and r["sum_is_one"]
    assert r["modified_squares"] and r["modified_anticommute"]


def test_clifford_confluence():
    assert clifford_confluence(4, seed=3, trials=20)


@pytest.mark.parametrize("r", [2, 3, 4])
def test_toy_quantum_ring(r):
    assert toy_quantum_checks(r)["pass"]
