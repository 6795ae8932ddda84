from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from flux.ainf_tw import (_diff, _lin, build_Qp, build_qp, cone, cone_cohomology, cone_endo_ring,
                          cone_product_report, gamma_report, lift_idempotent, perturbed,
                          rescale_check, splits, vertex_object, yoneda_summand_differential,
                          ainf_residual)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@pytest.fixture(scope="module")
def symbolic():
    return build_qp(symbolic=True)


def test_formal_structure_has_no_higher_products():
    assert build_qp([0] * 5).ops.arities() == [2]


def test_symbolic_relations_through_arity_7(symbolic):
    for d in range(3, 8):
        assert not ainf_residual(symbolic, d)


def test_odd_products_vanish(symbolic):
    assert set(symbolic.ops.arities()) <= {2, 4, 6}


def test_perturbation_is_detected(symbolic):
    r = ainf_residual(perturbed(symbolic), 5)
    assert r and r.worst is not None


def test_units_are_strict():
    s = build_qp([1, 2, 3, 5, 7])
    assert not ainf_residual(s, 4, with_units=True)


@given(st.lists(rationals, min_size=5, max_size=5), rationals.filter(bool))
def test_rescaling(p, gamma):
    assert rescale_check(p, gamma)


def test_build_Qp_residuals():
    _, res = build_Qp([1, 0, -2, 0, 1], 6)
    assert not any(res.values())


@given(st.tuples(rationals, rationals).filter(lambda v: v[0] or v[1]))
def test_cone_products_generic(v):
    C = cone(v, [1, 2, 3, 5, 7])
    rep = cone_product_report(C)
    assert rep["tt_is_pv_e"] and rep["uu_zero"]
    assert rep["ut_class_is_minus_half_q"] and rep["tu_class_is_plus_half_q"]


def test_endo_ring_and_gamma():
    C = cone((F(3), F(2)), [1, 2, 3, 5, 7])
    assert cone_endo_ring(C).t_squared_is_pv
    assert all(gamma_report(C).values())
    H = cone_cohomology(C)
    assert [H.dimension(d) for d in (-1, 0, 1, 2)] == [0, 2, 2, 0]


def test_listed_differential_matches_but_product_does_not():
    a = cone((F(3), F(2)), [1, 2, 3, 5, 7]).audit()
    assert a["mu1_equal"] and a["maurer_cartan"]
    assert not a["mu2_equal"]


def test_split_and_nonsplit():
    C = cone((F(1), F(0)), [0, 0, 0, 0, 1])   # p(v) = 1
    s = splits(C)
    assert s and s.idempotent_exact and s.orthogonal
    assert not splits(cone((F(1), F(0)), [1, 0, 0, 0, 0]))   # p(v) = 0
    assert not cone_endo_ring(cone((F(1), F(0)), [1, 0, 0, 0, 0])).t_squared


def test_idempotent_lift_rational():
    C = cone((F(1), F(0)), [0, 0, 0, 0, 1])
    P = lift_idempotent(C, splits(C).idempotent, 6)
    assert P.valid
    for X in (None, vertex_object(1), vertex_object(2)):
        assert all(yoneda_summand_differential(C, P, 4, X).square_zero().values())
    # the trivial idempotents lift too
    assert lift_idempotent(C, C.element_e(), 6).valid
    assert lift_idempotent(C, {}, 6).valid


def test_complementary_idempotent():
    C = cone((F(1), F(0)), [0, 0, 0, 0, 1])
    pi = splits(C).idempotent
    comp = _lin((C.element_e(), 1), (pi, -1))
    assert not _diff(C.mu2(comp, comp), comp)
