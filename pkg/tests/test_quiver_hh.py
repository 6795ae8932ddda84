import pytest

from flux.errors import TruncationUnstable
from flux.quiver_hh import (KoszulHH, d3_rank, double_dual_matches, exterior_algebra, formal_structure,
                            free_algebra, hh_direct, hh_koszul, hilbert_numerical_check,
                            koszul_acyclicity, non_koszul_example, quadratic_dual, quiver_q)
from flux.theta import unit_torus_polynomial


@pytest.fixture(scope="module")
def Q():
    return quiver_q()


def test_graded_dimensions(Q):
    assert [Q.dim(n) for n in range(4)] == [2, 4, 2, 0]
    assert Q.total_dimension(6) == 8


def test_dual_of_free_algebra():
    D = quadratic_dual(free_algebra(1)).algebra
    assert [D.dim(n) for n in range(4)] == [1, 1, 0, 0]
    assert D.arrows[0].degree == 0


def test_dual_of_exterior_is_polynomial():
    D = quadratic_dual(exterior_algebra(2)).algebra
    assert [D.dim(n) for n in range(5)] == [1, 2, 3, 4, 5]


@pytest.mark.parametrize("make", [quiver_q, lambda: exterior_algebra(3), non_koszul_example])
def test_double_dual(make):
    assert double_dual_matches(make())


def test_q_is_koszul(Q):
    assert koszul_acyclicity(Q, 6).koszul
    assert all(hilbert_numerical_check(Q, 8).values())


def test_negative_control_not_koszul():
    r = koszul_acyclicity(non_koszul_example(), 5, printed=False)
    assert not r.koszul
    assert r.exact[4] is False


def test_koszul_hh_differential_squares_to_zero(Q):
    K = KoszulHH(Q)
    for total in range(-2, 4):
        for i in range(6):
            assert K.square_is_zero(i, total)
            assert K.euler_consistent(i, total)


@pytest.mark.parametrize("i,j,dim", [(0, 1, 2), (1, 0, 4), (2, 0, 3), (4, -2, 5), (3, -1, 0),
                                     (0, 0, 1), (2, -1, 0)])
def test_hh_values(Q, i, j, dim):
    assert hh_koszul(Q, i, j) == dim


def test_hh_direct_agrees(Q):
    ops = formal_structure(Q)
    for i in range(5):
        for j in range(-3, 2):
            assert hh_direct(ops, i + j, i=i) == hh_koszul(Q, i, j)


def test_truncated_total_degree(Q):
    ops = formal_structure(Q)
    assert hh_direct(ops, 1, D=2) == 6
    with pytest.raises(TruncationUnstable):
        hh_direct(ops, 2, D=3)


def test_d3_on_unit_torus_quartic():
    # no linear vector field kills p, so HH^1 of Q_p is two-dimensional
    assert d3_rank(unit_torus_polynomial(4)) == (4, 2)
    # v1^4 is killed by v2 d/dv1, v2 d/dv2
    assert d3_rank([0, 0, 0, 0, 1])[1] > 2
