import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from spline_QI.bspline import (BasisId, BasisKind, SplineExpansion,
                               bernstein_coefficients, default_quadrature_nodes,
                               design_matrix, eval_B, eval_M, eval_expansion,
                               inner_product_M, mspline_quadrature)
from spline_QI.errors import (ParameterError, RangeError,
                              UnsupportedDegreeError, WindowBoundsError)
from spline_QI.knotcalc import KnotWindow, greville, moments

from .conftest import step_lists, window_from_steps


@pytest.fixture
def cubic():
    return KnotWindow(np.arange(10.), degree=3)


def test_uniform_cubic_values(cubic):
    # B_5 has support [t_2, t_6] and is centred at t_4
    assert eval_B(cubic, 5, 4.) == pytest.approx(2. / 3.)
    assert eval_B(cubic, 5, 3.) == pytest.approx(1. / 6.)
    assert eval_B(cubic, 5, 5.) == pytest.approx(1. / 6.)
    assert eval_B(cubic, 5, 2.) == 0.
    assert eval_B(cubic, 5, 6.) == 0.
    assert eval_B(cubic, 5, 7.5) == 0.
    assert_allclose(eval_B(cubic, 5, np.array([3., 4., 5.])),
                    [1. / 6., 2. / 3., 1. / 6.])


def test_support(cubic):
    assert BasisId(5).support(cubic) == (2., 6.)
    assert BasisId(5, BasisKind.M).support(cubic) == (3., 5.)


def test_basis_bounds(cubic):
    with pytest.raises(WindowBoundsError):
        eval_B(cubic, 2, 1.)
    with pytest.raises(WindowBoundsError):
        eval_B(cubic, 9, 8.5)
    with pytest.raises(WindowBoundsError):
        eval_M(cubic, 1, 0.5)


def test_mspline_needs_degree_two():
    with pytest.raises(UnsupportedDegreeError):
        eval_M(KnotWindow(np.arange(5.), degree=1), 2, 1.5)


def test_quadratic_mspline_is_a_box():
    window = KnotWindow([0., 1., 3., 4., 7.], degree=2)
    assert eval_M(window, 2, 2.) == pytest.approx(0.5)
    assert eval_M(window, 2, 0.5) == 0.
    assert eval_M(window, 2, 3.) == 0.


@settings(max_examples=30, deadline=None)
@given(step_lists())
def test_partition_of_unity(steps):
    for m in (2, 3, 4):
        window = window_from_steps(steps, m)
        lo, hi = window.basis_range()
        x = np.linspace(window.t(lo), window.t(hi - m + 1), 97)
        D = design_matrix(window, x, lo, hi)
        assert_allclose(np.asarray(D.sum(axis=1)).ravel(), 1., atol=1e-12)
        assert np.all(D.toarray() >= -1e-15)


def test_design_matrix_matches_eval(nonuniform):
    window = nonuniform(3)
    lo, hi = window.basis_range()
    x = np.linspace(window.t(lo), window.t(hi - 2), 31)
    D = design_matrix(window, x, lo, hi).toarray()
    for j in range(lo, hi + 1):
        assert_allclose(D[:, j - lo], eval_B(window, j, x), atol=1e-14)
    with pytest.raises(RangeError):
        design_matrix(window, [window.t(lo) - 1e-3], lo, hi)
    with pytest.raises(RangeError):
        design_matrix(window, [window.t(lo)], lo, lo + 1)


@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_mspline_moments_by_quadrature(nonuniform, m):
    window = nonuniform(m)
    mu = moments(window, 2)
    for j in range(mu.first, mu.last + 1):
        x, w = mspline_quadrature(window, j)
        assert np.sum(w) == pytest.approx(1., rel=1e-12)
        assert inner_product_M(window, j, lambda s: s) == pytest.approx(
            mu.at(j, 1), rel=1e-12)
        assert inner_product_M(window, j, lambda s: s ** 2) == pytest.approx(
            mu.at(j, 2), rel=1e-12)


def test_quadrature_nodes(cubic):
    assert default_quadrature_nodes(3) == 5
    assert default_quadrature_nodes(4) == 5
    x, w = mspline_quadrature(cubic, 5, n_nodes=2)
    assert len(x) == 2 * 2
    with pytest.raises(ParameterError):
        mspline_quadrature(cubic, 5, n_nodes=0)


def test_expansion_reproduces_linear(nonuniform):
    window = nonuniform(3)
    table = greville(window)
    lo, hi = window.basis_range()
    spline = SplineExpansion(window, lo, [table.theta_at(j)
                                          for j in range(lo, hi + 1)])
    a, b = spline.valid_interval()
    x = np.linspace(a, b, 50)
    assert_allclose(spline(x), x, atol=1e-12)
    assert spline(b) == pytest.approx(b)
    with pytest.raises(RangeError):
        eval_expansion(spline, b + 1e-9)
    with pytest.raises(WindowBoundsError):
        spline.coeff(hi + 1)


def test_expansion_from_mapping(cubic):
    spline = SplineExpansion.from_mapping(cubic, {5: 1., 4: 2., 6: 0.5, 7: 1.})
    assert spline.first == 4
    assert spline.last == 7
    assert spline.coeff(6) == 0.5
    assert spline.as_dict() == {4: 2., 5: 1., 6: 0.5, 7: 1.}
    with pytest.raises(ParameterError):
        SplineExpansion.from_mapping(cubic, {4: 1., 6: 1., 7: 1., 8: 1.})


@pytest.mark.parametrize("k, ordinates", [
    (2, [0., 0., 0., 1. / 6.]),
    (3, [1. / 6., 1. / 3., 2. / 3., 2. / 3.]),
    (4, [2. / 3., 2. / 3., 1. / 3., 1. / 6.]),
    (5, [1. / 6., 0., 0., 0.]),
])
def test_bernstein_coefficients(cubic, k, ordinates):
    assert_allclose(bernstein_coefficients(cubic, 5, k), ordinates,
                    atol=1e-13)


def test_bernstein_coefficients_bounds(cubic):
    with pytest.raises(WindowBoundsError):
        bernstein_coefficients(cubic, 5, 6)
