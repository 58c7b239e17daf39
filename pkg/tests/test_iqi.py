import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from spline_QI.dqi import NodeKind, build_Q2_star, exactness_errors
from spline_QI.errors import (InconsistentCoefficientsError, ParameterError,
                              UnsupportedOperatorError)
from spline_QI.iqi import (apply_integral, build_G1, build_G2, build_Gp_star,
                           build_Gpq, g2_alpha, g2_weights, gp_star_weights, xi)
from spline_QI.knotcalc import greville, moments

from .conftest import step_lists, window_from_steps


def test_g1_norm_and_exactness(nonuniform):
    qi = build_G1(nonuniform(3))
    assert qi.is_integral
    assert qi.exactness == 1
    assert all(fn.l1_norm == 1. for fn in qi.functionals.values())
    spline = apply_integral(qi, lambda x: 2. - 3. * x)
    x = np.linspace(*qi.valid_interval(), 51)
    assert_allclose(spline(x), 2. - 3. * x, atol=1e-10)


def test_g1_clamped(uniform):
    qi = build_G1(uniform(3), clamped=True)
    first, last = qi.functionals[qi.first], qi.functionals[qi.last]
    assert first.is_point_evaluation and last.is_point_evaluation
    assert first.terms[0].kind == NodeKind.GREVILLE
    assert not qi.functionals[qi.first + 1].is_point_evaluation
    assert qi.params["clamped"] is True
    theta = greville(qi.window).theta_at(qi.first)
    assert qi.node_location(first.terms[0]) == pytest.approx(theta)
    assert theta > qi.window.t(qi.window.first)


def test_g2_uniform_quadratic(uniform):
    qi = build_G2(uniform(2))
    for j in qi.indices:
        assert_allclose(qi.functionals[j].weights, [-1. / 6., 4. / 3., -1. / 6.])


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_g2_weights_match_moment_solution(nonuniform, m):
    window = nonuniform(m, seed=m)
    table, mu = greville(window), moments(window, 2)
    lo, hi = window.valid_range(1)
    for i in range(lo, hi + 1):
        a, b, c = g2_weights(window, i)
        alpha = g2_alpha(window, i, table, mu)
        assert a == pytest.approx(table.delta(i) * alpha, rel=1e-10)
        assert c == pytest.approx(table.delta(i - 1) * alpha, rel=1e-10)
        assert a + b + c == pytest.approx(1.)
        assert a < 0. and c < 0.


@pytest.mark.parametrize("m", [2, 3, 4])
def test_g2_reproduces_quadratics(nonuniform, m):
    qi = build_G2(nonuniform(m))
    for r, error, scale in exactness_errors(qi, range(3)):
        assert error <= 1e-10 * (1. + scale)


def test_g2_clamped_is_linear_only(uniform):
    qi = build_G2(uniform(3), clamped=True)
    assert qi.exactness == 1
    assert qi.functionals[qi.last].is_point_evaluation


@pytest.mark.parametrize("p", [2, 3, 5])
def test_gp_star_uniform_quadratic(uniform, p):
    # Box M-splines: a(-p) = a(p) = -1 / (6 p^2)
    qi = build_Gp_star(uniform(2, n=30), p)
    j = (qi.first + qi.last) // 2
    a = -1. / (6. * p ** 2)
    assert_allclose(qi.functionals[j].weights, [a, 1. - 2. * a, a])


@pytest.mark.parametrize("m, p", [(2, 2), (3, 3), (3, 4), (4, 5)])
def test_gp_star_exact(nonuniform, m, p):
    window = nonuniform(m, n=30, seed=p)
    qi = build_Gp_star(window, p)
    table = greville(window)
    for j in qi.indices:
        assert sum(qi.functionals[j].weights) == pytest.approx(1.)
    left, mid, right = gp_star_weights(table, qi.moment_table, qi.first, p)
    assert_allclose(qi.functionals[qi.first].weights, [left, mid, right])
    for r, error, scale in exactness_errors(qi, range(3)):
        assert error <= 1e-9 * (1. + scale)


def test_gp_star_needs_p_at_least_m(uniform):
    with pytest.raises(ParameterError):
        build_Gp_star(uniform(4), 3)


def test_apply_integral_rejects_discrete_operator(uniform):
    with pytest.raises(UnsupportedOperatorError):
        apply_integral(build_Q2_star(uniform(3)), np.sin)


def test_build_gpq_checks_moments(uniform):
    window = uniform(3)
    lo, _ = window.valid_range(1)
    qi = build_Gpq(window, 1, 2, {lo: g2_weights(window, lo),
                                  lo + 1: g2_weights(window, lo + 1),
                                  lo + 2: g2_weights(window, lo + 2),
                                  lo + 3: g2_weights(window, lo + 3)})
    assert qi.exactness == 2
    with pytest.raises(InconsistentCoefficientsError) as info:
        build_Gpq(window, 1, 2, {lo: [0., 1., 0.]})
    assert info.value.index == lo


@settings(max_examples=30, deadline=None)
@given(step_lists())
def test_xi_positive(steps):
    for m in (2, 3, 4):
        window = window_from_steps(steps, m)
        lo, hi = window.greville_range()
        for i in range(lo, hi + 1):
            assert xi(window, i) > 0.
