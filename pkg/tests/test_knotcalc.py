import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from numpy.testing import assert_allclose

from spline_QI.errors import (DegenerateNodesError, KnotFileError,
                              ParameterError, UnsupportedDegreeError,
                              WindowBoundsError)
from spline_QI.knotcalc import (KnotWindow, divided_difference, elem_sym,
                                ext_sym, greville, load_knots, moments, omega)

from .conftest import window_from_steps, step_lists


def test_window_indexing():
    window = KnotWindow([0., 1., 3., 6., 10.], degree=2, offset=5)
    assert (window.first, window.last) == (5, 9)
    assert window.t(7) == 3.
    assert window.h(7) == 2.
    assert_allclose(window.T(7), [1., 3.])
    assert_allclose(window.knots_between(6, 8), [1., 3., 6.])
    with pytest.raises(WindowBoundsError):
        window.t(4)
    with pytest.raises(WindowBoundsError):
        window.t(10)


@pytest.mark.parametrize("knots, degree, error", [
    ([0., 1., 2., 3.], 0, UnsupportedDegreeError),
    ([0., 1., 1., 3., 4.], 2, ParameterError),
    ([0., 2., 1., 3., 4.], 2, ParameterError),
    ([0., 1., 2.], 2, ParameterError),
    ([0., 1., np.inf, 4., 5.], 2, ParameterError),
])
def test_window_rejects_bad_input(knots, degree, error):
    with pytest.raises(error):
        KnotWindow(knots, degree)


def test_repeated_knots_are_a_parameter_error():
    with pytest.raises(ParameterError) as info:
        KnotWindow([0., 1., 1., 2., 3.], degree=2)
    assert not isinstance(info.value, DegenerateNodesError)
    assert "strictly increasing" in str(info.value)


def test_window_is_frozen():
    window = KnotWindow(np.arange(6.), 2)
    with pytest.raises(ValueError):
        window.knots[0] = -1.


def test_ranges():
    window = KnotWindow(np.arange(12.), degree=3)
    assert window.basis_range() == (3, 10)
    assert window.greville_range() == (2, 11)
    assert window.valid_range(1) == (3, 10)
    assert window.valid_range(3) == (5, 8)
    with pytest.raises(WindowBoundsError):
        window.valid_range(5)
    with pytest.raises(ParameterError):
        window.valid_range(-1)


def test_mesh_ratio():
    window = KnotWindow([0., 1., 3., 4., 8.], degree=1)
    assert window.mesh_ratio() == 4.


def test_symmetric_functions():
    window = KnotWindow(np.arange(6.), degree=3)
    # T_3 = {1, 2, 3}
    assert [elem_sym(window, 3, l) for l in range(5)] == [1., 6., 11., 6., 0.]
    assert ext_sym(window, 3, 0) == 1.
    assert ext_sym(window, 3, 1) == 6.
    assert ext_sym(window, 3, 2) == 25.
    assert omega(window, 3) == 6.
    with pytest.raises(ParameterError):
        elem_sym(window, 3, -1)


@settings(max_examples=30, deadline=None)
@given(step_lists(6, 10))
def test_ext_sym_matches_brute_force(steps):
    window = window_from_steps(steps, 4)
    j = window.last
    T = window.T(j)
    for l in range(4):
        brute = sum(np.prod(c) for c in
                    itertools.combinations_with_replacement(T, l))
        assert ext_sym(window, j, l) == pytest.approx(brute, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(step_lists(8, 12))
def test_elem_sym_matches_brute_force(steps):
    for m in range(1, 7):
        window = window_from_steps(steps, m)
        j = window.last
        T = window.T(j)
        for l in range(m + 2):
            brute = sum(np.prod(c) for c in itertools.combinations(T, l))
            assert elem_sym(window, j, l) == pytest.approx(brute, rel=1e-12)


def test_greville_uniform_cubic():
    table = greville(KnotWindow(np.arange(12.), degree=3))
    assert table.theta_at(5) == pytest.approx(4.)
    assert table.pow_at(5, 2) == pytest.approx(47. / 3.)
    assert table.bar2_at(5) == pytest.approx(1. / 3.)
    assert table.delta(5) == pytest.approx(1.)
    with pytest.raises(WindowBoundsError):
        table.theta_at(1)


def test_greville_linear_has_no_bar():
    table = greville(KnotWindow(np.arange(5.), degree=1))
    assert_allclose(table.theta_bar2, 0.)


@settings(max_examples=40, deadline=None)
@given(step_lists())
def test_greville_increasing_and_bar_positive(steps):
    for m in (2, 3, 5):
        table = greville(window_from_steps(steps, m))
        assert np.all(np.diff(table.theta) > 0.)
        assert np.all(table.theta_bar2 > 0.)
        assert_allclose(table.theta_pow[:, 0], 1.)


@settings(max_examples=30, deadline=None)
@given(step_lists())
def test_theta_bar_is_theta_squared_minus_theta2(steps):
    for m in (2, 3, 4, 6):
        table = greville(window_from_steps(steps, m))
        lo, hi = table.first, table.last
        for i in range(lo, hi + 1):
            theta = table.theta_at(i)
            assert theta ** 2 - table.pow_at(i, 2) == pytest.approx(
                table.bar2_at(i), rel=0., abs=1e-12 * (1. + theta ** 2))


def test_moments_closed_form():
    mu = moments(KnotWindow(np.arange(8.), degree=2), 3)
    # M_j is the unit box on [t_{j-1}, t_j]
    assert mu.at(1, 0) == 1.
    assert mu.at(1, 1) == pytest.approx(0.5)
    assert mu.at(1, 2) == pytest.approx(1. / 3.)
    assert mu.at(1, 3) == pytest.approx(0.25)

    mu = moments(KnotWindow(np.arange(8.), degree=3), 2)
    # Hat function on [0, 2]
    assert mu.at(2, 2) == pytest.approx(7. / 6.)
    with pytest.raises(ParameterError):
        mu.at(2, 3)
    with pytest.raises(WindowBoundsError):
        mu.at(0, 1)


def test_moments_need_degree_two():
    with pytest.raises(UnsupportedDegreeError):
        moments(KnotWindow(np.arange(5.), degree=1), 2)


@settings(max_examples=30, deadline=None)
@given(step_lists())
def test_first_moment_is_greville(steps):
    window = window_from_steps(steps, 4)
    table, mu = greville(window), moments(window, 2)
    assert_allclose(mu.mu[:, 1], table.theta, rtol=1e-12)
    # Jensen: mu^(2) > theta^2
    assert np.all(mu.mu[:, 2] > table.theta ** 2)


def test_divided_difference():
    nodes = np.array([0., 1., 3.])
    assert divided_difference(nodes, nodes ** 2) == pytest.approx(1.)
    assert divided_difference([2.], [5.]) == 5.
    with pytest.raises(DegenerateNodesError):
        divided_difference([0., 1., 1.], [0., 1., 1.])
    with pytest.raises(ParameterError):
        divided_difference([0., 1.], [0.])


def test_load_knots(tmp_path):
    path = tmp_path / "knots.txt"
    path.write_text("# knots\n0\n\n1.5\n  2.25\n3\n", encoding="utf-8")
    window = load_knots(path, degree=2, offset=-1)
    assert_allclose(window.knots, [0., 1.5, 2.25, 3.])
    assert window.first == -1


@pytest.mark.parametrize("text, lineno", [
    ("0\n1\n# comment\n0.5\n", 4),
    ("0\nabc\n", 2),
    ("0\n1\nnan\n", 3),
])
def test_load_knots_errors(tmp_path, text, lineno):
    path = tmp_path / "knots.txt"
    path.write_text(text, encoding="utf-8")
    with pytest.raises(KnotFileError) as info:
        load_knots(path, degree=2)
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"line {lineno}: ")
