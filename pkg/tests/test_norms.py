import numpy as np
import pytest
from numpy.testing import assert_allclose

from spline_QI.dqi import (DiscreteFunctional, NodeKind, QuasiInterpolant,
                           Term, apply, build_Q2_derivative, build_Q2_star,
                           build_Q3_cubic, build_Qp_star)
from spline_QI.errors import ParameterError, UnsupportedOperatorError
from spline_QI.iqi import build_G1, build_G2
from spline_QI.norms import (MESH_RATIO_TABLE, BoundCatalog, LebesgueProfile,
                             bernstein_value, fundamental_functions,
                             lebesgue_sample, lebesgue_values, mesh_ratio_bound,
                             nu1_bound, section11_lebesgue,
                             section11_partition, section11_printed,
                             section11_quantities)


@pytest.mark.parametrize("m, q2s, qps, g2b, c, gps, small", [
    (2, 3., 3., 5., 16., 5., 1),
    (3, 3., 2., 5., 8., 3., 2),
    (4, 4., 5. / 3., 7., 32. / 3., 11. / 3., 4),
    (5, 4., 1.5, 7., 9., 3.25, 6),
])
def test_bound_catalog(m, q2s, qps, g2b, c, gps, small):
    assert BoundCatalog.q2_star(m) == q2s
    assert BoundCatalog.qp_star(m) == pytest.approx(qps)
    assert BoundCatalog.g2(m) == g2b
    assert BoundCatalog.C(m) == pytest.approx(c)
    assert BoundCatalog.gp_star(m) == pytest.approx(gps)
    assert BoundCatalog.c_small(m) == small


def test_bound_catalog_dispatch():
    assert BoundCatalog.for_operator("g1", 3) == 1.
    assert BoundCatalog.for_operator("qpstar", 3) == pytest.approx(2.)
    assert BoundCatalog.for_operator("q3", 3, r=1.) == pytest.approx(5. / 3.)
    assert BoundCatalog.for_operator("qpq", 3) is None
    with pytest.raises(ParameterError):
        BoundCatalog.for_operator("q3", 3)
    with pytest.raises(ParameterError):
        BoundCatalog.q2_star(1)


def test_mesh_ratio_table():
    for r, printed in MESH_RATIO_TABLE.items():
        assert abs(mesh_ratio_bound(r) - printed) <= 0.01
    assert mesh_ratio_bound(1.) == pytest.approx(5. / 3.)
    with pytest.raises(ParameterError):
        mesh_ratio_bound(0.5)


def test_nu1_of_uniform_operators(uniform):
    assert nu1_bound(build_Q2_star(uniform(2))) == pytest.approx(1.5)
    assert nu1_bound(build_Q3_cubic(uniform(3))) == pytest.approx(5. / 3.)
    assert nu1_bound(build_G1(uniform(3))) == pytest.approx(1.)


@pytest.mark.parametrize("m", [2, 3, 4])
def test_fundamental_functions_sum_to_one(nonuniform, m):
    qi = build_Q2_star(nonuniform(m))
    functions = fundamental_functions(qi)
    x = np.linspace(*qi.valid_interval(), 77)
    total = sum(L(x) for L in functions.values())
    assert_allclose(total, 1., atol=1e-12)


def test_fundamental_function_is_image_of_kronecker_data(nonuniform):
    qi = build_Qp_star(nonuniform(3, n=30), 4)
    functions = fundamental_functions(qi)
    k = sorted(functions)[len(functions) // 2]
    site = qi.greville.theta_at(k)
    spline = apply(qi, lambda x: np.isclose(x, site, rtol=0., atol=1e-12)
                   .astype(float))
    x = np.linspace(*qi.valid_interval(), 101)
    assert_allclose(spline(x), functions[k](x), atol=1e-13)


def test_q3_sites_are_knots(uniform):
    qi = build_Q3_cubic(uniform(3))
    functions = fundamental_functions(qi)
    assert sorted(functions) == list(range(qi.first - 2, qi.last + 1))


def test_lebesgue_sandwich(nonuniform):
    for qi in (build_Q2_star(nonuniform(3)), build_Qp_star(nonuniform(3), 4),
               build_Q3_cubic(nonuniform(3))):
        profile = lebesgue_sample(qi, 32)
        assert profile.label == "exact"
        assert profile.operator == qi.name
        assert 1. - 1e-12 <= profile.max_value <= nu1_bound(qi) + 1e-12


def test_g1_profile_is_one(nonuniform):
    profile = lebesgue_sample(build_G1(nonuniform(3)), 16)
    assert profile.label == "exact"
    assert_allclose(profile.values, 1., atol=1e-12)


def test_g2_profile_is_an_upper_bound(uniform):
    qi = build_G2(uniform(3))
    profile = lebesgue_sample(qi, 16)
    assert profile.label == "upper"
    assert profile.max_value == pytest.approx(nu1_bound(qi))


def test_unsupported_operators(uniform):
    with pytest.raises(UnsupportedOperatorError):
        lebesgue_sample(build_Q2_derivative(uniform(3)))
    with pytest.raises(UnsupportedOperatorError):
        fundamental_functions(build_G1(uniform(3)))

    window = uniform(3)
    lo, hi = window.basis_range()
    functionals = {j: DiscreteFunctional(j, (
        Term(NodeKind.KNOT if j == lo else NodeKind.GREVILLE, j, 1.),))
        for j in range(lo, hi + 1)}
    mixed = QuasiInterpolant("mixed", window, functionals, exactness=0,
                             reach=0)
    with pytest.raises(UnsupportedOperatorError):
        lebesgue_values(mixed, [window.t(lo)])


def test_profile_csv(tmp_path, uniform):
    profile = lebesgue_sample(build_Q2_star(uniform(2)), 8)
    assert profile.argmax in profile.x
    path = profile.to_csv(tmp_path / "lebesgue.csv")
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x,lambda"
    assert len(lines) == len(profile.x) + 1
    assert isinstance(LebesgueProfile(profile.x, profile.values).to_frame()
                      .iloc[0]["lambda"], float)


def test_blow_up_window():
    window = section11_partition(7.)
    assert (window.first, window.last) == (-4, 9)
    assert window.t(2) == 0.
    assert window.t(3) == 7.
    assert window.h(3) == 7.
    assert window.h(4) == 1.
    with pytest.raises(ParameterError):
        section11_partition(0.)


def test_blow_up_quantities_uniform():
    measured = section11_quantities(section11_partition(1.))
    assert measured["alpha1"] == pytest.approx(1. / 6.)
    assert_allclose([measured[k] for k in ("alpha2", "beta2", "gamma2",
                                           "delta2")],
                    [2. / 3., 2. / 3., 1. / 3., 1. / 6.], atol=1e-13)
    assert measured["B1_s"] == pytest.approx(1. / 48.)
    assert measured["B2_s"] == pytest.approx(23. / 48.)
    printed = section11_printed(1.)
    for key in ("alpha1", "gamma2", "B1_s", "B2_s"):
        assert measured[key] == pytest.approx(printed[key])


@pytest.mark.parametrize("h", [0.5, 3., 40., 1e3])
def test_blow_up_identities(h):
    measured = section11_quantities(section11_partition(h))
    assert measured["alpha1"] + measured["alpha2"] + measured["delta2"] == \
        pytest.approx(1., abs=1e-12)
    assert 2. * (measured["B1_s"] + measured["B2_s"]) == pytest.approx(1.)
    ordinates = [measured[k] for k in ("alpha2", "beta2", "gamma2", "delta2")]
    assert bernstein_value(ordinates, 0.5) == pytest.approx(measured["B2_s"])


def test_blow_up_lebesgue_growth():
    lambda_s, grid_max = section11_lebesgue(1., 32)
    assert lambda_s == pytest.approx(11. / 9.)
    assert grid_max >= lambda_s
    # Lambda(s) = h / 2 + 5 / 12 + O(1 / h)
    for h in (1e3, 1e4):
        assert section11_lebesgue(h, 8)[0] == pytest.approx(
            h / 2. + 5. / 12., rel=1e-4)


def test_bernstein_value():
    assert bernstein_value([1., 1., 1.], 0.3) == pytest.approx(1.)
    assert bernstein_value([0., 1.], 0.25) == pytest.approx(0.25)
