# -*- coding: utf-8 -*-

"""
Integral quasi-interpolants (iQIs): the coefficient functionals combine the
weighted means <M_j, f> of f against the normalized M-splines of degree
m - 2.

* build_G1: lambda_i(f) = <M_i, f>, exact on P_1, of norm 1.
* build_G2: three consecutive M-splines, exact on P_2.
* build_Gp_star: M_{i-p}, M_i, M_{i+p} for p >= m, exact on P_2.
* build_Gpq: any coefficients a_i(s), s = -p..p, exact on P_q.

In clamped mode G1 and G2 replace the first and last functionals with the
point value of f at the Greville abscissa of the boundary B-spline. That
abscissa is the interval end only on a clamped knot sequence; on the
strictly increasing windows used here it is an interior approximation of
the end value.
"""

import logging
from typing import Mapping

import numpy as np

from .bspline import SplineExpansion
from .dqi import (DiscreteFunctional, Functional, NodeKind, QuasiInterpolant,
                  Term, _finish, _require_degree, _require_p, apply,
                  check_coefficients)
from .errors import (DegenerateProblemError, ParameterError,
                     UnsupportedOperatorError, WindowBoundsError)
from .knotcalc import (GrevilleTable, KnotWindow, MomentTable, greville,
                       moments, omega)

logger = logging.getLogger(__name__)


class IntegralFunctional(Functional):
    """sum_s a_i(s) <M_{i+s}, f>."""


def xi(window: KnotWindow, i: int, table: GrevilleTable = None,
       mu: MomentTable = None) -> float:
    """mu_i^(2) - theta_i^(2), positive for m >= 2."""
    table = greville(window) if table is None else table
    mu = moments(window, 2) if mu is None else mu
    return mu.at(i, 2) - table.pow_at(i, 2)


def _clamp(window, functionals, table):
    """
    Point values f(theta_lo), f(theta_hi) for the first and last functionals.
    Windows are strictly increasing, so theta_lo lies inside the window and
    f(theta_lo) approximates the end value f(t_0) of a clamped knot sequence.
    """
    lo, hi = min(functionals), max(functionals)
    for j in (lo, hi):
        functionals[j] = DiscreteFunctional(
            j, (Term(NodeKind.GREVILLE, j, 1.),))
    logger.debug(f"Clamped functionals at theta_{lo} = {table.theta_at(lo)} "
                 f"and theta_{hi} = {table.theta_at(hi)}")


def build_G1(window: KnotWindow, clamped: bool = False,
             validate: bool = True) -> QuasiInterpolant:
    _require_degree(window, "G1")
    table = greville(window)
    lo, hi = window.valid_range(0)
    functionals = {j: IntegralFunctional(j, (Term(NodeKind.MSPLINE, j, 1.),))
                   for j in range(lo, hi + 1)}
    if clamped:
        _clamp(window, functionals, table)
    qi = QuasiInterpolant("g1", window, functionals, exactness=1, reach=0,
                          params={"clamped": clamped}, greville=table)
    return _finish(qi, validate)


def g2_weights(window: KnotWindow, i: int):
    """
    Closed-form weights (a_i, b_i, c_i) of <M_{i-1}, f>, <M_i, f> and
    <M_{i+1}, f>:

        a_i = -omega_i / ((m - 1) (t_i - t_{i-m}) (t_{i+1} - t_{i-m}))
        c_i = -omega_i / ((m - 1) (t_{i+1} - t_{i-m}) (t_{i+1} - t_{i+1-m}))
        b_i = 1 - a_i - c_i

    where omega_i sums (t_r - t_s)^2 over the pairs of T_i.
    """
    m = window.degree
    w = omega(window, i) / (m - 1)
    span = window.t(i + 1) - window.t(i - m)
    a = -w / ((window.t(i) - window.t(i - m)) * span)
    c = -w / (span * (window.t(i + 1) - window.t(i + 1 - m)))
    return a, 1. - a - c, c


def g2_alpha(window: KnotWindow, i: int, table: GrevilleTable = None,
             mu: MomentTable = None) -> float:
    """
    alpha_i solving
    (dmu_{i-1} dtheta_i - dmu_i dtheta_{i-1}) alpha_i = mu_i^(2) - theta_i^(2)
    with dmu_k = mu_{k+1}^(2) - mu_k^(2) and dtheta_k = theta_{k+1} - theta_k;
    the G2 weights are a_i = dtheta_i alpha_i and c_i = dtheta_{i-1} alpha_i.
    """
    table = greville(window) if table is None else table
    mu = moments(window, 2) if mu is None else mu
    dmu_left = mu.at(i, 2) - mu.at(i - 1, 2)
    dmu_right = mu.at(i + 1, 2) - mu.at(i, 2)
    det = dmu_left * table.delta(i) - dmu_right * table.delta(i - 1)
    return xi(window, i, table, mu) / det


def build_G2(window: KnotWindow, clamped: bool = False,
             validate: bool = True) -> QuasiInterpolant:
    _require_degree(window, "G2")
    table = greville(window)
    lo, hi = window.valid_range(1)
    functionals = {}
    for i in range(lo, hi + 1):
        a, b, c = g2_weights(window, i)
        functionals[i] = IntegralFunctional(i, (
            Term(NodeKind.MSPLINE, i - 1, a),
            Term(NodeKind.MSPLINE, i, b),
            Term(NodeKind.MSPLINE, i + 1, c)))
    if clamped:
        _clamp(window, functionals, table)
    # Boundary point values are exact on P_1 only off a clamped sequence
    qi = QuasiInterpolant("g2", window, functionals,
                          exactness=1 if clamped else 2, reach=1,
                          params={"clamped": clamped}, greville=table)
    return _finish(qi, validate)


def gp_star_weights(table: GrevilleTable, mu: MomentTable, i: int, p: int):
    theta_left = table.theta_at(i) - table.theta_at(i - p)
    theta_right = table.theta_at(i + p) - table.theta_at(i)
    mu_left = mu.at(i, 2) - mu.at(i - p, 2)
    mu_right = mu.at(i + p, 2) - mu.at(i, 2)
    delta = theta_left * mu_right - theta_right * mu_left
    scale = theta_left + theta_right
    if abs(delta) < 1e-13 * scale ** 3:
        raise DegenerateProblemError(
            f"Gp* system at index {i}, p = {p} is singular: delta = "
            f"{delta:.3e} for a stencil of width {scale:.3e}")
    x = mu.at(i, 2) - table.pow_at(i, 2)
    a_left = -x * theta_right / delta
    a_right = -x * theta_left / delta
    return a_left, 1. - a_left - a_right, a_right


def build_Gp_star(window: KnotWindow, p: int, validate: bool = True) \
        -> QuasiInterpolant:
    _require_degree(window, "Gp*")
    p = _require_p(window, p, "Gp*")
    table = greville(window)
    mu = moments(window, window.degree + 1)
    lo, hi = window.valid_range(p)
    functionals = {}
    for i in range(lo, hi + 1):
        a_left, a_mid, a_right = gp_star_weights(table, mu, i, p)
        functionals[i] = IntegralFunctional(i, (
            Term(NodeKind.MSPLINE, i - p, a_left),
            Term(NodeKind.MSPLINE, i, a_mid),
            Term(NodeKind.MSPLINE, i + p, a_right)))
    qi = QuasiInterpolant("gpstar", window, functionals, exactness=2,
                          reach=p, params={"p": p}, greville=table,
                          moment_table=mu)
    return _finish(qi, validate)


def moment_system(table: GrevilleTable, mu: MomentTable, i: int, p: int,
                  q: int):
    """W[r, s + p] = mu_{i+s}^(r) and b[r] = theta_i^(r), r = 0..q."""
    if q < 0 or q > table.degree or q > mu.l_max:
        raise ParameterError(
            f"q must lie in [0, {min(table.degree, mu.l_max)}], got {q}")
    W = np.array([[mu.at(i + s, r) for s in range(-p, p + 1)]
                  for r in range(q + 1)])
    b = np.array([table.pow_at(i, r) for r in range(q + 1)])
    return W, b


def build_Gpq(window: KnotWindow, p: int, q: int, coeffs: Mapping,
              tol: float = 1e-8, validate: bool = True) -> QuasiInterpolant:
    """
    General iQI lambda_i(f) = sum_{s=-p}^{p} a_i(s) <M_{i+s}, f>, the
    coefficients being checked against the moment system W a = b.
    """
    _require_degree(window, "G_{p,q}")
    if p < 0:
        raise ParameterError(f"p must be nonnegative, got {p}")
    table = greville(window)
    mu = moments(window, window.degree + 1)
    lo, hi = window.valid_range(p)
    functionals = {}
    for i in sorted(coeffs):
        if i < lo or i > hi:
            raise WindowBoundsError(
                f"Index {i} has no full stencil of reach {p}; valid indices "
                f"are {lo}..{hi}")
        a = np.asarray(coeffs[i], dtype=float)
        if a.shape != (2 * p + 1,):
            raise ParameterError(
                f"Index {i}: expected {2 * p + 1} coefficients, got {a.shape}")
        W, b = moment_system(table, mu, i, p, q)
        check_coefficients(W, b, a, tol, i)
        functionals[i] = IntegralFunctional(i, tuple(
            Term(NodeKind.MSPLINE, i + s, float(a[s + p]))
            for s in range(-p, p + 1) if a[s + p] != 0.))
    qi = QuasiInterpolant("gpq", window, functionals, exactness=q, reach=p,
                          params={"p": p, "q": q}, greville=table,
                          moment_table=mu)
    return _finish(qi, validate)


def apply_integral(qi: QuasiInterpolant, f, n_nodes: int = None) \
        -> SplineExpansion:
    """Qf with every <M_j, f> computed by composite Gauss-Legendre quadrature."""
    if not qi.is_integral:
        raise UnsupportedOperatorError(f"{qi.name} has no integral functional")
    return apply(qi, f, n_nodes=n_nodes)
