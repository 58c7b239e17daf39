# -*- coding: utf-8 -*-

"""
Evaluation of the B-splines B_j of degree m (support [t_{j-m}, t_{j+1}]),
of the normalized M-splines M_j of degree m - 2 (support [t_{j-m+1}, t_j],
unit integral), of spline expansions sum_j c_j B_j and of the inner products
<M_j, f> by composite Gauss-Legendre quadrature.

Values come from scipy.interpolate.BSpline. Basis functions are
right-continuous at knots; an expansion is evaluated on its closed valid
interval, so the right end uses the left limit.
"""

import logging
from math import ceil

import numpy as np
from dataclasses import dataclass, field
from enum import Enum
from scipy.interpolate import BSpline
from scipy.special import comb

from .errors import (ParameterError, RangeError, UnsupportedDegreeError,
                     WindowBoundsError)
from .knotcalc import KnotWindow
from .utils import evaluate

logger = logging.getLogger(__name__)


class BasisKind(str, Enum):
    B = "B_of_degree_m"
    M = "M_of_degree_m_minus_2"


@dataclass(frozen=True)
class BasisId:
    j: int
    kind: BasisKind = BasisKind.B

    def support(self, window: KnotWindow):
        m = window.degree
        if self.kind == BasisKind.B:
            return window.t(self.j - m), window.t(self.j + 1)
        return window.t(self.j - m + 1), window.t(self.j)


def _check_B(window: KnotWindow, j: int):
    lo, hi = window.basis_range()
    if j < lo or j > hi:
        raise WindowBoundsError(
            f"Support of B_{j} leaves the window: stored B-splines are "
            f"B_{lo}, ..., B_{hi}")


def _check_M(window: KnotWindow, j: int):
    if window.degree < 2:
        raise UnsupportedDegreeError(
            f"M-splines need degree m >= 2, got {window.degree}")
    lo, hi = window.greville_range()
    if j < lo or j > hi:
        raise WindowBoundsError(
            f"Support of M_{j} leaves the window: stored M-splines are "
            f"M_{lo}, ..., M_{hi}")


def _basis_element(tau, x):
    x = np.asarray(x, dtype=float)
    values = BSpline.basis_element(tau, extrapolate=False)(x)
    values = np.nan_to_num(values, nan=0.)
    # Right-continuity: nothing survives at or beyond the last support knot
    values[x >= tau[-1]] = 0.
    return values


def _as_output(values, x):
    if np.ndim(x) == 0:
        return float(np.ravel(values)[0])
    return values


def eval_B(window: KnotWindow, j: int, x):
    """
    Value of the degree m B-spline B_j at x (scalar or array), zero outside
    [t_{j-m}, t_{j+1}].
    """
    _check_B(window, j)
    tau = window.knots_between(j - window.degree, j + 1)
    return _as_output(_basis_element(tau, np.atleast_1d(x)), x)


def eval_M(window: KnotWindow, j: int, x):
    """
    Value at x of M_j = (m - 1) / (t_j - t_{j-m+1}) times the degree m - 2
    B-spline on t_{j-m+1}, ..., t_j.
    """
    _check_M(window, j)
    m = window.degree
    tau = window.T(j)
    scale = (m - 1) / (tau[-1] - tau[0])
    return _as_output(scale * _basis_element(tau, np.atleast_1d(x)), x)


def default_quadrature_nodes(degree: int) -> int:
    return int(ceil((degree + 6) / 2))


def mspline_quadrature(window: KnotWindow, j: int, n_nodes: int = None):
    """
    Composite Gauss-Legendre rule for integrals against M_j.

    Parameters
    ----------
    window: KnotWindow
    j: int
        Index of M_j.
    n_nodes: int
        Nodes per knot interval of the support. Defaults to
        ceil((m + 6) / 2).

    Returns
    -------
    x, w: np.array
        Nodes and weights, M_j included in the weights, so that
        <M_j, f> is approximated by sum(w * f(x)).
    """
    _check_M(window, j)
    if n_nodes is None:
        n_nodes = default_quadrature_nodes(window.degree)
    if n_nodes < 1:
        raise ParameterError(f"n_nodes must be positive, got {n_nodes}")
    xi, wi = np.polynomial.legendre.leggauss(n_nodes)
    tau = window.T(j)
    half = 0.5 * np.diff(tau)[:, None]
    mid = 0.5 * (tau[1:] + tau[:-1])[:, None]
    x = (mid + half * xi[None, :]).ravel()
    w = (half * wi[None, :]).ravel()
    return x, w * eval_M(window, j, x)


def inner_product_M(window: KnotWindow, j: int, f, n_nodes: int = None) -> float:
    """<M_j, f> by composite Gauss-Legendre quadrature over the support."""
    x, w = mspline_quadrature(window, j, n_nodes)
    return float(np.dot(w, evaluate(f, x)))


def _sub_knots(window: KnotWindow, first: int, last: int):
    if last - first < window.degree:
        raise RangeError(
            f"B_{first}, ..., B_{last} do not cover any knot interval "
            f"completely for degree {window.degree}")
    _check_B(window, first)
    _check_B(window, last)
    return window.knots_between(first - window.degree, last + 1)


def design_matrix(window: KnotWindow, x, first: int, last: int):
    """
    Collocation matrix [B_j(x_k)] for j = first, ..., last, as a sparse CSR
    matrix of shape (len(x), last - first + 1). The x must lie in
    [t_first, t_{last-m+1}], where these B-splines sum to one.
    """
    t = _sub_knots(window, first, last)
    m = window.degree
    x = np.atleast_1d(np.asarray(x, dtype=float))
    lo, hi = t[m], t[len(t) - m - 1]
    if np.any(x < lo) or np.any(x > hi):
        raise RangeError(f"Abscissas outside the valid interval [{lo}, {hi}]")
    return BSpline.design_matrix(x, t, m)


@dataclass(frozen=True, eq=False)
class SplineExpansion:
    """
    The spline sum_j coeffs[j - first] B_j over consecutive indices
    first, ..., first + len(coeffs) - 1.
    """
    window: KnotWindow
    first: int
    coeffs: np.array
    _spline: BSpline = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float).ravel()
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)
        t = _sub_knots(self.window, self.first, self.last)
        object.__setattr__(
            self, "_spline",
            BSpline(t, coeffs, self.window.degree, extrapolate=False))

    @classmethod
    def from_mapping(cls, window: KnotWindow, coeffs: dict):
        indices = sorted(coeffs)
        if indices != list(range(indices[0], indices[-1] + 1)):
            raise ParameterError("Expansion indices must be consecutive")
        return cls(window, indices[0], [coeffs[j] for j in indices])

    @property
    def last(self) -> int:
        return self.first + len(self.coeffs) - 1

    @property
    def indices(self):
        return range(self.first, self.last + 1)

    def coeff(self, j: int) -> float:
        if j < self.first or j > self.last:
            raise WindowBoundsError(f"No coefficient for B_{j}")
        return float(self.coeffs[j - self.first])

    def as_dict(self) -> dict:
        return {j: float(c) for j, c in zip(self.indices, self.coeffs)}

    def valid_interval(self):
        m = self.window.degree
        return self.window.t(self.first), self.window.t(self.last - m + 1)

    def __call__(self, x):
        return eval_expansion(self, x)


def eval_expansion(expansion: SplineExpansion, x):
    """
    Value of the expansion at x, a scalar or an array inside the valid
    interval [t_first, t_{last-m+1}].
    """
    lo, hi = expansion.valid_interval()
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x_arr < lo) or np.any(x_arr > hi):
        bad = x_arr[(x_arr < lo) | (x_arr > hi)][0]
        raise RangeError(f"x = {bad!r} outside the valid range [{lo}, {hi}]")
    return _as_output(expansion._spline(x_arr), x)


def bernstein_coefficients(window: KnotWindow, j: int, k: int) -> np.array:
    """
    Bernstein-Bezier ordinates of the polynomial piece of B_j on
    [t_k, t_{k+1}], ordered from t_k to t_{k+1}.
    """
    _check_B(window, j)
    m = window.degree
    if k < j - m or k > j:
        raise WindowBoundsError(
            f"[t_{k}, t_{k + 1}] is not a knot interval of the support of B_{j}")
    a, b = window.t(k), window.t(k + 1)
    u = (np.arange(m + 1) + 0.5) / (m + 1)
    powers = np.arange(m + 1)
    bernstein = (comb(m, powers)[None, :] * u[:, None] ** powers[None, :]
                 * (1. - u[:, None]) ** (m - powers[None, :]))
    values = eval_B(window, j, a + (b - a) * u)
    return np.linalg.solve(bernstein, values)
