# -*- coding: utf-8 -*-

"""
Operator norms of quasi-interpolants.

For a dQI Qf = sum_i lambda_i(f) B_i with point-value functionals, the
quasi-Lagrange form Qf = sum_k f(x_k) L_k gathers, for every data site x_k,
the B-splines whose functional uses f(x_k): L_k = sum_i a_i(k) B_i. The
Lebesgue function Lambda = sum_k |L_k| has sup norm ||Q||_inf and is sampled
here on a dense grid, which gives a lower bound of the true norm. The
quantity nu_1(Q) = max_i ||lambda_i||_1 is an upper bound, and the closed
forms collected in BoundCatalog bound nu_1 for each family of operators.

The module also builds the cubic blow-up family: a partition with steps 1
except one stretched interval [t_2, t_3] of length h, on which the P_3-exact
operator Q3 has Lebesgue function of order h at the middle of the stretched
interval.
"""

import logging
from math import comb

import numpy as np
import pandas as pd
from dataclasses import dataclass

from .bspline import SplineExpansion, bernstein_coefficients, design_matrix, eval_B
from .dqi import NodeKind, POINT_KINDS, QuasiInterpolant, build_Q3_cubic
from .errors import ParameterError, UnsupportedOperatorError
from .knotcalc import KnotWindow
from .utils import FLOAT_FORMAT, generate_grid

logger = logging.getLogger(__name__)

SECTION11_FIRST = -4
SECTION11_LAST = 9

# Upper bounds of ||Q_3|| for mesh ratios r = 1..5, two decimals
MESH_RATIO_TABLE = {1: 1.66, 2: 3.89, 3: 6.83, 4: 10.47, 5: 14.78}


@dataclass(frozen=True, eq=False)
class LebesgueProfile:
    """
    Sampled Lebesgue function of an operator.

    Attributes
    ----------
    x: np.array
        Sample abscissas.
    values: np.array
        Lambda(x).
    label: str
        'exact' when values is the Lebesgue function itself, 'upper' when it
        is the nu_1-weighted profile sum_i ||lambda_i||_1 B_i of an iQI with
        signed weights.
    operator: str
    """
    x: np.array
    values: np.array
    label: str = "exact"
    operator: str = ""

    @property
    def max_value(self) -> float:
        return float(np.max(self.values))

    @property
    def argmax(self) -> float:
        return float(self.x[int(np.argmax(self.values))])

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({"x": self.x, "lambda": self.values})

    def to_csv(self, path):
        self.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path


def _sites(qi: QuasiInterpolant):
    if not qi.is_point_evaluation:
        raise UnsupportedOperatorError(
            f"{qi.name} is not made of point evaluations, it has no "
            f"quasi-Lagrange form")
    kinds = {term.kind for fn in qi.functionals.values() for term in fn.terms}
    if len(kinds) > 1:
        raise UnsupportedOperatorError(
            f"{qi.name} mixes the node kinds {sorted(k.value for k in kinds)}")
    return sorted({term.index for fn in qi.functionals.values()
                   for term in fn.terms})


def _stencil_matrix(qi: QuasiInterpolant, sites):
    """S[j - first, k] = weight of site k in lambda_j."""
    column = {site: k for k, site in enumerate(sites)}
    S = np.zeros((len(qi.functionals), len(sites)))
    for row, fn in enumerate(qi.functionals.values()):
        for term in fn.terms:
            S[row, column[term.index]] += term.weight
    return S


def fundamental_functions(qi: QuasiInterpolant) -> dict:
    """
    Fundamental function L_k = sum_j a_j(k) B_j of every data site k, as
    spline expansions over the indices of qi, keyed by the node index of the
    site (Greville index or knot index).
    """
    sites = _sites(qi)
    S = _stencil_matrix(qi, sites)
    return {site: SplineExpansion(qi.window, qi.first, S[:, k])
            for k, site in enumerate(sites)}


def lebesgue_values(qi: QuasiInterpolant, x) -> np.array:
    """Lambda(x) = sum_k |L_k(x)| for a point-evaluation operator."""
    sites = _sites(qi)
    S = _stencil_matrix(qi, sites)
    D = design_matrix(qi.window, x, qi.first, qi.last)
    return np.sum(np.abs(D @ S), axis=1)


def lebesgue_sample(qi: QuasiInterpolant, points_per_interval: int = 64,
                    x=None) -> LebesgueProfile:
    """
    Lebesgue function of qi on x, by default on a grid with
    points_per_interval samples per knot interval of the valid interval.

    Integral operators get the profile sum_j ||lambda_j||_1 B_j(x), an
    upper bound of their Lebesgue function that is exact when all weights
    are nonnegative. Functionals involving f'' have no Lebesgue function.
    """
    lo, hi = qi.valid_interval()
    if x is None:
        m = qi.window.degree
        x = generate_grid(qi.window.knots_between(qi.first, qi.last - m + 1),
                          points_per_interval)
    x = np.asarray(x, dtype=float)
    if qi.is_point_evaluation:
        return LebesgueProfile(x, lebesgue_values(qi, x), "exact", qi.name)
    if any(term.kind == NodeKind.SECOND_DERIVATIVE
           for fn in qi.functionals.values() for term in fn.terms):
        raise UnsupportedOperatorError(
            f"{qi.name} evaluates f'' and is unbounded on C")
    norms = np.array([fn.l1_norm for fn in qi.functionals.values()])
    D = design_matrix(qi.window, x, qi.first, qi.last)
    nonnegative = all(term.weight >= 0. for fn in qi.functionals.values()
                      for term in fn.terms)
    label = "exact" if nonnegative else "upper"
    logger.debug(f"{qi.name}: {label} Lebesgue profile on [{lo}, {hi}]")
    return LebesgueProfile(x, np.asarray(D @ norms).ravel(), label, qi.name)


def nu1_bound(qi: QuasiInterpolant) -> float:
    """nu_1(Q) = max_i ||lambda_i||_1 >= ||Q||_inf."""
    return max(fn.l1_norm for fn in qi.functionals.values())


def mesh_ratio_bound(r: float) -> float:
    """N(r) = ((1 + r)^2 + 2 r^2 / (1 + r)) / 3, a bound of ||Q3|| for mesh ratio r."""
    if r < 1.:
        raise ParameterError(f"The mesh ratio r must be >= 1, got {r}")
    return ((1. + r) ** 2 + 2. * r ** 2 / (1. + r)) / 3.


class BoundCatalog:
    """
    Closed-form bounds of nu_1 for every operator family.

    Methods
    -------
    q2_star(m): Q2*, floor((m + 4) / 2).
    qp_star(m): Qp*, (m + 1) / (m - 1).
    g2(m): G2, m + 2 for odd m and m + 3 for even m.
    gp_star(m): Gp*, 1 + C(m) / 4.
    mesh_ratio(r): Q3 on partitions of mesh ratio at most r.
    for_operator(name, m, r): the bound attached to an operator id.
    """

    @staticmethod
    def _check(m: int):
        if m < 2:
            raise ParameterError(f"The bounds need degree m >= 2, got {m}")

    @classmethod
    def q2_star(cls, m: int) -> float:
        cls._check(m)
        return float((m + 4) // 2)

    @classmethod
    def qp_star(cls, m: int) -> float:
        cls._check(m)
        return (m + 1) / (m - 1)

    @classmethod
    def g2(cls, m: int) -> float:
        cls._check(m)
        return float(m + 2 if m % 2 else m + 3)

    @classmethod
    def C(cls, m: int) -> float:
        cls._check(m)
        if m % 2 == 0:
            return m ** 2 * (m + 2) / (m - 1) ** 2
        return (m + 1) ** 2 / (m - 1)

    @classmethod
    def gp_star(cls, m: int) -> float:
        return 1. + cls.C(m) / 4.

    @staticmethod
    def c_small(m: int) -> int:
        """k^2 for m = 2k and k (k + 1) for m = 2k + 1."""
        k = m // 2
        return k * k if m % 2 == 0 else k * (k + 1)

    @staticmethod
    def mesh_ratio(r: float) -> float:
        return mesh_ratio_bound(r)

    @classmethod
    def for_operator(cls, name: str, m: int, r: float = None):
        """Bound of nu_1 for operator id name, or None when no bound is known."""
        if name == "g1":
            return 1.
        if name == "q2star":
            return cls.q2_star(m)
        if name == "qpstar":
            return cls.qp_star(m)
        if name == "g2":
            return cls.g2(m)
        if name == "gpstar":
            return cls.gp_star(m)
        if name == "q3":
            if r is None:
                raise ParameterError("The Q3 bound needs the mesh ratio r")
            return cls.mesh_ratio(r)
        return None


def section11_partition(h: float, degree: int = 3) -> KnotWindow:
    """
    Knots t_{-4}, ..., t_9 with unit steps except t_3 - t_2 = h, t_2 = 0.
    The window holds every cubic stencil touching [t_2, t_3].
    """
    if not h > 0.:
        raise ParameterError(f"The stretched step must be positive, got {h}")
    i = np.arange(SECTION11_FIRST, SECTION11_LAST + 1, dtype=float)
    knots = np.where(i <= 2, i - 2., h + i - 3.)
    return KnotWindow(knots, degree, offset=SECTION11_FIRST)


def _midpoint(window: KnotWindow) -> float:
    return 0.5 * (window.t(2) + window.t(3))


def section11_quantities(window: KnotWindow) -> dict:
    """
    Values measured on a blow-up window: the first B-spline of the stretched
    interval I = [t_2, t_3] at t_2 (alpha1), the Bernstein ordinates
    (alpha2, beta2, gamma2, delta2) of the second one on I, and the two
    B-spline values at the midpoint s of I.
    """
    alpha2, beta2, gamma2, delta2 = bernstein_coefficients(window, 3, 2)
    s = _midpoint(window)
    return {"h": window.t(3) - window.t(2),
            "alpha1": eval_B(window, 2, window.t(2)),
            "alpha2": float(alpha2), "beta2": float(beta2),
            "gamma2": float(gamma2), "delta2": float(delta2),
            "B1_s": eval_B(window, 2, s), "B2_s": eval_B(window, 3, s)}


def section11_printed(h: float) -> dict:
    """Closed forms printed for the blow-up family, keyed as section11_quantities."""
    if not h > 0.:
        raise ParameterError(f"The stretched step must be positive, got {h}")
    alpha1 = h / (3. * (1. + h))
    alpha2 = (2. * h ** 3 + h ** 2 + 9.) / (3. * (h + 1.) * (h ** 2 - h + 3.))
    delta2 = h / ((h + 1.) * (h ** 2 - h + 3.))
    gamma2 = 1. / (h ** 2 - h + 3.)
    return {"h": h, "alpha1": alpha1, "alpha2": alpha2, "beta2": 1. - gamma2,
            "gamma2": gamma2, "delta2": delta2, "B1_s": alpha1 / 8.,
            "B2_s": (4. - alpha1) / 8.}


def section11_lebesgue(h: float, points_per_interval: int = 64):
    """
    Lebesgue function of Q3 on the blow-up window of parameter h.

    Returns
    -------
    lambda_s: float
        Lambda at the midpoint s of the stretched interval.
    grid_max: float
        Largest sampled Lambda on [t_2, t_3].
    """
    window = section11_partition(h)
    qi = build_Q3_cubic(window)
    s = _midpoint(window)
    x = generate_grid([window.t(2), window.t(3)], points_per_interval)
    values = lebesgue_values(qi, np.append(x, s))
    return float(values[-1]), float(np.max(values))


def bernstein_value(ordinates, u: float) -> float:
    """Value at the local parameter u of a polynomial from its Bernstein ordinates."""
    n = len(ordinates) - 1
    return float(sum(comb(n, k) * u ** k * (1. - u) ** (n - k) * c
                     for k, c in enumerate(ordinates)))
