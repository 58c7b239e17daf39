# -*- coding: utf-8 -*-

"""
This module implements the quasi-interpolant container and the builders of
the discrete quasi-interpolants (dQIs) Qf = sum_i lambda_i(f) B_i, whose
coefficient functionals lambda_i are finite combinations of point values
of f:

* build_Q2_derivative: lambda_i(f) = f(theta_i) - theta_bar_i^(2) f''(theta_i) / 2,
* build_Q2_star: three consecutive Greville points,
* build_Qp_star: the three Greville points theta_{i-p}, theta_i, theta_{i+p},
* build_Qpq: any coefficients a_i(s), s = -p..p, exact on P_q,
* build_Q3_cubic: cubic operator on knot values t_{i-2}, t_{i-1}, t_i.

All builders keep the global B-spline indexing of knotcalc: B_i has support
[t_{i-m}, t_{i+1}]. They only build functionals whose stencil lies in the
window, and check the declared polynomial exactness on closed-form
functional values unless validate=False.

Examples
--------
.. code-block:: Python

    import numpy as np
    from spline_QI.knotcalc import KnotWindow
    from spline_QI.dqi import build_Q2_star, apply

    window = KnotWindow(np.linspace(0., 2 * np.pi, 33), degree=3)
    qi = build_Q2_star(window)
    spline = apply(qi, np.sin)
    lo, hi = qi.valid_interval()
    x = np.linspace(lo, hi, 200)
    print(np.max(np.abs(spline(x) - np.sin(x))))
"""

import logging
from types import MappingProxyType
from typing import Mapping, Optional, Tuple

import numpy as np
import pandas as pd
from dataclasses import dataclass, field
from enum import Enum

from .bspline import SplineExpansion, mspline_quadrature
from .errors import (ExactnessError, InconsistentCoefficientsError,
                     MissingDerivativeError, ParameterError, RangeError,
                     UnsupportedDegreeError, WindowBoundsError)
from .knotcalc import GrevilleTable, KnotWindow, MomentTable, greville, moments
from .utils import evaluate, sample_points

logger = logging.getLogger(__name__)


class NodeKind(str, Enum):
    GREVILLE = "greville"
    KNOT = "knot"
    SECOND_DERIVATIVE = "second_derivative"
    MSPLINE = "mspline"


POINT_KINDS = (NodeKind.GREVILLE, NodeKind.KNOT)


@dataclass(frozen=True)
class Term:
    """weight * f(theta_index), f(t_index), f''(theta_index) or <M_index, f>."""
    kind: NodeKind
    index: int
    weight: float


@dataclass(frozen=True)
class Functional:
    center: int
    terms: Tuple[Term, ...]

    @property
    def weights(self) -> np.array:
        return np.array([term.weight for term in self.terms])

    @property
    def l1_norm(self) -> float:
        return float(np.sum(np.abs(self.weights)))

    @property
    def value_weight_sum(self) -> float:
        """Sum of the weights of all terms except derivative evaluations."""
        return float(sum(term.weight for term in self.terms
                         if term.kind != NodeKind.SECOND_DERIVATIVE))

    @property
    def is_point_evaluation(self) -> bool:
        return all(term.kind in POINT_KINDS for term in self.terms)

    @property
    def is_integral(self) -> bool:
        return any(term.kind == NodeKind.MSPLINE for term in self.terms)

    def weight_of(self, kind: NodeKind, index: int) -> float:
        return float(sum(term.weight for term in self.terms
                         if term.kind == kind and term.index == index))


class DiscreteFunctional(Functional):
    """Combination of point values of f (and possibly of f'')."""


@dataclass(frozen=True, eq=False)
class QuasiInterpolant:
    """
    Indexed family of functionals lambda_first, ..., lambda_last paired
    with the B-splines B_first, ..., B_last of the window.

    Params
    ----------
    name: str
        Operator id, e.g. 'q2star' or 'gpstar'.

    window: KnotWindow

    functionals: Mapping[int, Functional]
        Consecutive indices.

    exactness: int
        Declared exactness degree q: Q p = p for all p in P_q.

    reach: int
        Largest |s| of the Greville or M-spline offsets used by a stencil.

    params: dict
        Builder parameters (p, clamped...), reported by the harness.
    """
    name: str
    window: KnotWindow
    functionals: Mapping[int, Functional]
    exactness: int
    reach: int
    params: Mapping = field(default_factory=dict)
    greville: GrevilleTable = None
    moment_table: Optional[MomentTable] = None

    def __post_init__(self):
        indices = sorted(self.functionals)
        if not indices:
            raise WindowBoundsError(
                f"{self.name}: no index of {self.window!r} has a full stencil")
        if indices != list(range(indices[0], indices[-1] + 1)):
            raise ParameterError(f"{self.name}: indices must be consecutive")
        object.__setattr__(self, "functionals", MappingProxyType(
            {j: self.functionals[j] for j in indices}))
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        if self.greville is None:
            object.__setattr__(self, "greville", greville(self.window))
        if self.moment_table is None and self.is_integral:
            object.__setattr__(self, "moment_table", moments(
                self.window, max(self.exactness, self.window.degree) + 1))

    @property
    def first(self) -> int:
        return next(iter(self.functionals))

    @property
    def last(self) -> int:
        return self.first + len(self.functionals) - 1

    @property
    def indices(self):
        return range(self.first, self.last + 1)

    @property
    def is_integral(self) -> bool:
        return any(fn.is_integral for fn in self.functionals.values())

    @property
    def is_point_evaluation(self) -> bool:
        return all(fn.is_point_evaluation for fn in self.functionals.values())

    def valid_interval(self):
        """Closed interval where every active B-spline has a functional."""
        m = self.window.degree
        if self.last - self.first < m:
            raise RangeError(
                f"{self.name}: {len(self.functionals)} functionals do not "
                f"cover a knot interval for degree {m}")
        return self.window.t(self.first), self.window.t(self.last - m + 1)

    def node_location(self, term: Term) -> float:
        if term.kind in (NodeKind.GREVILLE, NodeKind.SECOND_DERIVATIVE):
            return self.greville.theta_at(term.index)
        if term.kind == NodeKind.KNOT:
            return self.window.t(term.index)
        raise ParameterError(f"{term.kind.value} terms have no single node")

    def coefficient_frame(self) -> pd.DataFrame:
        """One row per term: index, node kind, node index, offset, abscissa, weight."""
        rows = []
        for j, fn in self.functionals.items():
            for term in fn.terms:
                location = (np.nan if term.kind == NodeKind.MSPLINE
                            else self.node_location(term))
                rows.append({"index": j, "node": term.kind.value,
                             "node_index": term.index,
                             "offset": term.index - j,
                             "location": location, "weight": term.weight})
        return pd.DataFrame(rows, columns=["index", "node", "node_index",
                                           "offset", "location", "weight"])


def functional_moment(qi: QuasiInterpolant, fn: Functional, r: int) -> float:
    """
    Closed-form value of the functional on the monomial e_r(x) = x^r
    (M-spline terms use the tabulated moments, never quadrature).
    """
    total = 0.
    for term in fn.terms:
        if term.kind == NodeKind.MSPLINE:
            if qi.moment_table is None or r > qi.moment_table.l_max:
                raise ParameterError(f"No moment of order {r} tabulated")
            value = qi.moment_table.at(term.index, r)
        elif term.kind == NodeKind.SECOND_DERIVATIVE:
            value = (r * (r - 1) * qi.node_location(term) ** (r - 2)
                     if r >= 2 else 0.)
        else:
            value = qi.node_location(term) ** r
        total += term.weight * value
    return total


def exactness_errors(qi: QuasiInterpolant, degrees, n_points: int = 200):
    """
    Max deviation |Q e_r - e_r| on n_points evenly spaced abscissas of the
    valid interval, for each r in degrees.

    Returns
    -------
    errors: list of (r, max error, max |e_r| on the samples)
    """
    m = qi.window.degree
    lo, hi = qi.valid_interval()
    x = sample_points(lo, hi, n_points)
    results = []
    for r in degrees:
        if r > m:
            raise ParameterError(
                f"A spline of degree {m} cannot reproduce e_{r}")
        coeffs = [functional_moment(qi, qi.functionals[j], r)
                  for j in qi.indices]
        spline = SplineExpansion(qi.window, qi.first, coeffs)
        target = x ** r
        results.append((r, float(np.max(np.abs(spline(x) - target))),
                        float(np.max(np.abs(target)))))
    return results


def validate_exactness(qi: QuasiInterpolant, tol: float = 1e-9,
                       n_points: int = 200) -> QuasiInterpolant:
    for r, error, scale in exactness_errors(qi, range(qi.exactness + 1),
                                            n_points):
        if error > tol * (1. + scale):
            raise ExactnessError(
                f"{qi.name} is declared exact on P_{qi.exactness} but "
                f"|Q e_{r} - e_{r}| = {error:.3e} on {qi.window!r}")
    return qi


def _finish(qi: QuasiInterpolant, validate: bool) -> QuasiInterpolant:
    logger.debug(f"Built {qi.name} on indices {qi.first}..{qi.last} "
                 f"of {qi.window!r}")
    if validate:
        validate_exactness(qi)
    return qi


def _require_degree(window: KnotWindow, name: str, minimum: int = 2):
    if window.degree < minimum:
        raise UnsupportedDegreeError(
            f"{name} needs degree m >= {minimum}, got {window.degree}")


def _require_p(window: KnotWindow, p: int, name: str) -> int:
    if int(p) != p:
        raise ParameterError(f"p must be an integer, got {p!r}")
    p = int(p)
    if p < window.degree:
        raise ParameterError(
            f"{name} needs p >= m = {window.degree}, got p = {p}")
    return p


def build_Q2_derivative(window: KnotWindow, validate: bool = True) \
        -> QuasiInterpolant:
    _require_degree(window, "Q2")
    table = greville(window)
    lo, hi = window.valid_range(0)
    functionals = {}
    for j in range(lo, hi + 1):
        functionals[j] = DiscreteFunctional(j, (
            Term(NodeKind.GREVILLE, j, 1.),
            Term(NodeKind.SECOND_DERIVATIVE, j, -0.5 * table.bar2_at(j))))
    qi = QuasiInterpolant("q2", window, functionals, exactness=2, reach=0,
                          greville=table)
    return _finish(qi, validate)


def build_Q2_star(window: KnotWindow, validate: bool = True) \
        -> QuasiInterpolant:
    """
    Divided-difference version of Q2: f''(theta_j) / 2 is replaced by the
    divided difference [theta_{j-1}, theta_j, theta_{j+1}]f, so that

        lambda_j(f) = a_j f(theta_{j-1}) + b_j f(theta_j) + c_j f(theta_{j+1})

    with a_j = -tb / (d0 (d0 + d1)), b_j = 1 + tb / (d0 d1),
    c_j = -tb / (d1 (d0 + d1)), tb = theta_bar_j^(2),
    d0 = theta_j - theta_{j-1} and d1 = theta_{j+1} - theta_j.
    """
    _require_degree(window, "Q2*")
    table = greville(window)
    lo, hi = window.valid_range(1)
    functionals = {}
    for j in range(lo, hi + 1):
        tb = table.bar2_at(j)
        d0 = table.delta(j - 1)
        d1 = table.delta(j)
        functionals[j] = DiscreteFunctional(j, (
            Term(NodeKind.GREVILLE, j - 1, -tb / (d0 * (d0 + d1))),
            Term(NodeKind.GREVILLE, j, 1. + tb / (d0 * d1)),
            Term(NodeKind.GREVILLE, j + 1, -tb / (d1 * (d0 + d1)))))
    qi = QuasiInterpolant("q2star", window, functionals, exactness=2,
                          reach=1, greville=table)
    return _finish(qi, validate)


def qp_star_weights(table: GrevilleTable, i: int, p: int):
    """Cramer solution (a(-p), a(0), a(p)) of the three moment equations."""
    tb = table.bar2_at(i)
    left = table.theta_at(i) - table.theta_at(i - p)
    right = table.theta_at(i + p) - table.theta_at(i)
    total = left + right
    return (-tb / (total * left), 1. + tb / (left * right),
            -tb / (total * right))


def build_Qp_star(window: KnotWindow, p: int, validate: bool = True) \
        -> QuasiInterpolant:
    _require_degree(window, "Qp*")
    p = _require_p(window, p, "Qp*")
    table = greville(window)
    lo, hi = window.valid_range(p)
    functionals = {}
    for i in range(lo, hi + 1):
        a_left, a_mid, a_right = qp_star_weights(table, i, p)
        functionals[i] = DiscreteFunctional(i, (
            Term(NodeKind.GREVILLE, i - p, a_left),
            Term(NodeKind.GREVILLE, i, a_mid),
            Term(NodeKind.GREVILLE, i + p, a_right)))
    qi = QuasiInterpolant("qpstar", window, functionals, exactness=2,
                          reach=p, params={"p": p}, greville=table)
    return _finish(qi, validate)


def constraint_system(table: GrevilleTable, i: int, p: int, q: int):
    """
    Exactness system V a = b of a stencil theta_{i-p}, ..., theta_{i+p}:
    V[r, s + p] = theta_{i+s}^r and b[r] = theta_i^(r), r = 0..q.
    """
    if q < 0 or q > table.degree:
        raise ParameterError(
            f"q must lie in [0, {table.degree}] for degree {table.degree}, "
            f"got {q}")
    nodes = np.array([table.theta_at(i + s) for s in range(-p, p + 1)])
    V = nodes[None, :] ** np.arange(q + 1)[:, None]
    b = np.array([table.pow_at(i, r) for r in range(q + 1)])
    return V, b


def check_coefficients(V, b, a, tol: float, index: int):
    residual = np.abs(V @ a - b) / (1. + np.abs(b))
    worst = int(np.argmax(residual))
    if residual[worst] > tol:
        raise InconsistentCoefficientsError(
            f"Coefficients of index {index} violate exactness row {worst}: "
            f"worst residual {residual[worst]:.3e} > {tol:.1e}",
            index=index, residual=float(residual[worst]))


def build_Qpq(window: KnotWindow, p: int, q: int, coeffs: Mapping,
              tol: float = 1e-8, validate: bool = True) -> QuasiInterpolant:
    """
    General dQI lambda_i(f) = sum_{s=-p}^{p} a_i(s) f(theta_{i+s}).

    Parameters
    ----------
    window: KnotWindow
    p: int
        Stencil half-width.
    q: int
        Exactness degree enforced by the coefficients.
    coeffs: Mapping
        Index i -> vector (a_i(-p), ..., a_i(p)) of 2p + 1 reals.
    tol: float
        Tolerance on the relative residual of V a = b.

    Returns
    -------
    qi: QuasiInterpolant
    """
    _require_degree(window, "Q_{p,q}", minimum=1)
    if p < 0:
        raise ParameterError(f"p must be nonnegative, got {p}")
    table = greville(window)
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
        V, b = constraint_system(table, i, p, q)
        check_coefficients(V, b, a, tol, i)
        functionals[i] = DiscreteFunctional(i, tuple(
            Term(NodeKind.GREVILLE, i + s, float(a[s + p]))
            for s in range(-p, p + 1) if a[s + p] != 0.))
    qi = QuasiInterpolant("qpq", window, functionals, exactness=q, reach=p,
                          params={"p": p, "q": q}, greville=table)
    return _finish(qi, validate)


def q3_weights(h_left: float, h_right: float):
    """Weights of f(t_{i-1}), f(t_i), f(t_{i+1}) for steps h_left, h_right."""
    total = h_left + h_right
    return (-h_right ** 2 / (3. * h_left * total),
            total ** 2 / (3. * h_left * h_right),
            -h_left ** 2 / (3. * h_right * total))


def build_Q3_cubic(window: KnotWindow, validate: bool = True) \
        -> QuasiInterpolant:
    """
    Cubic dQI on knot values, exact on P_3. The B-spline centred at t_{j-1}
    is B_j in the indexing used here, so lambda_j combines
    f(t_{j-2}), f(t_{j-1}) and f(t_j).
    """
    if window.degree != 3:
        raise UnsupportedDegreeError(
            f"Q3 is a cubic operator, got degree {window.degree}")
    lo, hi = window.basis_range()
    functionals = {}
    for j in range(lo, hi + 1):
        a, b, c = q3_weights(window.h(j - 1), window.h(j))
        functionals[j] = DiscreteFunctional(j, (
            Term(NodeKind.KNOT, j - 2, a),
            Term(NodeKind.KNOT, j - 1, b),
            Term(NodeKind.KNOT, j, c)))
    qi = QuasiInterpolant("q3", window, functionals, exactness=3, reach=0)
    return _finish(qi, validate)


def _term_values(qi: QuasiInterpolant, f, d2f, n_nodes):
    keys = sorted({(term.kind, term.index)
                   for fn in qi.functionals.values() for term in fn.terms})
    values = {}

    points = [key for key in keys if key[0] in POINT_KINDS]
    if points:
        x = np.array([qi.node_location(Term(kind, index, 0.))
                      for kind, index in points])
        values.update(zip(points, evaluate(f, x)))

    derivatives = [key for key in keys
                   if key[0] == NodeKind.SECOND_DERIVATIVE]
    if derivatives:
        if d2f is None:
            raise MissingDerivativeError(
                f"{qi.name} evaluates f'' and needs d2f")
        x = np.array([qi.greville.theta_at(index)
                      for _, index in derivatives])
        values.update(zip(derivatives, evaluate(d2f, x)))

    splines = [key for key in keys if key[0] == NodeKind.MSPLINE]
    if splines:
        rules = [mspline_quadrature(qi.window, index, n_nodes)
                 for _, index in splines]
        fx = evaluate(f, np.concatenate([x for x, _ in rules]))
        start = 0
        for key, (x, w) in zip(splines, rules):
            values[key] = float(np.dot(w, fx[start:start + len(x)]))
            start += len(x)
    return values


def apply(qi: QuasiInterpolant, f, d2f=None, n_nodes: int = None) \
        -> SplineExpansion:
    """
    Qf as a spline expansion.

    Parameters
    ----------
    qi: QuasiInterpolant
    f: callable
        Evaluated on numpy arrays of abscissas when possible.
    d2f: callable
        Second derivative of f, required by Q2 only.
    n_nodes: int
        Gauss-Legendre nodes per knot interval for M-spline terms.

    Returns
    -------
    expansion: SplineExpansion
    """
    values = _term_values(qi, f, d2f, n_nodes)
    coeffs = [sum(term.weight * values[(term.kind, term.index)]
                  for term in qi.functionals[j].terms)
              for j in qi.indices]
    return SplineExpansion(qi.window, qi.first, coeffs)
