# -*- coding: utf-8 -*-

"""
This module implements the knot window, a finite slice of a conceptually
bi-infinite strictly increasing knot sequence, together with all scalar
quantities derived from knots: steps, Greville abscissas and their
normalized powers, elementary and complete symmetric functions, B-spline
moments and divided differences.

Indices are global: the knot t_i is stored in slot i - offset. The set of
m consecutive knots T_j = {t_{j-m+1}, ..., t_j} drives everything else:
the Greville abscissa theta_j is the mean of T_j, and the moments of the
normalized M-spline M_j (degree m - 2, support [t_{j-m+1}, t_j]) are
complete symmetric functions of T_j.

Examples
--------
.. code-block:: Python

    import numpy as np
    from spline_QI.knotcalc import KnotWindow, greville, moments

    window = KnotWindow(np.arange(12.), degree=3)
    table = greville(window)
    print(table.theta_at(5), table.bar2_at(5))  # 4.0, 1/3

    mu = moments(window, 2)
    print(mu.at(5, 1))  # equals theta_5
"""

import logging

import numpy as np
from dataclasses import dataclass
from scipy.special import comb

from .errors import (DegenerateNodesError, KnotFileError, ParameterError,
                     UnsupportedDegreeError, WindowBoundsError)

logger = logging.getLogger(__name__)


class KnotWindow:
    """
    Strictly increasing knots t_offset, ..., t_{offset+n-1} and a degree m.

    The knots are copied and frozen at construction, so a window can be
    shared between threads.

    Params
    ----------
    knots:
        Abscissas, strictly increasing.

    degree: int
        Degree m of the B-splines B_j built on the window.

    offset: int
        Global index of the first stored knot.

    Attributes
    ----------
    first, last: int
        Global indices of the first and last stored knots.

    Methods
    ----------
    t(i), h(i):
        Knot t_i and step h_i = t_i - t_{i-1}.

    T(j):
        The m knots t_{j-m+1}, ..., t_j.

    valid_range(reach):
        Indices j such that B_j and theta_{j-reach}, ..., theta_{j+reach}
        all live inside the window.
    """

    def __init__(self, knots, degree: int, offset: int = 0):
        knots = np.array(knots, dtype=float).ravel()
        degree = int(degree)
        if degree < 1:
            raise UnsupportedDegreeError(
                f"The degree must be at least 1, got {degree}")
        if len(knots) < degree + 2:
            raise ParameterError(
                f"A window of degree {degree} needs at least {degree + 2} "
                f"knots, got {len(knots)}")
        if not np.all(np.isfinite(knots)):
            raise ParameterError("Knots must be finite")
        steps = np.diff(knots)
        if np.any(steps <= 0.):
            bad = int(np.argmax(steps <= 0.))
            raise ParameterError(
                f"Knots must be strictly increasing: t_{offset + bad + 1} = "
                f"{knots[bad + 1]!r} does not exceed t_{offset + bad} = "
                f"{knots[bad]!r}")
        knots.flags.writeable = False
        self._knots = knots
        self.degree = degree
        self.offset = int(offset)

    @property
    def knots(self) -> np.array:
        return self._knots

    @property
    def m(self) -> int:
        return self.degree

    @property
    def first(self) -> int:
        return self.offset

    @property
    def last(self) -> int:
        return self.offset + len(self._knots) - 1

    def __len__(self):
        return len(self._knots)

    def __repr__(self):
        return (f"KnotWindow(n={len(self)}, degree={self.degree}, "
                f"offset={self.offset}, span=[{self._knots[0]!r}, "
                f"{self._knots[-1]!r}])")

    def _slot(self, i: int) -> int:
        if i < self.first or i > self.last:
            raise WindowBoundsError(
                f"Knot index {i} outside window [{self.first}, {self.last}]")
        return i - self.offset

    def t(self, i: int) -> float:
        return float(self._knots[self._slot(i)])

    def h(self, i: int) -> float:
        return self.t(i) - self.t(i - 1)

    def knots_between(self, a: int, b: int) -> np.array:
        """Knots t_a, ..., t_b (inclusive)."""
        lo = self._slot(a)
        hi = self._slot(b)
        return self._knots[lo:hi + 1]

    def T(self, j: int) -> np.array:
        return self.knots_between(j - self.degree + 1, j)

    def basis_range(self):
        """First and last j whose B_j support [t_{j-m}, t_{j+1}] is stored."""
        return self.first + self.degree, self.last - 1

    def greville_range(self):
        """First and last j whose T_j is stored."""
        return self.first + self.degree - 1, self.last

    def valid_range(self, reach: int = 0):
        if reach < 0:
            raise ParameterError(f"The reach must be nonnegative, got {reach}")
        basis_lo, basis_hi = self.basis_range()
        grev_lo, grev_hi = self.greville_range()
        lo = max(basis_lo, grev_lo + reach)
        hi = min(basis_hi, grev_hi - reach)
        if lo > hi:
            raise WindowBoundsError(
                f"No index of {self!r} supports a stencil of reach {reach}")
        return lo, hi

    def mesh_ratio(self) -> float:
        """Largest ratio between two consecutive steps, in either order."""
        steps = np.diff(self._knots)
        if len(steps) < 2:
            return 1.
        ratios = steps[1:] / steps[:-1]
        return float(max(np.max(ratios), np.max(1. / ratios)))


def _elementary_all(values, l_max: int) -> np.array:
    """sigma_0, ..., sigma_{l_max} of values, adding one value at a time."""
    e = np.zeros(l_max + 1)
    e[0] = 1.
    for x in values:
        # Descending so that e[k - 1] still excludes x
        for k in range(l_max, 0, -1):
            e[k] += x * e[k - 1]
    return e


def _complete_all(values, l_max: int) -> np.array:
    """Complete homogeneous symmetric functions, index tuples with repetition."""
    c = np.zeros(l_max + 1)
    c[0] = 1.
    for x in values:
        # Ascending so that c[k - 1] already includes x
        for k in range(1, l_max + 1):
            c[k] += x * c[k - 1]
    return c


def elem_sym(window: KnotWindow, j: int, l: int) -> float:
    """
    Elementary symmetric function sigma_l(T_j).

    sigma_0 = 1 (empty product) and sigma_l = 0 for l > m.

    Parameters
    ----------
    window: KnotWindow
    j: int
        Global index of the knot set T_j.
    l: int
        Order, nonnegative.

    Returns
    -------
    sigma: float
    """
    if l < 0:
        raise ParameterError(f"The order must be nonnegative, got {l}")
    return float(_elementary_all(window.T(j), l)[l])


def ext_sym(window: KnotWindow, j: int, l: int) -> float:
    """
    Extended (complete homogeneous) symmetric function of T_j, sum over
    non-decreasing index tuples; the value for l = 0 is 1.
    """
    if l < 0:
        raise ParameterError(f"The order must be nonnegative, got {l}")
    return float(_complete_all(window.T(j), l)[l])


def omega(window: KnotWindow, j: int) -> float:
    """Sum of (t_r - t_s)^2 over all pairs r < s of T_j."""
    x = window.T(j)
    diff = x[:, None] - x[None, :]
    return float(np.sum(np.triu(diff, 1) ** 2))


@dataclass(frozen=True, eq=False)
class GrevilleTable:
    """
    Greville abscissas theta_i, normalized powers
    theta_i^(l) = sigma_l(T_i) / C(m, l) and
    theta_bar_i^(2) = theta_i^2 - theta_i^(2) for consecutive indices
    first, first + 1, ...
    """
    degree: int
    first: int
    theta: np.array
    theta_pow: np.array
    theta_bar2: np.array

    @property
    def last(self) -> int:
        return self.first + len(self.theta) - 1

    def __contains__(self, i):
        return self.first <= i <= self.last

    def _row(self, i: int) -> int:
        if i not in self:
            raise WindowBoundsError(
                f"Greville index {i} outside [{self.first}, {self.last}]")
        return i - self.first

    def theta_at(self, i: int) -> float:
        return float(self.theta[self._row(i)])

    def pow_at(self, i: int, l: int) -> float:
        if l < 0 or l > self.degree:
            raise ParameterError(
                f"theta^(l) is defined for 0 <= l <= {self.degree}, got {l}")
        return float(self.theta_pow[self._row(i), l])

    def bar2_at(self, i: int) -> float:
        return float(self.theta_bar2[self._row(i)])

    def delta(self, i: int) -> float:
        """theta_{i+1} - theta_i."""
        return self.theta_at(i + 1) - self.theta_at(i)


def greville(window: KnotWindow) -> GrevilleTable:
    m = window.degree
    lo, hi = window.greville_range()
    indices = range(lo, hi + 1)
    binomials = np.array([comb(m, l, exact=True) for l in range(m + 1)],
                         dtype=float)
    theta_pow = np.empty((len(indices), m + 1))
    theta_bar2 = np.zeros(len(indices))
    for row, j in enumerate(indices):
        theta_pow[row] = _elementary_all(window.T(j), m) / binomials
        if m >= 2:
            theta_bar2[row] = omega(window, j) / (m ** 2 * (m - 1))
    theta = theta_pow[:, 1].copy()
    for array in (theta, theta_pow, theta_bar2):
        array.flags.writeable = False
    return GrevilleTable(degree=m, first=lo, theta=theta, theta_pow=theta_pow,
                         theta_bar2=theta_bar2)


@dataclass(frozen=True, eq=False)
class MomentTable:
    """mu_j^(l), the integral of x^l M_j(x), for l = 0, ..., l_max."""
    degree: int
    first: int
    mu: np.array

    @property
    def last(self) -> int:
        return self.first + self.mu.shape[0] - 1

    @property
    def l_max(self) -> int:
        return self.mu.shape[1] - 1

    def __contains__(self, j):
        return self.first <= j <= self.last

    def at(self, j: int, l: int) -> float:
        if j not in self:
            raise WindowBoundsError(
                f"Moment index {j} outside [{self.first}, {self.last}]")
        if l < 0 or l > self.l_max:
            raise ParameterError(
                f"Moments were tabulated up to order {self.l_max}, got {l}")
        return float(self.mu[j - self.first, l])


def moments(window: KnotWindow, l_max: int) -> MomentTable:
    """
    Closed-form moments mu_j^(l) = sigma_bar_l(T_j) / C(m + l - 1, l) of the
    normalized M-splines, for every j whose T_j is stored.

    Parameters
    ----------
    window: KnotWindow
        Window of degree m >= 2.

    l_max: int
        Highest order tabulated.

    Returns
    -------
    table: MomentTable
    """
    m = window.degree
    if m < 2:
        raise UnsupportedDegreeError(
            f"M-spline moments need degree m >= 2, got {m}")
    if l_max < 0:
        raise ParameterError(f"l_max must be nonnegative, got {l_max}")
    lo, hi = window.greville_range()
    binomials = np.array([comb(m + l - 1, l, exact=True)
                          for l in range(l_max + 1)], dtype=float)
    mu = np.empty((hi - lo + 1, l_max + 1))
    for row, j in enumerate(range(lo, hi + 1)):
        mu[row] = _complete_all(window.T(j), l_max) / binomials
    mu.flags.writeable = False
    return MomentTable(degree=m, first=lo, mu=mu)


def divided_difference(nodes, values) -> float:
    """
    Divided difference [x_0, ..., x_n]f of the data (nodes, values), by the
    Newton table recursion.
    """
    nodes = np.asarray(nodes, dtype=float).ravel()
    coef = np.array(values, dtype=float).ravel()
    if len(nodes) != len(coef):
        raise ParameterError(
            f"Got {len(nodes)} nodes but {len(coef)} values")
    if len(nodes) == 0:
        raise ParameterError("A divided difference needs at least one node")
    if len(np.unique(nodes)) != len(nodes):
        raise DegenerateNodesError(f"Repeated nodes in {nodes.tolist()}")
    for k in range(1, len(nodes)):
        coef[k:] = (coef[k:] - coef[k - 1:-1]) / (nodes[k:] - nodes[:-k])
    return float(coef[-1])


def load_knots(path, degree: int, offset: int = 0) -> KnotWindow:
    """
    Read a knot file: UTF-8 text, one decimal number per line, blank lines
    and lines starting with '#' ignored, strictly increasing values.
    """
    values = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            try:
                value = float(text)
            except ValueError:
                raise KnotFileError(f"not a number: {text!r}", lineno)
            if not np.isfinite(value):
                raise KnotFileError(f"knot must be finite: {text!r}", lineno)
            if values and value <= values[-1]:
                raise KnotFileError(
                    f"knot {value!r} does not exceed previous knot "
                    f"{values[-1]!r}", lineno)
            values.append(value)
    if not values:
        raise KnotFileError(f"no knots found in {path}")
    logger.debug(f"Loaded {len(values)} knots from {path}")
    return KnotWindow(values, degree, offset)
