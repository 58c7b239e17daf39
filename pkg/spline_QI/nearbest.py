# -*- coding: utf-8 -*-

"""
Near-best quasi-interpolants: for every index i, the coefficients
a_i = (a_i(-p), ..., a_i(p)) of smallest l1 norm subject to the exactness
constraints V a = b, where V holds the powers theta_{i+s}^r (discrete
functionals) or the moments mu_{i+s}^(r) (integral functionals) for
r = 0..q, and b holds theta_i^(r). Both systems are stored in the local
frame of their stencil (see localize).

The module provides

* L1Problem / L1Solution and the exhaustive vertex solver solve_l1,
* watson_verify, the l1 optimality check of a candidate with a dual vector,
* the explicit three-point certificates of the Qp* and Gp* stencils, and
  the knot conditions under which they are valid,
* an independent linear-programming oracle (scipy HiGHS) and an LP-duality
  certificate reconstruction.

Examples
--------
.. code-block:: Python

    import numpy as np
    from spline_QI.knotcalc import KnotWindow
    from spline_QI.nearbest import (dqi_problem, solve_l1,
                                    theorem5_certificate, watson_verify)

    window = KnotWindow(np.arange(30.), degree=2)
    problem = dqi_problem(window, i=12, p=2, q=2)
    solution = solve_l1(problem)
    print(solution.objective)  # 1 + 1 / (2 p^2)

    certificate = theorem5_certificate(window, 12, 2)
    print(watson_verify(problem, solution.a_star, certificate.v).ok)
"""

import itertools
import json
import logging
from typing import Mapping

import numpy as np
import pandas as pd
from dataclasses import dataclass, field
from scipy import linalg
from scipy.optimize import linprog
from scipy.special import comb

from .dqi import build_Qpq, constraint_system
from .errors import DegenerateProblemError, ParameterError, WindowBoundsError
from .iqi import build_Gpq, moment_system
from .knotcalc import GrevilleTable, KnotWindow, MomentTable, greville, moments

logger = logging.getLogger(__name__)

RANK_TOL = 1e-10
SUPPORT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class L1Problem:
    """
    min ||a||_1 subject to V a = b, with V of shape (q + 1, 2p + 1), rows
    indexed by r = 0..q and columns by the offsets s = -p..p.
    """
    V: np.array
    b: np.array
    p: int
    q: int
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        V = np.array(self.V, dtype=float)
        b = np.array(self.b, dtype=float).ravel()
        if V.shape != (self.q + 1, 2 * self.p + 1) or b.shape != (self.q + 1,):
            raise ParameterError(
                f"Dimension mismatch: V is {V.shape}, b is {b.shape}, "
                f"expected ({self.q + 1}, {2 * self.p + 1}) and "
                f"({self.q + 1},)")
        singular = np.linalg.svd(_equilibrated(V, b)[0], compute_uv=False)
        rank = int(np.sum(singular > RANK_TOL * singular[0]))
        if rank < self.q + 1:
            raise DegenerateProblemError(
                f"V has numerical rank {rank} < q + 1 = {self.q + 1}")
        V.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "V", V)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "meta", dict(self.meta))

    @property
    def offsets(self) -> np.array:
        return np.arange(-self.p, self.p + 1)

    def column(self, s: int) -> int:
        return s + self.p

    def residual(self, a) -> float:
        """Max relative residual of V a = b."""
        a = np.asarray(a, dtype=float)
        return float(np.max(np.abs(self.V @ a - self.b) / (1. + np.abs(self.b))))

    def to_dict(self) -> dict:
        return {"V": self.V.tolist(), "b": self.b.tolist(), "p": self.p,
                "q": self.q, "meta": dict(self.meta)}

    def to_json(self, path=None) -> str:
        text = json.dumps(self.to_dict(), indent=2)
        if path is not None:
            with open(path, "w", encoding="utf-8") as f:
                f.write(text)
        return text

    @classmethod
    def from_dict(cls, data: dict):
        missing = {"V", "b", "p", "q"} - set(data)
        if missing:
            raise ParameterError(f"Problem dump misses keys {sorted(missing)}")
        return cls(np.array(data["V"], dtype=float), data["b"],
                   int(data["p"]), int(data["q"]), data.get("meta", {}))

    @classmethod
    def from_json(cls, text: str):
        return cls.from_dict(json.loads(text))


def _equilibrated(V, b):
    """Rows of V a = b divided by their largest coefficient."""
    scale = np.max(np.abs(V), axis=1)
    scale[scale == 0.] = 1.
    return V / scale[:, None], b / scale


def local_frame(nodes, center: float):
    """center and the largest distance from it to the stencil nodes."""
    scale = float(np.max(np.abs(np.asarray(nodes, dtype=float) - center)))
    if not scale > 0.:
        raise DegenerateProblemError("The stencil nodes coincide")
    return center, scale


def localize(V, b, center: float, scale: float):
    """
    Rewrite the monomial rows r = 0..q of V a = b for the monomials
    ((x - center) / scale)^r. The rows are combined by an invertible lower
    triangular matrix, so the feasible set and the null space of V are
    unchanged.
    """
    q = V.shape[0] - 1
    L = np.zeros((q + 1, q + 1))
    for r in range(q + 1):
        for k in range(r + 1):
            L[r, k] = comb(r, k, exact=True) * (-center) ** (r - k) / scale ** r
    return L @ V, L @ b


def _stencil_frame(table: GrevilleTable, i: int, p: int):
    nodes = [table.theta_at(i + s) for s in range(-p, p + 1)]
    return local_frame(nodes, table.theta_at(i))


def dqi_problem(window: KnotWindow, i: int, p: int, q: int,
                table: GrevilleTable = None) -> L1Problem:
    """
    Exactness system of the discrete stencil at i, written in the local
    frame x -> (x - theta_i) / scale of the stencil; meta records origin
    and scale.
    """
    table = greville(window) if table is None else table
    center, scale = _stencil_frame(table, i, p)
    V, b = localize(*constraint_system(table, i, p, q), center, scale)
    return L1Problem(V, b, p, q, meta={"family": "dqi", "center": i,
                                       "degree": window.degree,
                                       "origin": center, "scale": scale})


def iqi_problem(window: KnotWindow, i: int, p: int, q: int,
                table: GrevilleTable = None,
                mu: MomentTable = None) -> L1Problem:
    table = greville(window) if table is None else table
    mu = moments(window, max(q, 2)) if mu is None else mu
    center, scale = _stencil_frame(table, i, p)
    W, b = localize(*moment_system(table, mu, i, p, q), center, scale)
    return L1Problem(W, b, p, q, meta={"family": "iqi", "center": i,
                                       "degree": window.degree,
                                       "origin": center, "scale": scale})


@dataclass(frozen=True, eq=False)
class L1Solution:
    a_star: np.array
    objective: float
    support: frozenset
    p: int

    @property
    def support_offsets(self):
        return sorted(k - self.p for k in self.support)


def _support(a) -> frozenset:
    norm = np.sum(np.abs(a))
    return frozenset(int(k) for k in np.flatnonzero(
        np.abs(a) > SUPPORT_TOL * norm))


def solve_l1(problem: L1Problem) -> L1Solution:
    """
    Global minimizer of ||a||_1 subject to V a = b with at most q + 1
    nonzeros.

    Every subset of q + 1 columns is tried in lexicographic order; the
    nonsingular square subsystems are solved and the feasible vertex of
    least l1 norm is kept. A later vertex replaces the current one only if
    it is strictly better, so ties go to the lexicographically smallest
    column subset.
    """
    V, b = _equilibrated(problem.V, problem.b)
    n = V.shape[1]
    best, best_objective = None, np.inf
    for columns in itertools.combinations(range(n), problem.q + 1):
        sub = V[:, columns]
        singular = np.linalg.svd(sub, compute_uv=False)
        if singular[-1] <= RANK_TOL * singular[0]:
            continue
        x = np.linalg.solve(sub, b)
        objective = float(np.sum(np.abs(x)))
        if best is None or \
                objective < best_objective - 1e-12 * max(1., best_objective):
            best, best_objective = (columns, x), objective
    if best is None:
        raise DegenerateProblemError("No nonsingular square subsystem")
    a = np.zeros(n)
    a[list(best[0])] = best[1]
    return L1Solution(a_star=a, objective=best_objective,
                      support=_support(a), p=problem.p)


@dataclass(frozen=True, eq=False)
class Certificate:
    """
    Dual vector v over the offsets -p..p, with the stencil parameters it
    was built from when it comes from an explicit construction.
    """
    v: np.array
    source: str = ""
    parameters: object = None


@dataclass(frozen=True)
class Verification:
    ok: bool
    message: str
    norm_excess: float = 0.
    null_residual: float = 0.
    sign_mismatch: float = 0.

    def __bool__(self):
        return self.ok


def watson_verify(problem: L1Problem, a, v, A=None,
                  inf_tol: float = 1e-10, null_tol: float = 1e-9,
                  sign_tol: float = 1e-9) -> Verification:
    """
    Check that the feasible point a minimizes ||a||_1 over V a = b, using
    the dual vector v: ||v||_inf <= 1, A^T v = 0 for a matrix A whose
    columns span the null space of V, and v_k = sign(a_k) wherever a_k is
    nonzero.

    Parameters
    ----------
    problem: L1Problem
    a: np.array
        Candidate of length 2p + 1.
    v: np.array
        Dual vector of length 2p + 1.
    A: np.array
        Null-space parametrization; an orthonormal basis of ker V when
        omitted.

    Returns
    -------
    verification: Verification
        Truthy iff all conditions hold; message names the first violation.
    """
    n = 2 * problem.p + 1
    a = np.asarray(a, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if a.shape != (n,) or v.shape != (n,):
        raise ParameterError(
            f"Dimension mismatch: expected vectors of length {n}, got "
            f"{a.shape} and {v.shape}")
    residual = problem.residual(a)
    if residual > 1e-9:
        return Verification(False, f"candidate infeasible: residual "
                                   f"{residual:.3e}")

    norm_excess = float(np.max(np.abs(v)) - 1.)
    if A is None:
        A = linalg.null_space(problem.V)
    A = np.asarray(A, dtype=float)
    if A.size:
        scale = np.maximum(np.linalg.norm(A, axis=0), 1e-300)
        null_residual = float(np.max(np.abs(A.T @ v) / scale))
    else:
        null_residual = 0.
    nonzero = np.abs(a) > SUPPORT_TOL * np.sum(np.abs(a))
    mismatch = (float(np.max(np.abs(v[nonzero] - np.sign(a[nonzero]))))
                if np.any(nonzero) else 0.)

    diagnostics = dict(norm_excess=norm_excess, null_residual=null_residual,
                       sign_mismatch=mismatch)
    if norm_excess > inf_tol:
        return Verification(False, f"||v||_inf > 1: ||v||_inf = "
                                   f"{1. + norm_excess:.17g}", **diagnostics)
    if null_residual > null_tol:
        return Verification(False, f"A^T v != 0: max |A^T v| = "
                                   f"{null_residual:.3e}", **diagnostics)
    if mismatch > sign_tol:
        return Verification(False, f"sign mismatch on the support: "
                                   f"{mismatch:.3e}", **diagnostics)
    return Verification(True, "certificate valid", **diagnostics)


@dataclass(frozen=True)
class StencilParameters:
    """
    Coefficients of the general solution of the three-row system with free
    unknowns a(j), j in K1 = {-p+1..-1} and K2 = {1..p-1}:

        a(-p) = a*(-p) - sum_K1 alpha_j a(j) + sum_K2 alpha_j a(j)
        a(0)  = a*(0)  - sum_K1 beta_j a(j)  - sum_K2 beta_j a(j)
        a(p)  = a*(p)  + sum_K1 gamma_j a(j) - sum_K2 gamma_j a(j)
    """
    p: int
    determinant: float
    alpha: Mapping
    beta: Mapping
    gamma: Mapping

    @property
    def free_offsets(self):
        return [j for j in range(-self.p + 1, self.p) if j != 0]


def stencil_parameters(problem: L1Problem) -> StencilParameters:
    """
    alpha, beta, gamma as ratios W(k, l, n) / W of 3 x 3 determinants of
    the columns k < l < n of V, with W = W(-p, 0, p).
    """
    if problem.q != 2:
        raise ParameterError(
            f"Three-point stencil parameters need q = 2, got {problem.q}")
    p = problem.p

    def W(k, l, n):
        return float(linalg.det(problem.V[:, [k + p, l + p, n + p]]))

    det = W(-p, 0, p)
    if abs(det) <= RANK_TOL * np.max(np.abs(problem.V)) ** 2:
        raise DegenerateProblemError(
            f"The columns -p, 0, p are singular: W = {det:.3e}")
    alpha, beta, gamma = {}, {}, {}
    for r in range(-p + 1, 0):
        alpha[r] = W(r, 0, p) / det
        beta[r] = W(-p, r, p) / det
        gamma[r] = W(-p, r, 0) / det
    for s in range(1, p):
        alpha[s] = W(0, s, p) / det
        beta[s] = W(-p, s, p) / det
        gamma[s] = W(-p, 0, s) / det
    return StencilParameters(p, det, alpha, beta, gamma)


def watson_matrix(parameters: StencilParameters) -> np.array:
    """
    The (2p + 1) x (2p - 2) matrix A of the parametrization a = a* - A a~,
    columns ordered K1 then K2; V A = 0.
    """
    p = parameters.p
    columns = parameters.free_offsets
    A = np.zeros((2 * p + 1, len(columns)))
    for c, j in enumerate(columns):
        sign = 1. if j < 0 else -1.
        A[0, c] = sign * parameters.alpha[j]
        A[j + p, c] = -1.
        A[p, c] = parameters.beta[j]
        A[2 * p, c] = -sign * parameters.gamma[j]
    return A


def certificate_from_parameters(parameters: StencilParameters,
                                source: str = "") -> Certificate:
    """
    v(-p) = -1, v(0) = 1, v(p) = -1, v(j) = -alpha + beta + gamma on K1 and
    alpha + beta - gamma on K2.
    """
    p = parameters.p
    v = np.zeros(2 * p + 1)
    v[0], v[p], v[2 * p] = -1., 1., -1.
    for j in parameters.free_offsets:
        al, be, ga = parameters.alpha[j], parameters.beta[j], parameters.gamma[j]
        v[j + p] = -al + be + ga if j < 0 else al + be - ga
    return Certificate(v, source=source, parameters=parameters)


def greville_stencil_parameters(window: KnotWindow, i: int, p: int,
                              table: GrevilleTable = None) -> StencilParameters:
    """
    Closed forms of alpha, beta, gamma for the Greville power system, with
    the determinant taken in the local frame of dqi_problem.
    """
    table = greville(window) if table is None else table
    center, scale = _stencil_frame(table, i, p)
    th = {s: (table.theta_at(i + s) - center) / scale
          for s in range(-p, p + 1)}
    left = th[0] - th[-p]
    right = th[p] - th[0]
    total = th[p] - th[-p]
    alpha, beta, gamma = {}, {}, {}
    for j in range(-p + 1, p):
        if j == 0:
            continue
        if j < 0:
            alpha[j] = (th[0] - th[j]) * (th[p] - th[j]) / (left * total)
            gamma[j] = (th[j] - th[-p]) * (th[0] - th[j]) / (total * right)
        else:
            alpha[j] = (th[j] - th[0]) * (th[p] - th[j]) / (left * total)
            gamma[j] = (th[j] - th[-p]) * (th[j] - th[0]) / (total * right)
        beta[j] = (th[j] - th[-p]) * (th[p] - th[j]) / (left * right)
    det = left * right * total
    return StencilParameters(p, det, alpha, beta, gamma)


def _check_reach(window: KnotWindow, i: int, p: int):
    lo, hi = window.valid_range(p)
    if i < lo or i > hi:
        raise WindowBoundsError(
            f"Index {i} has no full stencil of reach {p}; valid indices are "
            f"{lo}..{hi}")


def theorem5_certificate(window: KnotWindow, i: int, p: int,
                         table: GrevilleTable = None) -> Certificate:
    """Explicit dual vector for the Qp* coefficients at index i."""
    if p < 1:
        raise ParameterError(f"p must be positive, got {p}")
    _check_reach(window, i, p)
    parameters = greville_stencil_parameters(window, i, p, table)
    return certificate_from_parameters(parameters, source="qpstar")


def theorem5_condition(window: KnotWindow, i: int, p: int,
                       table: GrevilleTable = None) -> bool:
    """
    theta_{i-1} + theta_i <= theta_{i-p} + theta_{i+p} <= theta_i + theta_{i+1},
    the knot condition making the Qp* coefficients l1-minimal.
    """
    if p < window.degree:
        raise ParameterError(f"p must be at least m = {window.degree}, got {p}")
    _check_reach(window, i, p)
    table = greville(window) if table is None else table
    th = {s: table.theta_at(i + s) for s in (-p, -1, 0, 1, p)}
    scale = max(abs(th[-p]), abs(th[p]), th[p] - th[-p])
    tol = 1e-12 * scale
    outer = th[-p] + th[p]
    return bool(th[-1] + th[0] <= outer + tol and outer <= th[0] + th[1] + tol)


def gp_star_certificate(window: KnotWindow, i: int, p: int,
                        table: GrevilleTable = None,
                        mu: MomentTable = None) -> Certificate:
    """Explicit dual vector for the Gp* coefficients at index i."""
    if p < 1:
        raise ParameterError(f"p must be positive, got {p}")
    _check_reach(window, i, p)
    parameters = stencil_parameters(iqi_problem(window, i, p, 2, table, mu))
    return certificate_from_parameters(parameters, source="gpstar")


def barycenter(window: KnotWindow, i: int, a: int, b: int) -> float:
    """
    Barycenter of the m weighted points (tau_k, w_k), k = 1..m, met when
    T_{i+a} is turned into T_{i+b} by replacing one knot at a time:
    w_k = t_{k+b} - t_{k+a} and
    tau_k = (t_{k+a} + ... + t_{m+a} + t_{1+b} + ... + t_{k+b}) / (m + 1),
    knots numbered so that T_i = {t_1, ..., t_m}.

    The moment slope (mu_{i+b} - mu_{i+a}) / (theta_{i+b} - theta_{i+a}) of
    the second moments is twice this barycenter.
    """
    if a >= b:
        raise ParameterError(f"Offsets must satisfy a < b, got {a}, {b}")
    m = window.degree
    d = i - m
    t = window.t
    w = np.array([t(k + b + d) - t(k + a + d) for k in range(1, m + 1)])
    tau = np.array([
        (sum(t(j + d) for j in range(k + a, m + a + 1))
         + sum(t(j + d) for j in range(1 + b, k + b + 1))) / (m + 1)
        for k in range(1, m + 1)])
    return float(np.dot(w, tau) / np.sum(w))


def _moment_slope(table, mu, i, a, b):
    return ((mu.at(i + b, 2) - mu.at(i + a, 2))
            / (table.theta_at(i + b) - table.theta_at(i + a)))


@dataclass(frozen=True, eq=False)
class ConditionReport:
    """
    Outcome of the four barycenter inequalities for every r, s in 1..p-1,
    one row per inequality: its label, r or s, both sides, the slack and
    the same comparison made with second-moment slopes.
    """
    ok: bool
    determinant_positive: bool
    rows: list

    def __bool__(self):
        return self.ok

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows, columns=[
            "inequality", "offset", "lhs", "rhs", "slack", "holds",
            "moment_lhs", "moment_rhs", "moment_holds"])


def theorem10_conditions(window: KnotWindow, i: int, p: int,
                         table: GrevilleTable = None,
                         mu: MomentTable = None,
                         tol: float = 1e-12) -> ConditionReport:
    """
    Sufficient knot conditions for the Gp* coefficients to be l1-minimal:

    1. bary(-r, 0) <= bary(-p, p)      3. bary(-p, p) <= bary(0, s)
    2. bary(-p, -r) <= bary(-r, p)     4. bary(-p, s) <= bary(s, p)

    for r, s in 1..p-1, where bary(a, b) is given by barycenter. The
    determinant W(-p, 0, p) of the moment system must also be positive.
    """
    if window.degree < 2:
        raise ParameterError("Integral stencils need m >= 2")
    if p < 1:
        raise ParameterError(f"p must be positive, got {p}")
    _check_reach(window, i, p)
    table = greville(window) if table is None else table
    mu = moments(window, 2) if mu is None else mu
    scale = table.theta_at(i + p) - table.theta_at(i - p)
    pairs = []
    for r in range(1, p):
        pairs.append(("1", r, (-r, 0), (-p, p)))
        pairs.append(("2", r, (-p, -r), (-r, p)))
    for s in range(1, p):
        pairs.append(("3", s, (-p, p), (0, s)))
        pairs.append(("4", s, (-p, s), (s, p)))
    rows = []
    for label, offset, left, right in pairs:
        lhs = barycenter(window, i, *left)
        rhs = barycenter(window, i, *right)
        moment_lhs = _moment_slope(table, mu, i, *left)
        moment_rhs = _moment_slope(table, mu, i, *right)
        rows.append({
            "inequality": label, "offset": offset, "lhs": lhs, "rhs": rhs,
            "slack": rhs - lhs, "holds": rhs - lhs >= -tol * scale,
            "moment_lhs": moment_lhs, "moment_rhs": moment_rhs,
            "moment_holds": moment_rhs - moment_lhs >= -2. * tol * scale})

    # W(-p, 0, p) > 0 iff (theta_i, mu_i) lies below the outer chord
    chord = (mu.at(i - p, 2) + _moment_slope(table, mu, i, -p, p)
             * (table.theta_at(i) - table.theta_at(i - p)))
    positive = bool(chord - mu.at(i, 2) > 0.)
    ok = positive and all(row["holds"] for row in rows)
    return ConditionReport(ok=ok, determinant_positive=positive, rows=rows)


def solve_l1_linprog(problem: L1Problem) -> L1Solution:
    """
    Oracle: the split-variable linear program min 1^T (u + w) subject to
    V (u - w) = b, u, w >= 0, solved by the HiGHS dual simplex, then
    re-solved on its support to full precision.
    """
    V, b = problem.V, problem.b
    n = V.shape[1]
    result = linprog(np.ones(2 * n), A_eq=np.hstack([V, -V]), b_eq=b,
                     bounds=(0, None), method="highs-ds")
    if not result.success:
        raise DegenerateProblemError(f"linprog failed: {result.message}")
    a = result.x[:n] - result.x[n:]
    support = sorted(np.flatnonzero(np.abs(a) > 1e-9 * np.sum(np.abs(a))))
    if 0 < len(support) <= problem.q + 1:
        sub = V[:, support]
        polished = np.linalg.lstsq(sub, b, rcond=None)[0]
        if np.max(np.abs(sub @ polished - b)) <= 1e-12 * (1. + np.max(np.abs(b))):
            a = np.zeros(n)
            a[support] = polished
    return L1Solution(a_star=a, objective=float(np.sum(np.abs(a))),
                      support=_support(a), p=problem.p)


def dual_certificate(problem: L1Problem, solution: L1Solution) -> Certificate:
    """
    Dual vector v = V^T y of an optimal vertex: from its basis when the
    vertex has q + 1 nonzeros, otherwise from the dual linear program
    max b^T y subject to |V^T y| <= 1.
    """
    V, b = problem.V, problem.b
    support = sorted(solution.support)
    if len(support) == problem.q + 1:
        sub = V[:, support]
        singular = np.linalg.svd(sub, compute_uv=False)
        if singular[-1] > RANK_TOL * singular[0]:
            y = np.linalg.solve(sub.T, np.sign(solution.a_star[support]))
            return Certificate(V.T @ y, source="vertex_dual")
    result = linprog(-b, A_ub=np.vstack([V.T, -V.T]),
                     b_ub=np.ones(2 * V.shape[1]), bounds=(None, None),
                     method="highs")
    if not result.success:
        raise DegenerateProblemError(f"dual linprog failed: {result.message}")
    v = np.clip(V.T @ result.x, -1., 1.)
    return Certificate(v, source="lp_dual")


def build_near_best(window: KnotWindow, p: int, q: int = 2,
                    integral: bool = False, validate: bool = True):
    """
    Near-best operator Q_{p,q} (or G_{p,q} when integral): the coefficients
    of every index with a full stencil are the l1-minimal solution of its
    exactness system.
    """
    table = greville(window)
    mu = moments(window, window.degree + 1) if integral else None
    lo, hi = window.valid_range(p)
    coeffs = {}
    for i in range(lo, hi + 1):
        problem = (iqi_problem(window, i, p, q, table, mu) if integral
                   else dqi_problem(window, i, p, q, table))
        coeffs[i] = solve_l1(problem).a_star
    if integral:
        return build_Gpq(window, p, q, coeffs, validate=validate)
    return build_Qpq(window, p, q, coeffs, validate=validate)
