# -*- coding: utf-8 -*-

"""Sampling grids, worker count, logging setup and vectorized evaluation."""

import logging
import os

import numpy as np

from .errors import ParameterError

logger = logging.getLogger(__name__)

# Full binary64 round trip for every number written to CSV
FLOAT_FORMAT = "%.17g"

THREADS_ENV = "QI_THREADS"


def generate_grid(
    breakpoints: np.array, points_per_interval: int = 64, method: str = "uniform",
    rng: np.random.Generator = None
) -> np.array:
    """
    Generates a sampling grid over consecutive intervals
    [breakpoints[k], breakpoints[k+1]], either uniformly spaced inside each
    interval or drawn at random inside each interval.

    Parameters
    ----------
    breakpoints: np.array
        Strictly increasing interval ends, usually knots.

    points_per_interval: int
        Number of samples per interval. The left end of every interval is
        always included; the right end of the last interval is appended.

    method: str
        Use 'uniform' or 'random'.

    rng: np.random.Generator
        Generator used by the 'random' method.

    Returns
    ----------
    grid: np.array
        Sorted sample abscissas.
    """
    breakpoints = np.asarray(breakpoints, dtype=float)
    if len(breakpoints) < 2:
        raise ParameterError("A grid needs at least one interval")
    if points_per_interval < 1:
        raise ParameterError(
            f"points_per_interval must be positive, got {points_per_interval}")

    left = breakpoints[:-1, None]
    width = np.diff(breakpoints)[:, None]
    if method == "uniform":
        u = np.arange(points_per_interval) / points_per_interval
        grid = (left + width * u[None, :]).ravel()
    elif method == "random":
        if rng is None:
            rng = np.random.default_rng()
        u = rng.uniform(size=(len(width), points_per_interval))
        u[:, 0] = 0.
        grid = np.sort((left + width * u).ravel())
    else:
        raise NotImplementedError(f"The method {method} is not implemented")
    return np.append(grid, breakpoints[-1])


def sample_points(lower: float, upper: float, num_samples: int) -> np.array:
    """Evenly spaced samples of [lower, upper], both ends included."""
    return np.linspace(lower, upper, num_samples)


def num_threads(default: int = 1) -> int:
    """Number of worker threads allowed by the QI_THREADS environment variable."""
    value = os.environ.get(THREADS_ENV)
    if value is None or value.strip() == "":
        return default
    try:
        threads = int(value)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV} must be an integer, got {value!r}")
    if threads < 1:
        raise ParameterError(f"{THREADS_ENV} must be at least 1, got {threads}")
    return threads


def setup_logging(verbosity: int = 0):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")
    logging.getLogger("spline_QI").setLevel(level)


def evaluate(f, x) -> np.array:
    """
    Evaluate f on the array x. Vectorized callables are called once; a
    callable that only accepts scalars is applied pointwise.
    """
    x = np.asarray(x, dtype=float)
    try:
        values = np.asarray(f(x), dtype=float)
        if values.shape != x.shape:
            values = np.broadcast_to(values, x.shape).astype(float)
    except (TypeError, ValueError):
        values = np.array([f(float(xi)) for xi in x.ravel()],
                          dtype=float).reshape(x.shape)
    return values
