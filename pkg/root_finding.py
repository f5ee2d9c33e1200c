"""
Shared one-dimensional numerics: log grids, sign-change brackets,
bisection refinement and golden-section search
"""

import math
from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np
from scipy import optimize

from config import REFINE_MAX_LOG_STEP, REFINE_MAX_SUBDIVISIONS, ROOT_MAX_ITERATIONS
from errors import ConfigurationError
from logger_config import get_logger

logger = get_logger(__name__)

INV_PHI = (math.sqrt(5) - 1) / 2
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2


@dataclass(frozen=True)
class BracketRoot:
    x: float
    fx: float
    iterations: int
    converged: bool


def log_grid(lo: float, hi: float, points: int) -> np.ndarray:
    """Log-spaced grid of `points` values on [lo, hi]"""
    if not (0 < lo < hi) or int(points) < 2:
        raise ConfigurationError(f"invalid log grid [{lo}, {hi}] with {points} points")
    return np.geomspace(lo, hi, int(points))


def refine_grid(xi: np.ndarray, vtilde: np.ndarray,
                max_log_step: float = REFINE_MAX_LOG_STEP,
                max_subdivisions: int = REFINE_MAX_SUBDIVISIONS) -> np.ndarray:
    """
    Subdivide grid intervals over which ln(vtilde) jumps by more than max_log_step

    An interval where vtilde passes from finite to 0 or inf gets the maximum
    number of subdivisions; intervals with both ends at 0 (or both at inf)
    are left alone. New points are log-spaced inside the interval.
    """
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        log_values = np.log(vtilde)
    left, right = log_values[:-1], log_values[1:]
    both_finite = np.isfinite(left) & np.isfinite(right)
    one_finite = np.isfinite(left) ^ np.isfinite(right)

    counts = np.ones(len(left), dtype=int)
    with np.errstate(invalid="ignore"):
        jump = np.where(both_finite, np.abs(right - left), 0.0)
    steep = both_finite & (jump > max_log_step)
    counts[steep] = np.minimum(np.ceil(jump[steep] / max_log_step).astype(int), max_subdivisions)
    counts[one_finite] = max_subdivisions

    indices = np.flatnonzero(counts > 1)
    if indices.size == 0:
        return xi
    extras = [np.geomspace(xi[i], xi[i + 1], counts[i] + 1)[1:-1] for i in indices]
    refined = np.unique(np.concatenate([xi] + extras))
    logger.debug(f"Refined {indices.size} steep intervals: {len(xi)} -> {len(refined)} grid points")
    return refined


def sign_change_mask(values: np.ndarray) -> np.ndarray:
    """
    True for consecutive pairs (along the last axis) whose values are both
    finite and of opposite sign
    """
    finite = np.isfinite(values)
    signs = np.sign(np.where(finite, values, 0.0))
    return finite[..., :-1] & finite[..., 1:] & (signs[..., :-1] * signs[..., 1:] < 0)


def has_sign_change(values: np.ndarray) -> np.ndarray:
    """Whether a root is detected along the last axis (sign change or exact zero)"""
    finite = np.isfinite(values)
    exact_zero = np.any(finite & (values == 0), axis=-1)
    return np.any(sign_change_mask(values), axis=-1) | exact_zero


def sign_change_brackets(x: np.ndarray, values: np.ndarray) -> List[Tuple[float, float]]:
    """
    Brackets (a, b) of every detected root on the grid x

    An exact zero at a grid point is reported as the degenerate bracket (x, x).
    """
    brackets = [(float(x[i]), float(x[i + 1])) for i in np.flatnonzero(sign_change_mask(values))]
    brackets += [(float(x[i]), float(x[i])) for i in np.flatnonzero(np.isfinite(values) & (values == 0))]
    brackets.sort()
    return brackets


def bisect_root(func: Callable[[float], float], a: float, b: float,
                max_iterations: int = ROOT_MAX_ITERATIONS) -> BracketRoot:
    """
    Refine a bracketed root by bisection down to adjacent floating-point values

    Args:
        func: Scalar function with a sign change on [a, b]
        a, b: Bracket endpoints (a == b for an exact grid root)
        max_iterations: Bisection step limit

    Returns:
        BracketRoot with the root, the function value there and convergence info
    """
    if a == b:
        return BracketRoot(x=a, fx=float(func(a)), iterations=0, converged=True)
    root, info = optimize.bisect(
        func, a, b,
        xtol=1e-300,
        rtol=4 * np.finfo(float).eps,
        maxiter=max_iterations,
        full_output=True,
        disp=False,
    )
    return BracketRoot(x=float(root), fx=float(func(root)), iterations=int(info.iterations),
                       converged=bool(info.converged))


def golden_section_minimize(func: Callable[[float], float], a: float, b: float,
                            xtol: float) -> Tuple[float, float, int]:
    """
    Golden-section search for a minimum on [a, b]

    Returns:
        (x, f(x), iterations) with the final bracket narrower than xtol
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= xtol:
        x = 0.5 * (a + b)
        return x, float(func(x)), 0

    steps = int(math.ceil(math.log(xtol / h) / math.log(INV_PHI)))
    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = func(c)
    yd = func(d)

    for _ in range(steps - 1):
        h = INV_PHI * h
        if yc < yd:
            b, d, yd = d, c, yc
            c = a + INV_PHI_SQUARE * h
            yc = func(c)
        else:
            a, c, yc = c, d, yd
            d = a + INV_PHI * h
            yd = func(d)

    # Best sampled point, endpoints included
    candidates = [(yc, c), (yd, d), (func(a), a), (func(b), b)]
    fx, x = min(candidates)
    return float(x), float(fx), steps
