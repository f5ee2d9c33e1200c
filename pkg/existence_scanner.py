"""
Existence of bound states over deformation parameters

Uses the sign-change method on the minimal-coordinate equation: a solution
exists when f changes sign between two consecutive points of the log xi grid.
"""

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from config import (
    BETA_LIMIT_CEILING,
    BETA_LIMIT_START,
    BETA_LIMIT_TOLERANCE,
    SCAN_GRID_MAX,
    SCAN_GRID_MIN,
    SCAN_GRID_POINTS,
    SCAN_WORKERS,
)
from deformed_space import DeformationParams, PhysicalContext
from errors import ConfigurationError, InvalidDeformationError, NoBoundStateError
from general_solver import residual_from_vtilde, scan_grid
from logger_config import get_logger
from potentials import PotentialEvaluator, PotentialSpec, evaluator
from root_finding import has_sign_change

logger = get_logger(__name__)

UNBOUNDED = math.inf

# Upper bound on alpha-count * xi-count evaluated in one array operation
_CHUNK_CELLS = 1_000_000


@dataclass(frozen=True)
class ScanSpec:
    grid_min: float = SCAN_GRID_MIN
    grid_max: float = SCAN_GRID_MAX
    grid_points: int = SCAN_GRID_POINTS
    refine: bool = True


@dataclass(frozen=True, eq=False)
class RegionScan:
    """exists[i, j] is the verdict at (alpha_grid[j], beta_grid[i])"""
    alpha_grid: np.ndarray
    beta_grid: np.ndarray
    exists: np.ndarray
    n: int
    v0: float
    reference_curve: np.ndarray


@dataclass(frozen=True, eq=False)
class BetaLimitCurve:
    n_values: np.ndarray
    beta_limit: np.ndarray
    v0: float
    alpha: float


class SignChangeScanner:
    """
    Existence verdicts for one potential

    The xi grid (and its steep-potential refinement) depends only on the
    potential, so it is built once and shared by every (alpha, beta) query.
    """

    def __init__(self, pot: PotentialEvaluator, scan: ScanSpec = ScanSpec()):
        self.pot = pot
        self.scan = scan
        self.xi, self.vtilde = scan_grid(pot, scan.grid_min, scan.grid_max, scan.grid_points, scan.refine)
        logger.debug(f"Scan grid: {len(self.xi)} points over [{scan.grid_min}, {scan.grid_max}]")

    def exists(self, alpha: float, beta: float) -> bool:
        DeformationParams.nondim(alpha, beta)
        return bool(has_sign_change(residual_from_vtilde(self.xi, self.vtilde, alpha, beta)))

    def exists_row(self, alphas: np.ndarray, beta: float) -> np.ndarray:
        """Verdicts for many alpha at one beta; cells with alpha*beta >= 1/4 are False"""
        alphas = np.asarray(alphas, dtype=float)
        row = np.zeros(alphas.shape, dtype=bool)
        valid = np.flatnonzero(alphas * beta < 0.25)
        chunk = max(1, _CHUNK_CELLS // len(self.xi))
        for start in range(0, len(valid), chunk):
            index = valid[start:start + chunk]
            values = residual_from_vtilde(self.xi, self.vtilde, alphas[index, np.newaxis], beta)
            row[index] = has_sign_change(values)
        return row


def has_solution(pot: PotentialEvaluator, alpha: float, beta: float, scan: ScanSpec = ScanSpec()) -> bool:
    """
    Sign-change existence test

    Raises:
        InvalidDeformationError: alpha*beta >= 1/4
    """
    return SignChangeScanner(pot, scan).exists(alpha, beta)


def _power_law_scanner(n: int, v0: float, scan: ScanSpec) -> SignChangeScanner:
    if int(n) != n or n < 1:
        raise ConfigurationError(f"n must be an integer >= 1, got {n}")
    if not v0 > 0:
        raise ConfigurationError(f"v0 must be positive, got {v0}")
    return SignChangeScanner(evaluator(PotentialSpec.power_law(int(n), v0)), scan)


def beta_limit(n: int, v0: float = 1.0, alpha: float = 0.0, tol: float = BETA_LIMIT_TOLERANCE,
               scan: ScanSpec = ScanSpec()) -> float:
    """
    Supremum of beta with a bound state for V = v0 xi^(2n) at fixed alpha

    The trial upper bound starts at BETA_LIMIT_START and doubles until the
    existence test fails, then the bracket is bisected until its width is
    below tol * max(1, beta).

    Returns:
        The largest beta found with a solution, or UNBOUNDED for n = 1 and
        when no failing beta exists below the ceiling (BETA_LIMIT_CEILING or
        the alpha*beta < 1/4 bound)
    """
    if alpha < 0:
        raise InvalidDeformationError(f"alpha must be non-negative, got {alpha}")
    if n == 1:
        return UNBOUNDED
    scanner = _power_law_scanner(n, v0, scan)

    ceiling = BETA_LIMIT_CEILING
    if alpha > 0:
        ceiling = min(ceiling, math.nextafter(0.25 / alpha, 0.0))
        while ceiling * alpha >= 0.25:
            ceiling = math.nextafter(ceiling, 0.0)

    if not scanner.exists(alpha, 0.0):
        logger.warning(f"No bound state even at beta=0 for n={n}, v0={v0}, alpha={alpha}")
        return 0.0

    lo, hi = 0.0, min(BETA_LIMIT_START, ceiling)
    while scanner.exists(alpha, hi):
        if hi >= ceiling:
            logger.info(f"beta limit unbounded below {ceiling:.6g} for n={n}, v0={v0}, alpha={alpha}")
            return UNBOUNDED
        lo, hi = hi, min(2.0 * hi, ceiling)

    steps = 0
    while hi - lo > tol * max(1.0, lo):
        mid = 0.5 * (lo + hi)
        if scanner.exists(alpha, mid):
            lo = mid
        else:
            hi = mid
        steps += 1
    logger.debug(f"beta limit n={n}, v0={v0}, alpha={alpha}: {lo:.8g} after {steps} bisections")
    return lo


def beta_limit_curve(n_values: Iterable[int], v0: float = 1.0, alpha: float = 0.0,
                     tol: float = BETA_LIMIT_TOLERANCE, scan: ScanSpec = ScanSpec()) -> BetaLimitCurve:
    """beta_limit for each n, in the given order"""
    n_values = [int(n) for n in n_values]
    limits = [beta_limit(n, v0, alpha, tol, scan) for n in n_values]
    return BetaLimitCurve(
        n_values=np.array(n_values, dtype=int),
        beta_limit=np.array(limits, dtype=float),
        v0=float(v0),
        alpha=float(alpha),
    )


def _check_grid(name: str, grid) -> np.ndarray:
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0:
        raise ConfigurationError(f"{name} must be a non-empty 1-D array")
    if np.any(~(grid > 0)) or np.any(np.diff(grid) <= 0):
        raise ConfigurationError(f"{name} must be positive and strictly increasing")
    return grid


def region_scan(n: int, v0: float, alpha_grid, beta_grid, scan: ScanSpec = ScanSpec(),
                workers: Optional[int] = None) -> RegionScan:
    """
    Existence matrix over an (alpha, beta) grid for V = v0 xi^(2n)

    Rows follow beta_grid and columns follow alpha_grid. Rows may be computed
    on a thread pool; assembly is always in beta order.
    """
    alpha_grid = _check_grid("alpha_grid", alpha_grid)
    beta_grid = _check_grid("beta_grid", beta_grid)
    scanner = _power_law_scanner(n, v0, scan)
    workers = SCAN_WORKERS if workers is None else int(workers)

    def row(beta):
        return scanner.exists_row(alpha_grid, float(beta))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(row, beta_grid))
    else:
        rows = [row(beta) for beta in beta_grid]

    exists = np.vstack(rows)
    logger.info(f"Region scan n={n}, v0={v0}: {int(exists.sum())}/{exists.size} cells with a solution")
    return RegionScan(
        alpha_grid=alpha_grid,
        beta_grid=beta_grid,
        exists=exists,
        n=int(n),
        v0=float(v0),
        reference_curve=np.column_stack((alpha_grid, 0.25 / alpha_grid)),
    )


def box_energy(ctx: PhysicalContext, beta_prime: float, k: int = 1) -> float:
    """
    Level k of a particle in a box of width 2a in deformed space

    E_k = tan^2(pi hbar k sqrt(beta') / (2a)) / (2 m beta'), tending to
    pi^2 hbar^2 k^2 / (8 m a^2) as beta' -> 0.

    Raises:
        NoBoundStateError: pi hbar k sqrt(beta') / (2a) >= pi/2
    """
    if ctx.a is None:
        raise ConfigurationError("box energy requires the half-width a")
    if int(k) != k or k < 1:
        raise ConfigurationError(f"k must be an integer >= 1, got {k}")
    if not beta_prime >= 0:
        raise InvalidDeformationError(f"beta' must be non-negative, got {beta_prime}")

    argument = math.pi * ctx.hbar * k * math.sqrt(beta_prime) / (2.0 * ctx.a)
    if argument >= math.pi / 2:
        raise NoBoundStateError(
            f"no level k={k} for beta'={beta_prime}: tangent argument {argument:.6g} >= pi/2")
    if beta_prime == 0:
        return (math.pi * ctx.hbar * k) ** 2 / (8.0 * ctx.mass * ctx.a * ctx.a)
    return math.tan(argument) ** 2 / (2.0 * ctx.mass * beta_prime)
