"""
Independent check of the Lagrange solution: direct minimization of the
energy q^2 + V(xi) along the boundary xi*q = 1/2 + beta*q^2 + alpha*xi^2
"""

import math
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from config import BRUTE_POINTS, BRUTE_RANGE, ORACLE_GRID_MAX, ORACLE_GRID_MIN, ORACLE_POINTS, ORACLE_XTOL
from deformed_space import (
    DeformationParams,
    Diagnostics,
    Nondimensionalization,
    SolveMethod,
    SolveResult,
    constraint_residual_values,
    make_result,
)
from errors import ConfigurationError, DomainError, EmptyFeasibleGridError
from general_solver import k_pair_general
from logger_config import get_logger
from potentials import PotentialEvaluator
from root_finding import golden_section_minimize, log_grid

logger = get_logger(__name__)


class BoundaryBranch(str, Enum):
    LOWER = "Lower"
    UPPER = "Upper"


def domain_min(alpha: float, beta: float) -> float:
    """Smallest xi on the boundary: sqrt(2 beta / (1 - 4 alpha beta)), 0 when beta = 0"""
    DeformationParams.nondim(alpha, beta)
    if beta == 0:
        return 0.0
    return math.sqrt(2.0 * beta / (1.0 - 4.0 * alpha * beta))


def boundary_momentum(xi, alpha: float, beta: float, branch: BoundaryBranch = BoundaryBranch.LOWER):
    """
    Momentum on the boundary at coordinate xi

    q = (xi -+ sqrt(xi^2 (1 - 4 alpha beta) - 2 beta)) / (2 beta); the lower
    branch is evaluated as (1 + 2 alpha xi^2) / (xi + sqrt(...)). For
    beta = 0 there is a single branch q = (1/2 + alpha xi^2) / xi.

    Raises:
        DomainError: xi <= 0 or xi below domain_min
    """
    xi_arr = np.asarray(xi, dtype=float)
    lower_end = domain_min(alpha, beta)
    if np.any(~(xi_arr > 0)) or np.any(xi_arr < lower_end):
        raise DomainError(f"xi must be positive and at least {lower_end} on the boundary")

    if beta == 0:
        q = (0.5 + alpha * xi_arr * xi_arr) / xi_arr
    else:
        # Clamp round-off at xi == domain_min
        disc = np.maximum(xi_arr * xi_arr * (1.0 - 4.0 * alpha * beta) - 2.0 * beta, 0.0)
        root = np.sqrt(disc)
        if BoundaryBranch(branch) is BoundaryBranch.LOWER:
            q = (1.0 + 2.0 * alpha * xi_arr * xi_arr) / (xi_arr + root)
        else:
            q = (xi_arr + root) / (2.0 * beta)

    if np.ndim(xi) == 0:
        return float(q)
    return q


def branch_energy(pot: PotentialEvaluator, xi, alpha: float, beta: float,
                  branch: BoundaryBranch = BoundaryBranch.LOWER):
    """E(xi) = q(xi)^2 + V(xi) along one boundary branch"""
    q = boundary_momentum(xi, alpha, beta, branch)
    with np.errstate(over="ignore"):
        return q * q + pot.v(xi)


def _branch_minimum(pot: PotentialEvaluator, alpha: float, beta: float, branch: BoundaryBranch,
                    lo: float, hi: float, points: int, xtol: float) -> Tuple[float, float, int, bool]:
    grid = log_grid(lo, hi, points)
    energies = branch_energy(pot, grid, alpha, beta, branch)
    i = int(np.argmin(np.where(np.isfinite(energies), energies, np.inf)))
    interior = 0 < i < len(grid) - 1
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, len(grid) - 1)]

    def energy(x):
        return branch_energy(pot, x, alpha, beta, branch)

    x, fx, iterations = golden_section_minimize(energy, a, b, xtol)
    if fx > energies[i]:
        x, fx = float(grid[i]), float(energies[i])
    return x, fx, iterations, interior


def _diagnostic_k2(pot: PotentialEvaluator, xi: float, alpha: float, beta: float) -> float:
    vtilde = float(pot.vtilde(xi))
    if not (math.isfinite(vtilde) and vtilde > 0):
        # V~ under/overflows for steep potentials away from xi = 1
        return math.nan
    return k_pair_general(vtilde, alpha, beta).k2


def oracle_min(pot: PotentialEvaluator, alpha: float, beta: float,
               points: int = ORACLE_POINTS,
               grid_min: float = ORACLE_GRID_MIN,
               grid_max: float = ORACLE_GRID_MAX,
               xtol: float = ORACLE_XTOL,
               nd: Optional[Nondimensionalization] = None) -> SolveResult:
    """
    Minimum of q^2 + V(xi) over both boundary branches

    Each branch is sampled on a log grid over [max(domain_min, grid_min), grid_max],
    the best sample is refined by golden-section search between its grid
    neighbours and the lower of the two branch minima is returned.
    Minima found at an end of the scanned range are flagged non-interior.
    """
    dp = DeformationParams.nondim(alpha, beta)
    lo = max(domain_min(alpha, beta), grid_min)
    if not lo < grid_max:
        raise ConfigurationError(f"boundary domain starts at {lo}, beyond the scan range end {grid_max}")

    branches = [BoundaryBranch.LOWER] if beta == 0 else [BoundaryBranch.LOWER, BoundaryBranch.UPPER]
    minima = []
    for branch in branches:
        x, fx, iterations, interior = _branch_minimum(pot, alpha, beta, branch, lo, grid_max, points, xtol)
        logger.debug(f"Oracle {branch.value} branch: xi={x:.10g}, E={fx:.12g}, interior={interior}")
        minima.append((fx, x, branch, iterations, interior))

    energy, xi, branch, iterations, interior = min(minima, key=lambda m: m[0])
    if not interior:
        logger.warning(f"Oracle minimum at the edge of the scanned range (xi={xi:.6g})")
    q = boundary_momentum(xi, alpha, beta, branch)
    diagnostics = Diagnostics(
        k2=_diagnostic_k2(pot, xi, alpha, beta),
        residual=float(constraint_residual_values(xi, q, alpha, beta)),
        iterations=iterations,
        converged=interior,
        interior=interior,
    )
    return make_result(xi, q, energy, SolveMethod.ORACLE, diagnostics, dp=dp, nd=nd)


def brute_2d(pot: PotentialEvaluator, alpha: float, beta: float,
             bounds: Tuple[float, float] = BRUTE_RANGE,
             points: int = BRUTE_POINTS) -> float:
    """
    Minimum of q^2 + V(xi) over a uniform (xi, q) grid restricted to
    xi*q >= 1/2 + beta*q^2 + alpha*xi^2

    Raises:
        EmptyFeasibleGridError: no grid point satisfies the inequality
    """
    DeformationParams.nondim(alpha, beta)
    axis = np.linspace(bounds[0], bounds[1], int(points))
    xi, q = np.meshgrid(axis, axis, indexing="ij")
    feasible = (xi > 0) & (constraint_residual_values(xi, q, alpha, beta) >= 0)
    if not feasible.any():
        raise EmptyFeasibleGridError(
            f"no feasible point on the {points}x{points} grid over {bounds} (alpha={alpha}, beta={beta})")

    potential = np.full(axis.shape, np.inf)
    positive = axis > 0
    with np.errstate(over="ignore"):
        potential[positive] = pot.v(axis[positive])
        energies = np.where(feasible, q * q + potential[:, np.newaxis], np.inf)
    return float(energies.min())
