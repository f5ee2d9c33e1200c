"""
Ground-state bound for an arbitrary admissible potential

The Lagrange system reduces to a scalar minimal-coordinate equation
f(xi) = 0 once the minimal-momentum equation is solved for q through
K1 = (beta V~ - alpha - sqrt((beta V~ - alpha)^2 + V~)) / V~.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from config import (
    ROOT_TOLERANCE,
    SOLVE_GRID_MAX,
    SOLVE_GRID_MIN,
    SOLVE_GRID_POINTS,
    XI0_BRACKET_MAX,
    XI0_BRACKET_MIN,
    XI0_BRACKET_POINTS,
    XI0_BRACKET_WIDEN,
    XI0_BRACKET_WIDENINGS,
)
from deformed_space import (
    DeformationParams,
    Diagnostics,
    Nondimensionalization,
    RootRecord,
    SolveMethod,
    SolveResult,
    constraint_residual_values,
    make_result,
)
from errors import ConfigurationError, DegeneratePotentialError, DomainError, NoBoundStateError
from harmonic_oscillator import KPair
from logger_config import get_logger
from potentials import PotentialEvaluator
from root_finding import bisect_root, log_grid, refine_grid, sign_change_brackets

logger = get_logger(__name__)


@dataclass(frozen=True)
class LinearCoefficients:
    """xi_min ~ xi0 + xi1*beta + xi2*alpha and the potential evaluated at xi0"""
    xi0: float
    xi1: float
    xi2: float
    vtilde0: float
    dvtilde0: float
    v0: float
    dv0: float

    @property
    def denominator(self) -> float:
        return 1.0 + self.xi0 * self.dvtilde0 / (4.0 * self.vtilde0)


def xi0(pot: PotentialEvaluator, tol: float = ROOT_TOLERANCE) -> float:
    """
    Undeformed minimal coordinate: root of xi^2 sqrt(V~(xi)) = 1/2

    The left side is strictly increasing for admissible potentials, so the
    first grid point where it exceeds 1/2 brackets the unique root. Very
    strong or very weak potentials move the root outside the default
    bracket, which is then widened towards it.

    Raises:
        ConfigurationError: no bracket after XI0_BRACKET_WIDENINGS widenings
    """
    def g(xi):
        with np.errstate(over="ignore", invalid="ignore"):
            return xi * xi * np.sqrt(pot.vtilde(xi)) - 0.5

    lo, hi = XI0_BRACKET_MIN, XI0_BRACKET_MAX
    for _ in range(XI0_BRACKET_WIDENINGS + 1):
        grid = log_grid(lo, hi, XI0_BRACKET_POINTS)
        above = np.flatnonzero(g(grid) > 0)
        if above.size and above[0] > 0:
            break
        if above.size:
            lo /= XI0_BRACKET_WIDEN
        else:
            hi *= XI0_BRACKET_WIDEN
        logger.debug(f"xi0 bracket widened to [{lo:.1e}, {hi:.1e}]")
    else:
        raise ConfigurationError(f"undeformed root not bracketed in [{lo:.1e}, {hi:.1e}]")
    i = above[0]
    root = bisect_root(g, float(grid[i - 1]), float(grid[i]))
    if abs(root.fx) > tol:
        logger.debug(f"xi0 refinement stopped at |g|={abs(root.fx):.3e} (tol {tol:.1e})")
    return root.x


def linear_coefficients(pot: PotentialEvaluator) -> LinearCoefficients:
    """
    Coefficients of the linear approximation around alpha = beta = 0

    xi1 = xi0 sqrt(V~0) / (1 + xi0 V~'0 / (4 V~0)); xi2 is identically zero.

    Raises:
        DegeneratePotentialError: non-positive denominator
    """
    x0 = xi0(pot)
    coefficients = LinearCoefficients(
        xi0=x0,
        xi1=0.0,
        xi2=0.0,
        vtilde0=pot.vtilde(x0),
        dvtilde0=pot.dvtilde(x0),
        v0=pot.v(x0),
        dv0=pot.dv(x0),
    )
    denominator = coefficients.denominator
    if not denominator > 0:
        raise DegeneratePotentialError(f"linear approximation denominator {denominator} is not positive")
    xi1 = x0 * math.sqrt(coefficients.vtilde0) / denominator
    return replace(coefficients, xi1=xi1)


def linear_energy(pot: PotentialEvaluator, alpha: float, beta: float,
                  coefficients: Optional[LinearCoefficients] = None) -> float:
    """
    Minimal energy to first order in alpha and beta

    E = xi0^2 V~0 + V0
        + [(xi0^3 V~'0 sqrt(V~0)/2 + xi0 V'0 sqrt(V~0)) / (1 + xi0 V~'0/(4 V~0))] * beta
        + 2 xi0^2 sqrt(V~0) * alpha
    """
    c = coefficients if coefficients is not None else linear_coefficients(pot)
    root_vt = math.sqrt(c.vtilde0)
    beta_slope = (0.5 * c.xi0 ** 3 * c.dvtilde0 * root_vt + c.xi0 * c.dv0 * root_vt) / c.denominator
    alpha_slope = 2.0 * c.xi0 * c.xi0 * root_vt
    return c.xi0 * c.xi0 * c.vtilde0 + c.v0 + beta_slope * beta + alpha_slope * alpha


def k_pair_general(vtilde: float, alpha: float, beta: float) -> KPair:
    """
    K variables at a given V~; k1*k2 = -1/V~

    Each member is taken from whichever of the two algebraic forms avoids
    cancellation.
    """
    if not vtilde > 0:
        raise DomainError(f"V~ must be positive, got {vtilde}")
    u = beta * vtilde - alpha
    s = math.sqrt(u * u + vtilde)
    if u >= 0:
        k2 = (u + s) / vtilde
        return KPair(k1=-1.0 / (vtilde * k2), k2=k2)
    k1 = (u - s) / vtilde
    return KPair(k1=k1, k2=-1.0 / (vtilde * k1))


def residual_from_vtilde(xi, vtilde, alpha, beta):
    """
    Minimal-coordinate equation for precomputed V~ values

    Broadcasts over xi/vtilde and alpha/beta arrays. K1 is evaluated in the
    direct form (u - s)/V~; non-finite results mark points without usable
    sign information.
    """
    with np.errstate(all="ignore"):
        u = beta * vtilde - alpha
        s = np.sqrt(u * u + vtilde)
        k1 = (u - s) / vtilde
        k1v = k1 * vtilde
        return xi * xi * (-k1v - beta * k1v * k1v - alpha) - 0.5


def coordinate_equation_residual(xi, alpha: float, beta: float, pot: PotentialEvaluator):
    """
    f(xi) = xi^2 (-K1 V~ - beta K1^2 V~^2 - alpha) - 1/2

    Accepts a scalar or an array of xi > 0.

    Raises:
        DomainError: xi <= 0
    """
    values = residual_from_vtilde(np.asarray(xi, dtype=float), pot.vtilde(xi), alpha, beta)
    if np.ndim(xi) == 0:
        return float(values)
    return values


def scan_grid(pot: PotentialEvaluator, grid_min: float, grid_max: float, grid_points: int,
              refine: bool = True):
    """Log-spaced xi grid, refined where V~ is steep; returns (xi, V~(xi))"""
    grid = log_grid(grid_min, grid_max, grid_points)
    vtilde = pot.vtilde(grid)
    if refine:
        refined = refine_grid(grid, vtilde)
        if len(refined) != len(grid):
            grid, vtilde = refined, pot.vtilde(refined)
    return grid, vtilde


def _root_record(pot: PotentialEvaluator, xi: float, alpha: float, beta: float):
    vtilde = pot.vtilde(xi)
    pair = k_pair_general(vtilde, alpha, beta)
    q = -xi * pair.k1 * vtilde
    return RootRecord(xi=xi, q=q, energy_nd=q * q + pot.v(xi)), pair


def solve_full(pot: PotentialEvaluator, alpha: float, beta: float,
               tol: float = ROOT_TOLERANCE,
               grid_min: float = SOLVE_GRID_MIN,
               grid_max: float = SOLVE_GRID_MAX,
               grid_points: int = SOLVE_GRID_POINTS,
               nd: Optional[Nondimensionalization] = None) -> SolveResult:
    """
    Full numerical solution of the minimal-coordinate equation

    Every sign change of f on the log grid is refined by bisection; the
    root with the smallest energy q^2 + V(xi) is returned and all roots are
    listed in the diagnostics.

    Raises:
        NoBoundStateError: f has no sign change on the grid
    """
    dp = DeformationParams.nondim(alpha, beta)
    grid, vtilde = scan_grid(pot, grid_min, grid_max, grid_points)
    values = residual_from_vtilde(grid, vtilde, alpha, beta)
    brackets = sign_change_brackets(grid, values)
    if not brackets:
        logger.info(f"No bound state: f has no sign change on [{grid_min}, {grid_max}] "
                    f"(alpha={alpha}, beta={beta})")
        raise NoBoundStateError(f"no bound state for alpha={alpha}, beta={beta}")
    logger.debug(f"{len(brackets)} sign change(s) for alpha={alpha}, beta={beta}")

    def f(x):
        return coordinate_equation_residual(x, alpha, beta, pot)

    candidates = []
    for a, b in brackets:
        root = bisect_root(f, a, b)
        record, pair = _root_record(pot, root.x, alpha, beta)
        candidates.append((record, pair, root))

    records = tuple(record for record, _, _ in candidates)
    best, pair, root = min(candidates, key=lambda item: item[0].energy_nd)
    residual = float(constraint_residual_values(best.xi, best.q, alpha, beta))
    converged = root.converged and abs(residual) <= tol * max(1.0, best.xi * best.q)
    if not converged:
        logger.warning(f"Root at xi={best.xi:.6g} not converged: residual {residual:.3e}")
    diagnostics = Diagnostics(
        k2=pair.k2,
        residual=residual,
        iterations=root.iterations,
        converged=converged,
        roots=records,
    )
    return make_result(best.xi, best.q, best.energy_nd, SolveMethod.FULL_NUMERIC, diagnostics, dp=dp, nd=nd)


def linear_solution(pot: PotentialEvaluator, alpha: float, beta: float,
                    nd: Optional[Nondimensionalization] = None) -> SolveResult:
    """
    Linear approximation packaged as a SolveResult

    xi_min = xi0 + xi1*beta, q_min from the minimal-momentum equation at
    that xi and the linearized energy.
    """
    dp = DeformationParams.nondim(alpha, beta)
    c = linear_coefficients(pot)
    xi = c.xi0 + c.xi1 * beta
    record, pair = _root_record(pot, xi, alpha, beta)
    residual = float(constraint_residual_values(record.xi, record.q, alpha, beta))
    diagnostics = Diagnostics(
        k2=pair.k2,
        residual=residual,
        iterations=0,
        converged=abs(residual) <= ROOT_TOLERANCE,
    )
    return make_result(xi, record.q, linear_energy(pot, alpha, beta, c), SolveMethod.LINEAR_APPROX,
                       diagnostics, dp=dp, nd=nd)
