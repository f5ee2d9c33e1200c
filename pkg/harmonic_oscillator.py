"""
Closed-form ground-state bound of the harmonic oscillator in deformed space
"""

import math
from dataclasses import dataclass, replace
from typing import Optional, Tuple

from deformed_space import (
    DeformationParams,
    Diagnostics,
    Nondimensionalization,
    PhysicalContext,
    SolveMethod,
    SolveResult,
    check_physical_deformation,
    constraint_residual_values,
    make_result,
    nondimensionalize_harmonic,
    to_nondim,
)
from errors import ConfigurationError


@dataclass(frozen=True)
class KPair:
    """K = 2*beta - 2/lambda for the two Lagrange multipliers; k1 < 0 < k2"""
    k1: float
    k2: float


def _stable_k2(delta: float) -> float:
    root = math.sqrt(delta * delta + 1.0)
    if delta >= 0:
        return delta + root
    return 1.0 / (root - delta)


def k_pair(alpha: float, beta: float) -> KPair:
    """
    K variables of the harmonic problem

    k2 = beta - alpha + sqrt((beta - alpha)^2 + 1) and k1 = -1/k2, so that
    k1*k2 = -1, k1 + k2 = 2(beta - alpha), k2 - k1 = 2 sqrt((beta - alpha)^2 + 1).

    Raises:
        InvalidDeformationError: alpha*beta >= 1/4 or negative parameters
    """
    DeformationParams.nondim(alpha, beta)
    k2 = _stable_k2(beta - alpha)
    return KPair(k1=-1.0 / k2, k2=k2)


def harmonic_lambdas(alpha: float, beta: float) -> Tuple[float, float]:
    """
    Roots (lambda1, lambda2) of (1 - 4ab) L^2 + 4(a + b) L - 4 = 0

    Ordered so that 2*beta - 2/lambda1 = k1 and 2*beta - 2/lambda2 = k2.
    """
    DeformationParams.nondim(alpha, beta)
    total = alpha + beta
    root = math.sqrt((beta - alpha) ** 2 + 1.0)
    lambda1 = 2.0 / (root + total)
    lambda2 = -2.0 * (root + total) / (1.0 - 4.0 * alpha * beta)
    return lambda1, lambda2


def _closed_form(alpha: float, beta: float) -> Tuple[float, float, float]:
    """(xi_min, q_min, energy) for alpha <= beta"""
    delta = beta - alpha
    root = math.sqrt(delta * delta + 1.0)
    k2 = delta + root
    # k2 - alpha*k2^2 - beta with the beta cancellation removed
    denominator = root - alpha * (1.0 + k2 * k2)
    assert denominator > 0, f"non-positive denominator {denominator} for alpha={alpha}, beta={beta}"
    q_min = 1.0 / math.sqrt(2.0 * denominator)
    return k2 * q_min, q_min, k2 / (1.0 - 2.0 * alpha * k2)


def harmonic_minimum(alpha: float, beta: float, nd: Optional[Nondimensionalization] = None) -> SolveResult:
    """
    Minimal uncertainties and minimal energy of the harmonic oscillator

    Energy is in units of hbar*omega/2; pass `nd` to also get the
    physical energy. For alpha > beta the roles of xi and q are exchanged,
    so 1 - 2*alpha*K2 is never evaluated with alpha*K2 close to 1/2.
    """
    dp = DeformationParams.nondim(alpha, beta)
    if alpha <= beta:
        xi_min, q_min, energy = _closed_form(alpha, beta)
    else:
        q_min, xi_min, energy = _closed_form(beta, alpha)
    diagnostics = Diagnostics(
        k2=_stable_k2(beta - alpha),
        residual=float(constraint_residual_values(xi_min, q_min, alpha, beta)),
        iterations=0,
        converged=True,
    )
    return make_result(xi_min, q_min, energy, SolveMethod.CLOSED_FORM, diagnostics, dp=dp, nd=nd)


def _require_omega(ctx: PhysicalContext):
    if ctx.omega is None:
        raise ConfigurationError("harmonic oscillator requires omega")


def harmonic_energy_physical(ctx: PhysicalContext, alpha_prime: float, beta_prime: float) -> float:
    """
    Minimal energy in physical units from the dimensional closed form

    E = (hbar*omega/2) * K2 / (1 - hbar*alpha'*K2/(m*omega)) with
    K2 = D + sqrt(D^2 + 1), D = hbar*(m*omega*beta' - alpha'/(m*omega))/2

    When the alpha' term dominates, the exchanged form
    K2 / (1 - hbar*m*omega*beta'*K2) with D -> -D is used instead.
    """
    _require_omega(ctx)
    check_physical_deformation(alpha_prime, beta_prime, ctx.hbar)
    m_omega = ctx.mass * ctx.omega
    alpha_term = ctx.hbar * alpha_prime / m_omega
    beta_term = ctx.hbar * m_omega * beta_prime
    delta = (beta_term - alpha_term) / 2.0
    if delta >= 0:
        k2 = _stable_k2(delta)
        ratio = k2 / (1.0 - alpha_term * k2)
    else:
        k2 = _stable_k2(-delta)
        ratio = k2 / (1.0 - beta_term * k2)
    return ctx.hbar * ctx.omega / 2.0 * ratio


def harmonic_linear(ctx: PhysicalContext, alpha_prime: float, beta_prime: float) -> float:
    """Linear approximation hbar*w/2 + hbar^2 w^2 m beta'/4 + hbar^2 alpha'/(4m)"""
    _require_omega(ctx)
    check_physical_deformation(alpha_prime, beta_prime, ctx.hbar)
    hbar, mass, omega = ctx.hbar, ctx.mass, ctx.omega
    return (hbar * omega / 2.0
            + hbar * hbar * omega * omega * mass * beta_prime / 4.0
            + hbar * hbar * alpha_prime / (4.0 * mass))


def harmonic_minimum_physical(ctx: PhysicalContext, alpha_prime: float, beta_prime: float) -> SolveResult:
    """harmonic_minimum for physical deformation parameters"""
    nd = nondimensionalize_harmonic(ctx)
    dp = to_nondim(alpha_prime, beta_prime, nd)
    return replace(harmonic_minimum(dp.alpha, dp.beta, nd=nd), deformation=dp)
