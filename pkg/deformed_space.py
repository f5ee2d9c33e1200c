"""
Physical constants, deformation parameters, nondimensionalization rules
and the result types shared by every solver
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from config import DEFAULT_HBAR, DEFAULT_MASS
from errors import ConfigurationError, DomainError, InvalidDeformationError


@dataclass(frozen=True)
class PhysicalContext:
    """
    Physical constants of a problem

    A harmonic problem carries omega; a general (power-law / polynomial)
    problem carries the unit length a and optionally the potential strength u0.
    """
    hbar: float = DEFAULT_HBAR
    mass: float = DEFAULT_MASS
    omega: Optional[float] = None
    a: Optional[float] = None
    u0: Optional[float] = None

    def __post_init__(self):
        if not self.hbar > 0:
            raise ConfigurationError(f"hbar must be positive, got {self.hbar}")
        if not self.mass > 0:
            raise ConfigurationError(f"mass must be positive, got {self.mass}")
        if (self.omega is None) == (self.a is None):
            raise ConfigurationError("exactly one of omega (harmonic) or a (general potential) must be given")
        if self.omega is not None and not self.omega > 0:
            raise ConfigurationError(f"omega must be positive, got {self.omega}")
        if self.a is not None and not self.a > 0:
            raise ConfigurationError(f"a must be positive, got {self.a}")
        if self.u0 is not None and self.a is None:
            raise ConfigurationError("u0 is only meaningful together with a")

    @property
    def is_harmonic(self) -> bool:
        return self.omega is not None


@dataclass(frozen=True)
class Nondimensionalization:
    """Units (dx0, dp0, e0) with dx0 * dp0 = hbar"""
    dx0: float
    dp0: float
    e0: float

    def __post_init__(self):
        if not (self.dx0 > 0 and self.dp0 > 0 and self.e0 > 0):
            raise ConfigurationError(f"units must be positive, got {self}")

    @property
    def hbar(self) -> float:
        return self.dx0 * self.dp0


@dataclass(frozen=True)
class DeformationParams:
    """
    Deformation parameters in both physical (alpha', beta') and
    nondimensional (alpha, beta) form.

    The physical pair is None when the parameters were given directly in
    nondimensional form. The product bounds are enforced here so that every
    downstream formula may divide by (1 - 4*alpha*beta).
    """
    alpha: float
    beta: float
    alpha_prime: Optional[float] = None
    beta_prime: Optional[float] = None

    def __post_init__(self):
        if not (self.alpha >= 0 and self.beta >= 0):
            raise InvalidDeformationError(f"alpha and beta must be non-negative, got alpha={self.alpha}, beta={self.beta}")
        if not self.alpha * self.beta < 0.25:
            raise InvalidDeformationError(f"alpha*beta must be below 1/4, got {self.alpha * self.beta}")

    @classmethod
    def nondim(cls, alpha: float, beta: float) -> "DeformationParams":
        return cls(alpha=float(alpha), beta=float(beta))

    @property
    def has_physical(self) -> bool:
        return self.alpha_prime is not None and self.beta_prime is not None


def check_physical_deformation(alpha_prime: float, beta_prime: float, hbar: float = DEFAULT_HBAR):
    """Raise InvalidDeformationError unless alpha', beta' >= 0 and alpha'*beta' < hbar^-2"""
    if not (alpha_prime >= 0 and beta_prime >= 0):
        raise InvalidDeformationError(
            f"alpha' and beta' must be non-negative, got alpha'={alpha_prime}, beta'={beta_prime}")
    if not alpha_prime * beta_prime * hbar * hbar < 1.0:
        raise InvalidDeformationError(
            f"alpha'*beta' must be below hbar^-2, got alpha'*beta'*hbar^2={alpha_prime * beta_prime * hbar * hbar}")


def nondimensionalize_harmonic(ctx: PhysicalContext) -> Nondimensionalization:
    """Units of the harmonic oscillator: energy in units of hbar*omega/2"""
    if ctx.omega is None:
        raise ConfigurationError("harmonic nondimensionalization requires omega")
    dx0 = math.sqrt(ctx.hbar / (ctx.mass * ctx.omega))
    dp0 = math.sqrt(ctx.hbar * ctx.mass * ctx.omega)
    return Nondimensionalization(dx0=dx0, dp0=dp0, e0=ctx.hbar * ctx.omega / 2)


def nondimensionalize_general(ctx: PhysicalContext) -> Nondimensionalization:
    """Units of a potential U0*U((x/a)^2): dx0 = a, dp0 = hbar/a, e0 = hbar^2/(2 m a^2)"""
    if ctx.a is None:
        raise ConfigurationError("general nondimensionalization requires a")
    return Nondimensionalization(
        dx0=ctx.a,
        dp0=ctx.hbar / ctx.a,
        e0=ctx.hbar * ctx.hbar / (2 * ctx.mass * ctx.a * ctx.a),
    )


def nondimensionalize(ctx: PhysicalContext) -> Nondimensionalization:
    """Pick the harmonic or general units depending on what the context carries"""
    if ctx.is_harmonic:
        return nondimensionalize_harmonic(ctx)
    return nondimensionalize_general(ctx)


def potential_strength_nd(ctx: PhysicalContext) -> float:
    """Nondimensional potential strength v0 = U0 / E0"""
    if ctx.u0 is None:
        raise ConfigurationError("potential strength requires u0")
    return ctx.u0 / nondimensionalize_general(ctx).e0


def to_nondim(alpha_prime: float, beta_prime: float, nd: Nondimensionalization) -> DeformationParams:
    """
    Convert physical deformation parameters to nondimensional ones

    Args:
        alpha_prime: Coordinate-sector deformation (1/length^2)
        beta_prime: Momentum-sector deformation (1/momentum^2)
        nd: Units of the problem

    Returns:
        DeformationParams carrying both forms
    """
    check_physical_deformation(alpha_prime, beta_prime, nd.hbar)
    return DeformationParams(
        alpha=0.5 * nd.dx0 * nd.dx0 * alpha_prime,
        beta=0.5 * nd.dp0 * nd.dp0 * beta_prime,
        alpha_prime=float(alpha_prime),
        beta_prime=float(beta_prime),
    )


def to_physical(dp: DeformationParams, nd: Nondimensionalization) -> DeformationParams:
    """Inverse of to_nondim: attach alpha', beta' computed from alpha, beta"""
    return DeformationParams(
        alpha=dp.alpha,
        beta=dp.beta,
        alpha_prime=2 * dp.alpha / (nd.dx0 * nd.dx0),
        beta_prime=2 * dp.beta / (nd.dp0 * nd.dp0),
    )


@dataclass(frozen=True)
class UncertaintyPoint:
    """Dimensionless coordinate and momentum uncertainties (xi, q)"""
    xi: float
    q: float

    def __post_init__(self):
        if not (self.xi > 0 and self.q > 0):
            raise DomainError(f"uncertainties must be positive, got xi={self.xi}, q={self.q}")


def constraint_residual(pt: UncertaintyPoint, dp: DeformationParams) -> float:
    """
    xi*q - 1/2 - beta*q^2 - alpha*xi^2

    Zero on the boundary of the generalized uncertainty relation, positive
    strictly inside the allowed region.
    """
    return constraint_residual_values(pt.xi, pt.q, dp.alpha, dp.beta)


def constraint_residual_values(xi, q, alpha: float, beta: float):
    """Array version of constraint_residual (no validation)"""
    return xi * q - 0.5 - beta * q * q - alpha * xi * xi


class SolveMethod(str, Enum):
    CLOSED_FORM = "ClosedForm"
    LINEAR_APPROX = "LinearApprox"
    FULL_NUMERIC = "FullNumeric"
    ORACLE = "Oracle"


@dataclass(frozen=True)
class RootRecord:
    """One root of the minimal-coordinate equation and the energy it gives"""
    xi: float
    q: float
    energy_nd: float


@dataclass(frozen=True)
class Diagnostics:
    k2: float
    residual: float
    iterations: int
    converged: bool
    roots: Tuple[RootRecord, ...] = ()
    interior: Optional[bool] = None


@dataclass(frozen=True)
class SolveResult:
    point: UncertaintyPoint
    energy_nd: float
    energy_physical: float
    method: SolveMethod
    diagnostics: Diagnostics
    deformation: Optional[DeformationParams] = field(default=None, compare=False)

    def to_dict(self) -> dict:
        """Plain-dict view with every field, used by the JSON writer"""
        diag = self.diagnostics
        data = {
            "xi_min": self.point.xi,
            "q_min": self.point.q,
            "energy_nd": self.energy_nd,
            "energy_physical": self.energy_physical,
            "method": self.method.value,
            "diagnostics": {
                "k2": diag.k2,
                "residual": diag.residual,
                "iterations": diag.iterations,
                "converged": diag.converged,
                "roots": [{"xi": r.xi, "q": r.q, "energy_nd": r.energy_nd} for r in diag.roots],
                "interior": diag.interior,
            },
        }
        if self.deformation is not None:
            data["deformation"] = {
                "alpha": self.deformation.alpha,
                "beta": self.deformation.beta,
                "alpha_prime": self.deformation.alpha_prime,
                "beta_prime": self.deformation.beta_prime,
            }
        return data


def make_result(xi: float, q: float, energy_nd: float, method: SolveMethod, diagnostics: Diagnostics,
                dp: Optional[DeformationParams] = None,
                nd: Optional[Nondimensionalization] = None) -> SolveResult:
    """Assemble a SolveResult; without units the physical energy is the nondimensional one"""
    e0 = nd.e0 if nd is not None else 1.0
    return SolveResult(
        point=UncertaintyPoint(xi=float(xi), q=float(q)),
        energy_nd=float(energy_nd),
        energy_physical=float(e0 * energy_nd),
        method=method,
        diagnostics=diagnostics,
        deformation=dp,
    )
