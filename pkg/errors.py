"""
Exception types raised by the solver modules
"""

from typing import List, Optional


class GUPError(Exception):
    """Base class for all solver errors"""


class ConfigurationError(GUPError):
    """Missing or contradictory physical context / run configuration"""


class InvalidDeformationError(GUPError):
    """Deformation parameters outside alpha, beta >= 0 and alpha*beta < 1/4"""


class DomainError(GUPError):
    """Evaluation outside the domain of a function (e.g. xi <= 0)"""


class PotentialSyntaxError(GUPError):
    """Potential expression could not be parsed"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class InadmissiblePotentialError(GUPError):
    """Potential fails one or more admissibility conditions"""

    def __init__(self, violations: List):
        self.violations = list(violations)
        details = "; ".join(str(v) for v in self.violations)
        super().__init__(f"potential is not admissible: {details}")


class NoBoundStateError(GUPError):
    """No bound state exists for the requested parameters"""


class EmptyFeasibleGridError(GUPError):
    """Brute-force grid contains no point satisfying the uncertainty relation"""


class UsageError(GUPError):
    """Command-line usage or validation problem"""


class DegeneratePotentialError(GUPError):
    """Linear-approximation denominator vanishes for the potential"""
