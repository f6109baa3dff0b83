"""Exception types shared across the package."""


class BeltramiLabError(Exception):
    """Base class for all package errors."""


class ConfigError(BeltramiLabError):
    """Invalid user input: malformed spec, bad parameter, schema violation."""


class NumericalError(BeltramiLabError):
    """A numerical procedure failed to meet its contract."""


class NonPositiveCurvature(ConfigError):
    """Curve has a point with kappa <= 0; the Frenet frame degenerates."""


class DegenerateSpeed(ConfigError):
    """Curve parametrization has |gamma'| ~ 0 somewhere."""


class NonPositiveB(ConfigError):
    """Tube metric factor B = 1 - eps*kappa*r*cos(theta) lost positivity."""


class BracketFailure(NumericalError):
    """Root bracketing for family tuning failed (no sign change)."""


class OverlappingSupports(ConfigError):
    """Profile supports that must be pairwise disjoint overlap."""


class CurvatureSignLoss(NumericalError):
    """A perturbation destroyed strict positivity of curvature."""


class AnnulusExit(NumericalError):
    """A trajectory left the radial annulus guard during integration."""


class TorsionSignError(ConfigError):
    """Torsion does not change sign inside a designated support interval."""


class DesignFailure(NumericalError):
    """Profile design (projection / root find / moment targeting) failed."""
