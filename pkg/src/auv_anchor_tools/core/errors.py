"""Exception hierarchy shared by the numerical modules and the CLI.

Every error carries the process exit code the CLI reports for it:
2 for invalid input, 3 for infeasible or uncovered scenarios, 4 for
numerical failures.
"""

EXIT_VALIDATION = 2
EXIT_INFEASIBLE = 3
EXIT_NUMERIC = 4


class AnchorToolsError(Exception):
    """Base class for all library errors."""

    exit_code: int = EXIT_NUMERIC


class InputError(AnchorToolsError, ValueError):
    """Caller supplied something outside an operation's domain."""

    exit_code = EXIT_VALIDATION


class InfeasibleError(AnchorToolsError):
    """The scenario is well formed but admits no solution."""

    exit_code = EXIT_INFEASIBLE


class NumericError(AnchorToolsError, ArithmeticError):
    """A computation failed or left the representable range."""

    exit_code = EXIT_NUMERIC


# Validation family


class ConfigError(InputError):
    """Scenario configuration could not be parsed or validated."""


class InvalidAngle(InputError):
    def __init__(self, angle: float, allowed: str = "(0, pi/2]"):
        super().__init__(f"Elevation {angle!r} rad outside {allowed}")
        self.angle = angle


class InsufficientData(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class CoincidentPoints(InputError):
    def __init__(self, point):
        super().__init__(f"Target coincides with anchor at {tuple(point)}")
        self.point = tuple(point)


class TooFewAnchors(InputError):
    pass


class PathOutsideRegion(InputError):
    pass


class NegativeGap(InputError):
    def __init__(self, d_h1: float):
        super().__init__(
            f"Navigation gap d_h1={d_h1:.3f} m is negative; coverage overlaps "
            "and the scaling law does not apply"
        )
        self.d_h1 = d_h1


# Infeasibility family


class NoCoverage(InfeasibleError):
    pass


class Infeasible(InfeasibleError):
    pass


class AllInfeasible(InfeasibleError):
    pass


# Numeric family


class TotalReflection(NumericError):
    def __init__(self, layer: int, elevation: float):
        super().__init__(
            f"Ray at elevation {elevation:.6f} rad is totally reflected at layer {layer}"
        )
        self.layer = layer
        self.elevation = elevation


class SingularFim(NumericError):
    def __init__(self, condition: float):
        super().__init__(f"Fisher information is singular (cond={condition:.3e})")
        self.condition = condition


class Diverged(NumericError):
    pass


class FitDiverged(NumericError):
    pass
