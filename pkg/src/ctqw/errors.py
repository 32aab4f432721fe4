"""Exception hierarchy shared across the package."""


class CtqwError(Exception):
    """Base class for all package-specific errors."""


class NumericError(CtqwError):
    """A numeric procedure failed or was asked to run outside its validity range.

    The CLI maps these to exit code 3.
    """


class InvalidOrderError(CtqwError, ValueError):
    """Graph-family order below the family minimum."""


class UnsupportedFamilyError(CtqwError, ValueError):
    """Operation asked for a graph family it has no formula for."""


class EdgeListError(CtqwError, ValueError):
    """Malformed edge-list input: loops, duplicates, bad ranges, parse errors."""


class MissingZeroEigenvalueError(CtqwError, ValueError):
    """Spectrum passed to the complement map does not contain the eigenvalue 0."""


class DegenerateSpectrumError(CtqwError, ValueError):
    """Spectrum has a single level, so no ground/top superposition exists."""


class ConvergenceError(NumericError, RuntimeError):
    """Iterative eigensolver did not reach the convergence criterion."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (off-diagonal residual {residual:.3e})")
        self.residual = residual


class NonRegularModelError(NumericError, ValueError):
    """Statistical model is non-regular at the requested point (Fisher information ~ 0)."""


class UnsupportedScenarioError(CtqwError, ValueError):
    """No closed-form Fisher information is available for this probe/graph pairing."""


class UnreliableEstimateWarning(UserWarning):
    """Numeric estimate is at the resolution floor and should not be trusted blindly."""
