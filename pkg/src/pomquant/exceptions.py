"""Exception types. Each maps onto one CLI exit code."""


class PomQuantError(Exception):
    """Base class for library errors."""


class ConfigError(PomQuantError, ValueError):
    """Invalid user input or configuration (CLI exit code 2)."""


class NotHermitianError(PomQuantError, ValueError):
    pass


class UnboundedFunctionError(ConfigError):
    """The phase-space function cannot be quantized as a bounded operator."""


class TailMassError(PomQuantError, ArithmeticError):
    """Weight escaped the truncated basis or the integration grid (exit code 3)."""

    def __init__(self, message: str, tail: float | None = None):
        super().__init__(message)
        self.tail = tail


class SpectrumOutsideUnitInterval(PomQuantError, ValueError):
    """The constant moment problem E[k] = A has no solution (exit code 4).

    Raised when A is not an effect, i.e. its spectrum is not inside [0, 1].
    """

    def __init__(self, min_eig: float, max_eig: float, tol: float):
        super().__init__(
            f"spectrum [{min_eig:.6g}, {max_eig:.6g}] is not inside [0, 1] (tol {tol:g}); "
            "the constant moment problem has no solution"
        )
        self.min_eig = min_eig
        self.max_eig = max_eig
