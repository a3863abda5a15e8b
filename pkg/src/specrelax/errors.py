"""Exception types shared across the solver and oracle layers."""

from __future__ import annotations


class OracleError(RuntimeError):
    """Raised when a reference solver cannot produce a trustworthy answer.

    Examples: Newton iteration on an implicit characteristic equation fails
    to converge, or Riemann data would generate vacuum.
    """


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending key."""


class FitError(RuntimeError):
    """A spectral fit has too little usable data (window below the noise floor)."""


class BlowupError(RuntimeError):
    """A time integration produced non-finite values.

    Carries enough diagnostics to report the failure as a first-class
    outcome rather than a crash.

    Attributes
    ----------
    t : float
        Simulation time at which the failure was detected.
    step_index : int
        Index of the step being taken when the failure occurred.
    field : str
        Name of the offending component field.
    max_abs : float
        Largest finite absolute value seen in that field (context for logs).
    """

    def __init__(self, message: str, *, t: float, step_index: int,
                 field: str, max_abs: float = float("nan")):
        super().__init__(message)
        self.t = t
        self.step_index = step_index
        self.field = field
        self.max_abs = max_abs


class PositivityError(BlowupError):
    """A physically positive quantity (density, pressure, depth) went non-positive.

    Attributes
    ----------
    node_index : int
        Grid node where the violation occurred.
    x : float
        Physical coordinate of that node.
    """

    def __init__(self, message: str, *, t: float, step_index: int, field: str,
                 node_index: int, x: float, value: float):
        super().__init__(message, t=t, step_index=step_index, field=field,
                         max_abs=abs(value))
        self.node_index = node_index
        self.x = x
        self.value = value
