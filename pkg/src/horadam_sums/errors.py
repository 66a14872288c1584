"""Exception types shared across the package.

Validation failures carry a machine-readable ``kind`` string so that the
grid runner can bucket skipped specs by reason and the CLI can name the
offending check in its exit message.
"""

from __future__ import annotations

# Validation kinds, in screening order (structural checks first).
BAD_PARAMETER = "bad-parameter"
SIGN_PARITY = "sign-parity"
DIVERGENT_SPEC = "divergent-spec"
EW_ZERO = "e_w-zero"
UN_ZERO = "u_n-zero"
U2KM_ZERO = "u_2km-zero"
ZERO_DENOMINATOR = "zero-denominator-at"

# Parameter-construction kinds (reported by the grid runner alongside the above).
ZERO_DISCRIMINANT = "zero-discriminant"
ZERO_Q = "zero-q"


class HoradamError(Exception):
    """Base class for all errors raised by this package."""


class DivisionByZeroError(HoradamError, ZeroDivisionError):
    """Division by an exact zero; carries both operands."""

    def __init__(self, lhs, rhs):
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"division by zero: {lhs!r} / {rhs!r}")


class MismatchedDiscError(HoradamError, ValueError):
    """Arithmetic between quadratic-field values over different radicands."""

    def __init__(self, lhs_disc, rhs_disc):
        self.lhs_disc = lhs_disc
        self.rhs_disc = rhs_disc
        super().__init__(f"mismatched disc: {lhs_disc} vs {rhs_disc}")


class NonrealDiscError(HoradamError, ValueError):
    """Sign or decimal rendering requested for a value with a negative radicand."""


class ZeroToNegativePowerError(HoradamError, ZeroDivisionError):
    """Zero raised to a negative exponent."""


class ParamsError(HoradamError, ValueError):
    """Invalid Horadam parameter set; ``kind`` is one of the taxonomy strings."""

    def __init__(self, kind: str, message: str):
        self.kind = kind
        super().__init__(f"{kind}: {message}")


class PreconditionError(HoradamError, ValueError):
    """A named operation precondition does not hold."""

    def __init__(self, condition: str, message: str = ""):
        self.condition = condition
        super().__init__(f"precondition failed: {condition}" + (f" ({message})" if message else ""))


class SpecValidationError(HoradamError, ValueError):
    """A sum spec failed validation; ``kind`` names the taxonomy entry."""

    def __init__(self, kind: str, message: str, index: int | None = None):
        self.kind = kind
        self.index = index
        label = f"{kind}({index})" if index is not None else kind
        super().__init__(f"{label}: {message}")


class RangeError(HoradamError, ValueError):
    """Argument outside the documented range of a classic evaluator."""


class IterationCapError(HoradamError, RuntimeError):
    """An iterative bound search hit its cap before meeting the target."""

    def __init__(self, message: str, achieved=None):
        self.achieved = achieved
        super().__init__(message)


class WindowUnderflowError(HoradamError, KeyError):
    """A telescoping check needs a table entry that was not supplied."""
