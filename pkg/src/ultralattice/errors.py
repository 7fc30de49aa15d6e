"""Exception hierarchy.

Every error raised by the library derives from :class:`UltraLatticeError`.
Precision problems form their own branch so that callers (the CLI in
particular) can map them onto a dedicated exit status.
"""


class UltraLatticeError(Exception):
    pass


class NotPPowerDenominator(UltraLatticeError, ValueError):
    pass


class ConfigMismatch(UltraLatticeError, ValueError):
    pass


class ElementSyntaxError(UltraLatticeError, ValueError):
    """Malformed element text; carries the offending position."""

    def __init__(self, message, position=None, expected=None):
        self.position = position
        self.expected = expected
        where = "" if position is None else f" at position {position}"
        want = "" if expected is None else f" (expected {expected})"
        super().__init__(f"{message}{where}{want}")


class DepthExceeded(UltraLatticeError, ValueError):
    pass


class NotInvertible(UltraLatticeError, ValueError):
    pass


class NotInSpan(UltraLatticeError, ValueError):
    """A vector does not lie in ``L[1/T]`` for the lattice it was tested against."""


class NotWellDefined(UltraLatticeError, ValueError):
    pass


class NotInjective(UltraLatticeError, ValueError):
    pass


class NotCommensurable(UltraLatticeError, ValueError):
    pass


class NotOpen(UltraLatticeError, ValueError):
    pass


class BudgetExceeded(UltraLatticeError):
    pass


class PrecisionError(UltraLatticeError, ArithmeticError):
    pass


class IncomparableAtPrecision(PrecisionError):
    pass


class PrecisionExceeded(PrecisionError):
    pass


class FloorExceeded(PrecisionError):
    """An exponent fell below the configured Laurent floor."""


class PrecisionLoss(PrecisionError):
    pass


class PrecisionUndecidable(PrecisionError):
    pass


class NoStabilization(UltraLatticeError, UserWarning):
    """Almost-element computation differs between depth K and K + 1 (a warning, not fatal)."""
