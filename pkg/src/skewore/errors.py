"""Exception hierarchy shared by every skewore module."""


class SkewOreError(Exception):
    """Base class for all library errors."""


class CarrierMismatch(SkewOreError, TypeError):
    pass


class NotLocallyNilpotent(SkewOreError, ArithmeticError):
    """Raised when no power of delta up to the cap kills an element."""

    def __init__(self, element, cap):
        super().__init__(f"delta^n({element!r}) != 0 for all n <= {cap}")
        self.element = element
        self.cap = cap


class TwistError(SkewOreError, ValueError):
    """The (sigma, delta) data is not well defined on the carrier."""


class LatticeTooLarge(SkewOreError):
    pass


class ZeroModule(SkewOreError, ValueError):
    pass


class NotStableUnderTwist(SkewOreError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class PreconditionFailed(SkewOreError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class CombinatorialCapExceeded(SkewOreError):
    pass


class ParseError(SkewOreError, ValueError):
    def __init__(self, message, position=None):
        where = f" at position {position}" if position is not None else ""
        super().__init__(f"{message}{where}")
        self.position = position


class PresetError(SkewOreError, ValueError):
    """Unknown preset or a parameter value the preset cannot use."""
