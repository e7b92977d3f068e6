"""Exception hierarchy shared by all mapenum modules."""

from __future__ import annotations


class MapEnumError(Exception):
    """Base class for library errors."""


class DomainError(MapEnumError, ValueError):
    """Argument outside the domain where a quantity is defined."""


class HypergeometricDomainError(MapEnumError, ZeroDivisionError):
    """A denominator Pochhammer symbol vanished before the series terminated."""


class SeriesError(MapEnumError, ValueError):
    """Invalid truncated-series operation (e.g. reversion of a non-invertible series)."""


class PoleError(MapEnumError, ZeroDivisionError):
    """A step map hit a vanishing denominator.

    ``denominator`` names the expression that vanished.
    """

    def __init__(self, denominator: str, where: str = ""):
        self.denominator = denominator
        self.where = where
        msg = f"pole: {denominator} = 0"
        if where:
            msg += f" ({where})"
        super().__init__(msg)


class SingularityError(PoleError):
    """z0 reached the singular value nu/(nu-1)."""


class BranchLostError(MapEnumError, ArithmeticError):
    """Continuation of the string-equation root from t=0 failed."""


class CapExceededError(MapEnumError):
    """Brute-force enumeration refused because the instance is above the cap."""

    def __init__(self, required: int, cap: int):
        self.required = required
        self.cap = cap
        super().__init__(f"enumeration needs {required} darts, cap is {cap}")


class DimensionMismatchError(MapEnumError, ValueError):
    pass


class SupportEscapeError(MapEnumError, ValueError):
    """A coefficient vector has nonzero entries outside the 5g-5 band."""


class CenterDimensionError(MapEnumError, ValueError):
    pass


class ResonanceError(MapEnumError, ArithmeticError):
    pass


class OrderStarvationError(MapEnumError, ValueError):
    pass


class QuadratureError(MapEnumError, ArithmeticError):
    pass


class DegreeGapError(MapEnumError, ValueError):
    pass
