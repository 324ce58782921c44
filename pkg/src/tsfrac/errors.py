"""Exception hierarchy.

Two families matter to callers: :class:`InputError` (bad scale, bad
expression, point outside the scale) and :class:`NumericError` (the
computation itself failed). The CLI maps them to exit codes 2 and 3.
"""


class TsfracError(Exception):
    """Base class for every error raised by this package."""


class InputError(TsfracError):
    pass


class NumericError(TsfracError):
    pass


class ScaleSpecError(InputError, ValueError):
    """Malformed scale-spec string or invalid time-scale parameters."""


class ParseError(InputError, ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class InvalidArgument(InputError, ValueError):
    pass


class PointNotInScale(InputError):
    pass


class NotInKappa(InputError):
    pass


class NoPointOnSide(InputError):
    pass


class NoApproachDirection(InputError):
    """Right-dense point with no points of the scale accumulating at it."""


class HigherOrderUnavailable(InputError):
    pass


class DomainError(NumericError):
    """A real function could not be evaluated at a point."""


class ZeroAtPoint(DomainError):
    pass


class PowUndefined(NumericError):
    pass


class DegenerateDenominator(NumericError):
    pass


class LimitNotConverged(NumericError):
    pass


class SideDisagreement(NumericError):
    pass
