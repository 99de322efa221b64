"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`PosmapError`.
The CLI maps :class:`InputError` subclasses to exit code 1 and
:class:`DomainError` subclasses to exit code 2.
"""


class PosmapError(Exception):
    """Base class for library errors."""


class InputError(PosmapError, ValueError):
    """Malformed or inconsistent input data."""


class DomainError(PosmapError):
    """Input is well formed but violates a mathematical precondition."""


class NotHermitian(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class MalformedSpec(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class PatternMismatch(InputError):
    pass


class InvalidState(InputError):
    pass


class NotCompletelyPositive(DomainError):
    pass


class NotUnital(DomainError):
    pass


class NotInFace(DomainError):
    pass


class DegenerateGNS(DomainError):
    pass


class BlockPositivityViolated(DomainError):
    def __init__(self, message, value=None, x=None, y=None):
        super().__init__(message)
        self.value = value
        self.x = x
        self.y = y


class ExtremalityConstraintViolated(DomainError):
    pass


class ConstraintViolated(DomainError):
    pass


class DegenerateParameter(DomainError):
    pass


class SplitInvalid(DomainError):
    def __init__(self, condition, message=None):
        super().__init__(message or f"split invalid: {condition}")
        self.condition = condition


class MapNotScreened(DomainError):
    pass
