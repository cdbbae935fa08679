"""Exception types shared across the package."""

from __future__ import annotations


class CCError(Exception):
    """Base class for every error raised by contcalc."""


class MalformedRule(CCError):
    pass


class UnboundVariable(CCError):
    pass


class DuplicateDefinition(CCError):
    pass


class ArityMismatch(CCError):
    pass


class ShapeError(CCError):
    """A mu-type whose body does not have the admissible shape."""

    def __init__(self, message: str, offending=None):
        super().__init__(message)
        self.offending = offending


class NotAMu(CCError):
    pass


class CircularityError(CCError):
    def __init__(self, message: str, cycle: tuple = ()):
        super().__init__(message)
        self.cycle = tuple(cycle)


class ConstructorMismatch(CCError):
    pass


class DecodeFailure(CCError):
    def __init__(self, reason: str, term=None):
        super().__init__(f"{reason}: {term}" if term is not None else reason)
        self.reason = reason
        self.term = term


class NameClash(CCError):
    pass
