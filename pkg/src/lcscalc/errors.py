"""Exception hierarchy shared by every module of the engine."""

from __future__ import annotations


class LcsCalcError(Exception):
    """Base class for all engine errors."""


class DivisionByZero(LcsCalcError, ZeroDivisionError):
    pass


class UnknownSymbol(LcsCalcError, KeyError):
    def __str__(self) -> str:  # KeyError quotes its argument otherwise
        return str(self.args[0]) if self.args else ""


class ParseError(LcsCalcError, ValueError):
    """Syntax error; ``offset`` is the byte offset into the UTF-8 input."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


class ChartMismatch(LcsCalcError, ValueError):
    pass


class DegenerateStructure(LcsCalcError, ValueError):
    pass


class DegreeMismatch(LcsCalcError, ValueError):
    pass


class DimensionError(LcsCalcError, ValueError):
    pass


class InvalidContact(LcsCalcError, ValueError):
    pass


class NotACollar(LcsCalcError, ValueError):
    pass


class InvalidLeeForm(LcsCalcError, ValueError):
    pass


class NonScalarCommutator(LcsCalcError, ArithmeticError):
    pass


class InvalidPresentation(LcsCalcError, ValueError):
    def __init__(self, message: str, witness: str | None = None):
        super().__init__(message if witness is None else f"{message}: {witness}")
        self.witness = witness


class InvalidPoint(LcsCalcError, ValueError):
    pass


class EmptyFiber(LcsCalcError, ValueError):
    pass


class InvalidFiberPoint(LcsCalcError, ValueError):
    pass
