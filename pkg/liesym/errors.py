"""Exceptions raised by liesym"""
from typing import Optional


class LiesymError(ValueError):
    """Base class for invalid input to any liesym operation"""


class ParseError(LiesymError):
    """Syntax error or unknown token in an expression string"""
    def __init__(
        self,
        message: str,
        text: str = '',
        line: Optional[int] = None,
        column: Optional[int] = None,
    ) -> None:
        self.text = text
        self.line = line
        self.column = column
        if line is not None and column is not None:
            message = f'{message} (line {line}, column {column})'
        super().__init__(message)


class UndeclaredSymbolError(ParseError):
    """Identifier used in a strict namespace without declaration"""


class NotPolynomialError(LiesymError):
    """Expression is not polynomial in the requested variables"""


class MetricNotInvertibleError(LiesymError):
    """Metric determinant vanishes identically"""


class PreconditionError(LiesymError):
    """Operation called outside of its stated preconditions"""


class SpecError(LiesymError):
    """Malformed problem specification"""
    def __init__(self, message: str, field: Optional[str] = None) -> None:
        self.field = field
        if field is not None:
            message = f'{field}: {message}'
        super().__init__(message)


class InvariantViolation(RuntimeError):
    """An internal consistency check failed"""
