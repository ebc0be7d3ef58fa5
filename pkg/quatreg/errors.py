"""
Exception types shared across quatreg
"""

from typing import Optional


class QuatregError(Exception):
    """Base class for every error raised by quatreg"""


class DomainError(QuatregError, ValueError):
    """A function was evaluated outside its domain (log, sqrt, division, negative powers of zero) or overflowed"""

    def __init__(self, function: str, value: Optional[float] = None, position: Optional[int] = None):
        self.function = function
        self.value = value
        self.position = position
        message = f"{function}: argument outside domain"
        if value is not None:
            message += f" (value={value!r})"
        if position is not None:
            message += f" at offset {position}"
        super().__init__(message)

    def with_position(self, position: Optional[int]) -> "DomainError":
        """Return a copy located at ``position`` unless a position is already known"""
        if self.position is not None or position is None:
            return self
        return DomainError(self.function, self.value, position)


class ParseError(QuatregError, ValueError):
    """Expression text could not be parsed"""

    def __init__(self, offset: int, expected: str, text: str = ""):
        self.offset = offset
        self.expected = expected
        self.text = text
        super().__init__(f"parse error at offset {offset}: expected {expected}")

    def caret(self) -> str:
        """Two-line rendering of the input with a caret under the failing offset"""
        return f"{self.text}\n{' ' * self.offset}^"


class JobError(QuatregError):
    """A job file is unreadable or malformed"""

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = path or "<job>"
        if line is not None:
            location += f":{line}"
        super().__init__(f"{location}: {message}")
