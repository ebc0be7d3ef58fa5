"""
Quaternion algebra H on the basis e1 (identity), e2, e3, e4.

Products follow e_i^2 = -e1 for i = 2, 3, 4 and
e_i e_j = -e_j e_i = (-1)^(i+j+1) e_(9-i-j) for 2 <= i < j <= 4.
The rule is turned into a structure-constant tensor once; scalar and batched
multiplication both read it, so there is a single source for the table.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from quatreg.errors import DomainError

logger = logging.getLogger(__name__)

Real = Union[int, float]


def _structure_constants() -> np.ndarray:
    table = np.zeros((4, 4, 4))
    for k in range(4):
        table[0, k, k] = 1.0
        table[k, 0, k] = 1.0
    for i in range(2, 5):
        table[i - 1, i - 1, 0] = -1.0
        for j in range(i + 1, 5):
            k = 9 - i - j
            sign = (-1.0) ** (i + j + 1)
            table[i - 1, j - 1, k - 1] = sign
            table[j - 1, i - 1, k - 1] = -sign
    return table


STRUCTURE = _structure_constants()
_STRUCTURE_FLAT = STRUCTURE.reshape(16, 4)


def multiply_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Quaternion products of coefficient arrays of shape (..., 4), broadcasting over leading axes"""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    outer = a[..., :, None] * b[..., None, :]
    return outer.reshape(outer.shape[:-2] + (16,)) @ _STRUCTURE_FLAT


def inverse_arrays(a: np.ndarray) -> np.ndarray:
    """Inverses of coefficient arrays of shape (..., 4); rows must be nonzero"""
    a = np.asarray(a, dtype=float)
    norm2 = np.sum(a * a, axis=-1)
    if np.any(norm2 == 0.0):
        raise DomainError("inverse", value=0.0)
    conj = a * np.array([1.0, -1.0, -1.0, -1.0])
    return conj / norm2[..., None]


@dataclass(frozen=True)
class Quaternion:
    """c1 e1 + c2 e2 + c3 e3 + c4 e4 with real coefficients"""
    c1: float = 0.0
    c2: float = 0.0
    c3: float = 0.0
    c4: float = 0.0

    @classmethod
    def from_array(cls, values) -> "Quaternion":
        c1, c2, c3, c4 = (float(v) for v in values)
        return cls(c1, c2, c3, c4)

    @classmethod
    def from_real(cls, value: Real) -> "Quaternion":
        return cls(float(value), 0.0, 0.0, 0.0)

    @classmethod
    def basis(cls, k: int) -> "Quaternion":
        """The basis element e_k, k in 1..4"""
        if not 1 <= k <= 4:
            raise ValueError(f"basis index must be in 1..4, got {k}")
        values = [0.0] * 4
        values[k - 1] = 1.0
        return cls(*values)

    @property
    def coefficients(self) -> Tuple[float, float, float, float]:
        return (self.c1, self.c2, self.c3, self.c4)

    def to_array(self) -> np.ndarray:
        return np.array(self.coefficients)

    @property
    def real(self) -> float:
        return self.c1

    @property
    def pure(self) -> "Quaternion":
        return Quaternion(0.0, self.c2, self.c3, self.c4)

    def __add__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.c1 + other.c1, self.c2 + other.c2, self.c3 + other.c3, self.c4 + other.c4)

    def __sub__(self, other: "Quaternion") -> "Quaternion":
        if not isinstance(other, Quaternion):
            return NotImplemented
        return Quaternion(self.c1 - other.c1, self.c2 - other.c2, self.c3 - other.c3, self.c4 - other.c4)

    def __neg__(self) -> "Quaternion":
        return Quaternion(-self.c1, -self.c2, -self.c3, -self.c4)

    def __mul__(self, other: Union["Quaternion", Real]) -> "Quaternion":
        if isinstance(other, Quaternion):
            return multiply(self, other)
        if isinstance(other, (int, float, np.floating, np.integer)):
            s = float(other)
            return Quaternion(self.c1 * s, self.c2 * s, self.c3 * s, self.c4 * s)
        return NotImplemented

    def __rmul__(self, other: Real) -> "Quaternion":
        if isinstance(other, (int, float, np.floating, np.integer)):
            return self * other
        return NotImplemented

    def __truediv__(self, other: Real) -> "Quaternion":
        if isinstance(other, (int, float, np.floating, np.integer)):
            if other == 0:
                raise DomainError("div", value=0.0)
            return self * (1.0 / float(other))
        return NotImplemented

    def conjugate(self) -> "Quaternion":
        return Quaternion(self.c1, -self.c2, -self.c3, -self.c4)

    def norm(self) -> float:
        return math.sqrt(self.c1 ** 2 + self.c2 ** 2 + self.c3 ** 2 + self.c4 ** 2)

    def inverse(self) -> "Quaternion":
        return inverse(self)

    def max_abs(self) -> float:
        return max(abs(c) for c in self.coefficients)

    def is_zero(self) -> bool:
        return self.coefficients == (0.0, 0.0, 0.0, 0.0)

    def __str__(self) -> str:
        parts = [f"{self.c1:.12g}"]
        for label, value in (("e2", self.c2), ("e3", self.c3), ("e4", self.c4)):
            sign = "-" if math.copysign(1.0, value) < 0 else "+"
            parts.append(f"{sign} {abs(value):.12g} {label}")
        return " ".join(parts)


ZERO = Quaternion()
ONE = Quaternion(1.0, 0.0, 0.0, 0.0)


def multiply(a: Quaternion, b: Quaternion) -> Quaternion:
    """Bilinear extension of the basis table; a·b, in that order"""
    return Quaternion.from_array(multiply_arrays(a.to_array(), b.to_array()))


def conjugate_and_norm(a: Quaternion) -> Tuple[Quaternion, float]:
    return a.conjugate(), a.norm()


def inverse(a: Quaternion) -> Quaternion:
    """Conjugate over squared norm; the zero quaternion has no inverse"""
    norm2 = a.c1 ** 2 + a.c2 ** 2 + a.c3 ** 2 + a.c4 ** 2
    if norm2 == 0.0:
        raise DomainError("inverse", value=0.0)
    return a.conjugate() * (1.0 / norm2)


def distance(a: Quaternion, b: Quaternion) -> float:
    """Largest componentwise difference"""
    return max(abs(x - y) for x, y in zip(a.coefficients, b.coefficients))


def isclose(a: Quaternion, b: Quaternion, rel_tol: float = 1e-10, abs_tol: float = 1e-10) -> bool:
    scale = max(a.max_abs(), b.max_abs())
    return distance(a, b) <= abs_tol + rel_tol * scale
