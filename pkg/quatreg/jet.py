"""
Second-order forward-mode differentiation for real functions of x1..x4.

A Jet2 carries the value, gradient and Hessian of a function at one point.
Arithmetic and elementary functions propagate all three by the first- and
second-order chain rules, so partials come out at machine precision.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from quatreg.errors import DomainError

logger = logging.getLogger(__name__)

DIM = 4


class JetOp(str, Enum):
    ADD = "add"
    SUB = "sub"
    MUL = "mul"
    DIV = "div"
    NEG = "neg"


class JetFunc(str, Enum):
    SIN = "sin"
    COS = "cos"
    EXP = "exp"
    LOG = "log"
    SQRT = "sqrt"
    POW_INT = "pow_int"


def _frozen(array) -> np.ndarray:
    out = np.array(array, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class Jet2:
    value: float
    grad: np.ndarray
    hess: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        object.__setattr__(self, "grad", _frozen(self.grad))
        object.__setattr__(self, "hess", _frozen(self.hess))
        if self.grad.shape != (DIM,) or self.hess.shape != (DIM, DIM):
            raise ValueError("jet gradient must have shape (4,) and Hessian (4, 4)")

    def __add__(self, other):
        return jet_arith(JetOp.ADD, self, _lift(other))

    def __radd__(self, other):
        return jet_arith(JetOp.ADD, _lift(other), self)

    def __sub__(self, other):
        return jet_arith(JetOp.SUB, self, _lift(other))

    def __rsub__(self, other):
        return jet_arith(JetOp.SUB, _lift(other), self)

    def __mul__(self, other):
        return jet_arith(JetOp.MUL, self, _lift(other))

    def __rmul__(self, other):
        return jet_arith(JetOp.MUL, _lift(other), self)

    def __truediv__(self, other):
        return jet_arith(JetOp.DIV, self, _lift(other))

    def __rtruediv__(self, other):
        return jet_arith(JetOp.DIV, _lift(other), self)

    def __neg__(self):
        return jet_arith(JetOp.NEG, self)

    def __pow__(self, n: int):
        return jet_func(JetFunc.POW_INT, self, n)

    def __repr__(self) -> str:
        return f"Jet2(value={self.value!r}, grad={self.grad.tolist()!r}, hess={self.hess.tolist()!r})"


def _lift(x: Union[Jet2, float]) -> Jet2:
    return x if isinstance(x, Jet2) else constant(x)


def constant(c: float) -> Jet2:
    return Jet2(c, np.zeros(DIM), np.zeros((DIM, DIM)))


def seed(point: Sequence[float], i: int) -> Jet2:
    """The coordinate function x_i as a jet at ``point`` (i is 1-based)"""
    if not 1 <= i <= DIM:
        raise ValueError(f"axis index must be in 1..{DIM}, got {i}")
    grad = np.zeros(DIM)
    grad[i - 1] = 1.0
    return Jet2(point[i - 1], grad, np.zeros((DIM, DIM)))


def _compose(a: Jet2, g0: float, g1: float, g2: float) -> Jet2:
    """g(a) given g, g', g'' at a.value"""
    grad = g1 * a.grad
    hess = g2 * np.outer(a.grad, a.grad) + g1 * a.hess
    return Jet2(g0, grad, hess)


def jet_arith(op: Union[JetOp, str], a: Jet2, b: Optional[Jet2] = None) -> Jet2:
    op = JetOp(op)
    if op is JetOp.NEG:
        return Jet2(-a.value, -a.grad, -a.hess)
    if b is None:
        raise ValueError(f"{op.value} needs two operands")
    if op is JetOp.ADD:
        return Jet2(a.value + b.value, a.grad + b.grad, a.hess + b.hess)
    if op is JetOp.SUB:
        return Jet2(a.value - b.value, a.grad - b.grad, a.hess - b.hess)
    if op is JetOp.MUL:
        cross = np.outer(a.grad, b.grad)
        # symmetrise the cross term before adding so hess stays exactly symmetric
        hess = (a.value * b.hess + b.value * a.hess) + (cross + cross.T)
        return Jet2(a.value * b.value, a.value * b.grad + b.value * a.grad, hess)
    # division as a times the reciprocal of b
    if b.value == 0.0:
        raise DomainError("div", value=0.0)
    inv = 1.0 / b.value
    return jet_arith(JetOp.MUL, a, _compose(b, inv, -inv * inv, 2.0 * inv * inv * inv))


def jet_func(fn: Union[JetFunc, str], a: Jet2, n: Optional[int] = None) -> Jet2:
    """Univariate function of a jet, propagated to second order"""
    fn = JetFunc(fn)
    u = a.value
    if fn is JetFunc.SIN:
        s, c = math.sin(u), math.cos(u)
        return _compose(a, s, c, -s)
    if fn is JetFunc.COS:
        s, c = math.sin(u), math.cos(u)
        return _compose(a, c, -s, -c)
    if fn is JetFunc.EXP:
        try:
            e = math.exp(u)
        except OverflowError:
            raise DomainError("exp", value=u) from None
        return _compose(a, e, e, e)
    if fn is JetFunc.LOG:
        if u <= 0.0:
            raise DomainError("log", value=u)
        return _compose(a, math.log(u), 1.0 / u, -1.0 / (u * u))
    if fn is JetFunc.SQRT:
        if u <= 0.0:
            raise DomainError("sqrt", value=u)
        r = math.sqrt(u)
        return _compose(a, r, 0.5 / r, -0.25 / (r * u))
    if n is None or int(n) != n:
        raise ValueError("pow_int needs an integer exponent")
    n = int(n)
    if n == 0:
        return constant(1.0)
    if n == 1:
        return a
    if n < 0 and u == 0.0:
        raise DomainError("pow", value=u)
    try:
        g0 = u ** n
        g1 = n * u ** (n - 1)
        g2 = n * (n - 1) * u ** (n - 2)
    except OverflowError:
        raise DomainError("pow", value=u) from None
    return _compose(a, g0, g1, g2)
