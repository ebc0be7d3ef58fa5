"""
Named special-shape functions and seeded random generators.

The regular members satisfy the regularity PDE system everywhere they are
defined; the non-regular members violate it at generic points. Random
expressions only use operations that are total on R^4 (products, integer
powers of leaves, sin, cos, exp of leaves, log(1+u^2), sqrt(1+u^2), division by
2+sin(u)), so any sampled point is inside the domain.
"""

import logging
from typing import Dict, List

import numpy as np

from quatreg import expr as ex
from quatreg.expr import Expr, Num
from quatreg.forms import FormField, PointForm, QFunction, multi_indices
from quatreg.quaternion import Quaternion
from quatreg.regularity import SpecialFunction

logger = logging.getLogger(__name__)

_RADIUS = "sqrt(x2^2+x3^2+x4^2)"

REGULAR: Dict[str, tuple] = {
    "constant": ("0", "5"),
    "identity": ("1", "x1"),
    "square": ("2*x1", "x1^2-x2^2-x3^2-x4^2"),
    "shifted_square": ("2*(x1-0.5)", "(x1-0.5)^2-x2^2-x3^2-x4^2"),
    "cube": ("3*x1^2-x2^2-x3^2-x4^2", "x1^3-3*x1*(x2^2+x3^2+x4^2)"),
    "linear_combination": ("6*x1-2", "3*(x1^2-x2^2-x3^2-x4^2)-2*x1+5"),
    # e^x; undefined where x2 = x3 = x4 = 0
    "exponential": (f"exp(x1)*sin({_RADIUS})/{_RADIUS}", f"exp(x1)*cos({_RADIUS})"),
}

NON_REGULAR: Dict[str, tuple] = {
    "x2_times_vector": ("x2", "0"),
    "pure_vector": ("1", "0"),
    "real_x2": ("0", "x2"),
    "mixed_powers": ("x1", "x1^2"),
    "product_f0": ("x2*x3", "0"),
    "trig_pair": ("sin(x1)", "cos(x1)"),
    "squared_norm": ("2*x1", "x1^2+x2^2+x3^2+x4^2"),
}


def regular_functions() -> Dict[str, SpecialFunction]:
    return {name: SpecialFunction.parse(*texts) for name, texts in REGULAR.items()}


def non_regular_functions() -> Dict[str, SpecialFunction]:
    return {name: SpecialFunction.parse(*texts) for name, texts in NON_REGULAR.items()}


# ============================================================================
# RANDOM GENERATORS
# ============================================================================

_CONSTANTS = (0.5, 1.0)


def random_point(rng: np.random.Generator, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    return rng.uniform(low, high, size=4)


def random_points(rng: np.random.Generator, n: int, low: float = -1.0, high: float = 1.0) -> np.ndarray:
    """n points as an array of shape (4, n)"""
    return rng.uniform(low, high, size=(4, n))


def random_quaternion(rng: np.random.Generator) -> Quaternion:
    return Quaternion.from_array(rng.uniform(-1.0, 1.0, size=4))


def _leaf(rng: np.random.Generator) -> Expr:
    if rng.random() < 0.75:
        return ex.x(int(rng.integers(1, 5)))
    c = float(rng.choice(_CONSTANTS))
    return Num(c) if rng.random() < 0.7 else ex.neg(Num(c))


def random_expr(rng: np.random.Generator, depth: int = 3) -> Expr:
    """A random expression of nesting depth at most ``depth``, total on R^4"""
    if depth <= 0 or rng.random() < 0.25:
        return _leaf(rng)

    kind = rng.choice(["add", "sub", "mul", "pow", "sin", "cos", "exp", "log", "sqrt", "div"])
    u = random_expr(rng, depth - 1)
    if kind == "add":
        return ex.BinOp("+", u, random_expr(rng, depth - 1))
    if kind == "sub":
        return ex.BinOp("-", u, random_expr(rng, depth - 1))
    if kind == "mul":
        return ex.BinOp("*", u, random_expr(rng, depth - 1))
    if kind == "pow":
        return ex.Pow(_leaf(rng), int(rng.integers(2, 4)))
    if kind in ("sin", "cos"):
        return ex.Call(str(kind), u)
    if kind == "exp":
        return ex.Call("exp", _leaf(rng))
    if kind == "log":
        return ex.Call("log", ex.BinOp("+", ex.ONE, ex.Pow(u, 2)))
    if kind == "sqrt":
        return ex.Call("sqrt", ex.BinOp("+", ex.ONE, ex.Pow(u, 2)))
    return ex.BinOp("/", u, ex.BinOp("+", Num(2.0), ex.Call("sin", random_expr(rng, depth - 1))))


def random_qfunction(rng: np.random.Generator, depth: int = 2) -> QFunction:
    return QFunction(tuple(random_expr(rng, depth) for _ in range(4)))


def random_special(rng: np.random.Generator, depth: int = 2) -> SpecialFunction:
    return SpecialFunction(random_expr(rng, depth), random_expr(rng, depth))


def random_form_field(rng: np.random.Generator, degree: int, depth: int = 2) -> FormField:
    """A degree-m field with a random QFunction on a random nonempty set of multi-indices"""
    indices = multi_indices(degree)
    chosen = [index for index in indices if rng.random() < 0.6] or [indices[int(rng.integers(len(indices)))]]
    return FormField(degree, {index: random_qfunction(rng, depth) for index in chosen})


def random_point_form(rng: np.random.Generator, degree: int, real: bool = False) -> PointForm:
    """A degree-m form with random coefficients on every multi-index; real-valued if ``real``"""
    coefficients = {}
    for index in multi_indices(degree):
        if real:
            coefficients[index] = Quaternion.from_real(rng.uniform(-1.0, 1.0))
        else:
            coefficients[index] = random_quaternion(rng)
    return PointForm(degree, coefficients)


def corpus_names() -> List[str]:
    return list(REGULAR) + list(NON_REGULAR)
