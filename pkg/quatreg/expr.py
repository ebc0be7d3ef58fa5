"""
Expression DSL for real-valued functions of x1..x4.

Grammar, lowest precedence first::

    sum      := product (("+" | "-") product)*
    product  := unary (("*" | "/") unary)*
    unary    := "-" unary | power
    power    := atom ("^" exponent)*        right-associative, integer literals only
    atom     := NUMBER | x1..x4 | fn "(" sum ")" | "(" sum ")"
    fn       := sin | cos | exp | log | sqrt

Whitespace is insignificant. NUMBER is a decimal literal with optional
fraction and exponent. ``str(expr)`` prints the canonical form, and parsing
it gives back an equal tree.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache, singledispatch
from typing import Optional, Sequence, Union

import numpy as np
from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedInput, UnexpectedToken, VisitError

from quatreg import jet
from quatreg.errors import DomainError, ParseError
from quatreg.jet import Jet2, JetFunc

logger = logging.getLogger(__name__)

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt")
MAX_EXPONENT = 1024

GRAMMAR = r"""
    ?start: sum

    ?sum: product
        | sum "+" product      -> add
        | sum "-" product      -> sub

    ?product: unary
        | product "*" unary    -> mul
        | product "/" unary    -> div

    ?unary: power
        | "-" unary            -> neg

    ?power: atom
        | atom "^" exponents   -> pow

    exponents: exponent ("^" exponent)*

    exponent: NUMBER           -> pos_exponent
        | "-" NUMBER           -> neg_exponent

    ?atom: NUMBER              -> number
        | NAME "(" sum ")"     -> call
        | NAME                 -> name
        | "(" sum ")"

    NAME: /[A-Za-z_][A-Za-z0-9_]*/

    %import common.NUMBER
    %import common.WS
    %ignore WS
"""

_TERMINAL_NAMES = {
    "NUMBER": "number",
    "NAME": "identifier",
    "LPAR": "'('",
    "RPAR": "')'",
    "PLUS": "'+'",
    "MINUS": "'-'",
    "STAR": "'*'",
    "SLASH": "'/'",
    "CIRCUMFLEX": "'^'",
    "$END": "end of input",
}

# precedence levels used by the printer
_ADD, _MUL, _UNARY, _POW, _ATOM = 1, 2, 3, 4, 5


# ============================================================================
# AST
# ============================================================================

class Expr:
    """Base class of AST nodes; nodes are immutable and compare structurally"""

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: float
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class Var(Expr):
    index: int
    pos: Optional[int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not 1 <= self.index <= 4:
            raise ValueError(f"variable index must be in 1..4, got {self.index}")


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    arg: Expr
    pos: Optional[int] = field(default=None, compare=False, repr=False)


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr
    pos: Optional[int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.op not in ("+", "-", "*", "/"):
            raise ValueError(f"unknown binary operator {self.op!r}")


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: int
    pos: Optional[int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int):
            raise ValueError("exponents must be integers")


@dataclass(frozen=True, eq=True)
class Call(Expr):
    fn: str
    arg: Expr
    pos: Optional[int] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.fn not in FUNCTIONS:
            raise ValueError(f"unknown function {self.fn!r}")


ZERO = Num(0.0)
ONE = Num(1.0)


def x(i: int) -> Var:
    return Var(i)


# ============================================================================
# BUILDERS (literal zero/one pruning only)
# ============================================================================

def _is_num(e: Expr, value: float) -> bool:
    return isinstance(e, Num) and e.value == value


def add(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0):
        return b
    if _is_num(b, 0.0):
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_num(b, 0.0):
        return a
    if _is_num(a, 0.0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_num(a, 0.0) or _is_num(b, 0.0):
        return ZERO
    if _is_num(a, 1.0):
        return b
    if _is_num(b, 1.0):
        return a
    if isinstance(a, Num) and isinstance(b, Num):
        return Num(a.value * b.value)
    return BinOp("*", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_num(b, 1.0):
        return a
    if _is_num(a, 0.0):
        return ZERO
    return BinOp("/", a, b)


def neg(a: Expr) -> Expr:
    if _is_num(a, 0.0):
        return ZERO
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def power(a: Expr, n: int) -> Expr:
    if n == 0:
        return ONE
    if n == 1:
        return a
    return Pow(a, n)


def call(fn: str, a: Expr) -> Expr:
    return Call(fn, a)


def scale(c: float, a: Expr) -> Expr:
    """c * a, keeping literals non-negative"""
    if c < 0:
        return neg(mul(Num(-c), a))
    return mul(Num(c), a)


# ============================================================================
# PARSER
# ============================================================================

@lru_cache(maxsize=1)
def _parser() -> Lark:
    return Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=False)


def _meta_pos(meta) -> Optional[int]:
    return getattr(meta, "start_pos", None)


@v_args(meta=True)
class _AstBuilder(Transformer):
    def __init__(self, text: str):
        super().__init__()
        self.text = text

    def number(self, meta, children):
        (token,) = children
        value = float(token)
        if not math.isfinite(value):
            raise ParseError(token.start_pos, "finite number", self.text)
        return Num(value, pos=token.start_pos)

    def name(self, meta, children):
        (token,) = children
        text = str(token)
        if len(text) == 2 and text[0] == "x" and text[1] in "1234":
            return Var(int(text[1]), pos=token.start_pos)
        raise ParseError(token.start_pos, "variable x1..x4", self.text)

    def call(self, meta, children):
        token, arg = children
        if str(token) not in FUNCTIONS:
            raise ParseError(token.start_pos, "function name (" + ", ".join(FUNCTIONS) + ")", self.text)
        return Call(str(token), arg, pos=token.start_pos)

    def add(self, meta, children):
        return BinOp("+", children[0], children[1], pos=_meta_pos(meta))

    def sub(self, meta, children):
        return BinOp("-", children[0], children[1], pos=_meta_pos(meta))

    def mul(self, meta, children):
        return BinOp("*", children[0], children[1], pos=_meta_pos(meta))

    def div(self, meta, children):
        return BinOp("/", children[0], children[1], pos=_meta_pos(meta))

    def neg(self, meta, children):
        return Neg(children[0], pos=_meta_pos(meta))

    def _integer(self, token: Token, sign: int) -> tuple:
        if not str(token).isdigit():
            raise ParseError(token.start_pos, "integer exponent", self.text)
        return sign * int(str(token)), token.start_pos

    def pos_exponent(self, meta, children):
        return self._integer(children[0], 1)

    def neg_exponent(self, meta, children):
        return self._integer(children[0], -1)

    def exponents(self, meta, children):
        value, where = children[-1]
        for base, base_pos in reversed(children[:-1]):
            if value < 0 or abs(value) > MAX_EXPONENT:
                raise ParseError(where, "small non-negative integer exponent", self.text)
            value, where = base ** value, base_pos
        if abs(value) > MAX_EXPONENT:
            raise ParseError(where, f"integer exponent of magnitude <= {MAX_EXPONENT}", self.text)
        return value

    def pow(self, meta, children):
        base, exponent = children
        return Pow(base, exponent, pos=_meta_pos(meta))


def _describe(expected) -> str:
    names = sorted(_TERMINAL_NAMES.get(t, t) for t in expected)
    return "one of " + ", ".join(names) if names else "valid input"


def parse(text: str) -> Expr:
    """Parse DSL text into an Expr; failures raise ParseError with the byte offset"""
    try:
        tree = _parser().parse(text)
    except UnexpectedToken as e:
        offset = len(text) if e.token.type == "$END" else e.token.start_pos
        raise ParseError(offset, _describe(e.expected), text) from None
    except UnexpectedCharacters as e:
        raise ParseError(e.pos_in_stream, _describe(e.allowed or ()), text) from None
    except UnexpectedInput as e:
        raise ParseError(len(text), _describe(getattr(e, "expected", ())), text) from None

    try:
        return _AstBuilder(text).transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise


# ============================================================================
# PRINTER
# ============================================================================

def _format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


@singledispatch
def _render(e: Expr) -> tuple:
    raise TypeError(f"not an expression: {e!r}")


@_render.register
def _(e: Num):
    if e.value < 0 or math.copysign(1.0, e.value) < 0:
        return "-" + _format_number(-e.value), _UNARY
    return _format_number(e.value), _ATOM


@_render.register
def _(e: Var):
    return f"x{e.index}", _ATOM


@_render.register
def _(e: Call):
    return f"{e.fn}({to_text(e.arg)})", _ATOM


def _wrap(e: Expr, minimum: int) -> str:
    text, level = _render(e)
    return text if level >= minimum else f"({text})"


@_render.register
def _(e: Neg):
    return "-" + _wrap(e.arg, _UNARY), _UNARY


@_render.register
def _(e: Pow):
    return f"{_wrap(e.base, _ATOM)}^{e.exponent}", _POW


@_render.register
def _(e: BinOp):
    if e.op in ("+", "-"):
        return f"{_wrap(e.left, _ADD)} {e.op} {_wrap(e.right, _MUL)}", _ADD
    return f"{_wrap(e.left, _MUL)}{e.op}{_wrap(e.right, _UNARY)}", _MUL


def to_text(e: Expr) -> str:
    return _render(e)[0]


# ============================================================================
# REAL EVALUATION (scalar points or batches of shape (4, N))
# ============================================================================

def _first(values, mask) -> float:
    return float(np.asarray(values)[np.asarray(mask)].flat[0]) if np.ndim(values) else float(values)


@singledispatch
def _eval(e: Expr, xs):
    raise TypeError(f"not an expression: {e!r}")


@_eval.register
def _(e: Num, xs):
    return e.value + 0.0 * xs[0]


@_eval.register
def _(e: Var, xs):
    return xs[e.index - 1]


@_eval.register
def _(e: Neg, xs):
    return -_eval(e.arg, xs)


@_eval.register
def _(e: BinOp, xs):
    a = _eval(e.left, xs)
    b = _eval(e.right, xs)
    if e.op == "+":
        return a + b
    if e.op == "-":
        return a - b
    if e.op == "*":
        return a * b
    zero = b == 0.0
    if np.any(zero):
        raise DomainError("div", value=0.0, position=e.pos)
    return a / b


@_eval.register
def _(e: Pow, xs):
    base = _eval(e.base, xs)
    if e.exponent < 0:
        zero = base == 0.0
        if np.any(zero):
            raise DomainError("pow", value=0.0, position=e.pos)
    return base ** e.exponent


@_eval.register
def _(e: Call, xs):
    u = _eval(e.arg, xs)
    if e.fn == "sin":
        return np.sin(u)
    if e.fn == "cos":
        return np.cos(u)
    if e.fn == "exp":
        return np.exp(u)
    if e.fn == "log":
        bad = u <= 0.0
        if np.any(bad):
            raise DomainError("log", value=_first(u, bad), position=e.pos)
        return np.log(u)
    bad = u < 0.0
    if np.any(bad):
        raise DomainError("sqrt", value=_first(u, bad), position=e.pos)
    return np.sqrt(u)


def eval_real(e: Expr, p: Union[Sequence[float], np.ndarray]):
    """Value of ``e`` at p; p of shape (4,) gives a float, shape (4, N) gives an array of N values"""
    xs = np.asarray(p, dtype=float)
    if xs.shape[0] != 4:
        raise ValueError(f"points must have 4 coordinates, got shape {xs.shape}")
    with np.errstate(over="ignore", invalid="ignore"):
        value = _eval(e, xs)
    if xs.ndim == 1:
        return float(value)
    return np.broadcast_to(value, xs.shape[1:]).astype(float)


# ============================================================================
# JET EVALUATION
# ============================================================================

@singledispatch
def _jet(e: Expr, p):
    raise TypeError(f"not an expression: {e!r}")


@_jet.register
def _(e: Num, p):
    return jet.constant(e.value)


@_jet.register
def _(e: Var, p):
    return jet.seed(p, e.index)


@_jet.register
def _(e: Neg, p):
    return -_jet(e.arg, p)


@_jet.register
def _(e: BinOp, p):
    a = _jet(e.left, p)
    b = _jet(e.right, p)
    try:
        return jet.jet_arith({"+": "add", "-": "sub", "*": "mul", "/": "div"}[e.op], a, b)
    except DomainError as err:
        raise err.with_position(e.pos) from None


@_jet.register
def _(e: Pow, p):
    try:
        return jet.jet_func(JetFunc.POW_INT, _jet(e.base, p), e.exponent)
    except DomainError as err:
        raise err.with_position(e.pos) from None


@_jet.register
def _(e: Call, p):
    try:
        return jet.jet_func(JetFunc(e.fn), _jet(e.arg, p))
    except DomainError as err:
        raise err.with_position(e.pos) from None


def eval_jet(e: Expr, p: Sequence[float]) -> Jet2:
    """Value, gradient and Hessian of ``e`` at the point p"""
    point = [float(v) for v in p]
    if len(point) != 4:
        raise ValueError(f"points must have 4 coordinates, got {len(point)}")
    return _jet(e, point)


# ============================================================================
# SYMBOLIC DIFFERENTIATION
# ============================================================================

@singledispatch
def _diff(e: Expr, i: int) -> Expr:
    raise TypeError(f"not an expression: {e!r}")


@_diff.register
def _(e: Num, i):
    return ZERO


@_diff.register
def _(e: Var, i):
    return ONE if e.index == i else ZERO


@_diff.register
def _(e: Neg, i):
    return neg(_diff(e.arg, i))


@_diff.register
def _(e: BinOp, i):
    da = _diff(e.left, i)
    db = _diff(e.right, i)
    if e.op == "+":
        return add(da, db)
    if e.op == "-":
        return sub(da, db)
    if e.op == "*":
        return add(mul(da, e.right), mul(e.left, db))
    return sub(div(da, e.right), div(mul(e.left, db), power(e.right, 2)))


@_diff.register
def _(e: Pow, i):
    n = e.exponent
    if n == 0:
        return ZERO
    du = _diff(e.base, i)
    return mul(scale(float(n), power(e.base, n - 1)), du)


@_diff.register
def _(e: Call, i):
    u = e.arg
    du = _diff(u, i)
    if _is_num(du, 0.0):
        return ZERO
    if e.fn == "sin":
        return mul(call("cos", u), du)
    if e.fn == "cos":
        return neg(mul(call("sin", u), du))
    if e.fn == "exp":
        return mul(call("exp", u), du)
    if e.fn == "log":
        return div(du, u)
    return div(du, mul(Num(2.0), call("sqrt", u)))


def diff(e: Expr, i: int) -> Expr:
    """Symbolic partial derivative with respect to x_i"""
    if not 1 <= i <= 4:
        raise ValueError(f"axis index must be in 1..4, got {i}")
    return _diff(e, i)


def variables(e: Expr) -> set:
    """Indices of the variables that occur in ``e``"""
    found = set()

    def walk(node):
        if isinstance(node, Var):
            found.add(node.index)
        for child in ("arg", "left", "right", "base"):
            sub_node = getattr(node, child, None)
            if isinstance(sub_node, Expr):
                walk(sub_node)

    walk(e)
    return found
