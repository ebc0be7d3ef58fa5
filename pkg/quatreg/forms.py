"""
Quaternion-valued differential forms on open subsets of H = R^4.

An m-form is stored as a map from strictly increasing multi-indices to
coefficients. ``PointForm`` holds quaternion values at one point,
``FormField`` holds ``QFunction`` coefficients. Coefficients never commute
past each other: the wedge product multiplies the left operand's coefficient
by the right operand's coefficient, in that order.
"""

import itertools
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from quatreg import expr as ex
from quatreg.expr import Expr
from quatreg.jet import Jet2
from quatreg.quaternion import ONE, STRUCTURE, ZERO, Quaternion, multiply_arrays

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"


class FormKind(str, Enum):
    DQ = "Dq"
    D0Q = "D0q"
    D1Q = "D1q"
    VOLUME = "volume"


# ============================================================================
# MULTI-INDICES
# ============================================================================

def multi_index(*axes: int) -> MultiIndex:
    """Validated strictly increasing multi-index over the axes 1..4"""
    if any(not 1 <= a <= 4 for a in axes):
        raise ValueError(f"axes must lie in 1..4, got {axes}")
    if any(a >= b for a, b in zip(axes, axes[1:])):
        raise ValueError(f"multi-index must be strictly increasing, got {axes}")
    return tuple(axes)


def multi_indices(m: int) -> List[MultiIndex]:
    """All increasing multi-indices of length m, in lexicographic order"""
    return list(itertools.combinations(range(1, 5), m))


def normalize(sequence: Sequence[int]) -> Tuple[int, MultiIndex]:
    """Sign and increasing form of dx^{s1}∧...∧dx^{sk}; sign 0 when an axis repeats"""
    if len(set(sequence)) != len(sequence):
        return 0, ()
    inversions = sum(1 for a, b in itertools.combinations(sequence, 2) if a > b)
    return (-1 if inversions % 2 else 1), tuple(sorted(sequence))


def _index_text(index: MultiIndex) -> str:
    return "∧".join(f"dx^{a}" for a in index)


# ============================================================================
# QUATERNION-VALUED FUNCTIONS
# ============================================================================

@dataclass(frozen=True)
class QFunction:
    """f = f_1 e1 + f_2 e2 + f_3 e3 + f_4 e4 with Expr components"""
    components: Tuple[Expr, Expr, Expr, Expr]
    special: Optional[Tuple[Expr, Expr]] = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.components) != 4:
            raise ValueError("a QFunction has exactly four components")
        object.__setattr__(self, "components", tuple(self.components))

    @classmethod
    def parse(cls, texts: Sequence[str]) -> "QFunction":
        return cls(tuple(ex.parse(t) for t in texts))

    @classmethod
    def from_special(cls, f0: Expr, f1: Expr) -> "QFunction":
        """f1 e1 + x2 f0 e2 + x3 f0 e3 + x4 f0 e4"""
        return cls((f1, ex.mul(ex.x(2), f0), ex.mul(ex.x(3), f0), ex.mul(ex.x(4), f0)), special=(f0, f1))

    @classmethod
    def identity(cls) -> "QFunction":
        return cls((ex.x(1), ex.x(2), ex.x(3), ex.x(4)))

    @classmethod
    def constant(cls, q: Quaternion) -> "QFunction":
        return cls(tuple(_literal(c) for c in q.coefficients))

    @classmethod
    def real(cls, e: Expr) -> "QFunction":
        return cls((e, ex.ZERO, ex.ZERO, ex.ZERO))

    def is_real(self) -> bool:
        return all(c == ex.ZERO for c in self.components[1:])

    def evaluate(self, p: Sequence[float]) -> Quaternion:
        return Quaternion.from_array([ex.eval_real(c, p) for c in self.components])

    def evaluate_array(self, points: np.ndarray) -> np.ndarray:
        """Values at points of shape (4, N), returned as an (N, 4) coefficient array"""
        return np.stack([ex.eval_real(c, points) for c in self.components], axis=-1)

    def jets(self, p: Sequence[float]) -> List[Jet2]:
        return [ex.eval_jet(c, p) for c in self.components]

    def partials(self, p: Sequence[float]) -> List[Quaternion]:
        """∂f/∂x_i = Σ_j ∂f_j/∂x_i e_j for i = 1..4"""
        grads = np.array([j.grad for j in self.jets(p)])
        return [Quaternion.from_array(grads[:, i]) for i in range(4)]

    def diff(self, i: int) -> "QFunction":
        special = None
        if self.special is not None and i == 1:
            special = (ex.diff(self.special[0], 1), ex.diff(self.special[1], 1))
        return QFunction(tuple(ex.diff(c, i) for c in self.components), special=special)

    def __add__(self, other: "QFunction") -> "QFunction":
        return QFunction(tuple(ex.add(a, b) for a, b in zip(self.components, other.components)))

    def __sub__(self, other: "QFunction") -> "QFunction":
        return QFunction(tuple(ex.sub(a, b) for a, b in zip(self.components, other.components)))

    def __neg__(self) -> "QFunction":
        return QFunction(tuple(ex.neg(a) for a in self.components))

    def __mul__(self, other: Union["QFunction", Quaternion]) -> "QFunction":
        if isinstance(other, Quaternion):
            other = QFunction.constant(other)
        return _product(self, other)

    def __rmul__(self, other: Quaternion) -> "QFunction":
        if isinstance(other, Quaternion):
            return _product(QFunction.constant(other), self)
        return NotImplemented

    def __str__(self) -> str:
        return " + ".join(f"({c}) e{k}" for k, c in enumerate(self.components, start=1) if c != ex.ZERO) or "0"


def _literal(c: float) -> Expr:
    return ex.scale(c, ex.ONE) if c != 0 else ex.ZERO


def _product(a: QFunction, b: QFunction) -> QFunction:
    """Symbolic quaternion product a·b built from the structure constants"""
    out = [ex.ZERO] * 4
    for i, j, k in zip(*np.nonzero(STRUCTURE)):
        term = ex.mul(a.components[i], b.components[j])
        out[k] = ex.add(out[k], term) if STRUCTURE[i, j, k] > 0 else ex.sub(out[k], term)
    return QFunction(tuple(out))


# ============================================================================
# POINT FORMS
# ============================================================================

@dataclass(frozen=True)
class PointForm:
    """A quaternion-valued m-form evaluated at one point"""
    degree: int
    coefficients: Mapping[MultiIndex, Quaternion] = field(default_factory=dict)

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("form degree must be non-negative")
        coefficients = {}
        if self.degree <= 4:
            for index, q in self.coefficients.items():
                index = multi_index(*index)
                if len(index) != self.degree:
                    raise ValueError(f"multi-index {index} does not match degree {self.degree}")
                coefficients[index] = q
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def zero(cls, degree: int) -> "PointForm":
        return cls(degree, {})

    @classmethod
    def scalar(cls, q: Quaternion) -> "PointForm":
        """The 0-form with value q"""
        return cls(0, {(): q})

    @classmethod
    def basis(cls, index: MultiIndex, q: Quaternion = ONE) -> "PointForm":
        return cls(len(index), {tuple(index): q})

    def coefficient(self, index: MultiIndex) -> Quaternion:
        return self.coefficients.get(tuple(index), ZERO)

    def volume_coefficient(self) -> Quaternion:
        """Coefficient of v = dx^1∧dx^2∧dx^3∧dx^4; the whole content of a 4-form"""
        if self.degree != 4:
            raise ValueError(f"only 4-forms have a volume coefficient, got degree {self.degree}")
        return self.coefficient((1, 2, 3, 4))

    def _combine(self, other: "PointForm", sign: float) -> "PointForm":
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        out = dict(self.coefficients)
        for index, q in other.coefficients.items():
            out[index] = out.get(index, ZERO) + q * sign
        return PointForm(self.degree, out)

    def __add__(self, other: "PointForm") -> "PointForm":
        return self._combine(other, 1.0)

    def __sub__(self, other: "PointForm") -> "PointForm":
        return self._combine(other, -1.0)

    def __neg__(self) -> "PointForm":
        return PointForm(self.degree, {i: -q for i, q in self.coefficients.items()})

    def scaled(self, c: float) -> "PointForm":
        return PointForm(self.degree, {i: q * float(c) for i, q in self.coefficients.items()})

    def left_multiply(self, q: Quaternion) -> "PointForm":
        """q·α, coefficientwise"""
        return PointForm(self.degree, {i: q * c for i, c in self.coefficients.items()})

    def right_multiply(self, q: Quaternion) -> "PointForm":
        """α·q, coefficientwise"""
        return PointForm(self.degree, {i: c * q for i, c in self.coefficients.items()})

    def max_abs(self) -> float:
        return max((q.max_abs() for q in self.coefficients.values()), default=0.0)

    def distance(self, other: "PointForm") -> float:
        """Largest coefficient difference over both supports"""
        if self.degree != other.degree:
            raise ValueError(f"cannot compare forms of degree {self.degree} and {other.degree}")
        return (self - other).max_abs()

    def is_real(self) -> bool:
        return all(q.pure.is_zero() for q in self.coefficients.values())

    def __str__(self) -> str:
        terms = []
        for index in sorted(self.coefficients):
            q = self.coefficients[index]
            if q.is_zero():
                continue
            terms.append(f"({q}) · {_index_text(index)}" if index else f"({q})")
        return " + ".join(terms) if terms else "0"


def wedge(a: PointForm, b: PointForm) -> PointForm:
    """α∧β: coefficients multiply left-times-right, basis terms are reordered with parity"""
    degree = a.degree + b.degree
    if degree > 4:
        return PointForm.zero(degree)
    out: Dict[MultiIndex, Quaternion] = {}
    for i_index, f in a.coefficients.items():
        for j_index, g in b.coefficients.items():
            sign, index = normalize(i_index + j_index)
            if sign == 0:
                continue
            out[index] = out.get(index, ZERO) + (f * g) * float(sign)
    return PointForm(degree, out)


# ============================================================================
# FORM FIELDS
# ============================================================================

@dataclass(frozen=True)
class FormField:
    """A quaternion-valued m-form whose coefficients are QFunctions"""
    degree: int
    coefficients: Mapping[MultiIndex, QFunction] = field(default_factory=dict)

    def __post_init__(self):
        coefficients = {}
        if self.degree <= 4:
            for index, f in self.coefficients.items():
                index = multi_index(*index)
                if len(index) != self.degree:
                    raise ValueError(f"multi-index {index} does not match degree {self.degree}")
                coefficients[index] = f
        object.__setattr__(self, "coefficients", coefficients)

    @classmethod
    def function(cls, f: QFunction) -> "FormField":
        """f regarded as a 0-form"""
        return cls(0, {(): f})

    def evaluate(self, p: Sequence[float]) -> PointForm:
        return PointForm(self.degree, {i: f.evaluate(p) for i, f in self.coefficients.items()})

    def __add__(self, other: "FormField") -> "FormField":
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        out = dict(self.coefficients)
        for index, f in other.coefficients.items():
            out[index] = out[index] + f if index in out else f
        return FormField(self.degree, out)

    def left_multiply(self, q: Quaternion) -> "FormField":
        return FormField(self.degree, {i: q * f for i, f in self.coefficients.items()})

    def right_multiply(self, q: Quaternion) -> "FormField":
        return FormField(self.degree, {i: f * q for i, f in self.coefficients.items()})

    def d(self) -> "FormField":
        """Exterior derivative with symbolically differentiated coefficients"""
        out: Dict[MultiIndex, QFunction] = {}
        for index, f in self.coefficients.items():
            for axis in range(1, 5):
                sign, target = normalize((axis,) + index)
                if sign == 0:
                    continue
                term = f.diff(axis)
                if target in out:
                    out[target] = out[target] + term if sign > 0 else out[target] - term
                else:
                    out[target] = term if sign > 0 else -term
        return FormField(self.degree + 1, out)


def wedge_fields(a: FormField, b: FormField) -> FormField:
    """Symbolic α∧β with the same coefficient order as ``wedge``"""
    degree = a.degree + b.degree
    out: Dict[MultiIndex, QFunction] = {}
    if degree > 4:
        return FormField(degree, out)
    for i_index, f in a.coefficients.items():
        for j_index, g in b.coefficients.items():
            sign, index = normalize(i_index + j_index)
            if sign == 0:
                continue
            term = f * g
            if index in out:
                out[index] = out[index] + term if sign > 0 else out[index] - term
            else:
                out[index] = term if sign > 0 else -term
    return FormField(degree, out)


# ============================================================================
# DIFFERENTIALS
# ============================================================================

def differential0(f: QFunction, p: Sequence[float]) -> PointForm:
    """df = Σ ∂f/∂x_i dx^i at p"""
    return PointForm(1, {(i + 1,): q for i, q in enumerate(f.partials(p))})


def real_differential(e: Expr, p: Sequence[float]) -> PointForm:
    """Differential of a real function as a real-valued 1-form"""
    grad = ex.eval_jet(e, p).grad
    return PointForm(1, {(i + 1,): Quaternion.from_real(g) for i, g in enumerate(grad)})


def exterior_d(a: FormField, p: Sequence[float]) -> PointForm:
    """dα at p: Σ d(f_I)∧dx^I over the coefficients of α"""
    out = PointForm.zero(a.degree + 1)
    for index, f in a.coefficients.items():
        out = out + wedge(differential0(f, p), PointForm.basis(index))
    return out


def exterior_dd(a: FormField, p: Sequence[float]) -> PointForm:
    """d(dα) at p from second-order jets: Σ ∂_j∂_i f_I dx^j∧dx^i∧dx^I"""
    out: Dict[MultiIndex, Quaternion] = {}
    for index, f in a.coefficients.items():
        hessians = [j.hess for j in f.jets(p)]
        for i in range(1, 5):
            for j in range(1, 5):
                sign, target = normalize((j, i) + index)
                if sign == 0:
                    continue
                q = Quaternion.from_array([h[j - 1, i - 1] for h in hessians])
                out[target] = out.get(target, ZERO) + q * float(sign)
    return PointForm(a.degree + 2, out)


# ============================================================================
# SPECIAL FORMS AND FUETER OPERATORS
# ============================================================================

_PAIRS = ((2, 3), (2, 4), (3, 4))


def special_form(kind: Union[FormKind, str]) -> FormField:
    """Dq, D0q, D1q or the volume form v = dx^1∧dx^2∧dx^3∧dx^4"""
    kind = FormKind(kind)
    if kind is FormKind.VOLUME:
        return FormField(4, {(1, 2, 3, 4): QFunction.real(ex.ONE)})

    coefficients: Dict[MultiIndex, QFunction] = {}
    if kind is FormKind.DQ:
        coefficients[(2, 3, 4)] = QFunction.constant(ONE)
        for i, j in _PAIRS:
            sign = (-1) ** (i + j)
            coefficients[(1, i, j)] = QFunction.constant(Quaternion.basis(9 - i - j) * float(sign))
    elif kind is FormKind.D0Q:
        coefficients[(2, 3, 4)] = QFunction.real(ex.add(ex.add(ex.x(2), ex.x(3)), ex.x(4)))
        for i, j in _PAIRS:
            # -(-1)^(i+j) x_(9-i-j)
            term = ex.x(9 - i - j)
            coefficients[(1, i, j)] = QFunction.real(ex.neg(term) if (i + j) % 2 == 0 else term)
    else:
        coefficients[(2, 3, 4)] = QFunction.real(ex.ONE)
        for i, j in _PAIRS:
            coefficients[(1, i, j)] = QFunction.real(ex.scale(float((-1) ** (i + j)), ex.ONE))
    return FormField(3, coefficients)


def fueter(side: Union[Side, str], f: QFunction, p: Sequence[float]) -> Quaternion:
    """Left: Σ e_i·∂f/∂x_i. Right: Σ ∂f/∂x_i·e_i."""
    side = Side(side)
    partials = np.array([q.to_array() for q in f.partials(p)])
    basis = np.eye(4)
    if side is Side.LEFT:
        products = multiply_arrays(basis, partials)
    else:
        products = multiply_arrays(partials, basis)
    return Quaternion.from_array(products.sum(axis=0))


def fueter_terms(side: Union[Side, str], partials: Iterable[Quaternion]) -> Quaternion:
    """Fueter operator from already computed partial derivatives"""
    side = Side(side)
    total = ZERO
    for k, q in enumerate(partials, start=1):
        e = Quaternion.basis(k)
        total = total + (e * q if side is Side.LEFT else q * e)
    return total
