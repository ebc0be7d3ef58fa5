"""
Algebraic regularity of special-shape quaternion functions.

A special-shape function is f = f1 e1 + x2 f0 e2 + x3 f0 e3 + x4 f0 e4 for two
real functions f0, f1 of x1..x4. Three characterisations of regularity at a
point c are implemented here and must agree:

* the PDE system on f0 and f1 (``pde_residuals``),
* the pair of form equations Dq∧df + 2 D0q∧df0 + 2 D1q∧df1 = 0 and
  df∧Dq + 2 df0∧D0q + 2 df1∧D1q = 0 (``form_residuals``),
* existence of the limit of corrected difference quotients, on the left and on
  the right (``dq_limit``), whose value is then ∂f/∂x1(c).
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple, Union

import numpy as np

from quatreg import expr as ex
from quatreg.expr import Expr
from quatreg.forms import (
    FormKind,
    QFunction,
    Side,
    differential0,
    real_differential,
    special_form,
    wedge,
)
from quatreg.models import FormResiduals, LimitDiagnostics, PdeResiduals
from quatreg.quaternion import Quaternion, inverse_arrays, multiply_arrays

logger = logging.getLogger(__name__)

# helper index k -> the pair (i, j) with k = 9 - i - j
HELPER_PAIRS: Dict[int, Tuple[int, int]] = {4: (2, 3), 3: (2, 4), 2: (3, 4)}

DEFAULT_MAGNITUDES = tuple(1e-2 * 2.0 ** -k for k in range(11))

# stage errors below this are rounding noise; no halving ratio is reported
_HALVING_FLOOR = 1e-9


@dataclass(frozen=True)
class SpecialFunction:
    """f = f1 e1 + Σ_{k=2..4} x_k f0 e_k"""
    f0: Expr
    f1: Expr

    @classmethod
    def parse(cls, f0: str, f1: str) -> "SpecialFunction":
        return cls(ex.parse(f0), ex.parse(f1))

    @property
    def qfunction(self) -> QFunction:
        return QFunction.from_special(self.f0, self.f1)

    def __str__(self) -> str:
        return f"f0 = {self.f0}, f1 = {self.f1}"


def _point(c: Sequence[float]) -> np.ndarray:
    point = np.asarray(c, dtype=float)
    if point.shape != (4,):
        raise ValueError(f"points must have 4 coordinates, got shape {point.shape}")
    return point


# ============================================================================
# PDE SYSTEM
# ============================================================================

def pde_residuals(F: SpecialFunction, c: Sequence[float]) -> PdeResiduals:
    """
    r_main = ∂f1/∂x1 - (f0 + x2 ∂f0/∂x2 + x3 ∂f0/∂x3 + x4 ∂f0/∂x4)
    r_i    = ∂f1/∂x_i + x_i ∂f0/∂x1                  (i = 2, 3, 4)
    r_ij   = x_i ∂f0/∂x_j - x_j ∂f0/∂x_i             (2 <= i < j <= 4)
    """
    x = _point(c)
    j0 = ex.eval_jet(F.f0, x)
    j1 = ex.eval_jet(F.f1, x)
    g0, g1 = j0.grad, j1.grad

    r_main = g1[0] - (j0.value + x[1] * g0[1] + x[2] * g0[2] + x[3] * g0[3])
    r_i = {i: g1[i - 1] + x[i - 1] * g0[0] for i in (2, 3, 4)}
    r_ij = {(i, j): x[i - 1] * g0[j - 1] - x[j - 1] * g0[i - 1] for i, j in ((2, 3), (2, 4), (3, 4))}

    return PdeResiduals(
        r_main=float(r_main),
        r_2=float(r_i[2]),
        r_3=float(r_i[3]),
        r_4=float(r_i[4]),
        r_23=float(r_ij[(2, 3)]),
        r_24=float(r_ij[(2, 4)]),
        r_34=float(r_ij[(3, 4)]),
    )


def residual_scale(F: SpecialFunction, c: Sequence[float]) -> float:
    """Normaliser shared by the PDE and form verdicts"""
    x = _point(c)
    j0 = ex.eval_jet(F.f0, x)
    j1 = ex.eval_jet(F.f1, x)
    spread = float(np.max(np.abs(j0.grad))) * (1.0 + float(np.max(np.abs(x))))
    return 1.0 + max(abs(j0.value), abs(j1.value), spread, float(np.max(np.abs(j1.grad))))


# ============================================================================
# FORM EQUATIONS
# ============================================================================

def form_residuals(F: SpecialFunction, c: Sequence[float]) -> Tuple[Quaternion, Quaternion]:
    """Volume coefficients of the left and right form equations at c"""
    x = _point(c)
    df = differential0(F.qfunction, x)
    df0 = real_differential(F.f0, x)
    df1 = real_differential(F.f1, x)
    dq = special_form(FormKind.DQ).evaluate(x)
    d0q = special_form(FormKind.D0Q).evaluate(x)
    d1q = special_form(FormKind.D1Q).evaluate(x)

    left = wedge(dq, df) + wedge(d0q, df0).scaled(2.0) + wedge(d1q, df1).scaled(2.0)
    right = wedge(df, dq) + wedge(df0, d0q).scaled(2.0) + wedge(df1, d1q).scaled(2.0)
    return left.volume_coefficient(), right.volume_coefficient()


def form_report(F: SpecialFunction, c: Sequence[float]) -> FormResiduals:
    left, right = form_residuals(F, c)
    return FormResiduals(left=list(left.coefficients), right=list(right.coefficients))


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

@dataclass(frozen=True)
class HelperFunction:
    """
    One of the six pure quaternion functions used to correct difference
    quotients at c. For k = 9 - i - j and s = (-1)^(i+j), with
    A = f0(c; x_i), B = f0(c; x_j) and E = f0(x1, c2, c3, c4):

    left:  (c_i A + c_j B) e_k - (s c_i E + c_k B) e_j + (s c_j E - c_k A) e_i
    right: (c_i A + c_j B) e_k + (s c_i E - c_k B) e_j - (s c_j E + c_k A) e_i

    where f0(c; x_m) freezes every coordinate at c except coordinate m.
    """
    f0: Expr
    c: Tuple[float, float, float, float]
    side: Side
    index: int

    def evaluate_array(self, points: np.ndarray) -> np.ndarray:
        """Values at points of shape (4, N), as an (N, 4) coefficient array"""
        xs = np.asarray(points, dtype=float)
        n = xs.shape[1]
        i, j = HELPER_PAIRS[self.index]
        k = self.index
        s = (-1.0) ** (i + j)
        c = np.asarray(self.c)
        frozen = np.repeat(c[:, None], n, axis=1)

        def f0_varying(axis: int) -> np.ndarray:
            probe = frozen.copy()
            probe[axis - 1] = xs[axis - 1]
            return ex.eval_real(self.f0, probe)

        a, b, e = f0_varying(i), f0_varying(j), f0_varying(1)
        ci, cj, ck = c[i - 1], c[j - 1], c[k - 1]

        out = np.zeros((n, 4))
        out[:, k - 1] = ci * a + cj * b
        if self.side is Side.LEFT:
            out[:, j - 1] = -(s * ci * e + ck * b)
            out[:, i - 1] = s * cj * e - ck * a
        else:
            out[:, j - 1] = s * ci * e - ck * b
            out[:, i - 1] = -(s * cj * e + ck * a)
        return out

    def evaluate(self, x: Sequence[float]) -> Quaternion:
        return Quaternion.from_array(self.evaluate_array(_point(x)[:, None])[0])


def helper_function(F: SpecialFunction, c: Sequence[float], side: Union[Side, str], index: int) -> HelperFunction:
    if index not in HELPER_PAIRS:
        raise ValueError(f"helper index must be 2, 3 or 4, got {index}")
    point = _point(c)
    return HelperFunction(F.f0, tuple(float(v) for v in point), Side(side), index)


# ============================================================================
# DIFFERENCE QUOTIENTS
# ============================================================================

def direction_samples(count: int = 16, seed: int = 0) -> np.ndarray:
    """The 8 signed basis directions followed by ``count`` seeded random unit quaternions"""
    if count < 0:
        raise ValueError(f"direction count must be non-negative, got {count}")
    basis = np.eye(4)
    signed = np.concatenate([basis, -basis])
    rng = np.random.default_rng(seed)
    random = rng.normal(size=(count, 4))
    random /= np.linalg.norm(random, axis=1, keepdims=True)
    return np.concatenate([signed, random])


def _pairwise_spread(rows: np.ndarray) -> float:
    """Largest componentwise distance between any two rows of an (n, 4) array"""
    if len(rows) < 2:
        return 0.0
    return float(np.max(np.abs(rows[:, None, :] - rows[None, :, :])))


def difference_quotients(
    F: SpecialFunction,
    c: Sequence[float],
    side: Union[Side, str],
    dq: np.ndarray,
) -> np.ndarray:
    """
    Corrected quotients for increments dq of shape (N, 4):
    (Δq)^-1 {f(c+Δq) - f(c) + Σ_k [h_k(c + (Δq)_k (1,1,1,1)) - h_k(c)]} on the left,
    with the inverse on the right for side=right.
    """
    side = Side(side)
    x = _point(c)
    dq = np.asarray(dq, dtype=float)
    f = F.qfunction

    numerator = f.evaluate_array(x[:, None] + dq.T) - f.evaluate(x).to_array()
    for k in HELPER_PAIRS:
        h = helper_function(F, x, side, k)
        shifted = x[:, None] + dq[:, k - 1][None, :]
        numerator = numerator + h.evaluate_array(shifted) - h.evaluate(x).to_array()

    inv = inverse_arrays(dq)
    if side is Side.LEFT:
        return multiply_arrays(inv, numerator)
    return multiply_arrays(numerator, inv)


def partial_x1(F: SpecialFunction, c: Sequence[float]) -> Quaternion:
    """∂f/∂x1 at c"""
    return F.qfunction.partials(_point(c))[0]


def dq_limit(
    F: SpecialFunction,
    c: Sequence[float],
    side: Union[Side, str],
    magnitudes: Optional[Sequence[float]] = None,
    directions: int = 16,
    seed: int = 0,
    limit_tol: float = 1e-6,
    detail: bool = False,
) -> LimitDiagnostics:
    """
    Sweep corrected difference quotients over directions and shrinking
    magnitudes. Each direction is extrapolated with one Richardson step on
    its two smallest magnitudes; the limit exists when the extrapolated values
    agree across directions within limit_tol·(1 + |limit|).
    """
    side = Side(side)
    x = _point(c)
    mags = np.asarray(DEFAULT_MAGNITUDES if magnitudes is None else magnitudes, dtype=float)
    if mags.ndim != 1 or len(mags) < 2:
        raise ValueError("a magnitude schedule needs at least two entries")
    if np.any(mags <= 0) or np.any(np.diff(mags) >= 0):
        raise ValueError("magnitudes must be positive and strictly decreasing")

    units = direction_samples(directions, seed)
    increments = (units[:, None, :] * mags[None, :, None]).reshape(-1, 4)
    quotients = difference_quotients(F, x, side, increments).reshape(len(units), len(mags), 4)

    ratio = mags[-2] / mags[-1]
    extrapolated = (ratio * quotients[:, -1] - quotients[:, -2]) / (ratio - 1.0)
    limit = extrapolated.mean(axis=0)
    derivative = partial_x1(F, x).to_array()

    stage_errors = np.max(np.abs(quotients - derivative), axis=(0, 2))
    halving = None
    if stage_errors[-2] >= _HALVING_FLOOR:
        halving = float(stage_errors[-1] / stage_errors[-2])

    extrapolated_spread = _pairwise_spread(extrapolated)
    exists = extrapolated_spread <= limit_tol * (1.0 + float(np.max(np.abs(limit))))
    logger.debug("dq_limit side=%s c=%s spread=%.3e exists=%s", side.value, x.tolist(), extrapolated_spread, exists)

    return LimitDiagnostics(
        side=side.value,
        magnitudes=mags.tolist(),
        limit=limit.tolist(),
        derivative=derivative.tolist(),
        spread=_pairwise_spread(quotients[:, -1]),
        extrapolated_spread=extrapolated_spread,
        stage_spreads=[_pairwise_spread(quotients[:, m]) for m in range(len(mags))],
        limit_error=float(np.max(np.abs(limit - derivative))),
        final_stage_error=float(stage_errors[-1]),
        halving_ratio=halving,
        exists=bool(exists),
        directions=units.tolist() if detail else None,
        quotients=quotients.tolist() if detail else None,
    )


# ============================================================================
# QUATERNION DERIVATIVE
# ============================================================================

def quaternion_derivative(F: SpecialFunction) -> SpecialFunction:
    """∂f/∂x1 as a special-shape function: (∂f0/∂x1, ∂f1/∂x1)"""
    return SpecialFunction(ex.diff(F.f0, 1), ex.diff(F.f1, 1))


def is_pde_regular(F: SpecialFunction, c: Sequence[float], tol: float = 1e-9) -> bool:
    return pde_residuals(F, c).max_abs() <= tol * residual_scale(F, c)


def is_form_regular(F: SpecialFunction, c: Sequence[float], tol: float = 1e-8) -> bool:
    return form_report(F, c).max_abs() <= tol * residual_scale(F, c)
