"""
Seeded randomized verification of the algebraic and differential identities.

Each identity is a function ``(rng, samples, settings) -> (cases, violation)``
registered in ``IDENTITIES``. Violations are scale-normalised:
|lhs - rhs|_inf / (1 + max(|lhs|_inf, |rhs|_inf)), maximised over the cases,
except for the counting checks, whose violation is a number of disagreements.
Every identity draws from its own generator seeded with (seed, position), so
adding samples to one identity never shifts another.
"""

import logging
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from quatreg import corpus
from quatreg import expr as ex
from quatreg.config import Settings, get_settings
from quatreg.forms import (
    FormKind,
    PointForm,
    QFunction,
    Side,
    differential0,
    exterior_d,
    exterior_dd,
    fueter,
    multi_indices,
    special_form,
    wedge,
    wedge_fields,
)
from quatreg.models import IdentityReport, IdentityResult
from quatreg.quaternion import Quaternion, multiply_arrays
from quatreg.regularity import (
    is_form_regular,
    is_pde_regular,
    quaternion_derivative,
)

logger = logging.getLogger(__name__)

ALGEBRA_TOL = 1e-12
DERIVATIVE_TOL = 1e-9
FD_TOL = 1e-6
FD_STEP = 1e-5


def violation(lhs, rhs) -> float:
    a = np.asarray(lhs, dtype=float)
    b = np.asarray(rhs, dtype=float)
    return float(np.max(np.abs(a - b)) / (1.0 + max(np.max(np.abs(a)), np.max(np.abs(b)))))


def _form_array(form: PointForm) -> np.ndarray:
    """Coefficients of a point form on every multi-index of its degree, shape (k, 4)"""
    if form.degree > 4:
        return np.zeros((1, 4))
    return np.array([form.coefficient(i).to_array() for i in multi_indices(form.degree)])


def _form_violation(lhs: PointForm, rhs: PointForm) -> float:
    return violation(_form_array(lhs), _form_array(rhs))


def _volume(form: PointForm) -> np.ndarray:
    return form.volume_coefficient().to_array()


@dataclass(frozen=True)
class Identity:
    name: str
    check: Callable[[np.random.Generator, int, Settings], Tuple[int, float]]
    tolerance: Optional[float]


# ============================================================================
# QUATERNION ALGEBRA
# ============================================================================

def _associativity(rng, samples, settings):
    n = 10 * samples
    a, b, c = (rng.normal(size=(n, 4)) for _ in range(3))
    if n == 0:
        return 0, 0.0
    lhs = multiply_arrays(multiply_arrays(a, b), c)
    rhs = multiply_arrays(a, multiply_arrays(b, c))
    return n, max(violation(l, r) for l, r in zip(lhs, rhs))


def _norm_multiplicativity(rng, samples, settings):
    n = 10 * samples
    a, b = (rng.normal(size=(n, 4)) for _ in range(2))
    if n == 0:
        return 0, 0.0
    lhs = np.linalg.norm(multiply_arrays(a, b), axis=1)
    rhs = np.linalg.norm(a, axis=1) * np.linalg.norm(b, axis=1)
    return n, max(violation(l, r) for l, r in zip(lhs, rhs))


# ============================================================================
# DIFFERENTIATION
# ============================================================================

def _symbolic_diff_vs_jets(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        e = corpus.random_expr(rng, 3)
        p = corpus.random_point(rng)
        grad = ex.eval_jet(e, p).grad
        symbolic = [ex.eval_real(ex.diff(e, i), p) for i in range(1, 5)]
        worst = max(worst, violation(symbolic, grad))
    return samples, worst


def _jets_vs_finite_differences(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        e = corpus.random_expr(rng, 3)
        p = corpus.random_point(rng)
        grad = ex.eval_jet(e, p).grad
        steps = np.eye(4) * FD_STEP
        fd = (ex.eval_real(e, p[:, None] + steps) - ex.eval_real(e, p[:, None] - steps)) / (2 * FD_STEP)
        worst = max(worst, violation(grad, fd))
    return samples, worst


# ============================================================================
# FORMS
# ============================================================================

def _graded_commutativity_real_factor(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        m, n = (int(v) for v in rng.integers(0, 5, size=2))
        alpha = corpus.random_point_form(rng, m, real=True)
        beta = corpus.random_point_form(rng, n)
        lhs = wedge(alpha, beta)
        rhs = wedge(beta, alpha).scaled((-1.0) ** (m * n))
        worst = max(worst, _form_violation(lhs, rhs))
    return samples, worst


def _differential_additivity(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        f, g = corpus.random_qfunction(rng), corpus.random_qfunction(rng)
        p = corpus.random_point(rng)
        lhs = differential0(f + g, p)
        rhs = differential0(f, p) + differential0(g, p)
        worst = max(worst, _form_violation(lhs, rhs))
    return samples, worst


def _leibniz_product_rule(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        f, g = corpus.random_qfunction(rng), corpus.random_qfunction(rng)
        p = corpus.random_point(rng)
        lhs = differential0(f * g, p)
        f0 = PointForm.scalar(f.evaluate(p))
        g0 = PointForm.scalar(g.evaluate(p))
        rhs = wedge(f0, differential0(g, p)) + wedge(differential0(f, p), g0)
        worst = max(worst, _form_violation(lhs, rhs))
    return samples, worst


def _constant_factors(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        f = corpus.random_qfunction(rng)
        q = corpus.random_quaternion(rng)
        p = corpus.random_point(rng)
        df = differential0(f, p)
        worst = max(
            worst,
            _form_violation(differential0(q * f, p), df.left_multiply(q)),
            _form_violation(differential0(f * q, p), df.right_multiply(q)),
        )
    return samples, worst


def _exterior_d_linearity(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        m = int(rng.integers(0, 4))
        a = corpus.random_form_field(rng, m)
        b = corpus.random_form_field(rng, m)
        q = corpus.random_quaternion(rng)
        p = corpus.random_point(rng)
        da = exterior_d(a, p)
        worst = max(
            worst,
            _form_violation(exterior_d(a + b, p), da + exterior_d(b, p)),
            _form_violation(exterior_d(a.left_multiply(q), p), da.left_multiply(q)),
            _form_violation(exterior_d(a.right_multiply(q), p), da.right_multiply(q)),
        )
    return samples, worst


def _graded_leibniz(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        m = int(rng.integers(0, 4))
        n = int(rng.integers(0, 4 - m))
        a = corpus.random_form_field(rng, m)
        b = corpus.random_form_field(rng, n)
        p = corpus.random_point(rng)
        lhs = exterior_d(wedge_fields(a, b), p)
        rhs = wedge(exterior_d(a, p), b.evaluate(p)) + wedge(a.evaluate(p), exterior_d(b, p)).scaled((-1.0) ** m)
        worst = max(worst, _form_violation(lhs, rhs))
    return samples, worst


def _dd_zero_symbolic(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        a = corpus.random_form_field(rng, int(rng.integers(0, 3)))
        p = corpus.random_point(rng)
        dd = exterior_d(a.d(), p)
        worst = max(worst, violation(_form_array(dd), 0.0))
    return samples, worst


def _dd_zero_jets(rng, samples, settings):
    worst = 0.0
    for _ in range(samples):
        a = corpus.random_form_field(rng, int(rng.integers(0, 3)))
        p = corpus.random_point(rng)
        worst = max(worst, violation(_form_array(exterior_dd(a, p)), 0.0))
    return samples, worst


# ============================================================================
# SPECIAL FORMS AND FUETER OPERATORS
# ============================================================================

def _fueter_left(rng, samples, settings):
    worst = 0.0
    dq = special_form(FormKind.DQ)
    for _ in range(samples):
        f = corpus.random_qfunction(rng)
        p = corpus.random_point(rng)
        lhs = _volume(wedge(dq.evaluate(p), differential0(f, p)))
        rhs = (-fueter(Side.LEFT, f, p)).to_array()
        worst = max(worst, violation(lhs, rhs))
    return samples, worst


def _fueter_right(rng, samples, settings):
    worst = 0.0
    dq = special_form(FormKind.DQ)
    for _ in range(samples):
        f = corpus.random_qfunction(rng)
        p = corpus.random_point(rng)
        lhs = _volume(wedge(differential0(f, p), dq.evaluate(p)))
        rhs = fueter(Side.RIGHT, f, p).to_array()
        worst = max(worst, violation(lhs, rhs))
    return samples, worst


def _d0q_identity(rng, samples, settings):
    worst = 0.0
    d0q = special_form(FormKind.D0Q)
    for _ in range(samples):
        f = corpus.random_qfunction(rng)
        p = corpus.random_point(rng)
        partials = f.partials(p)
        df = differential0(f, p)
        form = d0q.evaluate(p)
        expected = partials[0] * float(-(p[1] + p[2] + p[3]))
        for k in (1, 2, 3):
            expected = expected + partials[k] * float(p[k])
        expected = expected.to_array()
        worst = max(
            worst,
            violation(_volume(wedge(form, df)), expected),
            violation(-_volume(wedge(df, form)), expected),
        )
    return samples, worst


def _d1q_identity(rng, samples, settings):
    worst = 0.0
    d1q = special_form(FormKind.D1Q)
    for _ in range(samples):
        f = corpus.random_qfunction(rng)
        p = corpus.random_point(rng)
        expected = -np.sum([q.to_array() for q in f.partials(p)], axis=0)
        df = differential0(f, p)
        form = d1q.evaluate(p)
        worst = max(
            worst,
            violation(_volume(wedge(form, df)), expected),
            violation(-_volume(wedge(df, form)), expected),
        )
    return samples, worst


def _identity_anchor(rng, samples, settings):
    worst = 0.0
    dq = special_form(FormKind.DQ)
    identity = QFunction.identity()
    expected = Quaternion(2.0, 0.0, 0.0, 0.0).to_array()
    for _ in range(samples):
        p = corpus.random_point(rng)
        worst = max(worst, violation(_volume(wedge(dq.evaluate(p), differential0(identity, p))), expected))
    return samples, worst


# ============================================================================
# REGULARITY
# ============================================================================

def _members_and_points(samples):
    per_member = max(1, samples // 10) if samples else 0
    members = list(corpus.regular_functions().items()) + list(corpus.non_regular_functions().items())
    return members, per_member


def _pde_form_equivalence(rng, samples, settings):
    members, per_member = _members_and_points(samples)
    disagreements = 0
    cases = 0
    for name, F in members:
        for _ in range(per_member):
            p = corpus.random_point(rng)
            pde = is_pde_regular(F, p, settings.pde_tol)
            forms = is_form_regular(F, p, settings.form_tol)
            cases += 1
            if pde != forms:
                logger.info("verdicts disagree for %s at %s", name, p.tolist())
                disagreements += 1
    return cases, float(disagreements)


def _derivative_closure(rng, samples, settings):
    _, per_member = _members_and_points(samples)
    failures = 0
    cases = 0
    for name, F in corpus.regular_functions().items():
        derivative = quaternion_derivative(F)
        for _ in range(per_member):
            p = corpus.random_point(rng)
            cases += 1
            if is_pde_regular(F, p, settings.pde_tol) and not is_pde_regular(derivative, p, settings.pde_tol):
                logger.info("derivative of %s is not regular at %s", name, p.tolist())
                failures += 1
    return cases, float(failures)


IDENTITIES: List[Identity] = [
    Identity("quaternion_associativity", _associativity, ALGEBRA_TOL),
    Identity("quaternion_norm_multiplicativity", _norm_multiplicativity, ALGEBRA_TOL),
    Identity("symbolic_diff_vs_jets", _symbolic_diff_vs_jets, DERIVATIVE_TOL),
    Identity("jets_vs_finite_differences", _jets_vs_finite_differences, FD_TOL),
    Identity("graded_commutativity_real_factor", _graded_commutativity_real_factor, None),
    Identity("differential_additivity", _differential_additivity, None),
    Identity("leibniz_product_rule", _leibniz_product_rule, None),
    Identity("constant_factors", _constant_factors, None),
    Identity("exterior_d_linearity", _exterior_d_linearity, None),
    Identity("graded_leibniz", _graded_leibniz, None),
    Identity("dd_zero_symbolic", _dd_zero_symbolic, None),
    Identity("dd_zero_jets", _dd_zero_jets, None),
    Identity("fueter_left", _fueter_left, DERIVATIVE_TOL),
    Identity("fueter_right", _fueter_right, DERIVATIVE_TOL),
    Identity("d0q_identity", _d0q_identity, DERIVATIVE_TOL),
    Identity("d1q_identity", _d1q_identity, DERIVATIVE_TOL),
    Identity("identity_anchor", _identity_anchor, DERIVATIVE_TOL),
    Identity("pde_form_equivalence", _pde_form_equivalence, 0.0),
    Identity("derivative_closure", _derivative_closure, 0.0),
]

IDENTITY_NAMES: Dict[str, int] = {identity.name: k for k, identity in enumerate(IDENTITIES)}


def run_identity(name: str, seed: int, samples: int, settings: Optional[Settings] = None) -> IdentityResult:
    """Run one identity by name with its own sub-generator"""
    settings = settings or get_settings()
    position = IDENTITY_NAMES[name]
    identity = IDENTITIES[position]
    rng = np.random.default_rng([seed, position])
    cases, worst = identity.check(rng, samples, settings)
    tolerance = settings.identity_tol if identity.tolerance is None else identity.tolerance
    return IdentityResult(
        name=identity.name,
        cases=cases,
        max_violation=worst,
        tolerance=tolerance,
        passed=bool(worst <= tolerance),
    )


def run_identities(
    seed: int = 0,
    samples: int = 100,
    tol: Optional[float] = None,
    settings: Optional[Settings] = None,
) -> IdentityReport:
    """
    Run the whole suite. ``tol`` replaces the tolerance of the form identities;
    algebra, derivative and counting checks keep their own.
    """
    settings = settings or get_settings()
    if samples < 0:
        raise ValueError(f"samples must be non-negative, got {samples}")
    if tol is not None:
        settings = replace(settings, identity_tol=tol)

    warnings = []
    if samples == 0:
        message = "samples=0: no cases were drawn, every identity passes vacuously"
        logger.warning(message)
        warnings.append(message)

    results = []
    for identity in IDENTITIES:
        result = run_identity(identity.name, seed, samples, settings)
        logger.info("%s: %d cases, max violation %.3e", result.name, result.cases, result.max_violation)
        results.append(result)

    passed = all(r.passed for r in results)
    return IdentityReport(
        seed=seed,
        samples=samples,
        results=results,
        warnings=warnings,
        passed=passed,
        exit_code=0 if passed else 1,
    )
