"""
Regularity test suite: PDE residuals, form equations, helper functions,
corrected difference quotients and the quaternion derivative
"""

import numpy as np
import pytest

from quatreg import corpus
from quatreg.errors import DomainError
from quatreg.forms import Side
from quatreg.quaternion import Quaternion, isclose
from quatreg.regularity import (
    DEFAULT_MAGNITUDES,
    SpecialFunction,
    difference_quotients,
    direction_samples,
    dq_limit,
    form_report,
    form_residuals,
    helper_function,
    is_form_regular,
    is_pde_regular,
    partial_x1,
    pde_residuals,
    quaternion_derivative,
    residual_scale,
)

C = (0.3, 0.2, -0.1, 0.4)

# final stage near 1e-6, so O(t) errors sit below 1e-5
FINE_MAGNITUDES = tuple(1e-3 * 2.0 ** -k for k in range(11))


@pytest.fixture
def square():
    return SpecialFunction.parse("2*x1", "x1^2-x2^2-x3^2-x4^2")


@pytest.fixture
def non_regular():
    return SpecialFunction.parse("x2", "0")


@pytest.fixture
def rng():
    return np.random.default_rng(808)


# ============================================================================
# PDE SYSTEM
# ============================================================================

class TestPdeResiduals:
    """Residuals of the PDE system and the shared scale"""

    def test_square_is_regular(self, square, rng):
        for _ in range(20):
            c = corpus.random_point(rng)
            assert pde_residuals(square, c).max_abs() <= 1e-12
            assert is_pde_regular(square, c)

    def test_nonregular_example(self, non_regular):
        residuals = pde_residuals(non_regular, (0.0, 0.0, 1.0, 0.0))
        assert residuals.r_23 == -1.0
        assert residuals.r_main == residuals.r_2 == residuals.r_3 == residuals.r_4 == 0.0
        assert residuals.r_24 == residuals.r_34 == 0.0
        assert residuals.max_abs() == 1.0
        assert residual_scale(non_regular, (0.0, 0.0, 1.0, 0.0)) == 3.0

    def test_pure_vector_fails_main_equation(self):
        residuals = pde_residuals(SpecialFunction.parse("1", "0"), C)
        assert residuals.r_main == -1.0

    def test_point_shape_checked(self, square):
        with pytest.raises(ValueError):
            pde_residuals(square, (0.0, 0.0, 0.0))

    def test_domain_error_propagates(self):
        F = SpecialFunction.parse("log(x1)", "0")
        with pytest.raises(DomainError):
            pde_residuals(F, (0.0, 1.0, 1.0, 1.0))


# ============================================================================
# FORM EQUATIONS
# ============================================================================

class TestFormResiduals:
    """Left and right form equations"""

    def test_square_vanishes(self, square, rng):
        for _ in range(20):
            c = corpus.random_point(rng)
            left, right = form_residuals(square, c)
            assert left.max_abs() <= 1e-12
            assert right.max_abs() <= 1e-12

    def test_constant_vanishes(self):
        left, right = form_residuals(SpecialFunction.parse("0", "5"), C)
        assert left.is_zero() and right.is_zero()

    def test_nonregular_does_not_vanish(self, non_regular):
        assert form_report(non_regular, C).max_abs() > 1e-3
        assert not is_form_regular(non_regular, C)

    def test_report_carries_both_sides(self, square):
        report = form_report(square, C)
        assert len(report.left) == 4 and len(report.right) == 4

    def test_agrees_with_pde_verdict_on_corpus(self, rng):
        members = list(corpus.regular_functions().values()) + list(corpus.non_regular_functions().values())
        for F in members:
            for _ in range(10):
                c = corpus.random_point(rng, -0.5, 0.5)
                assert is_pde_regular(F, c) == is_form_regular(F, c), str(F)

    def test_corpus_classification(self, rng):
        c = corpus.random_point(rng, -0.5, 0.5)
        for F in corpus.regular_functions().values():
            assert is_pde_regular(F, c), str(F)
        for F in corpus.non_regular_functions().values():
            assert not is_pde_regular(F, c), str(F)


# ============================================================================
# HELPER FUNCTIONS
# ============================================================================

class TestHelperFunctions:
    """Correction terms of the difference quotients"""

    def test_zero_f0_gives_zero(self):
        F = SpecialFunction.parse("0", "x1")
        for side in Side:
            for k in (2, 3, 4):
                assert helper_function(F, (0.0, 0.0, 0.0, 0.0), side, k).evaluate(C).is_zero()

    def test_square_left_index_four(self, square):
        c = (0.5, 0.2, -0.3, 0.4)
        h = helper_function(square, c, Side.LEFT, 4).evaluate(c)
        assert h.c4 == pytest.approx((0.2 - 0.3) * 2 * 0.5)
        assert h.c1 == 0.0

    def test_index_checked(self, square):
        with pytest.raises(ValueError):
            helper_function(square, C, Side.LEFT, 1)

    def test_batched_matches_scalar(self, square, rng):
        h = helper_function(square, C, "right", 3)
        points = corpus.random_points(rng, 6)
        values = h.evaluate_array(points)
        for n in range(6):
            np.testing.assert_allclose(values[n], h.evaluate(points[:, n]).to_array(), rtol=1e-14, atol=1e-14)


# ============================================================================
# DIFFERENCE QUOTIENT LIMITS
# ============================================================================

class TestDifferenceQuotients:
    """Direction sampling, quotient sweeps and limit diagnostics"""

    def test_direction_samples(self):
        units = direction_samples(4, seed=0)
        assert units.shape == (12, 4)
        np.testing.assert_array_equal(units[:4], np.eye(4))
        np.testing.assert_array_equal(units[4:8], -np.eye(4))
        np.testing.assert_allclose(np.linalg.norm(units, axis=1), 1.0, rtol=1e-12)
        np.testing.assert_array_equal(units, direction_samples(4, seed=0))

    def test_negative_direction_count(self):
        with pytest.raises(ValueError):
            direction_samples(-1)

    def test_default_magnitudes(self):
        assert len(DEFAULT_MAGNITUDES) == 11
        assert DEFAULT_MAGNITUDES[0] == 1e-2
        assert DEFAULT_MAGNITUDES[1] == 5e-3

    def test_zero_increment(self, square):
        with pytest.raises(DomainError):
            difference_quotients(square, C, Side.LEFT, np.zeros((1, 4)))

    @pytest.mark.parametrize("magnitudes", [[1e-2], [1e-3, 1e-2], [1e-2, 0.0]])
    def test_schedule_validated(self, square, magnitudes):
        with pytest.raises(ValueError):
            dq_limit(square, C, Side.LEFT, magnitudes=magnitudes)

    def test_constant_function(self):
        result = dq_limit(SpecialFunction.parse("0", "5"), C, Side.LEFT)
        assert result.exists
        assert result.limit == [0.0, 0.0, 0.0, 0.0]
        assert result.limit_error == 0.0
        assert result.halving_ratio is None

    @pytest.mark.parametrize("name", list(corpus.REGULAR))
    @pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
    def test_regular_members_converge(self, name, side):
        F = corpus.regular_functions()[name]
        rng = np.random.default_rng(2024)
        for _ in range(5):
            c = corpus.random_point(rng, 0.1, 0.6)
            result = dq_limit(F, c, side, magnitudes=FINE_MAGNITUDES)
            assert result.exists, name
            assert result.final_stage_error <= 1e-5, name
            assert result.limit_error <= 1e-5, name
            if result.halving_ratio is not None:
                assert abs(result.halving_ratio - 0.5) <= 0.2, name

    @pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
    def test_default_schedule_halves_the_error(self, square, side):
        result = dq_limit(square, C, side)
        assert result.exists
        assert result.limit_error <= 1e-5
        assert abs(result.halving_ratio - 0.5) <= 0.2

    @pytest.mark.parametrize("side", [Side.LEFT, Side.RIGHT])
    def test_nonregular_limit_does_not_exist(self, non_regular, side):
        result = dq_limit(non_regular, C, side)
        assert not result.exists
        assert result.spread > 1e-3
        assert result.extrapolated_spread > 1e-3
        assert result.spread == result.stage_spreads[-1]

    @pytest.mark.parametrize("name", list(corpus.NON_REGULAR))
    def test_nonregular_members_fail_existence(self, name):
        F = corpus.non_regular_functions()[name]
        assert not is_pde_regular(F, C), name
        assert not all(dq_limit(F, C, side).exists for side in Side), name

    def test_detail_and_determinism(self, square):
        first = dq_limit(square, C, Side.LEFT, directions=3, seed=5, detail=True)
        second = dq_limit(square, C, Side.LEFT, directions=3, seed=5, detail=True)
        assert first == second
        assert len(first.directions) == 11
        assert np.asarray(first.quotients).shape == (11, 11, 4)
        assert dq_limit(square, C, Side.LEFT).quotients is None

    def test_limit_is_x1_partial(self, square):
        result = dq_limit(square, C, Side.RIGHT)
        expected = partial_x1(square, C)
        assert result.derivative == expected.to_array().tolist()
        assert isclose(Quaternion.from_array(result.limit), expected, rel_tol=1e-6, abs_tol=1e-6)


# ============================================================================
# QUATERNION DERIVATIVE
# ============================================================================

class TestQuaternionDerivative:
    """Differentiation with respect to x1 and closure of regularity"""

    def test_square(self, square):
        derivative = quaternion_derivative(square)
        assert str(derivative.f0) == "2"
        assert str(derivative.f1) == "2*x1"

    def test_square_derivative_is_twice_identity(self, square):
        q = Quaternion(*C)
        value = quaternion_derivative(square).qfunction.evaluate(C)
        assert isclose(value, q * 2.0, rel_tol=1e-12, abs_tol=1e-12)

    def test_closure_on_regular_members(self, rng):
        for name, F in corpus.regular_functions().items():
            derivative = quaternion_derivative(F)
            for _ in range(5):
                c = corpus.random_point(rng, -0.5, 0.5)
                assert is_pde_regular(derivative, c), name
