"""
Expression DSL test suite: parser, printer, real and jet evaluation, symbolic diff
"""

import numpy as np
import pytest

from quatreg import corpus
from quatreg import expr as ex
from quatreg.errors import DomainError, ParseError
from quatreg.expr import BinOp, Call, Neg, Num, Pow, Var


# ============================================================================
# PARSER
# ============================================================================

class TestParser:
    """Grammar, precedence and error offsets"""

    def test_product_node(self):
        assert ex.parse("2*x1") == BinOp("*", Num(2.0), Var(1))

    def test_precedence(self):
        assert ex.parse("1 + 2*x1^2") == BinOp("+", Num(1.0), BinOp("*", Num(2.0), Pow(Var(1), 2)))

    def test_left_associative_subtraction(self):
        assert ex.parse("x1 - x2 - x3") == BinOp("-", BinOp("-", Var(1), Var(2)), Var(3))

    def test_unary_minus_binds_looser_than_power(self):
        assert ex.parse("-x1^2") == Neg(Pow(Var(1), 2))

    def test_right_associative_power(self):
        assert ex.parse("x1^2^3") == Pow(Var(1), 8)

    def test_whitespace_is_insignificant(self):
        assert ex.parse(" sin ( x3 ) * x4 ") == ex.parse("sin(x3)*x4")

    def test_numeric_literals(self):
        assert ex.parse("1.5e2") == Num(150.0)
        assert ex.parse(".5") == Num(0.5)

    def test_square_component(self):
        e = ex.parse("x1^2 - x2^2 - x3^2 - x4^2")
        assert ex.eval_real(e, (1.0, 2.0, 3.0, 4.0)) == 1.0 - 4.0 - 9.0 - 16.0

    def test_unknown_variable_offset(self):
        with pytest.raises(ParseError) as info:
            ex.parse("x5")
        assert info.value.offset == 0

    def test_unknown_function(self):
        with pytest.raises(ParseError) as info:
            ex.parse("x1 + tan(x2)")
        assert info.value.offset == 5

    def test_trailing_operator_offset(self):
        with pytest.raises(ParseError) as info:
            ex.parse("x1+")
        assert info.value.offset == 3
        assert info.value.caret().splitlines() == ["x1+", "   ^"]

    def test_unbalanced_parentheses(self):
        with pytest.raises(ParseError):
            ex.parse("(x1 + x2")
        with pytest.raises(ParseError):
            ex.parse("x1 + x2)")

    def test_non_integer_exponent(self):
        with pytest.raises(ParseError) as info:
            ex.parse("x1^2.5")
        assert info.value.offset == 3

    def test_overflowing_literal(self):
        with pytest.raises(ParseError) as info:
            ex.parse("3*1e999")
        assert info.value.offset == 2
        assert info.value.expected == "finite number"

    def test_large_finite_literal_round_trips(self):
        e = ex.parse("3*1e300")
        assert ex.parse(str(e)) == e

    def test_offset_within_input(self):
        for text in ["", "(", "x1 *", "sin(", "x1 ^"]:
            with pytest.raises(ParseError) as info:
                ex.parse(text)
            assert 0 <= info.value.offset <= len(text)


# ============================================================================
# PRINTER
# ============================================================================

class TestPrinter:
    """Canonical rendering and parse/print round trips"""

    @pytest.mark.parametrize("text", [
        "2*x1",
        "x1^2 - x2^2 - x3^2 - x4^2",
        "-x1^2",
        "(x1 + x2)*x3",
        "x1 - (x2 - x3)",
        "x1/(x2*x3)",
        "sin(x3)*x4",
        "(-x1)^3",
        "exp(-x2)",
        "x1 - -x2",
    ])
    def test_canonical_round_trip(self, text):
        e = ex.parse(text)
        assert ex.parse(str(e)) == e

    def test_spacing(self):
        assert str(ex.parse("x1+2*x2/x3")) == "x1 + 2*x2/x3"
        assert str(ex.parse("(x1+x2)^2")) == "(x1 + x2)^2"

    def test_random_round_trip(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            e = corpus.random_expr(rng, 3)
            assert ex.parse(str(e)) == e, str(e)


# ============================================================================
# EVALUATION
# ============================================================================

class TestEvaluation:
    """Real and jet evaluation, scalar and batched"""

    def test_product(self):
        assert ex.eval_real(ex.parse("x1*x2"), (2.0, 3.0, 0.0, 0.0)) == 6.0

    def test_zeroth_power(self):
        assert ex.eval_real(ex.parse("x1^0"), (0.0, 1.0, 2.0, 3.0)) == 1.0

    def test_log_domain_error_position(self):
        with pytest.raises(DomainError) as info:
            ex.eval_real(ex.parse("x2 + log(x1)"), (0.0, 1.0, 0.0, 0.0))
        assert info.value.function == "log"
        assert info.value.position == 5

    def test_division_by_zero(self):
        with pytest.raises(DomainError):
            ex.eval_real(ex.parse("1/x1"), (0.0, 0.0, 0.0, 0.0))

    def test_batched_matches_scalar(self):
        rng = np.random.default_rng(11)
        e = ex.parse("sin(x1)*x2^2 + exp(x3)/(2 + cos(x4))")
        points = rng.uniform(-1.0, 1.0, size=(4, 50))
        batched = ex.eval_real(e, points)
        assert batched.shape == (50,)
        scalar = [ex.eval_real(e, p) for p in points.T]
        np.testing.assert_allclose(batched, scalar, rtol=1e-14, atol=1e-14)

    def test_constant_batched(self):
        values = ex.eval_real(ex.parse("7"), np.zeros((4, 3)))
        assert values.tolist() == [7.0, 7.0, 7.0]

    def test_jet_gradients(self):
        assert ex.eval_jet(ex.parse("x1*x2"), (2.0, 3.0, 0.0, 0.0)).grad.tolist() == [3.0, 2.0, 0.0, 0.0]
        assert not ex.eval_jet(ex.parse("7"), (1.0, 1.0, 1.0, 1.0)).grad.any()
        j = ex.eval_jet(ex.parse("x2^2"), (0.0, 5.0, 0.0, 0.0))
        assert j.grad.tolist() == [0.0, 10.0, 0.0, 0.0]
        assert j.hess[1, 1] == 2.0

    def test_jet_value_matches_real(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            e = corpus.random_expr(rng, 3)
            p = corpus.random_point(rng)
            assert ex.eval_jet(e, p).value == pytest.approx(ex.eval_real(e, p), rel=1e-12, abs=1e-12)

    def test_jet_domain_error_position(self):
        with pytest.raises(DomainError) as info:
            ex.eval_jet(ex.parse("sqrt(x1)"), (0.0, 0.0, 0.0, 0.0))
        assert info.value.position == 0


# ============================================================================
# SYMBOLIC DIFFERENTIATION
# ============================================================================

class TestSymbolicDiff:
    """diff against hand results and against jets"""

    def test_power_rule(self):
        assert ex.diff(ex.parse("x1^2"), 1) == ex.parse("2*x1")

    def test_independent_variable(self):
        assert ex.diff(ex.parse("x2"), 1) == Num(0.0)

    def test_product_with_call(self):
        d = ex.diff(ex.parse("sin(x3)*x4"), 3)
        assert d == BinOp("*", Call("cos", Var(3)), Var(4))

    def test_special_shape_derivatives(self):
        assert str(ex.diff(ex.parse("2*x1"), 1)) == "2"
        assert str(ex.diff(ex.parse("x1^2-x2^2-x3^2-x4^2"), 1)) == "2*x1"

    def test_axis_checked(self):
        with pytest.raises(ValueError):
            ex.diff(ex.parse("x1"), 0)

    def test_matches_jets(self):
        rng = np.random.default_rng(99)
        for _ in range(100):
            e = corpus.random_expr(rng, 3)
            p = corpus.random_point(rng)
            grad = ex.eval_jet(e, p).grad
            for i in range(1, 5):
                value = ex.eval_real(ex.diff(e, i), p)
                assert abs(value - grad[i - 1]) <= 1e-9 * (1.0 + abs(grad[i - 1])), str(e)

    def test_variables(self):
        assert ex.variables(ex.parse("x1*sin(x3) + 2")) == {1, 3}
