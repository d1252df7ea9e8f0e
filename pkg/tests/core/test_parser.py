"""Tests for the expression language."""

import re
from fractions import Fraction

import pytest

from core.errors import ParseError, PreconditionFailed, UnknownSymbol
from core.parser import Binary, Call, ExpLinear, Power, evaluate, linear_in_x, parse, tokenize
from core.series import Series, add, mul


class TestTokenizer:
    """Test tokens and implicit multiplication."""

    def test_implicit_multiplication(self):
        assert [token.text for token in tokenize("3(1+t)")] == ["3", "*", "(", "1", "+", "t", ")", ""]
        assert [token.text for token in tokenize("2e^x")] == ["2", "*", "e", "^", "x", ""]

    def test_spaces_separate_numbers(self):
        # "3 x" is not implicit multiplication
        assert [token.text for token in tokenize("3 x")] == ["3", "x", ""]

    def test_bad_character(self):
        with pytest.raises(ParseError) as exc_info:
            tokenize("t + #")
        assert exc_info.value.position == (4, 5)


class TestParse:
    """Test precedence and parse errors."""

    def test_spans(self):
        tree = parse("1 + 2*t")
        assert isinstance(tree, Binary)
        assert tree.op == "+"
        assert tree.span == (0, 7)

    def test_power_binds_tighter_than_minus(self):
        tree = parse("-t^2")
        assert isinstance(tree.operand, Power)
        assert tree.operand.exponent == 2

    def test_power_node(self):
        tree = parse("(1+z)^(1/2)")
        assert isinstance(tree, Power)
        assert tree.exponent == Fraction(1, 2)
        assert isinstance(tree.base, Binary)

    def test_derivation_node(self):
        tree = parse("D(x*exp1)")
        assert isinstance(tree, Call)
        assert tree.func == "D"

    def test_exp_linear(self):
        tree = parse("e^(-3x/2)")
        assert isinstance(tree, ExpLinear)
        assert tree.q == Fraction(-3, 2)

    def test_linear_in_x(self):
        assert linear_in_x(parse("2x - 3")) == (2, -3)
        assert linear_in_x(parse("x/4")) == (Fraction(1, 4), 0)
        assert linear_in_x(parse("x*x")) is None
        assert linear_in_x(parse("t")) is None

    @pytest.mark.parametrize(
        "src,position",
        [
            ("3 +", (3, 3)),
            ("(1+t", (4, 4)),
            ("#", (0, 1)),
            ("", (0, 0)),
            ("t )", (2, 3)),
        ],
    )
    def test_error_positions(self, src, position):
        with pytest.raises(ParseError) as exc_info:
            parse(src)
        assert exc_info.value.position == position
        assert exc_info.value.exit_code == 2

    def test_missing_paren_message(self):
        with pytest.raises(ParseError, match=re.escape("expected ')'")):
            parse("(1+t")

    def test_exponent_must_be_rational(self):
        with pytest.raises(ParseError, match="rational"):
            parse("t^x")
        with pytest.raises(ParseError, match="multiple of x"):
            parse("e^(x^2)")


class TestEvaluate:
    """Test evaluation in both presets."""

    def test_geometric(self, series_ctx):
        f = evaluate("1/(1-t)", series_ctx, 5)
        assert str(f) == "1 + t + t^2 + t^3 + t^4 + t^5"
        assert f.known_below == 6

    def test_exp_and_log1p(self, series_ctx):
        assert str(evaluate("exp(t)", series_ctx, 3)) == "1 + t + 1/2*t^2 + 1/6*t^3"
        assert str(evaluate("log1p(t)", series_ctx, 3)) == "t - 1/2*t^2 + 1/3*t^3"

    def test_exact_arithmetic(self, series_ctx):
        f = evaluate("(1+t)^2 - 2t", series_ctx)
        assert str(f) == "1 + t^2"
        assert f.is_exact
        assert str(evaluate("t/2", series_ctx)) == "1/2*t"
        assert str(evaluate("inv(t)", series_ctx)) == "t^-1"
        assert str(evaluate("4^(1/2)", series_ctx)) == "2"

    def test_powers(self, series_ctx):
        assert str(evaluate("(1+t)^-1", series_ctx, 3)) == "1 - t + t^2 - t^3"
        assert str(evaluate("(1+t)^(1/2)", series_ctx, 2)) == "1 + 1/2*t - 1/8*t^2"
        assert str(evaluate("t^(1/2)", series_ctx)) == "t^(1/2)"

    def test_transseries_sugar(self, trans_ctx):
        assert str(evaluate("x", trans_ctx)) == "x"
        assert str(evaluate("exp1", trans_ctx)) == "e^x"
        assert str(evaluate("exp(x)", trans_ctx)) == "e^x"
        assert str(evaluate("3x", trans_ctx)) == "3*x"
        assert str(evaluate("e^(-3x/2)", trans_ctx)) == "e^(-3x/2)"
        assert str(evaluate("2e^x", trans_ctx)) == "2*e^x"

    def test_generator_names(self, trans_ctx):
        f = evaluate("1 + 1/2 * E^-1", trans_ctx)
        assert f == Series.constant(trans_ctx, 1) + Series.monomial(trans_ctx.monomial(E=-1), Fraction(1, 2))
        assert str(f) == "1/2*e^x + 1"

    def test_calculus(self, trans_ctx):
        x = Series.monomial(trans_ctx.x_monomial(1))
        e_x = Series.monomial(trans_ctx.exp_monomial(1))
        assert evaluate("D(x*exp1)", trans_ctx) == add(mul(x, e_x), e_x)
        assert str(evaluate("D(x)", trans_ctx)) == "1"
        assert str(evaluate("D(exp1)", trans_ctx)) == "e^x"
        assert str(evaluate("logd(x)", trans_ctx)) == "x^-1"

    def test_unknown_symbol(self, series_ctx):
        with pytest.raises(UnknownSymbol) as exc_info:
            evaluate("foo", series_ctx)
        assert exc_info.value.position == (0, 3)
        assert exc_info.value.to_payload() == {
            "error": "unknown_symbol",
            "message": "unknown symbol 'foo'",
            "position": [0, 3],
        }

    def test_sugar_needs_matching_generator(self, series_ctx):
        with pytest.raises(UnknownSymbol):
            evaluate("x", series_ctx)
        with pytest.raises(UnknownSymbol):
            evaluate("e", series_ctx)

    def test_preconditions(self, series_ctx, trans_ctx):
        with pytest.raises(PreconditionFailed):
            evaluate("t/0", series_ctx)
        with pytest.raises(PreconditionFailed):
            evaluate("t/(1-1)", series_ctx)
        with pytest.raises(PreconditionFailed):
            evaluate("exp(1)", series_ctx, 3)
        with pytest.raises(PreconditionFailed):
            evaluate("exp(t)", series_ctx)
        with pytest.raises(PreconditionFailed):
            evaluate("exp(x+1)", trans_ctx)
