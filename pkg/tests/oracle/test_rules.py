"""Tests for germ rules."""

from fractions import Fraction

import mpmath
import pytest

from models.types import GeneratorKind
from oracle.rules import ExponentialRule, PowerRule, create_rule, to_mpf


class TestRules:
    """Test the rule factory and log-space values."""

    def test_create_rule(self):
        assert isinstance(create_rule(GeneratorKind.EXPONENTIAL, 1), ExponentialRule)
        assert isinstance(create_rule("power", Fraction(1, 2)), PowerRule)

    def test_plain_and_unknown_kinds(self):
        with pytest.raises(ValueError, match="No germ rule"):
            create_rule(GeneratorKind.PLAIN, 1)
        with pytest.raises(ValueError, match="Unknown generator kind"):
            create_rule("logarithmic", 1)

    def test_rate_must_be_positive(self):
        with pytest.raises(ValueError):
            ExponentialRule(mpmath.mpf(0))

    def test_exponential(self):
        rule = create_rule(GeneratorKind.EXPONENTIAL, Fraction(1, 2))
        assert rule.log_value(mpmath.mpf(10)) == -5
        assert mpmath.almosteq(rule.value(mpmath.mpf(2)), mpmath.exp(-1))

    def test_power(self):
        rule = create_rule(GeneratorKind.POWER, 2)
        assert mpmath.almosteq(rule.value(mpmath.mpf(10)), mpmath.mpf("0.01"))

    def test_to_mpf(self):
        assert to_mpf(Fraction(1, 4)) == mpmath.mpf("0.25")
        assert repr(create_rule("power", 1)) == "PowerRule(rate=1.0)"
