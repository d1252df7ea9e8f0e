"""Germ rules for exponential and power generators."""

from fractions import Fraction
from typing import Union

import mpmath

from models.types import GeneratorKind

from .base import BaseGermRule

RateLike = Union[Fraction, int, float, mpmath.mpf]


def to_mpf(value: RateLike) -> mpmath.mpf:
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    return mpmath.mpf(value)


class ExponentialRule(BaseGermRule):
    """g = e^{-rate·t}."""

    @property
    def kind(self) -> GeneratorKind:
        return GeneratorKind.EXPONENTIAL

    def log_value(self, t: mpmath.mpf) -> mpmath.mpf:
        return -self.rate * t


class PowerRule(BaseGermRule):
    """g = t^{-degree}."""

    @property
    def kind(self) -> GeneratorKind:
        return GeneratorKind.POWER

    def log_value(self, t: mpmath.mpf) -> mpmath.mpf:
        return -self.rate * mpmath.log(t)


def create_rule(kind: Union[GeneratorKind, str], rate: RateLike) -> BaseGermRule:
    """Create the germ rule for a generator kind.

    Raises:
        ValueError: If the kind has no numeric rule (plain generators)
    """
    rules = {
        GeneratorKind.EXPONENTIAL: ExponentialRule,
        GeneratorKind.POWER: PowerRule,
    }

    try:
        kind = GeneratorKind(kind)
    except ValueError:
        raise ValueError(f"Unknown generator kind: {kind}")

    if kind not in rules:
        raise ValueError(f"No germ rule for {kind.value} generators")
    return rules[kind](to_mpf(rate))
