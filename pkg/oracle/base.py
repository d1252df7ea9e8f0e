"""Base germ rule."""

from abc import ABC, abstractmethod

import mpmath

from models.types import GeneratorKind


class BaseGermRule(ABC):
    """Evaluation rule of a positive infinitesimal generator germ at +∞.

    Rules work in log space: ``log_value(t)`` is log g(t), so e^{-40} and
    e^{40} stay representable and signs are tracked separately.
    """

    def __init__(self, rate: mpmath.mpf) -> None:
        if rate <= 0:
            raise ValueError(f"{self.kind.value} rule needs a positive rate")
        self.rate = rate

    @property
    @abstractmethod
    def kind(self) -> GeneratorKind:
        """Generator kind this rule evaluates."""
        pass

    @abstractmethod
    def log_value(self, t: mpmath.mpf) -> mpmath.mpf:
        """log g(t) at a sample point t > 0."""
        pass

    def value(self, t: mpmath.mpf) -> mpmath.mpf:
        return mpmath.exp(self.log_value(t))

    def __repr__(self) -> str:
        return f"{type(self).__name__}(rate={self.rate})"
