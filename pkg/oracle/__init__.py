"""Numeric germ oracle for cross-checking symbolic results."""

from .base import BaseGermRule
from .germs import (
    DEFAULT_PRECISION,
    DEFAULT_SAMPLE_POINTS,
    GermAssignment,
    dominance_margin,
    eval_germ,
    first_omitted_estimate,
    residual_decay_check,
    sign_check,
)
from .rules import ExponentialRule, PowerRule, create_rule

__all__ = [
    "BaseGermRule",
    "ExponentialRule",
    "PowerRule",
    "create_rule",
    "GermAssignment",
    "eval_germ",
    "dominance_margin",
    "sign_check",
    "residual_decay_check",
    "first_omitted_estimate",
    "DEFAULT_SAMPLE_POINTS",
    "DEFAULT_PRECISION",
]
