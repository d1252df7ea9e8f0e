"""Random series generators shared by the randomized suites."""

import random
from fractions import Fraction
from typing import Sequence, Tuple

from core.monomial import GeneratorContext
from core.series import Series


def random_coefficient(rng: random.Random) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-6, 6)
    return Fraction(num, rng.choice((1, 1, 2, 3, 4)))


def random_exact_series(
    context: GeneratorContext,
    rng: random.Random,
    exponent_ranges: Sequence[Tuple[int, int]],
    max_terms: int = 4,
    min_terms: int = 1,
) -> Series:
    """Exact finite series with integer exponents drawn from ``exponent_ranges``."""
    available = 1
    for lo, hi in exponent_ranges:
        available *= hi - lo + 1
    target = min(rng.randint(min_terms, max_terms), available)
    terms = {}
    while len(terms) < target:
        exps = tuple(Fraction(rng.randint(lo, hi)) for lo, hi in exponent_ranges)
        terms[exps] = random_coefficient(rng)
    return Series(context, terms)


def random_unit_factor(
    context: GeneratorContext,
    rng: random.Random,
    tail_exponents: Sequence[Tuple[int, ...]],
    max_terms: int = 3,
) -> Series:
    """1 + u with u a random combination of the given (positive-weight) monomials."""
    terms = {context.one().exponents: Fraction(1)}
    for exps in rng.sample(list(tail_exponents), rng.randint(1, max_terms)):
        terms[tuple(Fraction(e) for e in exps)] = random_coefficient(rng)
    return Series(context, terms)
