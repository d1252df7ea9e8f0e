"""Exact rational helpers: parsing, gcd over Q and rational roots."""

from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Union

RationalLike = Union[Fraction, int, str]


def to_fraction(value: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError:
            raise ValueError(f"not a rational literal: {value!r}")
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def fraction_gcd(values: Iterable[Fraction]) -> Optional[Fraction]:
    """Largest positive rational g such that every nonzero value is in gZ."""
    result: Optional[Fraction] = None
    for value in values:
        if value == 0:
            continue
        value = abs(value)
        if result is None:
            result = value
            continue
        den = result.denominator * value.denominator // gcd(
            result.denominator, value.denominator
        )
        num = gcd(result.numerator * (den // result.denominator),
                  value.numerator * (den // value.denominator))
        result = Fraction(num, den)
    return result


def integer_root(n: int, k: int) -> Optional[int]:
    """Exact k-th root of a non-negative integer, or None."""
    if n < 0 or k <= 0:
        raise ValueError("integer_root needs n >= 0 and k > 0")
    if n in (0, 1) or k == 1:
        return n
    # Newton iteration from above
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    return x if x**k == n else None


def rational_power(base: Fraction, exponent: Fraction) -> Optional[Fraction]:
    """``base ** exponent`` for base > 0 if the result is rational, else None."""
    if base <= 0:
        raise ValueError("rational_power needs a positive base")
    p, q = exponent.numerator, exponent.denominator
    num = integer_root(base.numerator, q)
    den = integer_root(base.denominator, q)
    if num is None or den is None:
        return None
    return Fraction(num, den) ** p


def signed_root(value: Fraction, degree: Fraction) -> Optional[Fraction]:
    """Real root ``value ** (1/degree)`` with the sign of ``value``.

    Mirrors ``b = a^{1/k}`` for a > 0 and ``b = -(-a)^{1/k}`` for a < 0.
    """
    if value == 0:
        return Fraction(0)
    root = rational_power(abs(value), 1 / degree)
    if root is None:
        return None
    return root if value > 0 else -root
