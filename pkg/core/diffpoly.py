"""Differential polynomials and the zero of P_c with prescribed leading term.

``P_c(Y) = Y'·(c(Y+1)+Y) - Y(Y+1)`` has, for c > 0 and b ≠ 0, a unique zero
``y ~ b·e^{x/(c+1)}``. Writing ``y = b·e^{x/(c+1)}(1+z)`` turns ``P_c(y) = 0``
into the unit equation ``(1+z)^c (1+ε+z) = 1`` with ``ε = b^{-1}e^{-x/(c+1)}``,
which the Hensel solver handles. ``U(y) = |y|^c (y+1)`` gives an independent
certificate: ``P_c(y) = 0`` iff ``U(y)† = 1`` iff ``U(y) ∈ Q^× e^x``.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

from models.types import GeneratorKind

from .analytic import power, solve_unit_eq
from .derivation import derive, log_derivative
from .errors import (
    DegenerateY,
    IrrationalRoot,
    IrrationalScalarPower,
    NonPositiveC,
    PreconditionFailed,
)
from .monomial import GeneratorContext, Monomial, weight as monomial_weight
from .presets import transseries_context
from .rational import RationalLike, format_fraction, signed_root, to_fraction
from .series import (
    Series,
    abs_,
    add,
    leading_term,
    mul,
    power_int,
    sub,
    truncate,
)

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]
Coefficient = Union[Series, Fraction]


def _strip(index: Iterable[int]) -> MultiIndex:
    index = list(index)
    while len(index) > 1 and index[-1] == 0:
        index.pop()
    return tuple(index)


class DiffPoly:
    """Sparse polynomial in Y, Y', ..., Y^(r).

    ``terms`` maps a multi-index (d_0, ..., d_r), meaning the monomial
    ``Y^d_0 · Y'^d_1 ⋯``, to a rational or Series coefficient.
    """

    def __init__(self, terms: Mapping[Iterable[int], Union[Coefficient, int]]) -> None:
        collected: Dict[MultiIndex, Coefficient] = {}
        for index, coeff in terms.items():
            key = _strip(index)
            if any(d < 0 for d in key):
                raise PreconditionFailed(f"negative exponent in multi-index {key}")
            if not isinstance(coeff, Series):
                coeff = to_fraction(coeff)
            if key in collected:
                coeff = _add_coefficients(collected[key], coeff)
            collected[key] = coeff
        self.terms: Dict[MultiIndex, Coefficient] = {
            k: v for k, v in collected.items() if not _is_zero(v)
        }
        self.order = max((len(k) - 1 for k in self.terms), default=0)

    def __repr__(self) -> str:
        return f"DiffPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks: List[str] = []
        for index, coeff in sorted(self.terms.items(), key=lambda kv: (-sum(kv[0]), kv[0])):
            factors = [
                _variable(i) if d == 1 else f"{_variable(i)}^{d}"
                for i, d in enumerate(index)
                if d
            ]
            mono = "*".join(factors)
            if isinstance(coeff, Series):
                body = f"({coeff})*{mono}" if mono else f"({coeff})"
                chunks.append(body if not chunks else f" + {body}")
                continue
            magnitude = abs(coeff)
            if not mono:
                body = format_fraction(magnitude)
            elif magnitude == 1:
                body = mono
            else:
                body = f"{format_fraction(magnitude)}*{mono}"
            if not chunks:
                chunks.append(f"-{body}" if coeff < 0 else body)
            else:
                chunks.append(f" - {body}" if coeff < 0 else f" + {body}")
        return "".join(chunks)


def _variable(i: int) -> str:
    return "Y" + "'" * i


def _is_zero(value: Coefficient) -> bool:
    return value.is_zero() if isinstance(value, Series) else value == 0


def _add_coefficients(a: Coefficient, b: Coefficient) -> Coefficient:
    if isinstance(a, Series) or isinstance(b, Series):
        context = a.context if isinstance(a, Series) else b.context  # type: ignore[union-attr]
        return add(_lift(context, a), _lift(context, b))
    return a + b


def _lift(context: GeneratorContext, value: Coefficient) -> Series:
    if isinstance(value, Series):
        context.check(value.context)
        return value
    return Series.constant(context, value)


def eval(P: DiffPoly, y: Series) -> Series:  # noqa: A001
    """P(y): substitute y, y', ..., y^(r) into the sparse form."""
    derivatives = [y]
    for _ in range(P.order):
        derivatives.append(derive(derivatives[-1]))
    total = Series.zero(y.context)
    for index, coeff in P.terms.items():
        term = _lift(y.context, coeff)
        for value, d in zip(derivatives, index):
            if d:
                term = mul(term, power_int(value, d))
        total = add(total, term)
    return total


def make_pc(c: RationalLike) -> DiffPoly:
    """P_c = (c+1)·Y·Y' + c·Y' - Y^2 - Y."""
    c = to_fraction(c)
    if c <= 0:
        raise NonPositiveC(f"P_c needs c > 0, got {c}")
    return DiffPoly(
        {
            (1, 1): c + 1,
            (0, 1): c,
            (2,): -1,
            (1,): -1,
        }
    )


def make_rc(c: RationalLike) -> Tuple[DiffPoly, DiffPoly]:
    """Numerator Y(Y+1) and denominator c(Y+1)+Y of R_c, with P_c = Y'·den - num."""
    c = to_fraction(c)
    if c <= 0:
        raise NonPositiveC(f"R_c needs c > 0, got {c}")
    numerator = DiffPoly({(2,): 1, (1,): 1})
    denominator = DiffPoly({(1,): c + 1, (0,): c})
    return numerator, denominator


def rc_residual(y: Series, c: RationalLike) -> Series:
    """y'·den(y) - num(y), the restatement of P_c(y) through R_c."""
    numerator, denominator = make_rc(c)
    return sub(mul(derive(y), eval(denominator, y)), eval(numerator, y))


def _pc_context(context: Optional[GeneratorContext], c: Fraction) -> GeneratorContext:
    """``context`` if it has an exponential generator, else ``transseries(c)``."""
    if context is not None and context.find_kind(GeneratorKind.EXPONENTIAL) is not None:
        return context
    if context is not None:
        logger.info("%r has no exponential generator; using transseries(%s)", context, c)
    return transseries_context(c)


def leading_from_a(
    a: RationalLike, c: RationalLike, context: Optional[GeneratorContext] = None
) -> Tuple[Fraction, Monomial]:
    """Leading term (b, e^{x/(c+1)}) of the zero with U(y) = a·e^x.

    b = a^{1/(c+1)} for a > 0 and b = -(-a)^{1/(c+1)} for a < 0.
    """
    a, c = to_fraction(a), to_fraction(c)
    if c <= 0:
        raise NonPositiveC(f"c must be positive, got {c}")
    if a == 0:
        raise PreconditionFailed("a must be nonzero")
    b = signed_root(a, c + 1)
    if b is None:
        raise IrrationalRoot(f"{a}^(1/{format_fraction(c + 1)}) is not rational")
    context = _pc_context(context, c)
    return b, context.exp_monomial(1 / (c + 1))


def solve_pc(
    c: RationalLike,
    b: RationalLike,
    n: RationalLike,
    context: Optional[GeneratorContext] = None,
    seed: Optional[Series] = None,
) -> Series:
    """The zero y ~ b·e^{x/(c+1)} of P_c, with every term of weight ≤ n.

    Any context with an exponential generator e^{-r x} works; e^{-x/(c+1)}
    is that generator to the power 1/((c+1)r). Without such a generator the
    ``transseries(c)`` preset is built.
    """
    c, b, n = to_fraction(c), to_fraction(b), to_fraction(n)
    if c <= 0:
        raise NonPositiveC(f"P_c needs c > 0, got {c}")
    if b == 0:
        raise PreconditionFailed("the leading coefficient b must be nonzero")
    context = _pc_context(context, c)

    lead = context.exp_monomial(1 / (c + 1))
    eps = Series.monomial(lead.inverse(), 1 / b)
    depth = n - monomial_weight(lead)
    logger.debug("solve_pc: c=%s b=%s, unit equation to weight %s", c, b, depth)

    z = solve_unit_eq(c, eps, depth, seed=seed)
    one = Series.constant(context, 1)
    y = mul(Series.monomial(lead, b), add(one, z))
    return truncate(y, n)


def _check_y(y: Series) -> None:
    if y.is_zero_below():
        raise DegenerateY("y is zero below its bound")
    if add(y, Series.constant(y.context, 1)).is_zero_below():
        raise DegenerateY("y + 1 is zero below its bound")


def _u_value(y: Series, c: Fraction) -> Series:
    return mul(power(abs_(y), c), add(y, Series.constant(y.context, 1)))


def u_check(y: Series, c: RationalLike, n: Optional[RationalLike] = None) -> Series:
    """U(y)† - 1 for U(y) = |y|^c (y+1); zero below its bound iff P_c(y) = 0.

    When |lc(y)|^c is irrational U(y) is not formed and
    U(y)† = c·y† + (y+1)† is used instead.
    """
    c = to_fraction(c)
    _check_y(y)
    one = Series.constant(y.context, 1)
    try:
        U = _u_value(y, c)
        dagger = log_derivative(U, n)
    except IrrationalScalarPower:
        logger.debug("u_check: |lc(y)|^%s is irrational, using c·y† + (y+1)†", c)
        dagger = add(log_derivative(y, n).scale(c), log_derivative(add(y, one), n))
    return sub(dagger, one)


def u_constant(y: Series, c: RationalLike) -> Optional[Fraction]:
    """The constant a with U(y) ≡ a·e^x below the bound, or None when |lc(y)|^c is irrational."""
    c = to_fraction(c)
    _check_y(y)
    try:
        U = _u_value(y, c)
    except IrrationalScalarPower:
        return None
    e_x = y.context.exp_monomial(1).exponents
    items = U.items()
    if len(items) != 1 or items[0][0] != e_x:
        raise DegenerateY(f"U(y) is not a constant multiple of e^x: {U}")
    return items[0][1]


def exact_residual(c: RationalLike, y: Series) -> Series:
    """P_c at the stored terms of y read as an exact finite sum."""
    return eval(make_pc(c), y.exact())


def pc_certificate(c: RationalLike, y: Series) -> Series:
    return eval(make_pc(c), y)


def leading_term_ok(y: Series, c: RationalLike, b: RationalLike) -> bool:
    coeff, m = leading_term(y)
    c = to_fraction(c)
    return coeff == to_fraction(b) and m == y.context.exp_monomial(1 / (c + 1))
