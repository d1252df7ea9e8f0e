"""Text and JSON forms of series.

Canonical text writes terms in descending order as ``c*g1^a1*g2^a2`` with
exact rationals. When a context has at most one exponential and at most one
power generator, those generators are written with ``e^(qx)`` / ``x^k``
sugar, e.g. ``e^(x/2) - 1/2 + 1/8*e^(-x/2)``. Both forms parse back to the
same series.
"""

from fractions import Fraction
from typing import List

from models.types import SeriesPayload, TermPayload

from .monomial import Exponents, GeneratorContext, GeneratorKind
from .rational import format_fraction, to_fraction
from .series import INF, Series


def _exponent(e: Fraction) -> str:
    if e.denominator == 1:
        return str(e.numerator)
    return f"({format_fraction(e)})"


def _plain_factor(name: str, e: Fraction) -> str:
    return name if e == 1 else f"{name}^{_exponent(e)}"


def _exp_factor(q: Fraction) -> str:
    """e^(q x) written the way the parser reads it back."""
    if q == 1:
        return "e^x"
    sign = "-" if q < 0 else ""
    p, s = abs(q.numerator), q.denominator
    head = "x" if p == 1 else f"{p}x"
    body = head if s == 1 else f"{head}/{s}"
    return f"e^({sign}{body})"


def uses_sugar(context: GeneratorContext) -> bool:
    return (
        context.count_kind(GeneratorKind.EXPONENTIAL) <= 1
        and context.count_kind(GeneratorKind.POWER) <= 1
        and (
            context.count_kind(GeneratorKind.EXPONENTIAL)
            + context.count_kind(GeneratorKind.POWER)
        )
        > 0
    )


def format_monomial(
    context: GeneratorContext, exponents: Exponents, sugar: bool = True
) -> str:
    sugar = sugar and uses_sugar(context)
    factors: List[str] = []
    for g, e in zip(context.generators, exponents):
        if e == 0:
            continue
        if sugar and g.kind is GeneratorKind.EXPONENTIAL:
            assert g.rate is not None
            factors.append(_exp_factor(-e * g.rate))
        elif sugar and g.kind is GeneratorKind.POWER:
            assert g.rate is not None
            factors.append(_plain_factor("x", -e * g.rate))
        else:
            factors.append(_plain_factor(g.name, e))
    return "*".join(factors)


def format_series(f: Series, sugar: bool = True) -> str:
    """Canonical (or sugared) text form of the stored terms."""
    items = f.items()
    if not items:
        return "0"
    chunks: List[str] = []
    for i, (exps, coeff) in enumerate(items):
        mono = format_monomial(f.context, exps, sugar)
        magnitude = abs(coeff)
        if not mono:
            body = format_fraction(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{format_fraction(magnitude)}*{mono}"
        if i == 0:
            chunks.append(f"-{body}" if coeff < 0 else body)
        else:
            chunks.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(chunks)


def format_bound(f: Series) -> str:
    return "inf" if f.known_below == INF else format_fraction(Fraction(f.known_below))


def to_payload(f: Series) -> SeriesPayload:
    return SeriesPayload(
        terms=[
            TermPayload(
                coeff=format_fraction(c),
                exponents=[format_fraction(e) for e in exps],
            )
            for exps, c in f.items()
        ],
        known_below=None if f.known_below == INF else format_fraction(Fraction(f.known_below)),
    )


def from_payload(context: GeneratorContext, payload: SeriesPayload) -> Series:
    terms = {}
    for term in payload.terms:
        m = context.from_vector(term.exponents)
        terms[m.exponents] = to_fraction(term.coeff)
    return Series(context, terms, payload.known_below)
