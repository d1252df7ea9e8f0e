"""Built-in session contexts."""

from fractions import Fraction

from models.types import GeneratorKind, Preset

from .derivation import install_derivation
from .errors import CMinusOne, PreconditionFailed
from .monomial import Generator, GeneratorContext
from .rational import RationalLike, to_fraction
from .series import Series


def series_context() -> GeneratorContext:
    """One plain generator ``t`` of weight 1 and no derivation."""
    return GeneratorContext([Generator(name="t")])


def transseries_context(c: RationalLike = 0) -> GeneratorContext:
    """``E = e^{-x/(c+1)}`` then ``X = x^{-1}``, with E† = -1/(c+1) and X† = -X."""
    c = to_fraction(c)
    if c == -1:
        raise CMinusOne("transseries(c) needs c ≠ -1")
    rate = Fraction(1) / (c + 1)
    if rate <= 0:
        raise PreconditionFailed("transseries(c) needs c > -1")
    context = GeneratorContext(
        [
            Generator(name="E", kind=GeneratorKind.EXPONENTIAL, rate=rate),
            Generator(name="X", kind=GeneratorKind.POWER, rate=Fraction(1)),
        ]
    )
    install_derivation(
        context,
        {"E": -rate, "X": -Series.generator(context, "X")},
    )
    return context


def build_preset(preset: Preset, c: RationalLike = 0) -> GeneratorContext:
    if preset is Preset.SERIES:
        return series_context()
    return transseries_context(c)
