"""The derivation induced by generator logarithmic derivatives.

A context carries at most one :class:`DerivationSpec`: for every generator
``g`` an exact series ``g† = g'/g``. Then
``∂(c·g1^a1…gk^ak) = (Σ a_i·g_i†)·c·g1^a1…gk^ak`` and ``∂q = 0`` for
rational constants.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Tuple, Union

from models.types import GeneratorKind

from .errors import DepthRequired, EngineZeroDivision, MissingSpec, PreconditionFailed
from .monomial import Exponents, GeneratorContext
from .rational import RationalLike, to_fraction
from .series import (
    INF,
    Bound,
    Series,
    add,
    grid_step,
    invert,
    mul,
    sign,
    truncate,
)

logger = logging.getLogger(__name__)

LogDerivative = Union[Series, RationalLike]


@dataclass(frozen=True)
class DerivationSpec:
    """Logarithmic derivative of each generator, in context order."""

    context: GeneratorContext
    logderivs: Tuple[Series, ...]

    def logderiv(self, name: str) -> Series:
        return self.logderivs[self.context.index(name)]

    @property
    def min_shift(self) -> Bound:
        """Least weight a derivative can add to a monomial (0 when all g† are zero)."""
        shifts = [L.min_weight for L in self.logderivs if not L.is_zero()]
        return min(shifts) if shifts else Fraction(0)


def install_derivation(
    context: GeneratorContext, logderivs: Mapping[str, LogDerivative]
) -> DerivationSpec:
    """Validate ``logderivs`` and attach them to ``context`` (once)."""
    missing = [n for n in context.names if n not in logderivs]
    if missing:
        raise MissingSpec(f"no logarithmic derivative declared for {missing}")
    unknown = [n for n in logderivs if n not in context.names]
    if unknown:
        raise PreconditionFailed(f"logarithmic derivative for unknown generators {unknown}")

    ordered = []
    for name in context.names:
        value = logderivs[name]
        series = value if isinstance(value, Series) else Series.constant(
            context, to_fraction(value)
        )
        context.check(series.context)
        if not series.is_exact:
            raise PreconditionFailed(
                f"logarithmic derivative of {name!r} must be an exact finite series"
            )
        ordered.append(series)

    spec = DerivationSpec(context=context, logderivs=tuple(ordered))
    context._attach_derivation(spec)
    logger.debug("installed derivation on %r", context)
    return spec


def _spec(f: Series) -> DerivationSpec:
    spec = f.context.derivation
    if spec is None:
        raise MissingSpec(f"{f.context!r} has no derivation")
    return spec


def _monomial_logderiv(spec: DerivationSpec, exponents: Exponents) -> Series:
    total = Series.zero(spec.context)
    for e, L in zip(exponents, spec.logderivs):
        if e:
            total = add(total, L.scale(e))
    return total


def derive(f: Series) -> Series:
    """∂f, extended additively from the monomials; bound shifts by the least g† weight."""
    spec = _spec(f)
    result = Series.zero(f.context)
    for e, c in f.items():
        factor = _monomial_logderiv(spec, e)
        if factor.is_zero():
            continue
        result = add(result, mul(factor, Series._make(f.context, {e: c}, INF)))
    if f.is_exact:
        return result
    return result.cap(f.known_below + spec.min_shift)


def derive_n(f: Series, k: int) -> Series:
    if k < 0:
        raise PreconditionFailed("derivative order must be non-negative")
    for _ in range(k):
        f = derive(f)
    return f


def log_derivative(f: Series, n: Optional[RationalLike] = None) -> Series:
    """f† = ∂f · f^{-1}; ``n`` is the inclusive depth when f^{-1} is infinite."""
    if f.is_zero():
        raise EngineZeroDivision("the logarithmic derivative of 0 is undefined")
    df = derive(f)
    if df.is_zero():
        return df
    if n is None:
        try:
            return mul(df, invert(f))
        except DepthRequired:
            raise DepthRequired("f† of a non-monomial exact series needs a depth")
    below = to_fraction(n) + grid_step(f.context, f, df)
    inverse = invert(f, below=below - df.min_weight)
    return truncate(mul(df, inverse, below), n)


def is_supported_for_calculus(context: GeneratorContext) -> bool:
    """Contexts on which f ≺ g ̸≍ 1 ⇒ f' ≺ g' and f > 0, f ≻ 1 ⇒ f' > 0 are asserted.

    Every g† must be either a nonzero constant or ±x^{-1} (a power generator
    raised to 1/degree), and negative, since each generator is an
    infinitesimal positive germ.
    """
    spec = context.derivation
    if spec is None:
        return False
    for L in spec.logderivs:
        if L.is_zero() or len(L) != 1:
            return False
        (exps, coeff), = L.items()
        if any(exps):
            nonzero = [i for i, e in enumerate(exps) if e]
            if len(nonzero) != 1:
                return False
            g = context.generators[nonzero[0]]
            if g.kind is not GeneratorKind.POWER or g.rate is None:
                return False
            if exps[nonzero[0]] * g.rate != 1:
                return False
        if sign(L) >= 0:
            return False
    return True
