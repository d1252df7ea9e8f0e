"""Truncated series in k[[M]] with exact rational coefficients.

A :class:`Series` stores finitely many nonzero terms together with a
reliability bound ``known_below``: every term of the exact object whose
weight is below the bound is stored, and is exact. Terms at or beyond the
bound are unknown. ``known_below == INF`` means the series is exact.

Decisions that depend on the unknown tail raise
:class:`~core.errors.Inconclusive`. The tail is taken to be smaller than
every stored monomial of smaller weight, i.e. the weight grading is assumed
compatible with the dominance order on the supports the engine handles.
"""

from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Tuple, Union

from models.types import DominanceRecord

from .errors import (
    DepthRequired,
    EngineZeroDivision,
    Inconclusive,
    PreconditionFailed,
    ZeroWeightStep,
)
from .monomial import (
    Exponents,
    GeneratorContext,
    Monomial,
    Relation,
    compare_exponents,
)
from .rational import RationalLike, fraction_gcd, to_fraction

logger = logging.getLogger(__name__)

INF = math.inf
Bound = Union[Fraction, float]
Scalar = Union[Fraction, int]


def _as_bound(value: Optional[Union[RationalLike, float]]) -> Bound:
    if value is None or value == INF:
        return INF
    if isinstance(value, float):
        raise ValueError("bounds are exact rationals or +inf")
    return to_fraction(value)


class Series:
    """An immutable truncated series over a :class:`GeneratorContext`."""

    __slots__ = ("context", "_terms", "known_below")
    __hash__ = None  # type: ignore[assignment]

    def __init__(
        self,
        context: GeneratorContext,
        terms: Optional[Mapping[Exponents, RationalLike]] = None,
        known_below: Optional[Union[RationalLike, float]] = None,
    ) -> None:
        bound = _as_bound(known_below)
        stored: Dict[Exponents, Fraction] = {}
        width = len(context)
        for exps, coeff in (terms or {}).items():
            if len(exps) != width:
                raise PreconditionFailed(
                    f"exponent vector {exps!r} does not match {context!r}"
                )
            coeff = to_fraction(coeff)
            if coeff == 0 or context.weight_of(exps) >= bound:
                continue
            stored[tuple(to_fraction(e) for e in exps)] = coeff
        self.context = context
        self._terms = stored
        self.known_below: Bound = bound

    @classmethod
    def _make(
        cls, context: GeneratorContext, terms: Dict[Exponents, Fraction], bound: Bound
    ) -> "Series":
        # trusted constructor: terms already exact tuples, zeros and
        # out-of-bound weights still filtered
        obj = cls.__new__(cls)
        obj.context = context
        obj._terms = {
            e: c
            for e, c in terms.items()
            if c != 0 and (bound == INF or context.weight_of(e) < bound)
        }
        obj.known_below = bound
        return obj

    # Constructors

    @classmethod
    def zero(cls, context: GeneratorContext) -> "Series":
        return cls._make(context, {}, INF)

    @classmethod
    def constant(cls, context: GeneratorContext, value: RationalLike) -> "Series":
        return cls._make(context, {context.one().exponents: to_fraction(value)}, INF)

    @classmethod
    def monomial(cls, m: Monomial, coeff: RationalLike = 1) -> "Series":
        return cls._make(m.context, {m.exponents: to_fraction(coeff)}, INF)

    @classmethod
    def generator(cls, context: GeneratorContext, name: str) -> "Series":
        return cls.monomial(context.monomial(**{name: 1}))

    @classmethod
    def from_terms(
        cls,
        context: GeneratorContext,
        terms: Iterable[Tuple[RationalLike, Monomial]],
        known_below: Optional[Union[RationalLike, float]] = None,
    ) -> "Series":
        collected: Dict[Exponents, Fraction] = {}
        for coeff, m in terms:
            context.check(m.context)
            collected[m.exponents] = collected.get(m.exponents, Fraction(0)) + to_fraction(coeff)
        return cls._make(context, collected, _as_bound(known_below))

    # Introspection

    def items(self) -> List[Tuple[Exponents, Fraction]]:
        """Stored (exponents, coefficient) pairs, descending monomial order."""
        return sorted(self._terms.items())

    def terms(self) -> List[Tuple[Fraction, Monomial]]:
        return [(c, Monomial(self.context, e)) for e, c in self.items()]

    def coefficient(self, m: Union[Monomial, Exponents]) -> Fraction:
        exps = m.exponents if isinstance(m, Monomial) else m
        return self._terms.get(tuple(exps), Fraction(0))

    def weights(self) -> Iterator[Fraction]:
        return (self.context.weight_of(e) for e in self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self) -> Iterator[Tuple[Fraction, Monomial]]:
        return iter(self.terms())

    @property
    def is_exact(self) -> bool:
        return self.known_below == INF

    def is_zero(self) -> bool:
        """Exactly zero (no stored terms and no unknown tail)."""
        return not self._terms and self.is_exact

    def is_zero_below(self) -> bool:
        """No stored term, i.e. zero below the reliability bound."""
        return not self._terms

    @property
    def min_weight(self) -> Bound:
        """Least weight μ of a stored term; the bound when nothing is stored."""
        if not self._terms:
            return self.known_below
        return min(self.weights())

    def __repr__(self) -> str:
        from .formatting import format_series

        bound = "inf" if self.is_exact else str(self.known_below)
        return f"Series({format_series(self, sugar=False)}, known_below={bound})"

    def __str__(self) -> str:
        from .formatting import format_series

        return format_series(self)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return (
            self.context.compatible(other.context)
            and self._terms == other._terms
            and self.known_below == other.known_below
        )

    # Bound handling

    def cap(self, bound: Optional[Union[RationalLike, float]]) -> "Series":
        """Lower the reliability bound to ``bound`` (never raises it)."""
        new = min(self.known_below, _as_bound(bound))
        if new == self.known_below:
            return self
        return Series._make(self.context, dict(self._terms), new)

    def exact(self) -> "Series":
        """The stored terms read as an exact finite sum."""
        return Series._make(self.context, dict(self._terms), INF)

    def agrees_with(self, other: "Series") -> bool:
        """Equality of stored terms below the common reliability bound."""
        self.context.check(other.context)
        bound = min(self.known_below, other.known_below)
        return self.cap(bound)._terms == other.cap(bound)._terms

    # Ring operations

    def _coerce(self, other: Union["Series", Scalar]) -> "Series":
        if isinstance(other, Series):
            self.context.check(other.context)
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Series.constant(self.context, other)
        raise TypeError(f"cannot combine Series with {type(other).__name__}")

    def __neg__(self) -> "Series":
        return neg(self)

    def __add__(self, other: Union["Series", Scalar]) -> "Series":
        return add(self, self._coerce(other))

    def __radd__(self, other: Scalar) -> "Series":
        return add(self._coerce(other), self)

    def __sub__(self, other: Union["Series", Scalar]) -> "Series":
        return sub(self, self._coerce(other))

    def __rsub__(self, other: Scalar) -> "Series":
        return sub(self._coerce(other), self)

    def __mul__(self, other: Union["Series", Scalar]) -> "Series":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        return mul(self, self._coerce(other))

    def __rmul__(self, other: Scalar) -> "Series":
        return self.scale(other)

    def __truediv__(self, other: Union["Series", Scalar]) -> "Series":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise EngineZeroDivision("division by the zero constant")
            return self.scale(Fraction(1) / Fraction(other))
        return mul(self, invert(self._coerce(other)))

    def __pow__(self, n: int) -> "Series":
        return power_int(self, n)

    def scale(self, q: RationalLike) -> "Series":
        q = to_fraction(q)
        if q == 0:
            return Series.zero(self.context)
        return Series._make(
            self.context, {e: c * q for e, c in self._terms.items()}, self.known_below
        )

    # Asymptotic helpers

    def leading_term(self) -> Tuple[Fraction, Monomial]:
        return leading_term(self)

    def sign(self) -> int:
        return sign(self)

    def __abs__(self) -> "Series":
        return abs_(self)


# Free functions mirroring the operation names


def add(f: Series, g: Series) -> Series:
    f.context.check(g.context)
    bound = min(f.known_below, g.known_below)
    terms = dict(f._terms)
    for e, c in g._terms.items():
        terms[e] = terms.get(e, Fraction(0)) + c
    return Series._make(f.context, terms, bound)


def neg(f: Series) -> Series:
    return Series._make(f.context, {e: -c for e, c in f._terms.items()}, f.known_below)


def sub(f: Series, g: Series) -> Series:
    return add(f, neg(g))


def mul(f: Series, g: Series, below: Optional[Bound] = None) -> Series:
    """Product with bound ``min(B_f + μ_g, B_g + μ_f)``, optionally capped."""
    f.context.check(g.context)
    if f.is_zero() or g.is_zero():
        return Series.zero(f.context)
    bound = min(f.known_below + g.min_weight, g.known_below + f.min_weight)
    if below is not None:
        bound = min(bound, below)
    weight_of = f.context.weight_of
    right = [(e, c, weight_of(e)) for e, c in g._terms.items()]
    terms: Dict[Exponents, Fraction] = {}
    for e1, c1 in f._terms.items():
        w1 = weight_of(e1)
        for e2, c2, w2 in right:
            if w1 + w2 >= bound:
                continue
            e = tuple(a + b for a, b in zip(e1, e2))
            terms[e] = terms.get(e, Fraction(0)) + c1 * c2
    return Series._make(f.context, terms, bound)


def power_int(f: Series, n: int, below: Optional[Bound] = None) -> Series:
    """f**n for an integer n (negative n goes through :func:`invert`)."""
    if n < 0:
        return power_int(invert(f, below=below), -n, below)
    result = Series.constant(f.context, 1)
    base = f
    while n:
        if n & 1:
            result = mul(result, base, below)
        n >>= 1
        if n:
            base = mul(base, base, below)
    return result


def grid_step(context: GeneratorContext, *series: Series) -> Fraction:
    """Minimal positive weight granularity of the context and the given supports."""
    weights: List[Fraction] = list(context.weights)
    for f in series:
        weights.extend(f.weights())
    step = fraction_gcd(weights)
    assert step is not None
    return step


def truncate(f: Series, n: RationalLike) -> Series:
    """Keep terms of weight ≤ n.

    The new bound is ``min(B, n + step, weight of the first dropped term)``.
    """
    n = to_fraction(n)
    kept: Dict[Exponents, Fraction] = {}
    dropped: List[Fraction] = []
    for e, c in f._terms.items():
        w = f.context.weight_of(e)
        if w <= n:
            kept[e] = c
        else:
            dropped.append(w)
    if not dropped and f.known_below <= n:
        return f
    bound = min([f.known_below, n + f.context.step] + dropped)
    return Series._make(f.context, kept, bound)


def invert(
    f: Series,
    n: Optional[RationalLike] = None,
    below: Optional[Bound] = None,
) -> Series:
    """Multiplicative inverse ``lt(f)^-1 * sum (-u)^k`` where ``f = lt(f)(1+u)``.

    For an exact ``f`` with more than one term the inverse is infinite and a
    depth (``n``, inclusive, or ``below``, exclusive) is required.
    """
    if f.is_zero():
        raise EngineZeroDivision("cannot invert the zero series")
    if not f._terms:
        raise Inconclusive("cannot invert: leading term lies beyond the bound")
    if n is not None:
        target_below = to_fraction(n) + grid_step(f.context, f)
        below = target_below if below is None else min(below, target_below)

    e0, c0 = f.items()[0]
    w0 = f.context.weight_of(e0)
    lt_inv = Series._make(f.context, {tuple(-e for e in e0): 1 / c0}, INF)
    u = mul(sub(f, Series._make(f.context, {e0: c0}, INF)), lt_inv)
    if u.is_zero():
        return lt_inv if below is None else lt_inv.cap(below)

    mu = u.min_weight
    if mu <= 0:
        raise ZeroWeightStep(
            "inverse needs the tail of f to have positive weight "
            f"(least tail weight {mu})"
        )
    target: Bound = f.known_below - 2 * w0 if not f.is_exact else INF
    if below is not None:
        target = min(target, below)
    if target == INF:
        raise DepthRequired("the inverse of an exact series is infinite; give a depth")

    inner_below = target + w0
    minus_u = neg(u)
    acc = Series.constant(f.context, 1)
    power = acc
    k = 0
    while True:
        k += 1
        if k * mu >= inner_below:
            break
        power = mul(power, minus_u, inner_below)
        acc = add(acc, power)
    return mul(acc.cap(inner_below), lt_inv)


# Asymptotic relations

_ZERO, _KNOWN, _UNKNOWN = "zero", "known", "unknown"


def _lead(f: Series) -> Tuple[str, Optional[Exponents]]:
    if f._terms:
        return _KNOWN, min(f._terms)
    if f.is_exact:
        return _ZERO, None
    return _UNKNOWN, None


def _preceq_prec(f: Series, g: Series) -> Tuple[bool, bool]:
    """(f ≼ g, f ≺ g), raising Inconclusive when the bound hides the answer."""
    kf, ef = _lead(f)
    kg, eg = _lead(g)
    weight_of = f.context.weight_of

    if kg == _ZERO:
        if kf == _ZERO:
            return True, False
        if kf == _KNOWN:
            return False, False
        raise Inconclusive("f is zero below its bound; cannot compare with 0")

    if kg == _KNOWN:
        assert eg is not None
        if kf == _ZERO:
            return True, True
        if kf == _KNOWN:
            assert ef is not None
            rel = compare_exponents(ef, eg)
            return rel is not Relation.SUCC, rel is Relation.PREC
        if f.known_below > weight_of(eg):
            return True, True
        raise Inconclusive(
            f"f vanishes below weight {f.known_below}, which does not pass "
            f"the leading weight {weight_of(eg)} of g"
        )

    # g has no stored terms and a finite bound
    if kf == _KNOWN:
        assert ef is not None
        if g.known_below > weight_of(ef):
            return False, False
    raise Inconclusive("g vanishes below its bound; comparison is undecidable")


def dominance(f: Series, g: Series) -> DominanceRecord:
    """The relation record {f ≼ g, f ≺ g, f ≍ g, f ∼ g}."""
    f.context.check(g.context)
    preceq, prec = _preceq_prec(f, g)
    succeq, _ = _preceq_prec(g, f)
    if g.is_zero():
        sim = False
    else:
        _, sim = _preceq_prec(sub(f, g), g)
    return DominanceRecord(preceq=preceq, prec=prec, asymp=preceq and succeq, sim=sim)


def leading_term(f: Series) -> Tuple[Fraction, Monomial]:
    kind, e = _lead(f)
    if kind == _ZERO:
        raise PreconditionFailed("the zero series has no leading term")
    if kind == _UNKNOWN:
        raise Inconclusive("leading term lies beyond the reliability bound")
    assert e is not None
    return f._terms[e], Monomial(f.context, e)


def sign(f: Series) -> int:
    """Sign of the leading coefficient (eventual sign of the germ)."""
    kind, e = _lead(f)
    if kind == _ZERO:
        return 0
    if kind == _UNKNOWN:
        raise Inconclusive("sign depends on terms beyond the reliability bound")
    assert e is not None
    return 1 if f._terms[e] > 0 else -1


def abs_(f: Series) -> Series:
    return f if sign(f) >= 0 else neg(f)


def leq(f: Series, g: Series) -> bool:
    return sign(sub(g, f)) >= 0


def is_infinitesimal(f: Series) -> bool:
    """f ∈ 𝔬, i.e. f ≺ 1."""
    kind, e = _lead(f)
    if kind == _ZERO:
        return True
    if kind == _UNKNOWN:
        if f.known_below > 0:
            return True
        raise Inconclusive("cannot tell whether f ≺ 1 below its bound")
    assert e is not None
    return compare_exponents(e, f.context.one().exponents) is Relation.PREC


def is_bounded(f: Series) -> bool:
    """f ∈ 𝒪, i.e. f ≼ 1."""
    kind, e = _lead(f)
    if kind == _ZERO:
        return True
    if kind == _UNKNOWN:
        if f.known_below > 0:
            return True
        raise Inconclusive("cannot tell whether f ≼ 1 below its bound")
    assert e is not None
    return compare_exponents(e, f.context.one().exponents) is not Relation.SUCC
