"""Formal analytic functions on the maximal ideal and the Hensel-type solver.

For a power series ``Q(Z) = sum a_n Z^n`` with bounded coefficients and an
infinitesimal ``z``, ``Q(z)`` is computed by truncating at the working
weight bound. If ``Q(0) ≺ 1`` and ``Q'(0) ≍ 1``, the map ``z -> z - Q(z)``
(after normalising ``a_1`` to 1) contracts the maximal ideal and its unique
fixpoint is the unique infinitesimal zero of ``Q``.

Depths ``N`` are inclusive weight bounds: results carry every term of
weight ≤ N, computed against the working bound ``N + step``.
"""

from __future__ import annotations

import logging
import math
import threading
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Union

from .errors import (
    CMinusOne,
    DepthRequired,
    EngineError,
    IrrationalScalarPower,
    NoConvergence,
    NonPositive,
    NotInfinitesimal,
    PreconditionFailed,
    ZeroWeightStep,
)
from .monomial import GeneratorContext, pow as monomial_pow, weight as monomial_weight
from .rational import RationalLike, rational_power, to_fraction
from .series import (
    INF,
    Bound,
    Series,
    add,
    dominance,
    grid_step,
    invert,
    is_bounded,
    is_infinitesimal,
    leading_term,
    mul,
    neg,
    sign,
    sub,
    truncate,
)

logger = logging.getLogger(__name__)

Coefficient = Union[Series, Fraction, int]
CoefficientRule = Callable[[int], Coefficient]


class PowerSeries:
    """A coefficient stream a_0, a_1, ... of bounded series.

    Coefficients are produced by ``rule`` on first access and memoized, so
    repeated access yields the identical Series. ``degree`` marks a
    polynomial (all later coefficients are zero).
    """

    def __init__(
        self,
        context: GeneratorContext,
        rule: CoefficientRule,
        degree: Optional[int] = None,
        name: str = "Q",
    ) -> None:
        self.context = context
        self.degree = degree
        self.name = name
        self._rule = rule
        self._cache: Dict[int, Series] = {}
        self._lock = threading.RLock()

    def __repr__(self) -> str:
        return f"PowerSeries({self.name}, degree={self.degree})"

    @classmethod
    def from_coefficients(
        cls, context: GeneratorContext, coefficients: Sequence[Coefficient], name: str = "Q"
    ) -> "PowerSeries":
        values = list(coefficients)
        return cls(
            context,
            lambda n: values[n] if n < len(values) else 0,
            degree=max(len(values) - 1, 0),
            name=name,
        )

    def _lift(self, value: Coefficient) -> Series:
        if isinstance(value, Series):
            self.context.check(value.context)
            return value
        return Series.constant(self.context, value)

    def coeff(self, n: int) -> Series:
        if n < 0 or (self.degree is not None and n > self.degree):
            return Series.zero(self.context)
        with self._lock:
            cached = self._cache.get(n)
            if cached is not None:
                return cached
            value = self._lift(self._rule(n))
            if not is_bounded(value):
                raise PreconditionFailed(
                    f"coefficient a_{n} of {self.name} is not bounded (a_n ≼ 1 required)"
                )
            self._cache[n] = value
            return value

    def coefficients(self, count: int) -> List[Series]:
        return [self.coeff(n) for n in range(count)]

    def rational_coefficients(self, count: int) -> List[Fraction]:
        """The first ``count`` coefficients as rationals (they must be constants)."""
        one = self.context.one().exponents
        result = []
        for n, a in enumerate(self.coefficients(count)):
            if not a.is_exact or any(e != one for e, _ in a.items()):
                raise PreconditionFailed(f"coefficient a_{n} is not a rational constant")
            result.append(a.coefficient(one))
        return result

    # Arithmetic on coefficient streams

    def _combine_degree(self, other: "PowerSeries", op: Callable[[int, int], int]) -> Optional[int]:
        if self.degree is None or other.degree is None:
            return None
        return op(self.degree, other.degree)

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        self.context.check(other.context)
        return PowerSeries(
            self.context,
            lambda n: add(self.coeff(n), other.coeff(n)),
            degree=self._combine_degree(other, max),
            name=f"({self.name}+{other.name})",
        )

    def __sub__(self, other: "PowerSeries") -> "PowerSeries":
        self.context.check(other.context)
        return PowerSeries(
            self.context,
            lambda n: sub(self.coeff(n), other.coeff(n)),
            degree=self._combine_degree(other, max),
            name=f"({self.name}-{other.name})",
        )

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        self.context.check(other.context)

        def cauchy(n: int) -> Series:
            lo = 0 if other.degree is None else max(0, n - other.degree)
            hi = n if self.degree is None else min(n, self.degree)
            total = Series.zero(self.context)
            for i in range(lo, hi + 1):
                total = add(total, mul(self.coeff(i), other.coeff(n - i)))
            return total

        return PowerSeries(
            self.context,
            cauchy,
            degree=self._combine_degree(other, lambda a, b: a + b),
            name=f"{self.name}*{other.name}",
        )

    def scale(self, factor: Union[Series, RationalLike]) -> "PowerSeries":
        factor = factor if isinstance(factor, Series) else Series.constant(
            self.context, to_fraction(factor)
        )
        return PowerSeries(
            self.context,
            lambda n: mul(factor, self.coeff(n)),
            degree=self.degree,
            name=f"s*{self.name}",
        )

    def derivative(self) -> "PowerSeries":
        """Formal derivative Q'(Z) = sum (n+1) a_{n+1} Z^n."""
        return PowerSeries(
            self.context,
            lambda n: self.coeff(n + 1).scale(n + 1),
            degree=None if self.degree is None else max(self.degree - 1, 0),
            name=f"{self.name}'",
        )

    def compose(self, inner: "PowerSeries") -> "PowerSeries":
        """Formal composite self(inner(Z)); inner must have zero constant term."""
        self.context.check(inner.context)
        if not inner.coeff(0).is_zero():
            raise PreconditionFailed("composition needs an inner series with a_0 = 0")
        composite = _Composite(self, inner)
        return PowerSeries(
            self.context, composite.coefficient, name=f"{self.name}∘{inner.name}"
        )


class _Composite:
    # inner^k truncated power lists; prefixes are stable as degrees grow
    def __init__(self, outer: PowerSeries, inner: PowerSeries) -> None:
        self.outer = outer
        self.inner = inner
        zero = Series.zero(outer.context)
        self.zero = zero
        self.powers: List[List[Series]] = [[Series.constant(outer.context, 1)]]
        self.done = 0

    def _extend(self, n: int) -> None:
        for deg in range(self.done + 1, n + 1):
            self.powers[0].append(self.zero)
            self.powers.append([self.zero] * deg)
            for k in range(1, deg + 1):
                prev = self.powers[k - 1]
                total = self.zero
                for j in range(k - 1, deg):
                    if prev[j].is_zero():
                        continue
                    total = add(total, mul(prev[j], self.inner.coeff(deg - j)))
                self.powers[k].append(total)
            self.done = deg

    def coefficient(self, n: int) -> Series:
        self._extend(n)
        total = self.zero
        for k in range(n + 1):
            total = add(total, mul(self.outer.coeff(k), self.powers[k][n]))
        return total


# Standard coefficient streams


def binomial_coefficient(c: RationalLike, n: int) -> Fraction:
    """c(c-1)...(c-n+1)/n! for rational c."""
    c = to_fraction(c)
    result = Fraction(1)
    for i in range(n):
        result = result * (c - i) / (i + 1)
    return result


def binomial_series(c: RationalLike, context: GeneratorContext) -> PowerSeries:
    """(1+Z)^c = sum binom(c, n) Z^n; a polynomial when c is a natural number."""
    c = to_fraction(c)
    degree = int(c) if c.denominator == 1 and c >= 0 else None
    return PowerSeries(
        context, lambda n: binomial_coefficient(c, n), degree=degree, name=f"(1+Z)^{c}"
    )


def exp_series(context: GeneratorContext) -> PowerSeries:
    return PowerSeries(context, lambda n: Fraction(1, math.factorial(n)), name="exp")


def log1p_series(context: GeneratorContext) -> PowerSeries:
    return PowerSeries(
        context,
        lambda n: Fraction(0) if n == 0 else Fraction((-1) ** (n - 1), n),
        name="log1p",
    )


# Evaluation


def _evaluate(Q: PowerSeries, z: Series, below: Bound) -> Series:
    """sum a_n z^n with every term of weight ≥ ``below`` dropped."""
    Q.context.check(z.context)
    if z.is_zero():
        return Q.coeff(0).cap(below)
    if not is_infinitesimal(z):
        raise NotInfinitesimal("power series can only be evaluated at z ≺ 1")
    mu = z.min_weight
    if mu <= 0:
        raise ZeroWeightStep(f"least weight of z is {mu}; a positive step is required")
    # a_1 z already loses everything from B_z on
    below = min(below, z.known_below)
    if below == INF and Q.degree is None:
        raise DepthRequired("evaluating an infinite power series needs a depth")

    acc = Q.coeff(0).cap(below)
    z_power = Series.constant(z.context, 1)
    n = 0
    while True:
        n += 1
        if Q.degree is not None and n > Q.degree:
            break
        if below != INF and n * mu >= below:
            break
        z_power = mul(z_power, z, below)
        a_n = Q.coeff(n)
        if a_n.is_zero():
            continue
        if a_n.min_weight < 0:
            raise ZeroWeightStep(
                f"coefficient a_{n} has a term of negative weight; "
                "truncation by weight would be unsound"
            )
        acc = add(acc, mul(a_n, z_power, below))
    return acc.cap(below)


def _working_bound(n: RationalLike, *series: Series) -> Fraction:
    context = series[0].context
    return to_fraction(n) + grid_step(context, *series)


def eval_power_series(Q: PowerSeries, z: Series, n: RationalLike) -> Series:
    """Q(z) with every term of weight ≤ n."""
    value = _evaluate(Q, z, _working_bound(n, z))
    return truncate(value, n)


def power(f: Series, c: RationalLike, n: Optional[RationalLike] = None) -> Series:
    """f^c = d^c m^c (1+u)^c for f = d·m·(1+u) with d > 0.

    ``n`` is the inclusive depth; it may be omitted when the result is finite.
    """
    c = to_fraction(c)
    if sign(f) != 1:
        raise NonPositive("power() needs a series with positive leading coefficient")
    d, m = leading_term(f)
    d_c = rational_power(d, c)
    if d_c is None:
        raise IrrationalScalarPower(f"{d}^{c} is not rational")
    m_c = monomial_pow(m, c)
    u = sub(mul(f, Series.monomial(m.inverse(), 1 / d)), Series.constant(f.context, 1))

    below: Bound = INF if n is None else _working_bound(n, f)
    inner_below = below - monomial_weight(m_c) if below != INF else INF
    unit = _evaluate(binomial_series(c, f.context), u, inner_below)
    result = mul(unit, Series.monomial(m_c, d_c))
    return result if n is None else truncate(result, n)


# Hensel-type solver


def hensel_solve(
    Q: PowerSeries,
    n: RationalLike,
    seed: Optional[Series] = None,
    trace: Optional[List[Bound]] = None,
) -> Series:
    """The unique z ≺ 1 with Q(z) = 0, correct for every weight ≤ n.

    Requires a_0 ≺ 1 and a_1 ≍ 1. Q is normalised by a_1^{-1} and the
    contraction ``z -> z - Q(z)`` is iterated from ``seed`` (default 0).
    ``trace`` receives the least weight of the residual at each iterate.
    """
    n = to_fraction(n)
    context = Q.context
    a0, a1 = Q.coeff(0), Q.coeff(1)
    if not is_infinitesimal(a0):
        raise PreconditionFailed("Hensel lemma needs Q(0) ≺ 1")
    if not dominance(a1, Series.constant(context, 1)).asymp:
        raise PreconditionFailed("Hensel lemma needs Q'(0) ≍ 1")

    z = Series.zero(context) if seed is None else seed
    context.check(z.context)
    if not is_infinitesimal(z):
        raise NotInfinitesimal("Hensel seed must be ≺ 1")

    # a seed finer than the coefficients refines the grid the iterates live on
    step = grid_step(context, a0, a1, z)
    below = n + step
    a1_inv = invert(a1, below=below)

    # z -> -(ã_0 + sum_{n>=2} ã_n z^n), the contraction with ã_1 = 1 removed
    tail = PowerSeries(
        context,
        lambda k: Series.zero(context) if k == 1 else mul(a1_inv, Q.coeff(k), below),
        degree=Q.degree,
        name=f"{Q.name}~",
    )

    cap = math.ceil(n / step) + 2
    for iteration in range(cap):
        image = neg(_evaluate(tail, z, below))
        residual = sub(z, image)
        if trace is not None:
            trace.append(residual.min_weight)
        low = [w for w in residual.weights() if w <= n]
        logger.debug(
            "hensel iteration %d: residual least weight %s", iteration, residual.min_weight
        )
        if not low:
            bound = min([z.known_below, residual.known_below] + list(residual.weights()))
            return truncate(z.cap(bound), n)
        z = image
    raise NoConvergence(
        f"Hensel iteration did not settle below weight {n} after {cap} steps"
    )


def _ensure(condition: bool, message: str) -> None:
    if not condition:
        raise EngineError(message)


def solve_unit_eq(
    c: RationalLike, eps: Series, n: RationalLike, seed: Optional[Series] = None
) -> Series:
    """The unique z ≺ 1 with (1+z)^c (1+ε+z) = 1, for c ≠ -1 and ε ≺ 1."""
    c = to_fraction(c)
    if c == -1:
        raise CMinusOne("the unit equation needs c ≠ -1")
    if not is_infinitesimal(eps):
        raise NotInfinitesimal("the unit equation needs ε ≺ 1")
    context = eps.context
    one = Series.constant(context, 1)
    linear = PowerSeries.from_coefficients(context, [add(one, eps), one], name="(1+ε+Z)")
    Q = binomial_series(c, context) * linear - PowerSeries.from_coefficients(
        context, [one], name="1"
    )
    Q.name = "unit"

    _ensure(Q.coeff(0).agrees_with(eps), "constant term of Q must be ε")
    expected = add(Series.constant(context, 1 + c), eps.scale(c))
    _ensure(Q.coeff(1).agrees_with(expected), "degree-1 coefficient of Q must be 1+c+cε")
    return hensel_solve(Q, n, seed=seed)
