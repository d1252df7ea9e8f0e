"""Tests for power series, analytic powers and the Hensel solver."""

from fractions import Fraction

import pytest

from core.analytic import (
    PowerSeries,
    binomial_coefficient,
    binomial_series,
    eval_power_series,
    exp_series,
    hensel_solve,
    log1p_series,
    power,
    solve_unit_eq,
)
from core.errors import (
    CMinusOne,
    DepthRequired,
    IrrationalScalarPower,
    NonPositive,
    NotInfinitesimal,
    PreconditionFailed,
)
from core.series import Series, add, mul, sub, truncate
from tests.helpers import random_coefficient


def t(context, k=1, coeff=1):
    return Series.monomial(context.monomial(t=k), coeff)


def unit_eq_polynomial(context):
    """(1+Z)(1+t+Z) - 1 = t + (2+t) Z + Z^2."""
    return PowerSeries.from_coefficients(
        context, [t(context), Series.constant(context, 2) + t(context), 1]
    )


def closed_form_unit_eq(context, n):
    """(-(2+t) + sqrt(4+t^2))/2 expanded through weight n."""
    root = eval_power_series(binomial_series(Fraction(1, 2), context), t(context, 2, Fraction(1, 4)), n)
    return truncate(sub(root, Series.constant(context, 1) + t(context).scale(Fraction(1, 2))), n)


class TestPowerSeries:
    """Test coefficient streams."""

    def test_coefficients_are_memoized(self, series_ctx):
        calls = []

        def rule(n):
            calls.append(n)
            return Fraction(n)

        Q = PowerSeries(series_ctx, rule)
        assert Q.coeff(3) is Q.coeff(3)
        assert calls == [3]

    def test_unbounded_coefficient_is_rejected(self, series_ctx):
        Q = PowerSeries.from_coefficients(series_ctx, [0, t(series_ctx, -1)])
        with pytest.raises(PreconditionFailed):
            Q.coeff(1)

    def test_polynomial_degree(self, series_ctx):
        Q = PowerSeries.from_coefficients(series_ctx, [1, 2, 3])
        assert Q.degree == 2
        assert Q.coeff(5).is_zero()
        assert Q.rational_coefficients(4) == [1, 2, 3, 0]

    def test_arithmetic(self, series_ctx):
        P = PowerSeries.from_coefficients(series_ctx, [1, 1])
        Q = PowerSeries.from_coefficients(series_ctx, [1, -1])
        assert (P * Q).rational_coefficients(3) == [1, 0, -1]
        assert (P + Q).rational_coefficients(2) == [2, 0]
        assert (P - Q).rational_coefficients(2) == [0, 2]
        assert P.scale(3).rational_coefficients(2) == [3, 3]

    def test_derivative(self, series_ctx):
        assert exp_series(series_ctx).derivative().rational_coefficients(6) == exp_series(
            series_ctx
        ).rational_coefficients(6)
        assert log1p_series(series_ctx).derivative().rational_coefficients(4) == [1, -1, 1, -1]

    def test_compose_needs_zero_constant(self, series_ctx):
        with pytest.raises(PreconditionFailed):
            exp_series(series_ctx).compose(exp_series(series_ctx))

    def test_exp_of_log1p_is_identity(self, series_ctx):
        composite = exp_series(series_ctx).compose(log1p_series(series_ctx))
        assert composite.rational_coefficients(10) == [1, 1] + [0] * 8

    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(-2), Fraction(7, 3), Fraction(5)])
    def test_binomial_identity(self, series_ctx, c):
        direct = binomial_series(c, series_ctx).rational_coefficients(20)
        composite = exp_series(series_ctx).compose(log1p_series(series_ctx).scale(c))
        assert composite.rational_coefficients(20) == direct

    def test_binomial_coefficients(self, series_ctx):
        assert binomial_coefficient(Fraction(1, 2), 2) == Fraction(-1, 8)
        assert binomial_coefficient(-1, 3) == -1
        assert binomial_series(3, series_ctx).degree == 3
        assert binomial_series(Fraction(1, 2), series_ctx).degree is None


class TestEvaluation:
    """Test Q(z) and f^c."""

    def test_exp_and_log1p(self, series_ctx):
        x = t(series_ctx)
        assert str(eval_power_series(exp_series(series_ctx), x, 3)) == "1 + t + 1/2*t^2 + 1/6*t^3"
        assert str(eval_power_series(log1p_series(series_ctx), x, 3)) == "t - 1/2*t^2 + 1/3*t^3"

    def test_needs_infinitesimal_argument(self, series_ctx):
        with pytest.raises(NotInfinitesimal):
            eval_power_series(exp_series(series_ctx), Series.constant(series_ctx, 1), 3)

    def test_polynomial_needs_no_depth(self, series_ctx):
        f = power(Series.constant(series_ctx, 1) + t(series_ctx), 2)
        assert str(f) == "1 + 2*t + t^2"
        assert f.is_exact

    def test_infinite_power_needs_depth(self, series_ctx):
        with pytest.raises(DepthRequired):
            power(Series.constant(series_ctx, 1) + t(series_ctx), Fraction(1, 2))

    def test_square_root(self, series_ctx):
        f = power(Series.constant(series_ctx, 4) + t(series_ctx, 1, 4), Fraction(1, 2), 3)
        assert str(f) == "2 + t - 1/4*t^2 + 1/8*t^3"
        assert f.known_below == 4

    def test_power_of_monomial_factor(self, series_ctx):
        f = power(t(series_ctx, 2, 9) + t(series_ctx, 3, 9), Fraction(1, 2), 3)
        assert str(f) == "3*t + 3/2*t^2 - 3/8*t^3"

    def test_power_preconditions(self, series_ctx):
        with pytest.raises(NonPositive):
            power(t(series_ctx, 1, -1), Fraction(1, 2), 3)
        with pytest.raises(IrrationalScalarPower):
            power(Series.constant(series_ctx, 2), Fraction(1, 2), 3)

    def test_group_law(self, series_ctx, rng):
        for _ in range(50):
            f = Series.constant(series_ctx, 1) + t(series_ctx, 1, random_coefficient(rng))
            f = f + t(series_ctx, 2, random_coefficient(rng))
            half = power(f, Fraction(1, 2), 8)
            assert mul(half, half).agrees_with(f)
            assert power(f, Fraction(3, 2), 8).agrees_with(mul(half, f))

    def test_binomial_group_law(self, series_ctx, rng):
        for _ in range(50):
            a = Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3, 4)))
            b = Fraction(rng.randint(-5, 5), rng.choice((1, 2, 3, 4)))
            z = t(series_ctx, rng.choice((Fraction(1, 2), 1, 2)), random_coefficient(rng))
            z = z + t(series_ctx, rng.randint(1, 3), random_coefficient(rng))
            if z.is_zero():
                continue

            lhs = mul(
                eval_power_series(binomial_series(a, series_ctx), z, 6),
                eval_power_series(binomial_series(b, series_ctx), z, 6),
            )
            rhs = eval_power_series(binomial_series(a + b, series_ctx), z, 6)
            assert lhs.known_below > 6
            assert truncate(lhs, 6).agrees_with(rhs)
            assert rhs.known_below > 6


class TestHensel:
    """Test the Hensel-type solver and the unit equation."""

    def test_unit_eq_matches_closed_form(self, series_ctx):
        z = solve_unit_eq(1, t(series_ctx), 12)
        assert z.agrees_with(closed_form_unit_eq(series_ctx, 12))
        assert z.known_below > 12
        assert z.coefficient(series_ctx.monomial(t=1)) == Fraction(-1, 2)
        assert z.coefficient(series_ctx.monomial(t=2)) == Fraction(1, 8)
        assert z.coefficient(series_ctx.monomial(t=3)) == 0
        assert z.coefficient(series_ctx.monomial(t=4)) == Fraction(-1, 128)

    def test_c_zero_is_exact(self, series_ctx):
        assert str(solve_unit_eq(0, t(series_ctx), 4)) == "-t"

    @pytest.mark.parametrize("c", [Fraction(1, 2), Fraction(2), Fraction(-3), Fraction(5, 3)])
    def test_unit_eq_postcondition(self, series_ctx, c):
        n = 8
        eps = t(series_ctx) + t(series_ctx, 3, -2)
        z = solve_unit_eq(c, eps, n)
        one = Series.constant(series_ctx, 1)
        lhs = mul(power(add(one, z), c, n), add(add(one, eps), z))
        assert truncate(sub(lhs, one), n).is_zero_below()

    def test_unit_eq_preconditions(self, series_ctx):
        with pytest.raises(CMinusOne):
            solve_unit_eq(-1, t(series_ctx), 4)
        with pytest.raises(NotInfinitesimal):
            solve_unit_eq(1, Series.constant(series_ctx, 1), 4)

    def test_hensel_preconditions(self, series_ctx):
        with pytest.raises(PreconditionFailed):
            hensel_solve(PowerSeries.from_coefficients(series_ctx, [1, 1]), 4)
        with pytest.raises(PreconditionFailed):
            hensel_solve(PowerSeries.from_coefficients(series_ctx, [t(series_ctx), t(series_ctx)]), 4)

    def test_seed_must_be_infinitesimal(self, series_ctx):
        with pytest.raises(NotInfinitesimal):
            hensel_solve(unit_eq_polynomial(series_ctx), 4, seed=Series.constant(series_ctx, 1))

    def test_contraction_from_random_seeds(self, series_ctx, rng):
        Q = unit_eq_polynomial(series_ctx)
        reference = hensel_solve(Q, 12)
        for _ in range(50):
            seed = Series.zero(series_ctx)
            for k in rng.sample(range(1, 6), rng.randint(1, 3)):
                seed = seed + t(series_ctx, k, random_coefficient(rng))
            trace = []
            assert hensel_solve(Q, 12, seed=seed, trace=trace) == reference
            assert all(a < b for a, b in zip(trace, trace[1:]))

    @pytest.mark.parametrize(
        "k", [Fraction(1, 2), Fraction(1, 4), Fraction(1, 10), Fraction(1, 100)]
    )
    def test_fractional_seed(self, series_ctx, k):
        Q = unit_eq_polynomial(series_ctx)
        reference = hensel_solve(Q, 12)
        z = hensel_solve(Q, 12, seed=t(series_ctx, k))

        assert z.agrees_with(reference)
        assert z.known_below > 12

    def test_contraction_from_random_fractional_seeds(self, series_ctx, rng):
        Q = unit_eq_polynomial(series_ctx)
        reference = hensel_solve(Q, 8)
        for _ in range(20):
            seed = Series.zero(series_ctx)
            for _ in range(rng.randint(1, 3)):
                k = Fraction(rng.randint(1, 12), rng.choice((2, 3, 4, 5, 8)))
                seed = seed + t(series_ctx, k, random_coefficient(rng))
            if seed.is_zero():
                continue
            z = hensel_solve(Q, 8, seed=seed)
            assert z.agrees_with(reference)
            assert z.known_below > 8
