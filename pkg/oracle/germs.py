"""Floating-point evaluation of series as germs at +∞.

Numeric checks are advisory: symbolic exactness governs every result, and a
numeric disagreement at a sample point that is too small to separate the
leading term from the rest only logs a warning with the dominance margin.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import mpmath

from core.diffpoly import exact_residual, solve_pc
from core.errors import MissingRule, PreconditionFailed
from core.monomial import GeneratorContext
from core.presets import transseries_context
from core.rational import RationalLike, to_fraction
from core.series import Series, sign
from models.types import DecayEntry, DecayReport, GeneratorKind

from .base import BaseGermRule
from .rules import create_rule, to_mpf

logger = logging.getLogger(__name__)

DEFAULT_SAMPLE_POINTS: Tuple[float, ...] = (10.0, 20.0, 40.0)
DEFAULT_PRECISION = 50


@dataclass
class GermAssignment:
    """A real evaluation rule per generator, plus the sample points."""

    rules: Dict[str, BaseGermRule]
    sample_points: Tuple[float, ...] = DEFAULT_SAMPLE_POINTS
    precision: int = DEFAULT_PRECISION

    def __post_init__(self) -> None:
        points = tuple(self.sample_points)
        if not points:
            raise PreconditionFailed("at least one sample point is required")
        if any(t <= 0 for t in points):
            raise PreconditionFailed("sample points must be positive")
        if any(a >= b for a, b in zip(points, points[1:])):
            raise PreconditionFailed("sample points must be strictly increasing")
        self.sample_points = points

    @classmethod
    def from_context(
        cls,
        context: GeneratorContext,
        sample_points: Optional[Sequence[float]] = None,
        precision: int = DEFAULT_PRECISION,
        overrides: Optional[Mapping[str, BaseGermRule]] = None,
    ) -> "GermAssignment":
        """Rules from generator kinds; plain generators need an override."""
        rules: Dict[str, BaseGermRule] = {}
        for g in context.generators:
            if g.kind is not GeneratorKind.PLAIN:
                assert g.rate is not None
                rules[g.name] = create_rule(g.kind, g.rate)
        rules.update(overrides or {})
        return cls(
            rules=rules,
            sample_points=tuple(sample_points or DEFAULT_SAMPLE_POINTS),
            precision=precision,
        )

    def rule(self, name: str) -> BaseGermRule:
        try:
            return self.rules[name]
        except KeyError:
            raise MissingRule(f"no germ rule for generator {name!r}")


def _term_logs(
    f: Series, t: mpmath.mpf, assignment: GermAssignment
) -> List[Tuple[int, mpmath.mpf]]:
    """(sign, log|term(t)|) per stored term, in descending monomial order."""
    names = f.context.names
    logs: Dict[int, mpmath.mpf] = {}
    result = []
    for exps, coeff in f.items():
        log_mag = mpmath.log(abs(to_mpf(coeff)))
        for i, e in enumerate(exps):
            if not e:
                continue
            if i not in logs:
                logs[i] = assignment.rule(names[i]).log_value(t)
            log_mag += to_mpf(e) * logs[i]
        result.append((1 if coeff > 0 else -1, log_mag))
    return result


def _assignment(f: Series, assignment: Optional[GermAssignment]) -> GermAssignment:
    return assignment or GermAssignment.from_context(f.context)


def eval_germ(
    f: Series, t: float, assignment: Optional[GermAssignment] = None
) -> mpmath.mpf:
    """Σ coeff·Π g_i(t)^{e_i} over the stored terms, summed in log space."""
    assignment = _assignment(f, assignment)
    with mpmath.workdps(assignment.precision):
        total = mpmath.mpf(0)
        for s, log_mag in _term_logs(f, mpmath.mpf(t), assignment):
            total += s * mpmath.exp(log_mag)
        return +total


def dominance_margin(
    f: Series, t: float, assignment: Optional[GermAssignment] = None
) -> float:
    """log|lt(f)(t)| - log Σ|other terms(t)|; positive when the leading term dominates."""
    if f.is_zero_below():
        raise PreconditionFailed("the dominance margin needs f ≠ 0")
    assignment = _assignment(f, assignment)
    with mpmath.workdps(assignment.precision):
        logs = _term_logs(f, mpmath.mpf(t), assignment)
        if len(logs) == 1:
            return float("inf")
        rest = mpmath.log(mpmath.fsum(mpmath.exp(log_mag) for _, log_mag in logs[1:]))
        return float(logs[0][1] - rest)


def sign_check(
    f: Series,
    t_list: Optional[Sequence[float]] = None,
    assignment: Optional[GermAssignment] = None,
) -> bool:
    """True iff the numeric sign agrees with sign(f) at every sample point.

    A disagreement where the leading term does not yet dominate is logged
    and does not fail the check.
    """
    if f.is_zero_below():
        raise PreconditionFailed("sign_check needs f ≠ 0")
    assignment = _assignment(f, assignment)
    expected = sign(f)
    ok = True
    for t in t_list or assignment.sample_points:
        value = eval_germ(f, t, assignment)
        if mpmath.sign(value) == expected:
            continue
        margin = dominance_margin(f, t, assignment)
        logger.warning(
            "numeric sign at t=%s disagrees with sign(f)=%d (dominance margin %.3g)",
            t,
            expected,
            margin,
        )
        if margin > 0:
            ok = False
    return ok


def residual_decay_check(
    c: RationalLike,
    b: RationalLike,
    depths: Sequence[int],
    t: float = DEFAULT_SAMPLE_POINTS[0],
    context: Optional[GeneratorContext] = None,
    assignment: Optional[GermAssignment] = None,
) -> DecayReport:
    """|P_c(y_N)(t)| for each depth N; passes when it strictly decreases in N."""
    depths = list(depths)
    if any(a >= b_ for a, b_ in zip(depths, depths[1:])):
        raise PreconditionFailed(f"depths must be increasing: {depths}")
    c, b = to_fraction(c), to_fraction(b)
    context = context or transseries_context(c)
    assignment = assignment or GermAssignment.from_context(context)

    entries: List[DecayEntry] = []
    previous: Optional[mpmath.mpf] = None
    for depth in depths:
        y = solve_pc(c, b, depth, context)
        residual = abs(eval_germ(exact_residual(c, y), t, assignment))
        ratio: Optional[float] = None
        if previous is None:
            passed = True
        elif previous == 0:
            passed = residual == 0
        else:
            ratio = float(residual / previous)
            passed = ratio < 1
        logger.debug("decay: depth=%s t=%s residual=%s ratio=%s", depth, t, residual, ratio)
        entries.append(
            DecayEntry(
                depth=depth,
                t=float(t),
                residual=float(residual),
                decay_ratio=ratio,
                passed=passed,
            )
        )
        previous = residual

    return DecayReport(
        c=str(c),
        b=str(b),
        entries=entries,
        passed=all(e.passed for e in entries),
    )


def first_omitted_estimate(
    c: RationalLike,
    b: RationalLike,
    n: RationalLike,
    t: float,
    context: Optional[GeneratorContext] = None,
    assignment: Optional[GermAssignment] = None,
) -> mpmath.mpf:
    """|value at t| of the least-weight terms of the zero of P_c beyond weight n."""
    c, b, n = to_fraction(c), to_fraction(b), to_fraction(n)
    context = context or transseries_context(c)
    assignment = assignment or GermAssignment.from_context(context)
    deeper = solve_pc(c, b, n + 4 * context.step, context)
    weight_of = context.weight_of
    omitted = [(e, coeff) for e, coeff in deeper.items() if weight_of(e) > n]
    if not omitted:
        return mpmath.mpf(0)
    first = min(weight_of(e) for e, _ in omitted)
    head = Series(context, {e: coeff for e, coeff in omitted if weight_of(e) == first})
    return abs(eval_germ(head, t, assignment))
