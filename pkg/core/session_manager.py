"""Session orchestration: configuration, contexts and solver commands."""

import asyncio
import logging
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from models.types import (
    CommandResult,
    DecayReport,
    DominanceRecord,
    PcVerification,
    Preset,
    SessionConfig,
    VerifyMode,
)
from oracle.germs import GermAssignment, residual_decay_check

from .analytic import PowerSeries, hensel_solve, solve_unit_eq
from .config_manager import ConfigManager
from .diffpoly import (
    leading_term_ok,
    pc_certificate,
    rc_residual,
    solve_pc,
    u_check,
    u_constant,
)
from .errors import ParseError, PreconditionFailed
from .formatting import format_bound, format_series, to_payload
from .monomial import GeneratorContext
from .parser import evaluate
from .presets import transseries_context
from .rational import RationalLike, format_fraction, to_fraction
from .series import Series, dominance, truncate

logger = logging.getLogger(__name__)


def decay_depths(n: int) -> List[int]:
    """Depths checked by the residual decay report for a requested depth n."""
    start = 2 if n % 2 == 0 else 1
    return list(range(start, n + 1, 2)) or [n]


class SessionManager:
    """Runs engine commands against one session configuration."""

    def __init__(
        self, config: SessionConfig, config_manager: Optional[ConfigManager] = None
    ):
        self.config = config
        self.config_manager = config_manager or ConfigManager()

    @classmethod
    async def create(
        cls,
        config_path: Optional[Path] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> "SessionManager":
        """Load the configuration (files, env, flag overrides) and build a session."""
        config_manager = ConfigManager(config_path)
        config = await config_manager.load_config(overrides)
        return cls(config, config_manager)

    def context(self, default_preset: Preset) -> GeneratorContext:
        return self.config_manager.build_context(self.config, default_preset)

    def depth(self, n: Optional[int] = None) -> int:
        depth = self.config.depth if n is None else n
        if depth <= 0:
            raise ValueError(f"depth must be positive, got {depth}")
        return depth

    @property
    def _has_declared_context(self) -> bool:
        return self.config.preset is not None or bool(self.config.generators)

    # Commands

    def eval_expression(self, expr: str, n: Optional[int] = None) -> Series:
        depth = self.depth(n)
        context = self.context(Preset.TRANSSERIES)
        return truncate(evaluate(expr, context, depth), depth)

    def hensel(self, coefficients: Sequence[str], n: Optional[int] = None) -> Series:
        """Zero of Q = a_0 + a_1 Z + ... for the listed coefficient expressions."""
        depth = self.depth(n)
        context = self.context(Preset.SERIES)
        values = [evaluate(src, context, depth) for src in coefficients if src.strip()]
        if len(values) < 2:
            raise PreconditionFailed("hensel needs at least the coefficients a_0 and a_1")
        Q = PowerSeries.from_coefficients(context, values)
        return hensel_solve(Q, depth)

    def unit_eq(self, c: RationalLike, eps: str, n: Optional[int] = None) -> Series:
        depth = self.depth(n)
        context = self.context(Preset.SERIES)
        return solve_unit_eq(c, evaluate(eps, context, depth), depth)

    def solve_pc(self, c: RationalLike, b: RationalLike, n: Optional[int] = None) -> Series:
        depth = self.depth(n)
        context = self.context(Preset.TRANSSERIES) if self._has_declared_context else None
        return solve_pc(c, b, depth, context)

    def dominance(self, f: str, g: str, n: Optional[int] = None) -> DominanceRecord:
        depth = self.depth(n)
        context = self.context(Preset.TRANSSERIES)
        return dominance(evaluate(f, context, depth), evaluate(g, context, depth))

    # Verification

    def symbolic_verification(
        self, y: Series, c: RationalLike, b: RationalLike
    ) -> PcVerification:
        """Zero certificate, R_c restatement, U(y)† check and leading-term contract."""
        certificate = pc_certificate(c, y)
        a = u_constant(y, c)
        verification = PcVerification(
            leading_term_ok=leading_term_ok(y, c, b),
            certificate_zero=certificate.is_zero_below(),
            rc_residual_zero=rc_residual(y, c).is_zero_below(),
            u_residual_zero=u_check(y, c).is_zero_below(),
            a=None if a is None else format_fraction(a),
            certificate_known_below=format_bound(certificate),
        )
        logger.debug("symbolic verification: %s", verification)
        return verification

    def numeric_verification(
        self,
        c: RationalLike,
        b: RationalLike,
        n: int,
        t_values: Optional[Sequence[float]] = None,
        context: Optional[GeneratorContext] = None,
    ) -> DecayReport:
        """Residual decay over :func:`decay_depths` at each sample point."""
        context = context or transseries_context(c)
        points = list(t_values or self.config.sample_points)
        assignment = GermAssignment.from_context(
            context, sorted(points), precision=self.config.precision
        )
        entries = []
        for t in points:
            report = residual_decay_check(c, b, decay_depths(n), t, context, assignment)
            entries.extend(report.entries)
        return DecayReport(
            c=str(to_fraction(c)),
            b=str(to_fraction(b)),
            entries=entries,
            passed=all(e.passed for e in entries),
        )

    async def verify_pc(
        self,
        y: Series,
        c: RationalLike,
        b: RationalLike,
        n: int,
        mode: VerifyMode,
        t_values: Optional[Sequence[float]] = None,
    ) -> Tuple[Optional[PcVerification], Optional[DecayReport]]:
        """Run the requested checks; ``both`` runs them concurrently."""
        verification: Optional[PcVerification] = None
        decay: Optional[DecayReport] = None
        if mode is VerifyMode.NONE:
            return verification, decay

        context = y.context
        jobs = []
        if mode in (VerifyMode.SYMBOLIC, VerifyMode.BOTH):
            jobs.append(asyncio.to_thread(self.symbolic_verification, y, c, b))
        if mode in (VerifyMode.NUMERIC, VerifyMode.BOTH):
            jobs.append(
                asyncio.to_thread(self.numeric_verification, c, b, n, t_values, context)
            )

        for result in await asyncio.gather(*jobs):
            if isinstance(result, PcVerification):
                verification = result
            else:
                decay = result
        return verification, decay

    # Output

    @staticmethod
    def result(
        command: str,
        series: Series,
        verification: Optional[PcVerification] = None,
        decay: Optional[DecayReport] = None,
    ) -> CommandResult:
        return CommandResult(
            command=command,
            text=format_series(series),
            series=to_payload(series),
            verification=verification,
            decay=decay,
        )


def parse_rational_option(value: str, name: str) -> Fraction:
    try:
        return to_fraction(value)
    except (TypeError, ValueError):
        raise ParseError(f"--{name} must be a rational literal p or p/q, got {value!r}")
