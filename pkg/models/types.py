"""Type definitions and Pydantic models for the series engine."""

from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class GeneratorKind(str, Enum):
    """What a generator stands for as a germ at +∞."""
    PLAIN = "plain"
    EXPONENTIAL = "exponential"  # g = e^{-rate*x}
    POWER = "power"  # g = x^{-rate}


class Preset(str, Enum):
    """Built-in session presets."""
    SERIES = "series"
    TRANSSERIES = "transseries"


class OutputMode(str, Enum):
    """Output format of CLI results."""
    TEXT = "text"
    JSON = "json"


class VerifyMode(str, Enum):
    """Verification run after ``solve-pc``."""
    NONE = "none"
    SYMBOLIC = "symbolic"
    NUMERIC = "numeric"
    BOTH = "both"


def _rational_text(value: Any) -> str:
    if isinstance(value, bool):
        raise ValueError("expected a rational, got a boolean")
    if isinstance(value, (int, Fraction)):
        value = str(value)
    if not isinstance(value, str):
        raise ValueError(f"expected a rational literal, got {value!r}")
    try:
        Fraction(value.strip())
    except ValueError:
        raise ValueError(f"not a rational literal: {value!r}")
    return value.strip()


class GeneratorDecl(BaseModel):
    """One generator declaration of a session."""
    model_config = ConfigDict(extra='forbid')

    name: str = Field(..., min_length=1)
    weight: str = "1"
    kind: GeneratorKind = GeneratorKind.PLAIN
    rate: Optional[str] = None
    logderiv: Optional[str] = None

    @field_validator("weight", mode="before")
    @classmethod
    def _check_weight(cls, value: Any) -> str:
        text = _rational_text(value)
        if Fraction(text) <= 0:
            raise ValueError("generator weights must be positive")
        return text

    @field_validator("rate", mode="before")
    @classmethod
    def _check_rate(cls, value: Any) -> Optional[str]:
        return None if value is None else _rational_text(value)

    @field_validator("logderiv", mode="before")
    @classmethod
    def _check_logderiv(cls, value: Any) -> Optional[str]:
        if value is None:
            return None
        return value if isinstance(value, str) else _rational_text(value)


class SessionConfig(BaseModel):
    """Session configuration: generators, derivation, depth and output."""
    model_config = ConfigDict(extra='forbid')

    preset: Optional[Preset] = None
    c: str = "0"
    generators: List[GeneratorDecl] = Field(default_factory=list)
    depth: int = Field(default=6, gt=0)
    output: OutputMode = OutputMode.TEXT
    sample_points: List[float] = Field(default_factory=lambda: [10.0, 20.0, 40.0])
    precision: int = Field(default=50, ge=15)

    @field_validator("c", mode="before")
    @classmethod
    def _check_c(cls, value: Any) -> str:
        return _rational_text(value)

    @field_validator("generators")
    @classmethod
    def _check_generators(cls, value: List[GeneratorDecl]) -> List[GeneratorDecl]:
        names = [g.name for g in value]
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be distinct: {names}")
        return value

    @field_validator("sample_points")
    @classmethod
    def _check_sample_points(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one sample point is required")
        if any(t <= 0 for t in value):
            raise ValueError("sample points must be positive")
        if any(a >= b for a, b in zip(value, value[1:])):
            raise ValueError("sample points must be strictly increasing")
        return value


class TermPayload(BaseModel):
    """One term of a series in JSON form."""
    model_config = ConfigDict(extra='forbid')

    coeff: str
    exponents: List[str]

    @field_validator("coeff", mode="before")
    @classmethod
    def _check_coeff(cls, value: Any) -> str:
        return _rational_text(value)

    @field_validator("exponents", mode="before")
    @classmethod
    def _check_exponents(cls, value: Any) -> List[str]:
        return [_rational_text(v) for v in value]


class SeriesPayload(BaseModel):
    """JSON form of a series; ``known_below`` is null for exact series."""
    model_config = ConfigDict(extra='forbid')

    terms: List[TermPayload] = Field(default_factory=list)
    known_below: Optional[str] = None

    @field_validator("known_below", mode="before")
    @classmethod
    def _check_bound(cls, value: Any) -> Optional[str]:
        return None if value is None else _rational_text(value)


class DominanceRecord(BaseModel):
    """Asymptotic relations between two series f and g."""
    model_config = ConfigDict(extra='forbid', frozen=True)

    preceq: bool
    prec: bool
    asymp: bool
    sim: bool


class DecayEntry(BaseModel):
    """Residual of one truncation depth, evaluated at a sample point."""
    model_config = ConfigDict(extra='forbid', populate_by_name=True)

    depth: int
    t: float
    residual: float
    decay_ratio: Optional[float] = None
    passed: bool = Field(alias="pass")


class DecayReport(BaseModel):
    """Result of the residual decay check."""
    model_config = ConfigDict(extra='forbid')

    c: str
    b: str
    entries: List[DecayEntry] = Field(default_factory=list)
    passed: bool = True


class PcVerification(BaseModel):
    """Symbolic certificates for a zero of P_c."""
    model_config = ConfigDict(extra='forbid')

    leading_term_ok: bool
    certificate_zero: bool
    rc_residual_zero: bool
    u_residual_zero: bool
    a: Optional[str] = None
    certificate_known_below: Optional[str] = None


class CommandResult(BaseModel):
    """JSON output of a solver command."""
    model_config = ConfigDict(extra='forbid')

    command: str
    text: str
    series: SeriesPayload
    verification: Optional[PcVerification] = None
    decay: Optional[DecayReport] = None


class ErrorPayload(BaseModel):
    """Machine-readable error written to stderr in JSON mode."""
    model_config = ConfigDict(extra='forbid')

    error: str
    message: str
    position: Optional[List[int]] = None


