"""The ordered monomial group over declared generators.

Every generator is stored as an infinitesimal (g ≺ 1); infinite monomials
carry negative exponents. Generators are listed from most rapidly varying
to least, and monomials compare lexicographically in that order: a positive
first nonzero exponent means the monomial is ≺ 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import TYPE_CHECKING, Dict, Iterable, Optional, Sequence, Tuple

from models.types import GeneratorKind

from .errors import ContextMismatch, PreconditionFailed
from .rational import RationalLike, fraction_gcd, to_fraction

if TYPE_CHECKING:
    from .derivation import DerivationSpec

Exponents = Tuple[Fraction, ...]


class Relation(str, Enum):
    """Outcome of comparing two monomials."""

    PREC = "≺"
    ASYMP = "≍"
    SUCC = "≻"


@dataclass(frozen=True)
class Generator:
    name: str
    weight: Fraction = Fraction(1)
    kind: GeneratorKind = GeneratorKind.PLAIN
    rate: Optional[Fraction] = None


class GeneratorContext:
    """Declared generators, their weights and (once installed) derivation."""

    def __init__(self, generators: Sequence[Generator]) -> None:
        if not generators:
            raise PreconditionFailed("a context needs at least one generator")
        names = [g.name for g in generators]
        for name in names:
            if not name or not name.strip():
                raise PreconditionFailed("generator names must be nonempty")
        if len(set(names)) != len(names):
            raise PreconditionFailed(f"generator names must be distinct: {names}")
        for g in generators:
            if to_fraction(g.weight) <= 0:
                raise PreconditionFailed(
                    f"weight of generator {g.name!r} must be positive"
                )
            if g.kind is not GeneratorKind.PLAIN and (
                g.rate is None or to_fraction(g.rate) <= 0
            ):
                raise PreconditionFailed(
                    f"{g.kind.value} generator {g.name!r} needs a positive rate"
                )

        self.generators: Tuple[Generator, ...] = tuple(
            Generator(
                name=g.name,
                weight=to_fraction(g.weight),
                kind=g.kind,
                rate=None if g.rate is None else to_fraction(g.rate),
            )
            for g in generators
        )
        self.names: Tuple[str, ...] = tuple(names)
        self.weights: Tuple[Fraction, ...] = tuple(g.weight for g in self.generators)
        self._index: Dict[str, int] = {name: i for i, name in enumerate(names)}
        self._derivation: Optional["DerivationSpec"] = None
        self._lock = threading.Lock()

    @classmethod
    def from_names(cls, *names: str) -> "GeneratorContext":
        return cls([Generator(name=n) for n in names])

    def __repr__(self) -> str:
        return f"GeneratorContext({', '.join(self.names)})"

    def __len__(self) -> int:
        return len(self.names)

    def compatible(self, other: "GeneratorContext") -> bool:
        return self is other or (
            self.names == other.names and self.weights == other.weights
        )

    def check(self, other: "GeneratorContext") -> None:
        if not self.compatible(other):
            raise ContextMismatch(f"context mismatch: {self!r} vs {other!r}")

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise PreconditionFailed(f"unknown generator {name!r}")

    @property
    def step(self) -> Fraction:
        """Minimal positive weight granularity of the integer-exponent grid."""
        step = fraction_gcd(self.weights)
        assert step is not None
        return step

    def find_kind(self, kind: GeneratorKind) -> Optional[int]:
        """Index of the first generator of the given kind."""
        for i, g in enumerate(self.generators):
            if g.kind is kind:
                return i
        return None

    def count_kind(self, kind: GeneratorKind) -> int:
        return sum(1 for g in self.generators if g.kind is kind)

    # Derivation is attached once by core.derivation.install_derivation.

    @property
    def derivation(self) -> Optional["DerivationSpec"]:
        return self._derivation

    def _attach_derivation(self, spec: "DerivationSpec") -> None:
        with self._lock:
            if self._derivation is not None:
                raise PreconditionFailed(f"{self!r} already has a derivation")
            self._derivation = spec

    # Monomial constructors

    def one(self) -> "Monomial":
        return Monomial(self, tuple(Fraction(0) for _ in self.names))

    def monomial(self, **exponents: RationalLike) -> "Monomial":
        vector = [Fraction(0)] * len(self.names)
        for name, value in exponents.items():
            vector[self.index(name)] = to_fraction(value)
        return Monomial(self, tuple(vector))

    def from_vector(self, exponents: Iterable[RationalLike]) -> "Monomial":
        vector = tuple(to_fraction(e) for e in exponents)
        if len(vector) > len(self.names):
            raise PreconditionFailed("exponent vector longer than the context")
        vector = vector + (Fraction(0),) * (len(self.names) - len(vector))
        return Monomial(self, vector)

    def weight_of(self, exponents: Exponents) -> Fraction:
        return sum((w * e for w, e in zip(self.weights, exponents)), Fraction(0))

    def exp_monomial(self, q: RationalLike) -> "Monomial":
        """e^{q x} as a power of the exponential generator e^{-r x}."""
        i = self.find_kind(GeneratorKind.EXPONENTIAL)
        if i is None:
            raise PreconditionFailed(f"{self!r} has no exponential generator")
        rate = self.generators[i].rate
        assert rate is not None
        vector = [Fraction(0)] * len(self.names)
        vector[i] = -to_fraction(q) / rate
        return Monomial(self, tuple(vector))

    def x_monomial(self, k: RationalLike) -> "Monomial":
        """x^k as a power of the power generator x^{-d}."""
        i = self.find_kind(GeneratorKind.POWER)
        if i is None:
            raise PreconditionFailed(f"{self!r} has no power generator")
        degree = self.generators[i].rate
        assert degree is not None
        vector = [Fraction(0)] * len(self.names)
        vector[i] = -to_fraction(k) / degree
        return Monomial(self, tuple(vector))


@dataclass(frozen=True)
class Monomial:
    """An element of the monomial group: an exponent vector in a context."""

    context: GeneratorContext
    exponents: Exponents

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Monomial):
            return NotImplemented
        return (
            self.context.compatible(other.context)
            and self.exponents == other.exponents
        )

    def __hash__(self) -> int:
        return hash((self.context.names, self.exponents))

    def __repr__(self) -> str:
        parts = [
            f"{n}^{e}" for n, e in zip(self.context.names, self.exponents) if e
        ]
        return f"Monomial({'*'.join(parts) or '1'})"

    def __mul__(self, other: "Monomial") -> "Monomial":
        return mul(self, other)

    def __truediv__(self, other: "Monomial") -> "Monomial":
        return mul(self, other.inverse())

    def __pow__(self, q: RationalLike) -> "Monomial":
        return pow(self, q)

    def __lt__(self, other: "Monomial") -> bool:
        return compare(self, other) is Relation.PREC

    def __le__(self, other: "Monomial") -> bool:
        return compare(self, other) is not Relation.SUCC

    def __gt__(self, other: "Monomial") -> bool:
        return compare(self, other) is Relation.SUCC

    def __ge__(self, other: "Monomial") -> bool:
        return compare(self, other) is not Relation.PREC

    def inverse(self) -> "Monomial":
        return Monomial(self.context, tuple(-e for e in self.exponents))

    def is_one(self) -> bool:
        return not any(self.exponents)

    @property
    def weight(self) -> Fraction:
        return weight(self)


def mul(m1: Monomial, m2: Monomial) -> Monomial:
    """Group law: exponentwise sum."""
    m1.context.check(m2.context)
    return Monomial(
        m1.context, tuple(a + b for a, b in zip(m1.exponents, m2.exponents))
    )


def compare_exponents(e1: Exponents, e2: Exponents) -> Relation:
    # e1 ≺ e2 iff the first nonzero entry of e1 - e2 is positive
    for a, b in zip(e1, e2):
        if a != b:
            return Relation.PREC if a > b else Relation.SUCC
    return Relation.ASYMP


def compare(m1: Monomial, m2: Monomial) -> Relation:
    m1.context.check(m2.context)
    return compare_exponents(m1.exponents, m2.exponents)


def pow(m: Monomial, q: RationalLike) -> Monomial:
    q = to_fraction(q)
    return Monomial(m.context, tuple(e * q for e in m.exponents))


def weight(m: Monomial) -> Fraction:
    """Truncation grading: sum of weight_i * exponent_i."""
    return m.context.weight_of(m.exponents)
