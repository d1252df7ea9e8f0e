"""Expression language for series.

Grammar (precedence ``^`` > unary ``-`` > ``* /`` > ``+ -``)::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*        # '3x' is 3*x
    unary   := '-' unary | power
    power   := atom ('^' exponent)?
    atom    := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

``^`` takes a rational exponent (``t^-1``, ``t^(1/2)``); with base ``e`` the
exponent is linear in ``x`` (``e^x``, ``e^(-3x/2)``). ``x`` and ``exp1``
(= e^x) are sugar for powers of the power and exponential generators.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .analytic import eval_power_series, exp_series, log1p_series, power
from .derivation import derive, log_derivative
from .errors import ParseError, PreconditionFailed, UnknownSymbol
from .monomial import GeneratorContext
from .rational import RationalLike, rational_power, to_fraction
from .series import (
    Series,
    abs_,
    add,
    invert,
    is_infinitesimal,
    leading_term,
    mul,
    neg,
    power_int,
    sub,
)

logger = logging.getLogger(__name__)

Span = Tuple[int, int]

FUNCTIONS = ("abs", "exp", "log1p", "inv", "D", "logd")


# Parse tree


@dataclass(frozen=True)
class Number:
    value: Fraction
    span: Span


@dataclass(frozen=True)
class Symbol:
    name: str
    span: Span


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Expr"
    span: Span


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expr"
    right: "Expr"
    span: Span


@dataclass(frozen=True)
class Power:
    base: "Expr"
    exponent: Fraction
    span: Span


@dataclass(frozen=True)
class ExpLinear:
    """e^{q x}."""

    q: Fraction
    span: Span


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Expr"
    span: Span


Expr = Union[Number, Symbol, Unary, Binary, Power, ExpLinear, Call]


# Tokenizer

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class Token:
    kind: str  # "number", "name", "op" or "end"
    text: str
    start: int
    end: int


def tokenize(src: str) -> List[Token]:
    tokens: List[Token] = []
    pos = 0
    while pos < len(src):
        if src[pos:].strip() == "":
            break
        match = _TOKEN_RE.match(src, pos)
        if match is None:
            start = len(src) - len(src[pos:].lstrip())
            raise ParseError(f"unexpected character {src[start]!r}", position=(start, start + 1))
        kind = match.lastgroup
        assert kind is not None
        start, end = match.span(kind)
        # implicit multiplication: 3x, 2e^x, 3(1+t)
        if (
            tokens
            and tokens[-1].kind == "number"
            and tokens[-1].end == start
            and (kind == "name" or match.group(kind) == "(")
        ):
            tokens.append(Token("op", "*", start, start))
        tokens.append(Token(kind, match.group(kind), start, end))
        pos = match.end()
    tokens.append(Token("end", "", len(src), len(src)))
    return tokens


# Pratt parser

_INFIX = {"+": 10, "-": 10, "*": 20, "/": 20}
_UNARY = 30
_POWER = 40


class _Parser:
    def __init__(self, src: str) -> None:
        self.src = src
        self.tokens = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        token = self.tokens[self.i]
        self.i += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.peek()
        if token.text != text or token.kind == "end":
            found = "end of input" if token.kind == "end" else repr(token.text)
            raise ParseError(f"expected {text!r}, found {found}", position=(token.start, token.end))
        return self.advance()

    def parse(self) -> Expr:
        if self.peek().kind == "end":
            raise ParseError("empty expression", position=(0, 0))
        expr = self.expression(0)
        token = self.peek()
        if token.kind != "end":
            raise ParseError(f"unexpected {token.text!r}", position=(token.start, token.end))
        return expr

    def expression(self, min_bp: int) -> Expr:
        left = self.prefix()
        while True:
            token = self.peek()
            if token.kind != "op":
                break
            if token.text == "^":
                if _POWER < min_bp:
                    break
                self.advance()
                left = self.power(left, token)
                continue
            bp = _INFIX.get(token.text)
            if bp is None or bp <= min_bp:
                break
            self.advance()
            right = self.expression(bp)
            left = Binary(token.text, left, right, (_start(left), _end(right)))
        return left

    def prefix(self) -> Expr:
        token = self.advance()
        if token.kind == "number":
            return Number(Fraction(int(token.text)), (token.start, token.end))
        if token.kind == "name":
            if self.peek().text == "(" and token.text in FUNCTIONS:
                self.advance()
                arg = self.expression(0)
                close = self.expect(")")
                return Call(token.text, arg, (token.start, close.end))
            return Symbol(token.text, (token.start, token.end))
        if token.text == "(":
            inner = self.expression(0)
            self.expect(")")
            return inner
        if token.text in ("-", "+"):
            operand = self.expression(_UNARY)
            if token.text == "+":
                return operand
            return Unary("-", operand, (token.start, _end(operand)))
        found = "end of input" if token.kind == "end" else repr(token.text)
        raise ParseError(f"unexpected {found}", position=(token.start, token.end))

    def power(self, base: Expr, caret: Token) -> Expr:
        exponent = self.expression(_POWER - 1)
        span = (_start(base), _end(exponent))
        if isinstance(base, Symbol) and base.name == "e":
            linear = linear_in_x(exponent)
            if linear is None or linear[1] != 0:
                raise ParseError(
                    "exponent of e must be a rational multiple of x",
                    position=(caret.start, _end(exponent)),
                )
            return ExpLinear(linear[0], span)
        value = static_rational(exponent)
        if value is None:
            raise ParseError(
                "^ takes a rational literal exponent",
                position=(caret.start, _end(exponent)),
            )
        return Power(base, value, span)


def _start(expr: Expr) -> int:
    return expr.span[0]


def _end(expr: Expr) -> int:
    return expr.span[1]


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree; errors carry a column span."""
    return _Parser(src).parse()


# Static analysis of exponents


def linear_in_x(expr: Expr) -> Optional[Tuple[Fraction, Fraction]]:
    """(q, r) with expr = q·x + r, or None if expr is not of that form."""
    if isinstance(expr, Number):
        return Fraction(0), expr.value
    if isinstance(expr, Symbol):
        return (Fraction(1), Fraction(0)) if expr.name == "x" else None
    if isinstance(expr, Unary):
        inner = linear_in_x(expr.operand)
        return None if inner is None else (-inner[0], -inner[1])
    if isinstance(expr, Power):
        base = linear_in_x(expr.base)
        if base is None or base[0] != 0 or expr.exponent.denominator != 1:
            return None
        if base[1] == 0 and expr.exponent < 0:
            return None
        return Fraction(0), base[1] ** int(expr.exponent)
    if isinstance(expr, Binary):
        left, right = linear_in_x(expr.left), linear_in_x(expr.right)
        if left is None or right is None:
            return None
        if expr.op == "+":
            return left[0] + right[0], left[1] + right[1]
        if expr.op == "-":
            return left[0] - right[0], left[1] - right[1]
        if expr.op == "*":
            if left[0] and right[0]:
                return None
            return (
                left[0] * right[1] + right[0] * left[1],
                left[1] * right[1],
            )
        if expr.op == "/":
            if right[0] or right[1] == 0:
                return None
            return left[0] / right[1], left[1] / right[1]
    return None


def static_rational(expr: Expr) -> Optional[Fraction]:
    linear = linear_in_x(expr)
    if linear is None or linear[0] != 0:
        return None
    return linear[1]


# Evaluation


class Evaluator:
    """Evaluate parse trees to series in a context, with inclusive depth ``n``.

    ``n`` bounds the infinite expansions (inverses, exp, log1p, fractional
    powers); exact finite expressions evaluate exactly.
    """

    def __init__(self, context: GeneratorContext, n: Optional[RationalLike] = None) -> None:
        self.context = context
        self.n = None if n is None else to_fraction(n)

    def __call__(self, expr: Expr) -> Series:
        if isinstance(expr, Number):
            return Series.constant(self.context, expr.value)
        if isinstance(expr, Symbol):
            return self._symbol(expr)
        if isinstance(expr, Unary):
            return neg(self(expr.operand))
        if isinstance(expr, Binary):
            return self._binary(expr)
        if isinstance(expr, Power):
            return self._power(expr)
        if isinstance(expr, ExpLinear):
            return self._exp_linear(expr)
        return self._call(expr)

    def _depth(self, extra: Fraction = Fraction(0)) -> Optional[Fraction]:
        return None if self.n is None else self.n + extra

    def _symbol(self, expr: Symbol) -> Series:
        name = expr.name
        if name in self.context.names:
            return Series.generator(self.context, name)
        try:
            if name == "x":
                return Series.monomial(self.context.x_monomial(1))
            if name == "exp1":
                return Series.monomial(self.context.exp_monomial(1))
        except PreconditionFailed as e:
            raise UnknownSymbol(f"{name!r}: {e.message}", position=expr.span)
        if name == "e":
            raise UnknownSymbol("'e' must be raised to a multiple of x", position=expr.span)
        raise UnknownSymbol(f"unknown symbol {name!r}", position=expr.span)

    def _binary(self, expr: Binary) -> Series:
        left = self(expr.left)
        if expr.op == "/":
            divisor = static_rational(expr.right)
            if divisor is not None:
                if divisor == 0:
                    raise PreconditionFailed("division by zero", position=expr.right.span)
                return left.scale(1 / divisor)
            return mul(left, self._inverse(self(expr.right), left))
        right = self(expr.right)
        if expr.op == "+":
            return add(left, right)
        if expr.op == "-":
            return sub(left, right)
        return mul(left, right)

    def _inverse(self, f: Series, numerator: Optional[Series] = None) -> Series:
        if len(f) == 1 and f.is_exact:
            return invert(f)
        shift = Fraction(0)
        if numerator is not None and not numerator.is_zero_below():
            shift = -Fraction(numerator.min_weight)
        depth = self._depth(shift)
        if depth is None:
            return invert(f)
        return invert(f, n=depth)

    def _power(self, expr: Power) -> Series:
        base = self(expr.base)
        q = expr.exponent
        if len(base) == 1 and base.is_exact:
            coeff, m = leading_term(base)
            if q.denominator == 1:
                return Series.monomial(m ** q, coeff ** int(q))
            if coeff > 0:
                root = rational_power(coeff, q)
                if root is not None:
                    return Series.monomial(m ** q, root)
        if q.denominator == 1 and q >= 0:
            return power_int(base, int(q))
        if q.denominator == 1:
            k = -int(q)
            lead_weight = Fraction(base.min_weight) if not base.is_zero_below() else Fraction(0)
            inverse = self._inverse(base) if self.n is None else invert(
                base, n=self.n + (k - 1) * abs(lead_weight)
            )
            return power_int(inverse, k)
        return power(base, q, self.n)

    def _exp_linear(self, expr: ExpLinear) -> Series:
        try:
            return Series.monomial(self.context.exp_monomial(expr.q))
        except PreconditionFailed as e:
            raise UnknownSymbol(f"e^(qx): {e.message}", position=expr.span)

    def _call(self, expr: Call) -> Series:
        func = expr.func
        if func == "exp":
            linear = linear_in_x(expr.arg)
            if linear is not None and linear[0] != 0:
                if linear[1] != 0:
                    raise PreconditionFailed(
                        "exp of a nonzero constant is not rational", position=expr.span
                    )
                return self._exp_linear(ExpLinear(linear[0], expr.span))
        arg = self(expr.arg)
        if func == "abs":
            return abs_(arg)
        if func == "inv":
            return self._inverse(arg)
        if func == "D":
            return derive(arg)
        if func == "logd":
            return log_derivative(arg, self.n)
        # exp / log1p of an infinitesimal argument
        if not is_infinitesimal(arg):
            raise PreconditionFailed(f"{func}() needs an argument ≺ 1", position=expr.arg.span)
        series = exp_series(self.context) if func == "exp" else log1p_series(self.context)
        if self.n is None:
            if arg.is_zero():
                return series.coeff(0)
            raise PreconditionFailed(f"{func}() needs a depth", position=expr.span)
        return eval_power_series(series, arg, self.n)


def evaluate(
    expr: Union[Expr, str], context: GeneratorContext, n: Optional[RationalLike] = None
) -> Series:
    """Evaluate an expression (or source text) to a Series in ``context``."""
    if isinstance(expr, str):
        expr = parse(expr)
    return Evaluator(context, n)(expr)
