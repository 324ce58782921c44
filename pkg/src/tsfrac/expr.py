"""Small expression language for real functions of one variable ``t``.

Grammar (whitespace is insignificant)::

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := '-' factor | atom ('^' signed_number)?
    atom   := number | 't' | '(' expr ')'

``^`` binds tighter than unary minus, so ``-t^2`` is ``-(t^2)``.

Besides plain evaluation, :func:`taylor` propagates truncated Taylor series
through the tree. The higher-order derivative code uses it to get exact
classical derivatives at points inside a continuum.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from tsfrac.errors import DomainError, ParseError


class Expr:
    """Base class of expression nodes. Instances are callable: ``e(t)``."""

    def __call__(self, t: float) -> float:
        return evaluate(self, float(t))

    def __str__(self) -> str:
        return to_source(self)


@dataclass(frozen=True, eq=True)
class Num(Expr):
    value: float


@dataclass(frozen=True, eq=True)
class Var(Expr):
    pass


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Pow(Expr):
    base: Expr
    exponent: float


_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)|(?P<var>t)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(src):
            if src[pos:].strip() == "":
                break
            m = _TOKEN.match(src, pos)
            if not m:
                start = pos + len(src[pos:]) - len(src[pos:].lstrip())
                raise ParseError(f"unexpected character {src[start]!r}", self._offset(start))
            kind = m.lastgroup
            self.tokens.append((kind, m[kind], m.start(kind)))
            pos = m.end()
        self.i = 0

    def _offset(self, index: int) -> int:
        return len(self.src[:index].encode("utf-8"))

    def peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def fail(self, expected: str):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {expected}, found end of input", self._offset(len(self.src)))
        raise ParseError(f"expected {expected}, found {tok[1]!r}", self._offset(tok[2]))

    def accept(self, text: str) -> bool:
        tok = self.peek()
        if tok is not None and tok[0] == "op" and tok[1] == text:
            self.i += 1
            return True
        return False

    def parse(self) -> Expr:
        node = self.expr()
        if self.peek() is not None:
            self.fail("operator or end of input")
        return node

    def expr(self) -> Expr:
        node = self.term()
        while True:
            if self.accept("+"):
                node = BinOp("+", node, self.term())
            elif self.accept("-"):
                node = BinOp("-", node, self.term())
            else:
                return node

    def term(self) -> Expr:
        node = self.factor()
        while True:
            if self.accept("*"):
                node = BinOp("*", node, self.factor())
            elif self.accept("/"):
                node = BinOp("/", node, self.factor())
            else:
                return node

    def factor(self) -> Expr:
        if self.accept("-"):
            return Neg(self.factor())
        node = self.atom()
        if self.accept("^"):
            sign = -1.0 if self.accept("-") else 1.0
            if sign > 0:
                self.accept("+")
            tok = self.peek()
            if tok is None or tok[0] != "num":
                self.fail("number after '^'")
            self.i += 1
            node = Pow(node, sign * float(tok[1]))
        return node

    def atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            self.fail("number, 't' or '('")
        kind, text, _ = tok
        if kind == "num":
            self.i += 1
            return Num(float(text))
        if kind == "var":
            self.i += 1
            return Var()
        if self.accept("("):
            node = self.expr()
            if not self.accept(")"):
                self.fail("')'")
            return node
        self.fail("number, 't' or '('")


def parse(src: str) -> Expr:
    """Parse ``src`` into an expression tree, raising :class:`ParseError`."""
    return _Parser(src).parse()


def _fmt_num(x: float) -> str:
    return repr(float(x)) if x >= 0 else f"({float(x)!r})"


def to_source(e: Expr) -> str:
    """Render ``e`` as a string that :func:`parse` maps back to the same tree."""
    if isinstance(e, Num):
        return _fmt_num(e.value)
    if isinstance(e, Var):
        return "t"
    if isinstance(e, Neg):
        return "-" + to_source(e.operand)
    if isinstance(e, BinOp):
        return f"({to_source(e.left)} {e.op} {to_source(e.right)})"
    if isinstance(e, Pow):
        base = to_source(e.base)
        if isinstance(e.base, (Neg, Pow)):
            base = f"({base})"
        return f"{base}^{float(e.exponent)!r}"
    raise TypeError(f"not an expression node: {e!r}")


def _isfinite(x) -> bool:
    if type(x) is float:
        return math.isfinite(x)
    return x == x and abs(x) != math.inf


def _check(x, what: str):
    if not _isfinite(x):
        raise DomainError(f"{what} is not finite")
    return x


def _real_pow(base, p: float):
    try:
        if float(p).is_integer():
            return _check(base ** int(p), f"{base!r}^{p!r}")
        if base < 0:
            raise DomainError(f"negative base {base!r} to non-integer power {p!r}")
        if base == 0 and p < 0:
            raise ZeroDivisionError
        return _check(base**p, f"{base!r}^{p!r}")
    except ZeroDivisionError:
        raise DomainError(f"0 to negative power {p!r}") from None
    except OverflowError:
        raise DomainError(f"{base!r}^{p!r} overflows") from None


def evaluate(e: Expr, t):
    """Evaluate ``e`` at the real point ``t``.

    ``t`` may also be an mpmath ``mpf``; arithmetic then happens at that
    number's precision.
    """
    if isinstance(e, Num):
        return e.value
    if isinstance(e, Var):
        return t
    if isinstance(e, Neg):
        return -evaluate(e.operand, t)
    if isinstance(e, Pow):
        return _real_pow(evaluate(e.base, t), e.exponent)
    if isinstance(e, BinOp):
        a, b = evaluate(e.left, t), evaluate(e.right, t)
        if e.op == "+":
            return _check(a + b, "sum")
        if e.op == "-":
            return _check(a - b, "difference")
        if e.op == "*":
            return _check(a * b, "product")
        if b == 0:
            raise DomainError(f"division by zero at t={t!r}")
        return _check(a / b, "quotient")
    raise TypeError(f"not an expression node: {e!r}")


# Truncated Taylor arithmetic: a series is the list [c0, c1, ..., cn] of
# normalised coefficients, f(t + d) = sum c_k d**k.


def _series_mul(a: list[float], b: list[float]) -> list[float]:
    n = len(a)
    return [sum(a[j] * b[k - j] for j in range(k + 1)) for k in range(n)]


def _series_div(a: list[float], b: list[float]) -> list[float]:
    if b[0] == 0:
        raise DomainError("division by zero in Taylor expansion")
    c: list[float] = []
    for k in range(len(a)):
        c.append((a[k] - sum(b[j] * c[k - j] for j in range(1, k + 1))) / b[0])
    return c


def _series_pow(a: list[float], p: float) -> list[float]:
    n = len(a)
    if float(p).is_integer():
        k = int(p)
        one = [1.0] + [0.0] * (n - 1)
        result, base = one, a
        m = abs(k)
        while m:
            if m & 1:
                result = _series_mul(result, base)
            base = _series_mul(base, base)
            m >>= 1
        return _series_div(one, result) if k < 0 else result
    if a[0] <= 0:
        if a[0] == 0 and n == 1 and p > 0:
            return [0.0]
        raise DomainError(f"non-integer power {p!r} of non-positive base {a[0]!r}")
    b = [a[0] ** p]
    for k in range(1, n):
        acc = sum(((p + 1) * j - k) * a[j] * b[k - j] for j in range(1, k + 1))
        b.append(acc / (k * a[0]))
    return b


def _taylor(e: Expr, t: float, n: int) -> list[float]:
    if isinstance(e, Num):
        return [e.value] + [0.0] * n
    if isinstance(e, Var):
        return [t, 1.0] + [0.0] * (n - 1) if n else [t]
    if isinstance(e, Neg):
        return [-c for c in _taylor(e.operand, t, n)]
    if isinstance(e, Pow):
        return _series_pow(_taylor(e.base, t, n), e.exponent)
    if isinstance(e, BinOp):
        a, b = _taylor(e.left, t, n), _taylor(e.right, t, n)
        if e.op == "+":
            return [x + y for x, y in zip(a, b)]
        if e.op == "-":
            return [x - y for x, y in zip(a, b)]
        if e.op == "*":
            return _series_mul(a, b)
        return _series_div(a, b)
    raise TypeError(f"not an expression node: {e!r}")


def taylor(e: Expr, t, order: int) -> list:
    """Taylor coefficients ``[f(t), f'(t), f''(t)/2!, ...]`` up to ``order``."""
    coeffs = _taylor(e, t, order)
    for c in coeffs:
        _check(c, "Taylor coefficient")
    return coeffs


def derivative(e: Expr, t, order: int):
    """Classical ``order``-th derivative of ``e`` at ``t``."""
    return taylor(e, t, order)[order] * math.factorial(order)
