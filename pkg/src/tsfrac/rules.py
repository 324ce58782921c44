"""Closed-form calculus rules for the fractional delta derivative, and a checker.

Each ``*_rhs`` function evaluates the right-hand side of one rule: constant
multiple, product, reciprocal, quotient, and the power rule for ``t**m``.
:func:`check_rule` compares it with the derivative of the composite function
computed directly, point by point.

The rules rest on real-power laws such as ``(f*g)**a == f**a * g**a``. On the
principal branch those laws only hold under sign conditions, so every rule
has a validity domain. Points outside it are counted as ``domain_skips``
rather than reported as failures.
"""

from __future__ import annotations

import enum
import json
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field

from tsfrac.cpow import cpow, cpow_c
from tsfrac.errors import DomainError, InputError, InvalidArgument, PowUndefined, ZeroAtPoint
from tsfrac.expr import BinOp, Expr, Num, Pow, Var
from tsfrac.fracderiv import DerivConfig, _eval, _kappa_point, alpha_lift, as_function, deriv
from tsfrac.timescale import TimeScale


class Rule(enum.Enum):
    ConstantMultiple = "ConstantMultiple"
    Product = "Product"
    Reciprocal = "Reciprocal"
    Quotient = "Quotient"
    Power = "Power"
    SumCounterexample = "SumCounterexample"
    Increment = "Increment"

    @classmethod
    def named(cls, name: "Rule | str") -> "Rule":
        """Accept a member, its value, or a kebab-case name such as ``"sum-counterexample"``."""
        if isinstance(name, cls):
            return name
        key = str(name).replace("-", "").replace("_", "").lower()
        for rule in cls:
            if rule.value.lower() == key:
                return rule
        raise InvalidArgument(f"unknown rule {name!r}")


@dataclass(frozen=True)
class RulePoint:
    t: float
    lhs: complex
    rhs: complex

    @property
    def residual(self) -> float:
        return abs(self.lhs - self.rhs)


@dataclass
class RuleReport:
    rule: Rule
    points: list[RulePoint] = field(default_factory=list)
    domain_skips: int = 0

    @property
    def max_residual(self) -> float:
        return max((p.residual for p in self.points), default=0.0)

    def to_dict(self) -> dict:
        def c(z: complex) -> dict:
            return {"re": _clean(z.real), "im": _clean(z.imag)}

        return {
            "rule": self.rule.value,
            "points": [
                {"t": p.t, "lhs": c(p.lhs), "rhs": c(p.rhs), "residual": p.residual}
                for p in self.points
            ],
            "max_residual": self.max_residual,
            "domain_skips": self.domain_skips,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def _clean(x: float) -> float:
    # -0.0 would make otherwise identical outputs differ byte-wise
    return 0.0 if x == 0 else x


def _combine(op: str, f, g):
    """Composite ``f op g``, kept as an expression tree when both sides are."""
    if isinstance(f, (int, float)):
        f = Num(float(f))
    if isinstance(f, Expr) and isinstance(g, Expr):
        return BinOp(op, f, g)
    f, g = as_function(f), as_function(g)
    ops: dict[str, Callable[[float, float], float]] = {
        "+": lambda a, b: a + b,
        "*": lambda a, b: a * b,
        "/": lambda a, b: a / b,
    }
    return lambda s: ops[op](f(s), g(s))


def _d(f, T, t, alpha, cfg) -> complex:
    return deriv(f, T, t, alpha, cfg).value


def constant_multiple_rhs(f, lam: float, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> complex:
    """``lam**alpha * f'(t)``; exact on the principal branch for ``lam > 0``."""
    return cpow(lam, alpha) * _d(f, T, t, alpha, cfg)


def product_rhs(f, g, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> tuple[complex, complex]:
    """Both forms of the product rule.

    ``f'(t) g(t)**a + f(sigma)**a g'(t)`` and ``f'(t) g(sigma)**a + f(t)**a g'(t)``.
    """
    sig = T.sigma(t)
    df, dg = _d(f, T, t, alpha, cfg), _d(g, T, t, alpha, cfg)
    first = df * alpha_lift(g, t, alpha) + alpha_lift(f, sig, alpha) * dg
    second = df * alpha_lift(g, sig, alpha) + alpha_lift(f, t, alpha) * dg
    return first, second


def _nonzero_at(f, T: TimeScale, t: float) -> tuple[float, float]:
    f = as_function(f)
    sig = T.sigma(t)
    ft, fs = _eval(f, t), _eval(f, sig)
    if ft * fs == 0:
        raise ZeroAtPoint(f"function vanishes at t={t!r} or sigma(t)={sig!r}")
    return ft, fs


def reciprocal_rhs(f, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> complex:
    """``-f'(t) / (f(sigma)**a * f(t)**a)``; needs ``f(t) f(sigma) != 0``."""
    ft, fs = _nonzero_at(f, T, t)
    return -_d(f, T, t, alpha, cfg) / (cpow(fs, alpha) * cpow(ft, alpha))


def quotient_rhs(f, g, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> complex:
    gt, gs = _nonzero_at(g, T, t)
    df, dg = _d(f, T, t, alpha, cfg), _d(g, T, t, alpha, cfg)
    num = df * cpow(gt, alpha) - alpha_lift(f, t, alpha) * dg
    return num / (cpow(gs, alpha) * cpow(gt, alpha))


def power_rule(T: TimeScale, t: float, alpha: float, m: int) -> complex:
    """``sum_k (t**a)**(m-k-1) * (sigma**a)**k`` for ``k = 0 .. m-1``."""
    if m < 1 or int(m) != m:
        raise InvalidArgument(f"power rule needs an integer m >= 1, got {m!r}")
    t = _kappa_point(T, t)
    a, b = cpow(t, alpha), cpow(T.sigma(t), alpha)

    def ipow(z: complex, n: int) -> complex:
        # z**0 is the empty product even for z == 0
        return complex(1.0) if n == 0 else cpow_c(z, n)

    return sum(ipow(a, m - k - 1) * ipow(b, k) for k in range(int(m)))


# Sign conditions under which the rule's real-power law survives the
# principal branch. Arguments are the function values at one point.


def _product_ok(fv: float, gv: float) -> bool:
    return not (fv < 0 and gv < 0)


def _quotient_ok(fv: float, gv: float) -> bool:
    return gv != 0 and not (fv > 0 and gv < 0)


def _power(m: int) -> Expr:
    return Pow(Var(), float(m))


def check_rule(
    rule: Rule | str,
    T: TimeScale,
    points: Iterable[float],
    alpha: float,
    f=None,
    g=None,
    lam: float | None = None,
    m: int | None = None,
    cfg: DerivConfig | None = None,
) -> RuleReport:
    """Evaluate one rule at each point; lhs is always the direct derivative of the composite."""
    rule = Rule.named(rule)
    points = list(points)
    if not points:
        raise InvalidArgument("check_rule needs at least one point")
    needs = {
        Rule.ConstantMultiple: ("f", "lam"),
        Rule.Product: ("f", "g"),
        Rule.Reciprocal: ("f",),
        Rule.Quotient: ("f", "g"),
        Rule.Power: ("m",),
        Rule.SumCounterexample: ("f", "g"),
        Rule.Increment: ("f",),
    }[rule]
    given = {"f": f, "g": g, "lam": lam, "m": m}
    missing = [k for k in needs if given[k] is None]
    if missing:
        raise InvalidArgument(f"rule {rule.value} needs {', '.join(missing)}")
    f = as_function(f) if f is not None else None
    g = as_function(g) if g is not None else None

    report = RuleReport(rule)
    for t in points:
        try:
            pair = _check_point(rule, T, float(t), alpha, f, g, lam, m, cfg)
        except (InputError, DomainError, PowUndefined):
            report.domain_skips += 1
            continue
        if pair is None:
            report.domain_skips += 1
        else:
            report.points.append(RulePoint(T.locate(t), *pair))
    return report


def _check_point(rule, T, t, alpha, f, g, lam, m, cfg) -> tuple[complex, complex] | None:
    t = T.locate(t)
    sig = T.sigma(t)
    if rule is Rule.ConstantMultiple:
        if not lam > 0:
            return None
        return _d(_combine("*", lam, f), T, t, alpha, cfg), constant_multiple_rhs(f, lam, T, t, alpha, cfg)
    if rule is Rule.Product:
        if not all(_product_ok(_eval(f, x), _eval(g, x)) for x in (t, sig)):
            return None
        return _d(_combine("*", f, g), T, t, alpha, cfg), product_rhs(f, g, T, t, alpha, cfg)[0]
    if rule is Rule.Reciprocal:
        ft, fs = _nonzero_at(f, T, t)
        if not (ft > 0 and fs > 0):
            return None
        return _d(_combine("/", 1.0, f), T, t, alpha, cfg), reciprocal_rhs(f, T, t, alpha, cfg)
    if rule is Rule.Quotient:
        _nonzero_at(g, T, t)
        if not all(_quotient_ok(_eval(f, x), _eval(g, x)) for x in (t, sig)):
            return None
        return _d(_combine("/", f, g), T, t, alpha, cfg), quotient_rhs(f, g, T, t, alpha, cfg)
    if rule is Rule.Power:
        if t < 0 or sig < 0:
            return None
        return _d(_power(m), T, t, alpha, cfg), power_rule(T, t, alpha, m)
    if rule is Rule.SumCounterexample:
        lhs = _d(_combine("+", f, g), T, t, alpha, cfg)
        return lhs, _d(f, T, t, alpha, cfg) + _d(g, T, t, alpha, cfg)
    if rule is Rule.Increment:
        lhs = alpha_lift(f, sig, alpha)
        if sig == t:
            # the increment factor vanishes; no derivative is needed (or divided by)
            return lhs, alpha_lift(f, t, alpha)
        step = cpow(sig, alpha) - cpow(t, alpha)
        return lhs, alpha_lift(f, t, alpha) + step * _d(f, T, t, alpha, cfg)
    raise AssertionError(rule)
