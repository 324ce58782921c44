"""Complex-valued fractional delta derivatives on time scales.

For ``0 < alpha <= 1`` the derivative of ``f`` at a right-scattered point is
the closed quotient

    (f(sigma)**alpha - f(t)**alpha) / (sigma**alpha - t**alpha)

and at a right-dense point it is the limit of

    (f(t)**alpha - f(s)**alpha) / (t**alpha - s**alpha)

as ``s`` approaches ``t`` through the scale. All powers are principal-branch
complex powers (:func:`tsfrac.cpow.cpow`), so the result is complex in general.
Orders above one compose integer-order delta derivatives with a final
fractional stage (:func:`deriv_higher`).
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable
from dataclasses import dataclass, field

from tsfrac.cpow import MP, cpow, cpow_c, cpow_mp
from tsfrac.errors import (
    DegenerateDenominator,
    DomainError,
    HigherOrderUnavailable,
    InvalidArgument,
    LimitNotConverged,
    NoApproachDirection,
    NoPointOnSide,
    NotInKappa,
    SideDisagreement,
    TsfracError,
)
from tsfrac.expr import Expr, derivative, evaluate, parse
from tsfrac.timescale import Direction, PointClass, TimeScale

RealFunction = Callable[[float], float]


class Method(enum.Enum):
    QuotientFormula = "QuotientFormula"
    NumericLimit = "NumericLimit"
    HigherOrderComposition = "HigherOrderComposition"


@dataclass(frozen=True)
class DerivConfig:
    """Tolerances of the right-dense limit estimator.

    ``h0=None`` starts probing at ``1e-2 * max(1, |t|)``. Convergence needs two
    consecutive probe-to-probe changes below ``tol * (1 + |q|)``.
    """

    tol: float = 1e-8
    h0: float | None = None
    max_halvings: int = 40
    agreement_tol: float = 1e-6
    denom_floor: float = 1e-300

    def __post_init__(self):
        for name in ("tol", "agreement_tol", "denom_floor"):
            if not getattr(self, name) > 0:
                raise InvalidArgument(f"{name} must be positive")
        if self.h0 is not None and not self.h0 > 0:
            raise InvalidArgument("h0 must be positive")
        if self.max_halvings < 4:
            raise InvalidArgument("max_halvings must be at least 4")

    def initial_step(self, t: float) -> float:
        return self.h0 if self.h0 is not None else 1e-2 * max(1.0, abs(t))


@dataclass(frozen=True)
class Diagnostics:
    probes_used: int = 0
    #: final probe-to-probe change divided by (1 + |value|); None when no limit was taken
    last_residual: float | None = None
    sides_probed: tuple[Direction, ...] = ()


@dataclass(frozen=True)
class DerivResult:
    value: complex
    classification: PointClass
    method: Method
    diagnostics: Diagnostics = field(default_factory=Diagnostics)


def as_function(f) -> RealFunction:
    """Accept an :class:`Expr`, an expression string, or any real callable."""
    if isinstance(f, str):
        return parse(f)
    if not callable(f):
        raise InvalidArgument(f"not a function: {f!r}")
    return f


def _eval(f: RealFunction, s: float) -> float | complex:
    try:
        y = f(s)
    except TsfracError:
        raise
    except (ZeroDivisionError, ValueError, OverflowError, ArithmeticError) as exc:
        raise DomainError(f"f({s!r}): {exc}") from None
    if isinstance(y, complex):
        ok = math.isfinite(y.real) and math.isfinite(y.imag)
    else:
        y = float(y)
        ok = math.isfinite(y)
    if not ok:
        raise DomainError(f"f({s!r}) is not finite")
    return y


def _mp_evaluator(f) -> Callable | None:
    """Extended-precision evaluator of ``f`` if one is available."""
    if isinstance(f, Expr):
        return lambda x: evaluate(f, x)
    return getattr(f, "mp_eval", None)


def _eval_mp(f_mp: Callable, s: float):
    try:
        y = f_mp(MP.mpf(s))
    except TsfracError:
        raise
    except (ZeroDivisionError, ValueError, ArithmeticError) as exc:
        raise DomainError(f"f({s!r}): {exc}") from None
    if not MP.isfinite(y):
        raise DomainError(f"f({s!r}) is not finite")
    return y


def alpha_lift(f, s: float, alpha: float) -> complex:
    """``f(s)**alpha`` on the principal branch."""
    return cpow_c(_eval(as_function(f), s), alpha)


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if not (0 < alpha <= 1):
        raise InvalidArgument(f"order must lie in (0, 1], got {alpha!r}; see deriv_higher")
    return alpha


def _kappa_point(T: TimeScale, t: float) -> float:
    t = T.locate(t)
    if not T.in_kappa(t):
        raise NotInKappa(f"point not in T^κ: t={t!r} is a left-scattered maximum of {T}")
    return t


def _quotient(num: complex, den: complex, floor: float) -> complex:
    if abs(den) < floor:
        raise DegenerateDenominator(f"|denominator| = {abs(den)!r} below {floor!r}")
    value = num / den
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise DegenerateDenominator("quotient is not finite")
    return value


def _limit(
    quotient: Callable[[float], complex],
    T: TimeScale,
    t: float,
    cfg: DerivConfig,
) -> tuple[complex, Diagnostics]:
    """Limit of ``quotient(s)`` as ``s -> t`` through ``T``, from every side that has points."""
    sides = sorted(T.approach_directions(t), key=lambda d: d.value)
    if not sides:
        raise NoApproachDirection(f"no points of {T} accumulate at t={t!r}")
    h0 = cfg.initial_step(t)
    limits: list[complex] = []
    probes = 0
    worst = 0.0
    for side in sides:
        prev_s = prev_q = None
        streak = 0
        residual = math.inf
        for k in range(cfg.max_halvings):
            try:
                s = T.sample_toward(t, side, h0 * 0.5**k)
            except NoPointOnSide:
                continue
            # a repeated probe point would fake convergence
            if s == prev_s:
                continue
            q = quotient(s)
            probes += 1
            if prev_q is not None:
                residual = abs(q - prev_q) / (1 + abs(q))
                streak = streak + 1 if residual <= cfg.tol else 0
                if streak >= 2:
                    break
            prev_s, prev_q = s, q
        else:
            raise LimitNotConverged(
                f"limit at t={t!r} from the {side.value} did not settle within "
                f"{cfg.max_halvings} halvings (last relative change {residual:.3g})"
            )
        limits.append(q)
        worst = max(worst, residual)
    value = sum(limits) / len(limits)
    spread = max(abs(a - b) for a in limits for b in limits)
    if spread > cfg.agreement_tol * (1 + abs(value)):
        raise SideDisagreement(f"one-sided limits at t={t!r} differ: {limits}")
    return value, Diagnostics(probes, worst, tuple(sides))


def deriv_scattered(f, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> DerivResult:
    cfg = cfg or DerivConfig()
    f = as_function(f)
    alpha = _check_order(alpha)
    t = _kappa_point(T, t)
    sig = T.sigma(t)
    if not sig > t:
        raise InvalidArgument(f"t={t!r} is right-dense in {T}; use deriv_dense")
    num = cpow_c(_eval(f, sig), alpha) - cpow_c(_eval(f, t), alpha)
    den = cpow(sig, alpha) - cpow(t, alpha)
    value = _quotient(num, den, cfg.denom_floor)
    return DerivResult(value, T.classify(t), Method.QuotientFormula)


def deriv_dense(f, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> DerivResult:
    cfg = cfg or DerivConfig()
    f = as_function(f)
    alpha = _check_order(alpha)
    t = _kappa_point(T, t)
    if T.sigma(t) != t:
        raise InvalidArgument(f"t={t!r} is right-scattered in {T}; use deriv_scattered")
    f_mp = _mp_evaluator(f)
    if f_mp is None:
        lifted_t = cpow_c(_eval(f, t), alpha)
        t_pow = cpow(t, alpha)

        def quotient(s: float) -> complex:
            num = lifted_t - cpow_c(_eval(f, s), alpha)
            return _quotient(num, t_pow - cpow(s, alpha), cfg.denom_floor)

    else:
        # the probe quotient cancels catastrophically in double precision
        lifted_t_mp = cpow_mp(_eval_mp(f_mp, t), alpha)
        t_pow_mp = cpow_mp(t, alpha)

        def quotient(s: float) -> complex:
            num = lifted_t_mp - cpow_mp(_eval_mp(f_mp, s), alpha)
            den = t_pow_mp - cpow_mp(s, alpha)
            if abs(den) < cfg.denom_floor:
                raise DegenerateDenominator(f"|denominator| = {float(abs(den))!r} below {cfg.denom_floor!r}")
            return _quotient(complex(num / den), 1.0, cfg.denom_floor)

    value, diag = _limit(quotient, T, t, cfg)
    return DerivResult(value, T.classify(t), Method.NumericLimit, diag)


def deriv(f, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> DerivResult:
    """Fractional delta derivative of order ``alpha`` in (0, 1] of ``f`` at ``t``."""
    t = _kappa_point(T, t)
    if T.sigma(t) > t:
        return deriv_scattered(f, T, t, alpha, cfg)
    return deriv_dense(f, T, t, alpha, cfg)


def _hilger_n(f: RealFunction, T: TimeScale, s: float, n: int, cfg: DerivConfig) -> float:
    if n == 0:
        return _eval(f, s)
    s = T.locate(s)
    if not T.in_kappa(s):
        raise HigherOrderUnavailable(
            f"order-{n} delta derivative needs t={s!r} in T^κ of {T}, but it is a left-scattered maximum"
        )
    sig = T.sigma(s)
    if sig > s:
        return (_hilger_n(f, T, sig, n - 1, cfg) - _hilger_n(f, T, s, n - 1, cfg)) / T.graininess(s)
    if isinstance(f, Expr) and T.in_interval(s):
        # inside a continuum the delta derivative is the classical one
        return derivative(f, s, n)
    g_s = _hilger_n(f, T, s, n - 1, cfg)
    value, _ = _limit(lambda u: complex((g_s - _hilger_n(f, T, u, n - 1, cfg)) / (s - u)), T, s, cfg)
    return value.real


class _IteratedDelta:
    """``s -> f^(Delta^n)(s)``, with an extended-precision path inside continua."""

    def __init__(self, f: RealFunction, T: TimeScale, n: int, cfg: DerivConfig):
        self.f, self.T, self.n, self.cfg = f, T, n, cfg
        self.mp_eval = self._mp if isinstance(f, Expr) else None

    def __call__(self, s: float) -> float:
        return _hilger_n(self.f, self.T, s, self.n, self.cfg)

    def _mp(self, x):
        s = self.T.locate(float(x))
        if self.n == 0:
            return evaluate(self.f, x)
        if self.T.in_interval(s) and self.T.sigma(s) == s and self.T.in_kappa(s):
            return derivative(self.f, x, self.n)
        return MP.mpf(self(s))


def hilger_derivative(f, T: TimeScale, t: float, order: int = 1, cfg: DerivConfig | None = None) -> float:
    """Ordinary (integer-order) delta derivative of a real function."""
    if order < 0:
        raise InvalidArgument("order must be nonnegative")
    return _hilger_n(as_function(f), T, T.locate(t), order, cfg or DerivConfig())


def deriv_higher(f, T: TimeScale, t: float, alpha: float, cfg: DerivConfig | None = None) -> DerivResult:
    """Order ``alpha > 0``: ``N = ceil(alpha) - 1`` delta derivatives, then order ``alpha - N``."""
    cfg = cfg or DerivConfig()
    f = as_function(f)
    alpha = float(alpha)
    if not (alpha > 0 and math.isfinite(alpha)):
        raise InvalidArgument(f"order must be positive, got {alpha!r}")
    n = math.ceil(alpha) - 1
    rest = alpha - n
    t = _kappa_point(T, t)
    if rest == 1:
        value = complex(_hilger_n(f, T, t, n + 1, cfg))
        return DerivResult(value, T.classify(t), Method.HigherOrderComposition)

    inner = deriv(_IteratedDelta(f, T, n, cfg), T, t, rest, cfg)
    return DerivResult(inner.value, inner.classification, Method.HigherOrderComposition, inner.diagnostics)
