"""Acceptance suite: one group of tests per criterion, each at its stated tolerance.

Randomized panels use fixed seeds so every run sees the same configurations.
"""

import cmath
import json
import math
import random

import pytest
from click.testing import CliRunner

from tsfrac.cli import main
from tsfrac.cpow import cpow
from tsfrac.errors import DegenerateDenominator, DomainError, PowUndefined
from tsfrac.expr import parse
from tsfrac.fracderiv import Method, alpha_lift, deriv, deriv_higher, hilger_derivative
from tsfrac.rules import Rule, check_rule, power_rule
from tsfrac.timescale import FiniteSet, HStep, Integers, QScale, Reals

SQ2, SQ3, SQ6 = math.sqrt(2), math.sqrt(3), math.sqrt(6)
Z, R = Integers(), Reals()


def crit(n, title):
    return pytest.mark.criterion(n, title)


def rel_err(got, want) -> float:
    return abs(complex(got) - complex(want)) / max(1.0, abs(want))


def principal(x: float, a: float) -> complex:
    # oracle power, via cmath only
    return 0j if x == 0 else cmath.exp(a * cmath.log(complex(x, 0.0)))


# random scattered configurations


def random_scale(rng: random.Random):
    kind = rng.randrange(4)
    if kind == 0:
        return Z
    if kind == 1:
        return HStep(rng.choice([0.1, 0.25, 0.5, 2.0, 3.0]), rng.choice([0.0, 0.05]))
    if kind == 2:
        return QScale(rng.choice([1.5, 2.0, 3.0]))
    pts = sorted(rng.sample(range(-40, 41), 6))
    return FiniteSet([p / 4 for p in pts])


def random_point(rng: random.Random, T, positive=False):
    if isinstance(T, QScale):
        return T.q ** rng.randint(-6, 6)
    if isinstance(T, FiniteSet):
        pts = [p for p in T.points_[:-1] if p > 0 or not positive]
        return rng.choice(pts) if pts else None
    if isinstance(T, HStep):
        k = rng.randint(1, 20) if positive else rng.randint(-20, 20)
        return T.locate(T.offset + k * T.h)
    return float(rng.randint(1, 20) if positive else rng.randint(-20, 20))


def random_function(rng: random.Random) -> str:
    c = [round(rng.uniform(-3, 3), 3) for _ in range(3)]
    shapes = [
        "({0}) + ({1})*t + ({2})*t^2",
        "({0}) + ({1})*t^3",
        "(t - ({0}))^2 + ({1})",
        "1/(t^2 + {3})",
        "({0})*t + ({1})",
        "(t + ({0}))^3 / 10",
    ]
    return rng.choice(shapes).format(*c, abs(c[2]) + 0.5)


def random_positive_function(rng: random.Random) -> str:
    # strictly positive for t > 0
    c = [round(rng.uniform(0.1, 3), 3) for _ in range(3)]
    shapes = [
        "{0} + {1}*t + {2}*t^2",
        "{0} + {1}*t^3",
        "(t - {0})^2 + {1}",
        "1/(t^2 + {2})",
        "{0}*t + {1}",
        "t^0.5 + {0}",
    ]
    return rng.choice(shapes).format(*c)


def scattered_configs(seed, limit, positive=False, fn=random_function):
    """Up to ``limit`` configurations; callers that skip some draw a larger limit."""
    rng = random.Random(seed)
    made = 0
    while made < limit:
        T = random_scale(rng)
        t = random_point(rng, T, positive)
        if t is None:
            continue
        made += 1
        yield fn(rng), T, t, round(rng.uniform(0.01, 1.0), 4)


# 1


@crit(1, "golden closed forms of the worked examples")
class TestGolden:
    @pytest.mark.parametrize(
        "T, t",
        [(Z, 3), (Z, -2), (R, 1.5), (R, -4), (HStep(0.5), 2), (FiniteSet([0, 2, 7]), 2), (FiniteSet([0, 2, 7]), 0)],
    )
    @pytest.mark.parametrize("lam", ["7", "-3", "0.25"])
    def test_constant(self, T, t, lam):
        assert deriv(lam, T, t, 0.5).value == 0

    @pytest.mark.parametrize("T, t", [(Z, 5), (Z, -3), (HStep(0.25), 1), (FiniteSet([0, 1, 4]), 1), (QScale(2), 8)])
    def test_identity_scattered(self, T, t):
        assert rel_err(deriv("t", T, t, 0.5).value, 1) <= 1e-12

    @pytest.mark.parametrize("t", [9.0, 2.0, 0.0, -3.0])
    def test_identity_dense(self, t):
        assert rel_err(deriv("t", R, t, 0.5).value, 1) <= 1e-6

    @pytest.mark.parametrize("t", [1, 2, 3, -3, -2])
    def test_reciprocal_on_integers(self, t):
        sig = t + 1
        assert t * sig > 0
        assert rel_err(deriv("1/t", Z, t, 0.5).value, -1 / math.sqrt(t * sig)) <= 1e-12

    @pytest.mark.parametrize("t", [1, 2, 5])
    def test_square_on_integers(self, t):
        assert rel_err(deriv("t^2", Z, t, 0.5).value, math.sqrt(t + 1) + math.sqrt(t)) <= 1e-12

    def test_square_dense(self):
        assert abs(deriv("t^2", R, 4, 0.5).value - 4) <= 1e-6

    def test_shifted_square_on_hz(self):
        h, c, a, t = 1.0, 3.0, 0.5, 2.0
        closed = (((t + h - c) ** 2) ** a - ((t - c) ** 2) ** a) / ((t + h) ** a - t**a)
        assert closed == pytest.approx(-(SQ3 + SQ2), rel=1e-15)
        assert rel_err(deriv("(t-3)^2", HStep(h), t, a).value, -(SQ3 + SQ2)) <= 1e-12

    def test_power_rule_cube(self):
        assert rel_err(power_rule(Z, 2, 0.5, 3), 5 + SQ6) <= 1e-12
        # the expanded form t^(2a) + (t sigma)^a + sigma^(2a)
        assert rel_err(power_rule(Z, 2, 0.5, 3), 2 + SQ6 + 3) <= 1e-12


# 2


@crit(2, "complex value of t^2 at t=-1 on Z")
class TestComplexValue:
    def test_direct_quotient(self):
        r = deriv("t^2", Z, -1, 0.5)
        assert r.method is Method.QuotientFormula
        assert abs(r.value.real) <= 1e-15
        assert abs(abs(r.value) - 1) <= 1e-15
        # oracle: the defining quotient with sigma = 0, powers from cmath
        oracle = (principal(0.0, 0.5) - principal(1.0, 0.5)) / (principal(0.0, 0.5) - principal(-1.0, 0.5))
        assert abs(r.value - oracle) <= 1e-15
        assert abs(r.value - (-1j)) <= 1e-15

    def test_closed_form_discrepancy(self):
        # the closed form sigma**a + t**a gives +i on the principal branch
        closed = cpow(0, 0.5) + cpow(-1, 0.5)
        assert abs(closed - 1j) <= 1e-15
        assert abs(deriv("t^2", Z, -1, 0.5).value - closed) == pytest.approx(2, abs=1e-15)


# 3


@crit(3, "increment identity at 500 scattered configurations")
def test_increment_identity():
    checked = residual = 0
    for src, T, t, a in scattered_configs(3, 2000):
        f = parse(src)
        try:
            d = deriv(f, T, t, a).value
            lhs = alpha_lift(f, T.sigma(t), a)
            base = alpha_lift(f, t, a)
        except (DomainError, DegenerateDenominator, PowUndefined):
            continue
        rhs = base + (cpow(T.sigma(t), a) - cpow(t, a)) * d
        scale = max(1.0, abs(lhs), abs(base))
        residual = max(residual, abs(lhs - rhs) / scale)
        checked += 1
        if checked == 500:
            break
    assert checked == 500
    assert residual <= 1e-12, residual


@crit(3, "increment identity at 500 scattered configurations")
def test_increment_identity_at_dense_points():
    r = check_rule(Rule.Increment, R, [0.0, 1.0, 4.0], 0.5, f="(t^2)^0.5")
    assert r.max_residual == 0 and len(r.points) == 3


# 4


def _rule_panel(rule, seed, needed=200):
    rng = random.Random(seed)
    points = skips = 0
    worst = 0.0
    while points < needed:
        T = random_scale(rng)
        t = random_point(rng, T)
        if t is None:
            continue
        f, g = random_function(rng), random_function(rng)
        lam = round(rng.uniform(-3, 3), 3)
        rep = check_rule(rule, T, [t], round(rng.uniform(0.01, 1.0), 4), f=f, g=g, lam=lam)
        skips += rep.domain_skips
        for p in rep.points:
            worst = max(worst, p.residual / max(1.0, abs(p.lhs)))
            points += 1
    return points, skips, worst


@crit(4, "product, reciprocal, quotient and constant-multiple rules on 200 configurations each")
@pytest.mark.parametrize("rule, seed", [(Rule.Product, 41), (Rule.Reciprocal, 42), (Rule.Quotient, 43), (Rule.ConstantMultiple, 44)])
def test_rule_panel(rule, seed):
    points, skips, worst = _rule_panel(rule, seed)
    print(f"{rule.value}: {points} points, {skips} domain skips, max relative residual {worst:.3g}")
    assert worst <= 1e-9


# 5


@crit(5, "power rule against the direct derivative, and its recurrence")
@pytest.mark.parametrize("m", range(1, 7))
def test_power_rule_direct(m):
    worst = 0.0
    for _, T, t, a in scattered_configs(50 + m, 60, positive=True):
        got = power_rule(T, t, a, m)
        want = deriv(f"t^{m}", T, t, a).value
        worst = max(worst, abs(got - want) / (1 + abs(want)))
    assert worst <= 1e-10


@crit(5, "power rule against the direct derivative, and its recurrence")
def test_power_rule_recurrence():
    rng = random.Random(5)
    for _ in range(300):
        T = random_scale(rng)
        t = random_point(rng, T)
        if t is None:
            continue
        a = round(rng.uniform(0.01, 1.0), 4)
        sig = T.sigma(t)
        for m in range(1, 6):
            nxt = power_rule(T, t, a, m + 1)
            step = cpow(t, a) ** m + cpow(sig, a) * power_rule(T, t, a, m)
            assert abs(nxt - step) <= 1e-12 * (1 + abs(nxt)), (T, t, a, m)


# 6


@crit(6, "sum rule counterexample")
@pytest.mark.parametrize("T, t", [(Z, 1), (Z, 7), (HStep(0.5), 3), (QScale(2), 4), (R, 2.0)])
def test_sum_counterexample(T, t):
    expected = abs(SQ3 - (1 + SQ2))
    r = check_rule(Rule.SumCounterexample, T, [t], 0.5, f="t", g="2*t")
    p = r.points[0]
    tol = 1e-12 if T is not R else 1e-7
    assert abs(p.lhs - SQ3) <= tol
    assert abs(p.rhs - (1 + SQ2)) <= tol
    assert abs(p.residual - expected) <= tol


# 7


@crit(7, "dense estimator on R against m t^(a(m-1)) within 40 probes")
@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
@pytest.mark.parametrize("t", [1.0, 4.0, 9.0])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_dense_power(m, alpha, t):
    r = deriv(f"t^{m}", R, t, alpha)
    want = m * t ** (alpha * (m - 1))
    assert r.method is Method.NumericLimit
    assert abs(r.value - want) <= 1e-6 * max(1.0, want)
    assert r.diagnostics.probes_used <= 40


# 8


@crit(8, "order one reduces to the Hilger derivative on 200 configurations")
def test_alpha_one():
    checked = 0
    for src, T, t, _ in scattered_configs(8, 1000):
        f = parse(src)
        try:
            got = deriv(f, T, t, 1.0).value
            forward = (f(T.sigma(t)) - f(t)) / T.graininess(t)
        except (DomainError, DegenerateDenominator):
            continue
        assert abs(got - forward) <= 1e-10 * (1 + abs(forward))
        assert abs(got - hilger_derivative(f, T, t)) <= 1e-10 * (1 + abs(forward))
        checked += 1
        if checked == 200:
            break
    assert checked == 200


@crit(8, "order one reduces to the Hilger derivative on 200 configurations")
@pytest.mark.parametrize("t", [-4.0, 0.0, 3.0])
def test_alpha_one_square(t):
    assert deriv("t^2", Z, t, 1).value == t + (t + 1)


# 9


@crit(9, "higher orders")
def test_higher_order_continuum():
    assert abs(deriv_higher("t^3", R, 3, 1.5).value - 6) <= 1e-5


@crit(9, "higher orders")
def test_higher_order_integers():
    f = parse("t^2")
    second_difference = f(6) - 2 * f(5) + f(4)
    assert second_difference == 2
    assert abs(deriv_higher(f, Z, 4, 2.0).value - second_difference) <= 1e-10


# 10


def _cli(*args):
    return CliRunner().invoke(main, list(args))


@crit(10, "CLI examples, exit codes and byte-stable output")
class TestCli:
    def test_scattered_deriv(self):
        r = _cli("deriv", "--scale", "Z", "--f", "t^2", "--alpha", "0.5", "--t", "3")
        assert r.exit_code == 0
        rec = json.loads(r.stdout)
        assert abs(rec["value_re"] - (SQ3 + 2)) <= 1e-12 and rec["value_im"] == 0
        assert rec["method"] == "QuotientFormula"

    def test_dense_deriv(self):
        r = _cli("deriv", "--scale", "R", "--f", "t^2", "--alpha", "0.5", "--t", "4")
        rec = json.loads(r.stdout)
        assert r.exit_code == 0 and abs(rec["value_re"] - 4) <= 1e-6 and rec["method"] == "NumericLimit"

    def test_not_in_kappa(self):
        r = _cli("deriv", "--scale", "{0,1,4}", "--f", "t", "--alpha", "0.5", "--t", "4")
        assert r.exit_code == 2 and "point not in T^κ" in r.stderr

    def test_sum_counterexample(self):
        args = ("check", "--rule", "sum-counterexample", "--scale", "Z", "--f", "t", "--g", "2*t",
                "--alpha", "0.5", "--points", "1")
        first = _cli(*args)
        assert first.exit_code == 0
        assert abs(json.loads(first.stdout)["max_residual"] - abs(SQ3 - 1 - SQ2)) <= 1e-12
        assert all(_cli(*args).stdout == first.stdout for _ in range(2))

    def test_numeric_error_exit(self):
        assert _cli("deriv", "--scale", "Z", "--f", "1/t", "--alpha", "0.5", "--t", "0").exit_code == 3

    def test_byte_stable(self):
        args = ("deriv", "--scale", "R", "--f", "t^2", "--alpha", "0.5", "--t", "4")
        assert len({_cli(*args).stdout for _ in range(3)}) == 1
