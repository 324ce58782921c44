"""Command-line front end: ``tsfrac deriv | table | check``.

Exit codes: 0 success, 1 rule check failed, 2 input error, 3 numeric error.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

import click

from tsfrac.errors import InputError, InvalidArgument, TsfracError
from tsfrac.expr import parse
from tsfrac.fracderiv import DerivConfig, deriv, deriv_higher
from tsfrac.rules import Rule, check_rule
from tsfrac.timescale import TimeScale, parse_scale

EXIT_CHECK_FAILED = 1
EXIT_INPUT = 2
EXIT_NUMERIC = 3

CSV_HEADER = ["t", "sigma", "mu", "class", "alpha", "re", "im", "method"]

RULES = {
    "constant-multiple": Rule.ConstantMultiple,
    "product": Rule.Product,
    "reciprocal": Rule.Reciprocal,
    "quotient": Rule.Quotient,
    "power": Rule.Power,
    "sum-counterexample": Rule.SumCounterexample,
    "increment": Rule.Increment,
}


def _num(x: float | None) -> float | None:
    if x is None:
        return None
    return 0.0 if x == 0 else float(x)


@dataclass
class OutputRecord:
    t: float
    sigma_t: float
    mu_t: float
    classification: str
    alpha: float
    value_re: float | None
    value_im: float | None
    method: str | None
    residual: float | None

    def to_dict(self) -> dict:
        return {k: _num(v) if isinstance(v, float) else v for k, v in asdict(self).items()}

    def csv_row(self) -> list[str]:
        def cell(x):
            return "" if x is None else repr(_num(x)) if isinstance(x, float) else str(x)

        return [
            cell(self.t),
            cell(self.sigma_t),
            cell(self.mu_t),
            self.classification,
            cell(self.alpha),
            cell(self.value_re),
            cell(self.value_im),
            cell(self.method),
        ]


def _fail(exc: TsfracError) -> None:
    click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
    sys.exit(EXIT_INPUT if isinstance(exc, InputError) else EXIT_NUMERIC)


def _config(tol: float | None, h0: float | None) -> DerivConfig:
    overrides = {k: v for k, v in (("tol", tol), ("h0", h0)) if v is not None}
    return DerivConfig(**overrides)


def _evaluate(T: TimeScale, f, t: float, alpha: float, order_n: bool, cfg: DerivConfig) -> OutputRecord:
    if alpha > 1 and not order_n:
        raise InvalidArgument(f"order {alpha!r} > 1 needs --order-n")
    compute = deriv_higher if order_n else deriv
    result = compute(f, T, t, alpha, cfg)
    t = T.locate(t)
    return OutputRecord(
        t=t,
        sigma_t=T.sigma(t),
        mu_t=T.graininess(t),
        classification=result.classification.label,
        alpha=alpha,
        value_re=result.value.real,
        value_im=result.value.imag,
        method=result.method.value,
        residual=result.diagnostics.last_residual,
    )


def _error_record(T: TimeScale, t: float, alpha: float, exc: TsfracError) -> OutputRecord:
    t = T.locate(t)
    return OutputRecord(
        t=t,
        sigma_t=T.sigma(t),
        mu_t=T.graininess(t),
        classification=f"{T.classify(t).label};error={type(exc).__name__}",
        alpha=alpha,
        value_re=None,
        value_im=None,
        method=None,
        residual=None,
    )


def _common(func):
    options = [
        click.option("--scale", "scale", required=True, help='Time scale, e.g. "Z", "hZ:0.5", "[0,1]u{2}".'),
        click.option("--alpha", type=float, required=True, help="Order of the derivative."),
        click.option("--tol", type=float, default=None, help="Limit convergence tolerance."),
        click.option("--h0", type=float, default=None, help="Initial probe step for dense points."),
    ]
    for opt in reversed(options):
        func = opt(func)
    return func


_order_n = click.option(
    "--order-n", is_flag=True, help="Allow orders above 1 (integer-order steps, then a fractional one)."
)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Complex-valued fractional delta derivatives on time scales."""


@main.command("deriv")
@_common
@_order_n
@click.option("--f", "f_src", required=True, help='Function of t, e.g. "t^2".')
@click.option("--t", "t", type=float, required=True, help="Evaluation point.")
def cmd_deriv(scale, alpha, tol, h0, order_n, f_src, t):
    """Derivative at one point, as one JSON object."""
    try:
        T = parse_scale(scale)
        rec = _evaluate(T, parse(f_src), t, alpha, order_n, _config(tol, h0))
    except TsfracError as exc:
        _fail(exc)
    click.echo(json.dumps(rec.to_dict()))


@main.command("table")
@_common
@_order_n
@click.option("--f", "f_src", required=True, help="Function of t.")
@click.option("--from", "lo", type=float, required=True)
@click.option("--to", "hi", type=float, required=True)
@click.option("--step", type=float, default=None, help="Grid step for continua; ignored for discrete scales.")
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
def cmd_table(scale, alpha, tol, h0, order_n, f_src, lo, hi, step, fmt):
    """Derivative at every point of the scale in [from, to]."""
    try:
        T = parse_scale(scale)
        f = parse(f_src)
        cfg = _config(tol, h0)
        pts = T.points(lo, hi, step) if lo <= hi else []
        if not pts:
            raise InvalidArgument(f"no points of {T} in [{lo}, {hi}]")
    except TsfracError as exc:
        _fail(exc)

    records = []
    for t in pts:
        try:
            records.append(_evaluate(T, f, t, alpha, order_n, cfg))
        except TsfracError as exc:
            records.append(_error_record(T, t, alpha, exc))

    if fmt == "json":
        click.echo(json.dumps([r.to_dict() for r in records]))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        writer.writerows(r.csv_row() for r in records)
        click.echo(buf.getvalue(), nl=False)
    if not any(r.method is not None for r in records):
        sys.exit(EXIT_NUMERIC)


def _points(spec: str) -> list[float]:
    try:
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError:
        raise click.BadParameter(f"not a comma-separated list of numbers: {spec!r}", param_hint="--points")


@main.command("check")
@_common
@click.option("--rule", "rule_name", type=click.Choice(list(RULES)), required=True)
@click.option("--f", "f_src", default=None, help="First function of t.")
@click.option("--g", "g_src", default=None, help="Second function of t.")
@click.option("--lambda", "lam", type=float, default=None, help="Constant for constant-multiple.")
@click.option("--m", type=int, default=None, help="Exponent for the power rule.")
@click.option("--points", "points_src", default=None, help='Comma-separated points, e.g. "1,2,3".')
@click.option("--from", "lo", type=float, default=None)
@click.option("--to", "hi", type=float, default=None)
@click.option("--step", type=float, default=None)
@click.option("--pass-tol", type=float, default=1e-8, show_default=True)
def cmd_check(scale, alpha, tol, h0, rule_name, f_src, g_src, lam, m, points_src, lo, hi, step, pass_tol):
    """Check a calculus rule against direct derivatives; prints a JSON report."""
    rule = RULES[rule_name]
    try:
        T = parse_scale(scale)
        if points_src is not None:
            pts = _points(points_src)
        elif lo is not None and hi is not None:
            pts = T.points(lo, hi, step)
        else:
            raise InvalidArgument("give --points or both --from and --to")
        report = check_rule(
            rule,
            T,
            pts,
            alpha,
            f=parse(f_src) if f_src is not None else None,
            g=parse(g_src) if g_src is not None else None,
            lam=lam,
            m=m,
            cfg=_config(tol, h0),
        )
    except TsfracError as exc:
        _fail(exc)
    click.echo(report.to_json())
    if rule is Rule.SumCounterexample:
        ok = bool(report.points) and all(p.residual > 0.5 for p in report.points)
    else:
        ok = report.max_residual <= pass_tol
    if not ok:
        sys.exit(EXIT_CHECK_FAILED)


if __name__ == "__main__":
    main()
