"""Complex-valued fractional delta derivatives on time scales."""

from tsfrac.cpow import cpow, cpow_c
from tsfrac.errors import InputError, NumericError, TsfracError
from tsfrac.expr import Expr, parse
from tsfrac.fracderiv import (
    DerivConfig,
    DerivResult,
    Method,
    alpha_lift,
    deriv,
    deriv_dense,
    deriv_higher,
    deriv_scattered,
    hilger_derivative,
)
from tsfrac.rules import (
    Rule,
    RuleReport,
    check_rule,
    constant_multiple_rhs,
    power_rule,
    product_rhs,
    quotient_rhs,
    reciprocal_rhs,
)
from tsfrac.timescale import (
    Direction,
    FiniteSet,
    HStep,
    Integers,
    IntervalUnion,
    PointClass,
    QScale,
    Reals,
    TimeScale,
    parse_scale,
)

__all__ = [
    "DerivConfig",
    "DerivResult",
    "Direction",
    "Expr",
    "FiniteSet",
    "HStep",
    "InputError",
    "Integers",
    "IntervalUnion",
    "Method",
    "NumericError",
    "PointClass",
    "QScale",
    "Reals",
    "Rule",
    "RuleReport",
    "TimeScale",
    "TsfracError",
    "alpha_lift",
    "check_rule",
    "constant_multiple_rhs",
    "cpow",
    "cpow_c",
    "deriv",
    "deriv_dense",
    "deriv_higher",
    "deriv_scattered",
    "hilger_derivative",
    "parse",
    "parse_scale",
    "power_rule",
    "product_rhs",
    "quotient_rhs",
    "reciprocal_rhs",
]
