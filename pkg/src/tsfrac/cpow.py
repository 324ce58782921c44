"""Principal-branch powers ``x**alpha`` with complex results.

The argument of a negative real is taken to be ``pi``, so ``cpow(-1, 0.5)``
is ``1j`` and ``cpow(-8, 1/3)`` is ``1 + sqrt(3)j`` rather than ``-2``.
``0**alpha`` is 0 for ``alpha > 0`` and undefined otherwise.

Integer exponents are computed by repeated multiplication so that results
that are mathematically real come out with an exactly zero imaginary part.
"""

from __future__ import annotations

import cmath
import math

import mpmath

from tsfrac.errors import PowUndefined

#: private extended-precision context; its precision is never changed after import
MP = mpmath.MPContext()
MP.dps = 40

# beyond this, repeated multiplication loses to exp/log in accuracy
_MAX_INT_EXPONENT = 64


def _finite(z: complex, what: str) -> complex:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise PowUndefined(f"{what} is not finite")
    return z


def _int_power(z: complex, n: int) -> complex:
    if n < 0:
        return 1 / _int_power(z, -n)
    result = complex(1.0)
    base = z
    while n:
        if n & 1:
            result *= base
        base *= base
        n >>= 1
    return result


def _small_int(alpha: float) -> int | None:
    if float(alpha).is_integer() and abs(alpha) <= _MAX_INT_EXPONENT:
        return int(alpha)
    return None


def cpow(x: float, alpha: float) -> complex:
    """Principal value of ``x**alpha`` for real ``x`` and real ``alpha``."""
    x, alpha = float(x), float(alpha)
    if x == 0:
        if alpha > 0:
            return 0j
        raise PowUndefined(f"0 ** {alpha!r} is undefined")
    n = _small_int(alpha)
    try:
        if n is not None:
            return _finite(complex(x**n), f"{x!r} ** {n}")
        mag = math.pow(abs(x), alpha)
    except (OverflowError, ZeroDivisionError) as exc:
        raise PowUndefined(f"{x!r} ** {alpha!r}: {exc}") from None
    if x > 0:
        return _finite(complex(mag), f"{x!r} ** {alpha!r}")
    angle = alpha * math.pi
    return _finite(complex(mag * math.cos(angle), mag * math.sin(angle)), f"{x!r} ** {alpha!r}")


def cpow_c(z: complex, alpha: float) -> complex:
    """Principal value of ``z**alpha`` for complex ``z`` (Arg in (-pi, pi])."""
    z, alpha = complex(z), float(alpha)
    if z.imag == 0:
        # a signed zero imaginary part must not move -1 onto Arg = -pi
        return cpow(z.real, alpha)
    n = _small_int(alpha)
    try:
        if n is not None:
            return _finite(_int_power(z, n), f"({z!r}) ** {n}")
        return _finite(cmath.exp(alpha * cmath.log(z)), f"({z!r}) ** {alpha!r}")
    except (OverflowError, ZeroDivisionError) as exc:
        raise PowUndefined(f"({z!r}) ** {alpha!r}: {exc}") from None


def cpow_mp(x, alpha: float):
    """:func:`cpow` in the extended-precision context :data:`MP`."""
    x = MP.mpf(x)
    if x == 0:
        if alpha > 0:
            return MP.mpc(0)
        raise PowUndefined(f"0 ** {alpha!r} is undefined")
    n = _small_int(alpha)
    if n is not None:
        return MP.mpc(x**n)
    mag = MP.power(abs(x), alpha)
    if x > 0:
        return MP.mpc(mag)
    return mag * MP.expjpi(alpha)
