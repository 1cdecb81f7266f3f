# backend/mellin/special.py
import math

import mpmath
import numpy as np
from scipy import special

from ..errors import PoleError, DomainError


def _is_gamma_pole(z):
    return z.imag == 0.0 and z.real <= 0.0 and float(z.real).is_integer()


def log_gamma_complex(z):
    """
    Principal branch of log Gamma(z) for a complex scalar.

    Raises PoleError at the non-positive integers.
    """
    z = complex(z)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise DomainError(f"log_gamma_complex needs a finite argument, got {z}")
    if _is_gamma_pole(z):
        raise PoleError(f"Gamma(z) has a pole at z={z.real:g}")
    return complex(special.loggamma(z))


def log_gamma_array(z):
    # callers keep z off the poles (contours carry a pole margin)
    return special.loggamma(np.asarray(z, dtype=complex))


def log_abs_gamma_real(x):
    """log|Gamma(x)| for real x; +inf at the poles."""
    return special.gammaln(np.asarray(x, dtype=float))


def exp_integral_Ei(x):
    """Ei(x) = -PV int_{-x}^inf e^{-t}/t dt; Ei(-x) = -E1(x) for x > 0."""
    x = float(x)
    if x == 0.0:
        raise DomainError("Ei(x) is undefined at x = 0")
    return float(special.expi(x))


def exp_integral_En(n, x):
    """
    E_n(x) = int_1^inf e^{-x t} t^{-n} dt for x > 0.

    Integer orders go through scipy; the Rayleigh-case closed form also needs
    real orders (E_{a+1} with a real), which mpmath provides.
    """
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"E_n(x) needs x > 0, got x={x:g}")
    if n <= 0:
        raise DomainError(f"E_n(x) needs a positive order, got n={n}")
    if float(n).is_integer():
        return float(special.expn(int(n), x))
    return float(mpmath.expint(float(n), x))


def scaled_exp_integral_En(n, x):
    """e^x E_n(x), computed without overflowing e^x for large x."""
    x = float(x)
    if x <= 0.0:
        raise DomainError(f"E_n(x) needs x > 0, got x={x:g}")
    if x < 600.0:
        return math.exp(x) * exp_integral_En(n, x)
    return float(mpmath.exp(x) * mpmath.expint(float(n), x))
