"""Complex log-gamma and Pochhammer symbols.

The log-gamma branch returned here is the analytic continuation of the real
``ln Γ(x)`` (x > 0) with a continuous imaginary part, i.e. ``arg Γ(z)`` is not
wrapped to (-π, π].  Phase shifts built from it are therefore continuous in
the energy.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

# Lanczos-type rational approximation, g = 671/128, 14 terms.
_G = 671.0 / 128.0
_C0 = 0.999999999999997092
_COF = np.array([
    57.1562356658629235, -59.5979603554754912, 14.1360979747417471,
    -0.491913816097620199, 0.339946499848118887e-4, 0.465236289270485756e-4,
    -0.983744753048795646e-4, 0.158088703224912494e-3, -0.210264441724104883e-3,
    0.217439618115212643e-3, -0.164318106536763890e-3, 0.844182239838527433e-4,
    -0.261908384015814087e-4, 0.368991826595316234e-5,
])
_LN_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_LN_PI = math.log(math.pi)
_POLE_TOL = 1e-14


@dataclass(frozen=True)
class LogGammaResult:
    log_modulus: float
    argument: float

    @property
    def value(self) -> complex:
        return complex(self.log_modulus, self.argument)


def _lanczos(z):
    # valid for Re z >= 0.5
    ser = np.full_like(z, _C0)
    for j, c in enumerate(_COF):
        ser = ser + c / (z + (j + 1))
    t = z + _G
    return (z + 0.5) * np.log(t) - t + _LN_SQRT_2PI + np.log(ser) - np.log(z)


def _log_sin_pi_upper(z):
    # log sin(πz) continued from (0, 1) into Im z >= 0
    w = np.exp(2j * np.pi * z)
    return -1j * np.pi * z + 0.5j * np.pi - math.log(2.0) + np.log1p(-w)


def _check_poles(z):
    re = np.real(z)
    near = np.rint(re)
    hit = (near <= 0) & (np.abs(z - near) < _POLE_TOL * np.maximum(1.0, np.abs(z)))
    if np.any(hit):
        bad = np.asarray(z)[hit].ravel()[0]
        raise PoleError(f"log-gamma evaluated at a pole: z = {bad}")


def loggamma(z):
    """Vectorized complex ``ln Γ(z)`` on the continuous branch."""
    z = np.asarray(z, dtype=complex)
    _check_poles(z)
    flip = z.imag < 0
    zz = np.where(flip, np.conj(z), z)
    out = np.empty_like(zz)
    right = zz.real >= 0.5
    if np.any(right):
        out[right] = _lanczos(zz[right])
    left = ~right
    if np.any(left):
        zl = zz[left]
        out[left] = _LN_PI - _log_sin_pi_upper(zl) - _lanczos(1.0 - zl)
    out = np.where(flip, np.conj(out), out)
    return out if out.ndim else complex(out)


def log_gamma_complex(z: complex) -> LogGammaResult:
    """Return ``ln|Γ(z)|`` and the continuous ``arg Γ(z)``."""
    v = loggamma(complex(z))
    return LogGammaResult(float(v.real), float(v.imag))


def pochhammer(a: float, n: int) -> float:
    """Rising factorial a(a+1)...(a+n-1), as a left-to-right product."""
    if n < 0:
        raise ValueError("n must be non-negative")
    out = 1.0
    for j in range(n):
        out *= a + j
    return out


def log_pochhammer(a: float, n: int) -> tuple[float, int]:
    """``(ln|(a)_n|, sign)``; sign is 0 when some factor vanishes."""
    total, sign = 0.0, 1
    for j in range(n):
        f = a + j
        if f == 0.0:
            return -math.inf, 0
        if f < 0:
            sign = -sign
        total += math.log(abs(f))
    return total, sign


def log_abs_gamma_real(x: float) -> float:
    """``ln|Γ(x)|`` for real x, raising on poles."""
    if x <= 0 and abs(x - round(x)) < _POLE_TOL * max(1.0, abs(x)):
        raise PoleError(f"Γ has a pole at x = {x}")
    return math.lgamma(x)


def rgamma_is_zero(x: float) -> bool:
    """True when ``1/Γ(x)`` vanishes, i.e. x is a non-positive integer."""
    return x <= 0 and abs(x - round(x)) < _POLE_TOL * max(1.0, abs(x))
