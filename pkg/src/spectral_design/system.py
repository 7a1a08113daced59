"""Physical parameters, spectral maps ``E(z²)``, bound-state spectra, phase
shifts and the orthogonality weights of the continuous dual Hahn
polynomials."""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, ParamError, PoleError
from .special import log_abs_gamma_real, log_pochhammer, loggamma, rgamma_is_zero


@dataclass(frozen=True)
class PhysicalParams:
    mu: float
    a: float
    lam: float = 1.0
    alpha: float = 0.0
    nu: float | None = None
    ell: int = 0

    def __post_init__(self):
        if not (math.isfinite(self.mu) and self.mu < 0) or float(self.mu).is_integer():
            raise ParamError("mu must be negative non-integer")
        if not self.a > 0:
            raise ParamError("a must be positive")
        if not self.lam > 0:
            raise ParamError("lambda must be positive")
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ParamError("ell must be a non-negative integer")
        if self.nu is None:
            object.__setattr__(self, "nu", float(self.a))

    @property
    def k_max(self) -> int:
        return math.floor(-self.mu)

    def bound_z2(self) -> np.ndarray:
        """``z²`` at the bound states, ``-(k+μ)²`` for k = 0..⌊-μ⌋."""
        k = np.arange(self.k_max + 1)
        return -(k + self.mu) ** 2


class MapKind(enum.Enum):
    MORSE = "morse"
    RADIAL_INVERSE = "radial"
    EXP_GAUSS = "expgauss"
    SINH = "sinh"
    CUSTOM = "custom"


@dataclass(frozen=True)
class SpectralMap:
    """Invertible energy map: ``forward(z²) = E`` and ``inverse(E) = z²``.

    ``inverse`` is the continuum branch; it may return non-positive values,
    which mark energies outside the continuum.
    """
    kind: MapKind
    forward: Callable
    inverse: Callable
    label: str = ""
    affine: tuple[float, float] | None = None   # (slope, offset) when E is linear in z²

    def z_of_E(self, E: float) -> float:
        z2 = float(self.inverse(E))
        if not (math.isfinite(z2) and z2 > 0):
            raise DomainError(f"E = {E} is not in the continuous spectrum (z^2 = {z2})")
        return math.sqrt(z2)

    def in_continuum(self, E: float) -> bool:
        with np.errstate(all="ignore"):
            z2 = float(self.inverse(E))
        return math.isfinite(z2) and z2 > 0


def morse_map(lam: float = 1.0) -> SpectralMap:
    c = 0.5 * lam ** 2
    return SpectralMap(MapKind.MORSE, lambda s: c * np.asarray(s),
                       lambda E: np.asarray(E) / c, "E = lam^2 z^2 / 2", affine=(c, 0.0))


def radial_inverse_map(lam: float = 1.0, alpha: float = 0.0) -> SpectralMap:
    c = 0.5 * lam ** 2

    def forward(s):
        s = np.asarray(s, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return c * (s - alpha ** 2 / s)

    def inverse(E):
        # positive root of s² - (E/c) s - α² = 0, written without cancellation
        e = np.asarray(E, dtype=float) / (2 * c)
        r = np.hypot(e, alpha)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(e >= 0, e + r, alpha ** 2 / (r - e))

    return SpectralMap(MapKind.RADIAL_INVERSE, forward, inverse, "E = lam^2 (z^2 - alpha^2/z^2) / 2")


def exp_gauss_map(lam: float = 1.0, alpha: float = 1.0) -> SpectralMap:
    if not alpha > 0:
        raise ParamError("alpha must be positive for the exponential map")
    c = 0.5 * lam ** 2

    def inverse(E):
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.log1p(np.asarray(E, dtype=float) / c) / alpha

    return SpectralMap(MapKind.EXP_GAUSS, lambda s: c * np.expm1(alpha * np.asarray(s)),
                       inverse, "E = lam^2 (exp(alpha z^2) - 1) / 2")


def sinh_map(lam: float = 1.0, alpha: float = 1.0) -> SpectralMap:
    if not alpha > 0:
        raise ParamError("alpha must be positive for the sinh map")
    c = 0.5 * lam ** 2
    return SpectralMap(MapKind.SINH, lambda s: c * np.sinh(alpha * np.asarray(s)),
                       lambda E: np.arcsinh(np.asarray(E, dtype=float) / c) / alpha,
                       "E = lam^2 sinh(alpha z^2) / 2")


def custom_map(forward: Callable, inverse: Callable, label: str = "custom") -> SpectralMap:
    return SpectralMap(MapKind.CUSTOM, forward, inverse, label)


def builtin_map(kind: MapKind | str, params: PhysicalParams) -> SpectralMap:
    kind = MapKind(kind)
    if kind is MapKind.MORSE:
        return morse_map(params.lam)
    if kind is MapKind.RADIAL_INVERSE:
        return radial_inverse_map(params.lam, params.alpha)
    if kind is MapKind.EXP_GAUSS:
        return exp_gauss_map(params.lam, params.alpha)
    if kind is MapKind.SINH:
        return sinh_map(params.lam, params.alpha)
    raise ParamError(f"no built-in map for {kind}")


@dataclass(frozen=True)
class SpectrumResult:
    energies: np.ndarray
    k_max: int
    omega: np.ndarray = field(repr=False)


def bound_spectrum(spectral_map: SpectralMap, params: PhysicalParams) -> SpectrumResult:
    """Bound-state energies ``E_k = E(-(k+μ)²)`` with their discrete weights."""
    if not params.mu < 0:
        raise ParamError("no bound states for mu >= 0")
    z2 = params.bound_z2()
    energies = np.asarray(spectral_map.forward(z2), dtype=float)
    omega = np.array([weight_omega(params, k) for k in range(params.k_max + 1)])
    return SpectrumResult(energies, params.k_max, omega)


def phase_shift(spectral_map: SpectralMap, params: PhysicalParams, E: float) -> float:
    """``δ(E) = arg Γ(2iz) - arg Γ(μ+iz) - 2 arg Γ(a+iz)`` with ``z = z(E)``."""
    z = spectral_map.z_of_E(E)
    lg = loggamma(np.array([2j * z, params.mu + 1j * z, params.a + 1j * z]))
    return float(lg[0].imag - lg[1].imag - 2.0 * lg[2].imag)


def phase_shifts(spectral_map: SpectralMap, params: PhysicalParams, energies) -> np.ndarray:
    return np.array([phase_shift(spectral_map, params, float(E)) for E in np.atleast_1d(energies)])


def log_weight_rho(params: PhysicalParams, z):
    """``ln ρ(z)``; ``-inf`` where ``1/Γ(μ+a)`` vanishes."""
    z = np.asarray(z, dtype=float)
    if np.any(z <= 0):
        raise DomainError("rho(z) requires z > 0")
    if rgamma_is_zero(params.mu + params.a):
        return np.full(z.shape, -np.inf) if z.ndim else -math.inf
    mu, a = params.mu, params.a
    lg_mu = loggamma(mu + 1j * z).real
    lg_2z = loggamma(2j * z).real
    lg_a = loggamma(a + 1j * z).real
    out = (2 * (lg_mu - lg_2z) + 4 * lg_a - math.log(2 * math.pi)
           - math.lgamma(2 * a) - 2 * log_abs_gamma_real(mu + a))
    return out if np.ndim(out) else float(out)


def weight_rho(params: PhysicalParams, z):
    """Continuous weight ``|Γ(μ+iz) Γ(a+iz)² / Γ(2iz)|² / (2π Γ(2a) Γ(μ+a)²)``."""
    with np.errstate(under="ignore"):
        out = np.exp(log_weight_rho(params, z))
    return out if np.ndim(out) else float(out)


def weight_omega(params: PhysicalParams, k: int) -> float:
    """Discrete weight of bound state ``k``.

    Computed as sign × exp(sum of logs).  A non-positive result is returned
    as is, with a ``RuntimeWarning``.
    """
    mu, a = params.mu, params.a
    if not 0 <= k <= params.k_max:
        raise ParamError(f"k must lie in 0..{params.k_max}")
    l_den, s_den = log_pochhammer(mu - a + 1, k)
    if s_den == 0:
        raise PoleError(f"(mu - a + 1)_k vanishes for k = {k}")
    l_2mu, s_2mu = log_pochhammer(2 * mu, k)
    l_mua, s_mua = log_pochhammer(mu + a, k)
    sign = (-1 if (k + mu) < 0 else 1) * (-1) ** (k + 1) * s_2mu * (s_mua ** 2)
    if sign == 0:
        value = 0.0
    else:
        log_mag = (math.log(abs(k + mu)) - math.lgamma(k + 1) + math.log(2) + l_2mu
                   - math.lgamma(2 * a) - math.lgamma(1 - 2 * mu)
                   + 2 * (math.lgamma(a - mu) + l_mua - l_den))
        value = sign * math.exp(log_mag)
    if not value > 0:
        warnings.warn(f"non-positive discrete weight omega_{k} = {value}", RuntimeWarning, stacklevel=2)
    return value
