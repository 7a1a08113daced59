"""Fourier components of the wavefunction as truncated series
``Σₙ Pₙ(z²) φₙ(x)`` and a divergence check for energies off the spectrum."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ParamError
from .hamiltonian import QuantumSystem
from .ortho_poly import cdh_recursion, eval_recursion
from .system import bound_spectrum, weight_omega, weight_rho

# Calibration constants of the divergence diagnostic (not physical claims).
CONVERGENT_RATIO = 2.0
DIVERGENT_RATIO = 10.0
# Sign changes are counted only where |ψ| exceeds this fraction of max|ψ|,
# which suppresses low-amplitude truncation ripples in the tails.
NODE_AMPLITUDE_FRACTION = 0.05
# Probe points where the full partial sum is below this fraction of its
# largest value are ignored: there the leading basis functions underflow and
# the growth ratio compares round-off with round-off.
PROBE_SIGNIFICANCE = 1e-6


@dataclass(frozen=True)
class WavefunctionSample:
    x: np.ndarray
    value: np.ndarray
    partial_norms: np.ndarray   # shape (4,) + x.shape


def _checkpoints(N):
    return sorted({max(1, (N * q) // 4) for q in (1, 2, 3, 4)})


def _series(system: QuantumSystem, s: float, x, N: int, prefactor: float) -> WavefunctionSample:
    if N < 1:
        raise ValueError("N must be >= 1")
    x = np.asarray(x, dtype=float)
    P = eval_recursion(cdh_recursion(system.params.mu, system.params.a, N), s, N - 1)
    phi = system.basis.phi_all(x, N)
    terms = prefactor * P.reshape((N,) + (1,) * x.ndim) * phi
    partial = np.cumsum(terms, axis=0)
    running = np.maximum.accumulate(np.abs(partial), axis=0)
    norms = np.stack([running[c - 1] for c in _checkpoints(N)])
    return WavefunctionSample(x, partial[-1], norms)


def bound_component(system: QuantumSystem, k: int, x, N: int) -> WavefunctionSample:
    """``ψₖ(x) = √ωₖ Σ_{n<N} Pₙ(-(k+μ)²) φₙ(x)``."""
    p = system.params
    if not 0 <= k <= p.k_max:
        raise ParamError(f"bound level k={k} out of range 0..{p.k_max}")
    omega = weight_omega(p, k)
    return _series(system, -(k + p.mu) ** 2, x, N, math.sqrt(max(omega, 0.0)))


def continuum_component(system: QuantumSystem, E: float, x, N: int) -> WavefunctionSample:
    """``ψ(x, E) = √ρ(z) Σ_{n<N} Pₙ(z²) φₙ(x)`` with ``z = z(E)``."""
    z = system.spectral_map.z_of_E(E)
    return _series(system, z * z, x, N, math.sqrt(weight_rho(system.params, z)))


def divergence_diagnostic(system: QuantumSystem, E: float, x_probe, N: int) -> float:
    """Largest growth of the running partial-sum maximum between N/4 and N terms,
    over the probe points where the series is not negligible.

    Values near 1 indicate a convergent series; values well above
    ``DIVERGENT_RATIO`` indicate that E is not in the spectrum.
    """
    with np.errstate(all="ignore"):
        s = float(system.spectral_map.inverse(E))
    if not math.isfinite(s):
        raise DomainError(f"z^2(E) undefined at E = {E}")
    sample = _series(system, s, x_probe, N, 1.0)
    first, last = sample.partial_norms[0], sample.partial_norms[-1]
    ok = (first > 0) & (last >= PROBE_SIGNIFICANCE * np.max(last))
    if not np.any(ok):
        return math.inf
    with np.errstate(over="ignore", invalid="ignore"):
        ratio = np.where(ok, last / np.where(ok, first, 1.0), 1.0)
    return float(np.nanmax(ratio))


def count_nodes(values, amplitude_fraction: float = NODE_AMPLITUDE_FRACTION) -> int:
    """Sign changes among samples with ``|ψ| >= fraction · max|ψ|``."""
    v = np.asarray(values, dtype=float)
    keep = np.abs(v) >= amplitude_fraction * np.abs(v).max()
    s = np.sign(v[keep])
    return int(np.count_nonzero(s[1:] != s[:-1]))


def evolve_bound(system: QuantumSystem, amplitudes, x, t: float, N: int) -> np.ndarray:
    """``Σₖ cₖ e^{-iEₖt} ψₖ(x)`` over the bound levels (the discrete part only)."""
    amplitudes = np.asarray(amplitudes, dtype=complex)
    spec = bound_spectrum(system.spectral_map, system.params)
    if amplitudes.size > spec.k_max + 1:
        raise ParamError("more amplitudes than bound levels")
    out = np.zeros(np.shape(x), dtype=complex)
    for k, c in enumerate(amplitudes):
        if c != 0:
            out += c * np.exp(-1j * spec.energies[k] * t) * bound_component(system, k, x, N).value
    return out
