"""Quantum systems designed from an energy spectrum.

A spectral map ``E(z²)`` together with the continuous dual Hahn recursion
fixes the Hamiltonian matrix ``E(R)`` in a chosen square-integrable basis;
from it follow the bound states, the phase shift, the wavefunctions and,
numerically, the potential function.
"""
from .errors import (DivergenceError, DomainError, NumericalError, ParamError, SpectralDesignError,
                     ValidationError)
from .hamiltonian import OperatorMatrices, QuantumSystem, SystemTag, assemble, assemble_system
from .reconstruct import Method, morse_exact, reconstruct, rational_fit
from .system import (MapKind, PhysicalParams, SpectralMap, bound_spectrum, builtin_map, custom_map,
                     phase_shift, weight_omega, weight_rho)
from .wavefunction import bound_component, continuum_component, divergence_diagnostic

__all__ = [
    "DivergenceError", "DomainError", "NumericalError", "ParamError", "SpectralDesignError",
    "ValidationError", "OperatorMatrices", "QuantumSystem", "SystemTag", "assemble",
    "assemble_system", "Method", "morse_exact", "reconstruct", "rational_fit", "MapKind",
    "PhysicalParams", "SpectralMap", "bound_spectrum", "builtin_map", "custom_map", "phase_shift",
    "weight_omega", "weight_rho", "bound_component", "continuum_component", "divergence_diagnostic",
]
