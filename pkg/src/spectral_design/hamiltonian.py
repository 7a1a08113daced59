"""Operator matrices in the orthonormal basis: ``R``, the kinetic matrix, the
Hamiltonian ``H = E(R)`` and the potential matrix ``V = H - T``."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, SingularError, SingularityError
from .linalg import (TridiagonalSymmetric, matrix_function, tridiag_eigen,
                     tridiag_inverse_closed_form)
from .ortho_poly import (BasisSet, GegenbauerBasis, HermiteBasis, LaguerreMorseBasis,
                         RadialLaguerreBasis, cdh_recursion, gegenbauer_offdiag, jacobi_matrix)
from .system import MapKind, PhysicalParams, SpectralMap, builtin_map

DEFAULT_N = 60
_ASYMMETRY_ABORT = 1e-6
_INVERSE_AGREEMENT = 1e-8


class SystemTag(enum.Enum):
    MORSE = "morse"
    RADIAL = "radial"
    EXP_GAUSS = "expgauss"
    SINH = "sinh"


_MAP_OF_TAG = {
    SystemTag.MORSE: MapKind.MORSE,
    SystemTag.RADIAL: MapKind.RADIAL_INVERSE,
    SystemTag.EXP_GAUSS: MapKind.EXP_GAUSS,
    SystemTag.SINH: MapKind.SINH,
}


def make_basis(tag: SystemTag | str, params: PhysicalParams) -> BasisSet:
    tag = SystemTag(tag)
    if tag is SystemTag.MORSE:
        return LaguerreMorseBasis(params.lam, params.nu)
    if tag is SystemTag.RADIAL:
        return RadialLaguerreBasis(params.lam, params.ell)
    if tag is SystemTag.EXP_GAUSS:
        return HermiteBasis(params.lam)
    return GegenbauerBasis(params.lam, params.nu)


@dataclass(frozen=True)
class QuantumSystem:
    """A spectral map, a basis and the parameters tying them together."""
    tag: SystemTag
    params: PhysicalParams
    spectral_map: SpectralMap
    basis: BasisSet

    @classmethod
    def build(cls, tag: SystemTag | str, params: PhysicalParams,
              spectral_map: SpectralMap | None = None) -> "QuantumSystem":
        tag = SystemTag(tag)
        if spectral_map is None:
            spectral_map = builtin_map(_MAP_OF_TAG[tag], params)
        return cls(tag, params, spectral_map, make_basis(tag, params))


# ---------------------------------------------------------------------------
# kinetic matrices

def _offdiag_matrix(N, upper):
    return np.diag(upper[:N - 1], 1) + np.diag(upper[:N - 1], -1)


def kinetic_morse(params: PhysicalParams, N: int) -> np.ndarray:
    lam, nu = params.lam, params.nu
    J = jacobi_matrix(LaguerreMorseBasis(lam, nu).recursion(N + 1), N + 1).dense()
    J2 = (J @ J)[:N, :N]   # square first, then truncate
    n = np.arange(N, dtype=float)
    X = 0.25 * J2 - np.diag(2 * (n + nu) ** 2 + nu * (1 - nu))
    m = n[:-1]
    # (n, n-1) entries: (n+ν-½)√(n(n+2ν-1)); (n, n+1): (n+ν+½)√((n+1)(n+2ν))
    X += np.diag((m + 1 + nu - 0.5) * np.sqrt((m + 1) * (m + 2 * nu)), -1)
    X += np.diag((m + nu + 0.5) * np.sqrt((m + 1) * (m + 2 * nu)), 1)
    T = -0.5 * lam ** 2 * X
    return 0.5 * (T + T.T)


def kinetic_radial(params: PhysicalParams, N: int) -> np.ndarray:
    lam, ell = params.lam, params.ell
    n = np.arange(N, dtype=float)
    off = np.sqrt((n + 1) * (n + ell + 1.5))
    return 0.5 * lam ** 2 * (np.diag(2 * n + ell + 1.5) + _offdiag_matrix(N, off))


def kinetic_hermite(params: PhysicalParams, N: int) -> np.ndarray:
    n = np.arange(N, dtype=float)
    T = np.diag(2 * n + 1)
    if N > 2:
        off2 = np.sqrt((n[:-2] + 1) * (n[:-2] + 2))
        T -= np.diag(off2, 2) + np.diag(off2, -2)
    return 0.25 * params.lam ** 2 * T


def kinetic_gegenbauer(params: PhysicalParams, N: int, return_asymmetry: bool = False):
    lam, nu = params.lam, params.nu
    G = gegenbauer_offdiag(nu, N + 2)
    K = _offdiag_matrix(N + 2, G)     # K[n, n+1] = G[n]
    K2 = (K @ K)[:N, :N]
    X = np.zeros((N, N))
    for col in range(N):
        X[col, col] += col ** 2 + (2 * col + 1) * nu + 0.5
        X[:, col] -= 2 * col * G[col] * K[:N, col + 1]
        if col > 0:
            X[:, col] += 2 * (col + 2 * nu) * G[col - 1] * K[:N, col - 1]
        X[:, col] -= ((col + nu) ** 2 + 2 * nu + 0.75) * K2[:, col]
    T = 0.5 * lam ** 2 * X
    asym = float(np.abs(T - T.T).max())
    T = 0.5 * (T + T.T)
    return (T, asym) if return_asymmetry else T


_KINETIC = {
    SystemTag.MORSE: kinetic_morse,
    SystemTag.RADIAL: kinetic_radial,
    SystemTag.EXP_GAUSS: kinetic_hermite,
    SystemTag.SINH: kinetic_gegenbauer,
}


def kinetic_matrix(tag: SystemTag | str, params: PhysicalParams, N: int) -> np.ndarray:
    return _KINETIC[SystemTag(tag)](params, N)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OperatorMatrices:
    R: TridiagonalSymmetric
    T: np.ndarray
    H: np.ndarray
    V: np.ndarray
    N: int
    system_tag: SystemTag
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        for name in ("T", "H", "V"):
            getattr(self, name).setflags(write=False)


def cdh_matrix(params: PhysicalParams, N: int) -> TridiagonalSymmetric:
    """``R`` truncated to N×N.  Vanishing off-diagonals are allowed here."""
    return jacobi_matrix(cdh_recursion(params.mu, params.a, N, strict=False), N)


def assemble(system_tag: SystemTag | str, spectral_map: SpectralMap,
             params: PhysicalParams, N: int = DEFAULT_N) -> OperatorMatrices:
    tag = SystemTag(system_tag)
    if N < 1:
        raise ValueError("N must be >= 1")
    R = cdh_matrix(params, N)
    diagnostics: dict = {}

    if tag is SystemTag.RADIAL and spectral_map.kind is MapKind.RADIAL_INVERSE:
        eig = tridiag_eigen(R)
        if np.any(eig.values == 0.0):
            raise SingularError("R is singular; the alpha^2 R^-1 term is undefined")
        try:
            inv_spectral = matrix_function(R, lambda x: 1.0 / x, eig)
        except SingularityError as exc:
            raise SingularError(str(exc)) from exc
        inv_closed = tridiag_inverse_closed_form(R)
        gap = float(np.abs(inv_spectral - inv_closed).max())
        diagnostics["inverse_discrepancy"] = gap
        if gap > _INVERSE_AGREEMENT * max(1.0, float(np.abs(inv_spectral).max())):
            raise NumericalError(f"spectral and closed-form R^-1 disagree by {gap:.3e}")
        H = 0.5 * params.lam ** 2 * (R.dense() - params.alpha ** 2 * inv_spectral)
        H = 0.5 * (H + H.T)
    elif spectral_map.affine is not None:
        # a linear map of R needs no diagonalisation, and skipping it keeps
        # the exact band structure (tail entries of the columns stay zero)
        slope, offset = spectral_map.affine
        H = slope * R.dense() + offset * np.eye(N)
    else:
        H = matrix_function(R, spectral_map.forward)

    if tag is SystemTag.SINH:
        T, asym = kinetic_gegenbauer(params, N, return_asymmetry=True)
        diagnostics["kinetic_asymmetry"] = asym
    else:
        T = kinetic_matrix(tag, params, N)

    V = H - T   # H and T are symmetric, so V is too
    scale = float(np.abs(V).max()) or 1.0
    asym = float(np.abs(V - V.T).max())
    diagnostics["potential_asymmetry"] = asym
    if asym > _ASYMMETRY_ABORT * scale:
        raise NumericalError(f"potential matrix asymmetry {asym:.3e} exceeds tolerance")
    return OperatorMatrices(R, T, H, V, N, tag, diagnostics)


def assemble_system(system: QuantumSystem, N: int = DEFAULT_N) -> OperatorMatrices:
    return assemble(system.tag, system.spectral_map, system.params, N)
