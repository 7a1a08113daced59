"""Three-term recursions, Jacobi matrices, Gauss nodes and the four basis
families used to represent the Hamiltonian.

Every basis is written as ``φₙ(x) = W(y) Qₙ(y)`` with ``y = g(x)`` and ``Qₙ``
orthonormal polynomials normalised so that ``Q₀ = 1``.  ``Qₙ`` satisfies

    y Qₙ = aₙ Qₙ + bₙ Qₙ₊₁ + bₙ₋₁ Qₙ₋₁

and the recursion coefficients ``(a, b)`` are what the Jacobi matrix holds.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRecursionError, DomainError, ParamError, ZeroOffdiagError
from .linalg import TridiagonalSymmetric, tridiag_eigen


@dataclass(frozen=True)
class RecursionCoefficients:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).ravel()
        e = np.array(self.offdiag, dtype=float).ravel()
        if d.size != e.size:
            raise ValueError("diag and offdiag must have equal length")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def length(self) -> int:
        return self.diag.size


def eval_recursion(coeffs: RecursionCoefficients, s, n_max: int) -> np.ndarray:
    """Return ``[P₀(s), …, P_{n_max}(s)]`` stacked along axis 0.

    ``s`` may be a scalar or an array; the result has shape
    ``(n_max + 1,) + shape(s)``.
    """
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    if n_max > coeffs.length:
        raise ValueError(f"n_max={n_max} exceeds available coefficients ({coeffs.length})")
    A, B = coeffs.diag, coeffs.offdiag
    if n_max > 0 and np.any(B[:n_max] == 0.0):
        k = int(np.flatnonzero(B[:n_max] == 0.0)[0])
        raise ZeroOffdiagError(f"recursion breaks down: off-diagonal B[{k}] = 0")
    s = np.asarray(s, dtype=float)
    P = np.empty((n_max + 1,) + s.shape)
    P[0] = 1.0
    if n_max >= 1:
        P[1] = (s - A[0]) / B[0]
    for n in range(1, n_max):
        P[n + 1] = ((s - A[n]) * P[n] - B[n - 1] * P[n - 1]) / B[n]
    return P


def cdh_recursion(mu: float, a: float, N: int, strict: bool = True) -> RecursionCoefficients:
    """Recursion coefficients of the orthonormal continuous dual Hahn
    polynomials with parameters (μ, a, a).

    With ``strict=False`` vanishing off-diagonals are allowed; the resulting
    matrix is still a valid (block-decoupled) symmetric tridiagonal matrix.
    """
    n = np.arange(N, dtype=float)
    A = (n + mu + a) ** 2 + n * (n + 2 * a - 1) - mu ** 2
    B = -(n + mu + a) * np.sqrt((n + 1) * (n + 2 * a))
    if strict:
        tol = 1e-12 * max(1.0, float(np.abs(B).max(initial=0.0)))
        zero = np.abs(B) <= tol
        if np.any(zero):
            k = int(np.flatnonzero(zero)[0])
            raise DegenerateRecursionError(
                f"n + mu + a = 0 at n = {k} (mu={mu}, a={a}); off-diagonal B[{k}] vanishes")
    return RecursionCoefficients(A, B)


def jacobi_matrix(coeffs: RecursionCoefficients, N: int) -> TridiagonalSymmetric:
    if N > coeffs.length:
        raise ValueError(f"N={N} exceeds available coefficients ({coeffs.length})")
    return TridiagonalSymmetric(coeffs.diag[:N], coeffs.offdiag[:N - 1])


def quadrature_nodes(J: TridiagonalSymmetric) -> np.ndarray:
    """Eigenvalues of a Jacobi matrix, ascending (Gauss nodes)."""
    return tridiag_eigen(J, vectors=False).values


def gauss_rule(coeffs: RecursionCoefficients, N: int) -> tuple[np.ndarray, np.ndarray]:
    """N-point Gauss rule for the measure normalised so that ``Q₀ = 1``."""
    eig = tridiag_eigen(jacobi_matrix(coeffs, N))
    return eig.values, eig.vectors[0] ** 2


# ---------------------------------------------------------------------------
# classical polynomials by forward recursion

def laguerre(n: int, alpha: float, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    p0 = np.ones_like(y)
    if n == 0:
        return p0
    p1 = 1.0 + alpha - y
    for k in range(1, n):
        p0, p1 = p1, ((2 * k + 1 + alpha - y) * p1 - (k + alpha) * p0) / (k + 1)
    return p1


def hermite(n: int, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    p0 = np.ones_like(y)
    if n == 0:
        return p0
    p1 = 2.0 * y
    for k in range(1, n):
        p0, p1 = p1, 2.0 * y * p1 - 2.0 * k * p0
    return p1


def gegenbauer(n: int, nu: float, y) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    p0 = np.ones_like(y)
    if n == 0:
        return p0
    p1 = 2.0 * nu * y
    for k in range(2, n + 1):
        p0, p1 = p1, (2.0 * (k + nu - 1) * y * p1 - (k + 2 * nu - 2) * p0) / k
    return p1


def gegenbauer_derivative_identity(nu: float, n: int, y: float, h: float = 1e-5) -> float:
    """Residual of ``(1-y²) C'ₙ = [(n+2ν)(n+2ν-1) Cₙ₋₁ - n(n+1) Cₙ₊₁] / (2(n+ν))``
    with ``C'ₙ`` from a central difference of step ``h``."""
    if not abs(y) < 1:
        raise DomainError("|y| must be < 1")
    if not nu > -0.5:
        raise ParamError("nu must exceed -1/2")
    deriv = (gegenbauer(n, nu, y + h) - gegenbauer(n, nu, y - h)) / (2 * h)
    lhs = (1 - y * y) * deriv
    lower = gegenbauer(n - 1, nu, y) if n >= 1 else 0.0
    rhs = 0.5 / (n + nu) * ((n + 2 * nu) * (n + 2 * nu - 1) * lower
                            - n * (n + 1) * gegenbauer(n + 1, nu, y))
    return float(abs(lhs - rhs))


# ---------------------------------------------------------------------------
# basis families

class BasisFamily(enum.Enum):
    LAGUERRE_MORSE = "laguerre_morse"
    RADIAL_LAGUERRE = "radial_laguerre"
    HERMITE = "hermite"
    GEGENBAUER = "gegenbauer"


class BasisSet:
    """``φₙ(x) = W(y) Qₙ(y)`` with ``y = g(x)``; see subclasses."""

    family: BasisFamily
    y_range: tuple[float, float] = (-math.inf, math.inf)

    def y_of_x(self, x):
        raise NotImplementedError

    def x_of_y(self, y):
        raise NotImplementedError

    def in_domain(self, x) -> np.ndarray:
        return np.isfinite(np.asarray(x, dtype=float))

    def check_domain(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not np.all(self.in_domain(x)):
            raise DomainError(f"x outside the {self.family.value} basis domain")
        return x

    def recursion(self, N: int) -> RecursionCoefficients:
        raise NotImplementedError

    def log_weight(self, y):
        """``ln W(y)`` including the normalisation of φ₀."""
        raise NotImplementedError

    def log_norm(self, n: int) -> float:
        """ln of the normalisation constant multiplying the classical polynomial."""
        raise NotImplementedError

    def classical(self, n: int, y):
        raise NotImplementedError

    def classical_envelope(self, y):
        """y-dependent prefactor multiplying ``norm · classical``."""
        raise NotImplementedError

    def Q(self, y, N: int) -> np.ndarray:
        """``[Q₀(y), …, Q_{N-1}(y)]`` by the orthonormal recursion."""
        return eval_recursion(self.recursion(N), y, N - 1)

    def phi_all(self, x, N: int) -> np.ndarray:
        """``φₙ(x)`` for n < N, shape ``(N,) + shape(x)``."""
        x = self.check_domain(x)
        y = self.y_of_x(x)
        with np.errstate(under="ignore"):
            W = np.exp(self.log_weight(y))
        return self.Q(y, N) * W

    def jacobi(self, N: int) -> TridiagonalSymmetric:
        return jacobi_matrix(self.recursion(N), N)


def basis_eval(basis: BasisSet, n: int, x) -> np.ndarray | float:
    """``φₙ(x)`` through the classical polynomial and a log-space normalisation."""
    x = basis.check_domain(x)
    y = basis.y_of_x(x)
    with np.errstate(under="ignore", divide="ignore"):
        out = basis.classical(n, y) * basis.classical_envelope(y) * math.exp(basis.log_norm(n))
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class LaguerreMorseBasis(BasisSet):
    """``Cₙ yᵛ e^{-y/2} Lₙ^{2ν-1}(y)``, ``y = e^{-λx}``, ``Cₙ = √(λ n!/Γ(n+2ν))``."""
    lam: float
    nu: float
    family = BasisFamily.LAGUERRE_MORSE
    y_range = (0.0, math.inf)

    def __post_init__(self):
        if not self.lam > 0:
            raise ParamError("lambda must be positive")
        if not self.nu > 0:
            raise ParamError("nu must be positive for the Laguerre basis")

    def y_of_x(self, x):
        return np.exp(-self.lam * np.asarray(x, dtype=float))

    def x_of_y(self, y):
        return -np.log(y) / self.lam

    def recursion(self, N):
        n = np.arange(N, dtype=float)
        return RecursionCoefficients(2 * (n + self.nu), -np.sqrt((n + 1) * (n + 2 * self.nu)))

    def log_weight(self, y):
        return 0.5 * (math.log(self.lam) - math.lgamma(2 * self.nu)) + self.nu * np.log(y) - 0.5 * y

    def log_norm(self, n):
        return 0.5 * (math.log(self.lam) + math.lgamma(n + 1) - math.lgamma(n + 2 * self.nu))

    def classical(self, n, y):
        return laguerre(n, 2 * self.nu - 1, y)

    def classical_envelope(self, y):
        return np.exp(self.nu * np.log(y) - 0.5 * y)


@dataclass(frozen=True)
class RadialLaguerreBasis(BasisSet):
    """``√(2λ n!/Γ(n+ℓ+3/2)) (λr)^{ℓ+1} e^{-y/2} Lₙ^{ℓ+1/2}(y)``, ``y = λ²r²``."""
    lam: float
    ell: int
    family = BasisFamily.RADIAL_LAGUERRE
    y_range = (0.0, math.inf)

    def __post_init__(self):
        if not self.lam > 0:
            raise ParamError("lambda must be positive")
        if self.ell < 0 or int(self.ell) != self.ell:
            raise ParamError("ell must be a non-negative integer")

    def in_domain(self, x):
        x = np.asarray(x, dtype=float)
        return np.isfinite(x) & (x > 0)

    def y_of_x(self, x):
        r = np.asarray(x, dtype=float)
        return (self.lam * r) ** 2

    def x_of_y(self, y):
        return np.sqrt(y) / self.lam

    def recursion(self, N):
        n = np.arange(N, dtype=float)
        L = self.ell + 0.5
        return RecursionCoefficients(2 * n + L + 1, -np.sqrt((n + 1) * (n + L + 1)))

    def log_weight(self, y):
        return (0.5 * (math.log(2 * self.lam) - math.lgamma(self.ell + 1.5))
                + 0.5 * (self.ell + 1) * np.log(y) - 0.5 * y)

    def log_norm(self, n):
        return 0.5 * (math.log(2 * self.lam) + math.lgamma(n + 1) - math.lgamma(n + self.ell + 1.5))

    def classical(self, n, y):
        return laguerre(n, self.ell + 0.5, y)

    def classical_envelope(self, y):
        return np.exp(0.5 * (self.ell + 1) * np.log(y) - 0.5 * y)


@dataclass(frozen=True)
class HermiteBasis(BasisSet):
    """``√λ / √(2ⁿ n! √π) e^{-y²/2} Hₙ(y)``, ``y = λx``."""
    lam: float
    family = BasisFamily.HERMITE

    def __post_init__(self):
        if not self.lam > 0:
            raise ParamError("lambda must be positive")

    def y_of_x(self, x):
        return self.lam * np.asarray(x, dtype=float)

    def x_of_y(self, y):
        return np.asarray(y, dtype=float) / self.lam

    def recursion(self, N):
        n = np.arange(N, dtype=float)
        return RecursionCoefficients(np.zeros(N), np.sqrt((n + 1) / 2))

    def log_weight(self, y):
        return 0.5 * math.log(self.lam) - 0.25 * math.log(math.pi) - 0.5 * np.asarray(y) ** 2

    def log_norm(self, n):
        return 0.5 * (math.log(self.lam) - n * math.log(2) - math.lgamma(n + 1) - 0.5 * math.log(math.pi))

    def classical(self, n, y):
        return hermite(n, y)

    def classical_envelope(self, y):
        return np.exp(-0.5 * np.asarray(y) ** 2)


@dataclass(frozen=True)
class GegenbauerBasis(BasisSet):
    """``Cₙ (1-y²)^{(2ν+1)/4} Cₙᵛ(y)``, ``y = tanh(λx)``,
    ``Cₙ = 2ᵛ Γ(ν) √(λ(n+ν) n! / (2π Γ(n+2ν)))``."""
    lam: float
    nu: float
    family = BasisFamily.GEGENBAUER
    y_range = (-1.0, 1.0)

    def __post_init__(self):
        if not self.lam > 0:
            raise ParamError("lambda must be positive")
        if not self.nu > -0.5:
            raise ParamError("nu must exceed -1/2 for the Gegenbauer basis")

    def y_of_x(self, x):
        return np.tanh(self.lam * np.asarray(x, dtype=float))

    def x_of_y(self, y):
        return np.arctanh(y) / self.lam

    def recursion(self, N):
        return RecursionCoefficients(np.zeros(N), gegenbauer_offdiag(self.nu, N))

    def log_weight(self, y):
        # C₀² = λ Γ(ν+1) / (√π Γ(ν+1/2))
        c0 = 0.5 * (math.log(self.lam) + math.lgamma(self.nu + 1)
                    - 0.5 * math.log(math.pi) - math.lgamma(self.nu + 0.5))
        with np.errstate(divide="ignore"):   # |y| = 1 in floating point: W = 0
            return c0 + (2 * self.nu + 1) / 4 * np.log1p(-np.asarray(y) ** 2)

    def log_norm(self, n):
        if self.nu == 0:
            raise DomainError("classical Gegenbauer normalisation is singular at nu = 0")
        return (self.nu * math.log(2) + math.lgamma(self.nu)
                + 0.5 * (math.log(self.lam * (n + self.nu)) + math.lgamma(n + 1)
                         - math.log(2 * math.pi) - math.lgamma(n + 2 * self.nu)))

    def classical(self, n, y):
        return gegenbauer(n, self.nu, y)

    def classical_envelope(self, y):
        with np.errstate(divide="ignore"):
            return np.exp((2 * self.nu + 1) / 4 * np.log1p(-np.asarray(y) ** 2))


def gegenbauer_offdiag(nu: float, N: int) -> np.ndarray:
    """``Gₙ = ½√((n+1)(n+2ν)/((n+ν)(n+ν+1)))`` with the n = 0 ratio taken as 2."""
    n = np.arange(N, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        ratio = np.where(n == 0, 2.0, (n + 2 * nu) / (n + nu))
    return 0.5 * np.sqrt((n + 1) * ratio / (n + nu + 1))
