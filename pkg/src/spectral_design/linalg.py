"""Symmetric tridiagonal eigensolver, matrix functions and the closed-form
tridiagonal inverse."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConvergenceError, SingularError, SingularityError

_EPS = np.finfo(float).eps
_SAFE_MIN = math.sqrt(np.finfo(float).tiny)   # off-diagonals below this are negligible at unit norm
_LOG_PRODUCT_THRESHOLD = 50


@dataclass(frozen=True)
class TridiagonalSymmetric:
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.array(self.diag, dtype=float).ravel()
        e = np.array(self.offdiag, dtype=float).ravel()
        if d.size < 1:
            raise ValueError("empty tridiagonal matrix")
        if e.size != d.size - 1:
            raise ValueError(f"offdiag must have length {d.size - 1}, got {e.size}")
        d.setflags(write=False)
        e.setflags(write=False)
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return self.diag.size

    def dense(self) -> np.ndarray:
        m = np.diag(self.diag)
        if self.n > 1:
            m += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return m

    def shifted(self, c: float) -> "TridiagonalSymmetric":
        return TridiagonalSymmetric(self.diag + c, self.offdiag)

    def max_abs(self) -> float:
        return float(max(np.abs(self.diag).max(), np.abs(self.offdiag).max(initial=0.0)))


@dataclass(frozen=True)
class EigenDecomposition:
    values: np.ndarray
    vectors: np.ndarray | None


def tridiag_eigen(T: TridiagonalSymmetric, vectors: bool = True) -> EigenDecomposition:
    """Implicit-shift QL iteration with Wilkinson-type shifts.

    Eigenvalues come back ascending; each eigenvector column is normalised with
    its first significant entry positive so the output is deterministic.
    """
    n = T.n
    # iterate on a copy scaled by a power of two to unit norm, so the
    # absolute deflation floor is relative to the matrix size
    norm = T.max_abs()
    shift = math.frexp(norm)[1] if norm > 0 and math.isfinite(norm) else 0
    d = np.ldexp(T.diag, -shift).tolist()
    e = np.ldexp(T.offdiag, -shift).tolist() + [0.0]
    Z = np.eye(n) if vectors else None  # row k of Z holds eigenvector k
    cap = 30 * n

    for l in range(n):
        it = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd or abs(e[m]) <= _SAFE_MIN:
                    break
                m += 1
            if m == l:
                break
            it += 1
            if it > cap:
                raise ConvergenceError(f"QL iteration did not converge for eigenvalue {l} after {cap} sweeps")
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Z is not None:
                    zi = Z[i].copy()
                    zi1 = Z[i + 1]
                    Z[i] = c * zi - s * zi1
                    Z[i + 1] = s * zi + c * zi1
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0

    values = np.ldexp(np.array(d), shift)
    order = np.argsort(values, kind="stable")
    values = values[order]
    if Z is None:
        return EigenDecomposition(values, None)
    V = Z[order].T.copy()
    for k in range(n):
        col = V[:, k]
        col /= np.linalg.norm(col)
        big = np.abs(col) > 1e-12 * np.abs(col).max()
        if col[np.argmax(big)] < 0:
            col *= -1.0
    return EigenDecomposition(values, V)


def _apply(f, values):
    with np.errstate(all="ignore"):
        try:
            out = np.asarray(f(values), dtype=float)
            if out.shape != values.shape:
                raise TypeError
        except (TypeError, ValueError):
            try:
                out = np.array([float(f(float(v))) for v in values])
            except (ZeroDivisionError, OverflowError, ValueError) as exc:
                raise SingularityError(f"matrix function undefined on the spectrum: {exc}") from exc
        except (ZeroDivisionError, OverflowError) as exc:
            raise SingularityError(f"matrix function undefined on the spectrum: {exc}") from exc
    bad = ~np.isfinite(out)
    if np.any(bad):
        raise SingularityError(
            f"matrix function is non-finite at eigenvalue {float(values[bad][0]):.6g}")
    return out


def matrix_function(T: TridiagonalSymmetric, f: Callable, eig: EigenDecomposition | None = None) -> np.ndarray:
    """Dense ``Σ diag(f(λ)) Σᵀ`` for a symmetric tridiagonal ``T``."""
    if T.n == 1 or not np.any(T.offdiag):
        return np.diag(_apply(f, T.diag.copy()))
    if eig is None:
        eig = tridiag_eigen(T)
    fv = _apply(f, eig.values)
    V = eig.vectors
    M = (V * fv) @ V.T
    return 0.5 * (M + M.T)


def tridiag_inverse_closed_form(T: TridiagonalSymmetric) -> np.ndarray:
    """Inverse from the forward/backward pivot recursions.

    With ``A`` the diagonal and ``B`` the off-diagonal::

        C[N-1] = A[N-1],  C[n] = A[n] - B[n]**2 / C[n+1]
        D[0]   = A[0],    D[n] = A[n] - B[n-1]**2 / D[n-1]
        inv[n, m] = (-1)**(n+m) * prod(C[m+1:]) / prod(D[n:]) * prod(B[n:m]),  m >= n

    The lower triangle is filled by symmetry.
    """
    A = T.diag
    B = T.offdiag
    N = T.n
    scale = T.max_abs() or 1.0
    tiny = 64 * _EPS * scale

    C = np.empty(N)
    D = np.empty(N)
    C[N - 1] = A[N - 1]
    if abs(C[N - 1]) <= tiny:
        raise SingularError("zero pivot C[N-1]")
    for n in range(N - 2, -1, -1):
        C[n] = A[n] - B[n] ** 2 / C[n + 1]
        if abs(C[n]) <= tiny:
            raise SingularError(f"zero pivot C[{n}]")
    D[0] = A[0]
    if abs(D[0]) <= tiny:
        raise SingularError("zero pivot D[0]")
    for n in range(1, N):
        D[n] = A[n] - B[n - 1] ** 2 / D[n - 1]
        if abs(D[n]) <= tiny:
            raise SingularError(f"zero pivot D[{n}]")

    idx = np.arange(N)
    n_ix, m_ix = np.meshgrid(idx, idx, indexing="ij")
    upper = m_ix >= n_ix
    sign = np.where((n_ix + m_ix) % 2 == 0, 1.0, -1.0)

    if N <= _LOG_PRODUCT_THRESHOLD:
        sufC = np.append(np.cumprod(C[::-1])[::-1], 1.0)   # sufC[k] = prod C[k:]
        sufD = np.append(np.cumprod(D[::-1])[::-1], 1.0)
        inv = np.zeros((N, N))
        for n in range(N):
            bprod = 1.0
            for m in range(n, N):
                if m > n:
                    bprod *= B[m - 1]
                inv[n, m] = sign[n, m] * sufC[m + 1] / sufD[n] * bprod
    else:
        def suffix_log(x):
            lg = np.log(np.abs(x))
            neg = (x < 0).astype(int)
            return (np.append(np.cumsum(lg[::-1])[::-1], 0.0),
                    np.append(np.cumsum(neg[::-1])[::-1], 0))

        lC, nC = suffix_log(C)
        lD, nD = suffix_log(D)
        absB = np.abs(B)
        zero = absB == 0.0
        with np.errstate(divide="ignore"):
            lB = np.where(zero, 0.0, np.log(np.where(zero, 1.0, absB)))
        pB = np.concatenate([[0.0], np.cumsum(lB)])               # sum over B[:k]
        zB = np.concatenate([[0], np.cumsum(zero.astype(int))])
        negB = np.concatenate([[0], np.cumsum((B < 0).astype(int))])

        logmag = lC[np.minimum(m_ix + 1, N)] - lD[n_ix] + pB[m_ix] - pB[n_ix]
        negs = nC[np.minimum(m_ix + 1, N)] + nD[n_ix] + negB[m_ix] - negB[n_ix]
        vanish = (zB[m_ix] - zB[n_ix]) > 0
        with np.errstate(over="ignore", under="ignore"):
            mag = np.where(vanish, 0.0, np.exp(logmag))
        inv = np.where(upper, sign * np.where(negs % 2 == 0, 1.0, -1.0) * mag, 0.0)

    inv = np.triu(inv)
    return inv + np.triu(inv, 1).T
