"""Local reconstruction of ``V(x)`` from the potential matrix.

Two routes: the column series ``V(x) ≈ Σₘ Qₘ(y(x)) 𝒱ₘ₀`` evaluated directly,
and sampling that series at the Gauss nodes of the basis followed by a
Thiele continued-fraction fit through the samples.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateNodesError, DomainError, NoValidNodesError, PivotError, SingularityError
from .hamiltonian import OperatorMatrices, QuantumSystem, assemble_system
from .ortho_poly import BasisSet, quadrature_nodes
from .system import PhysicalParams

_PIVOT_REL = 1e-13


class Method(enum.Enum):
    SERIES = "series"
    QUADFIT = "quadfit"


# ---------------------------------------------------------------------------
# grids and hulls

def parse_grid(spec: str) -> np.ndarray:
    """``start:stop:step`` -> points ``start + k·step`` not beyond ``stop``."""
    try:
        start, stop, step = (float(p) for p in spec.split(":"))
    except ValueError:
        raise DomainError(f"grid must be start:stop:step, got {spec!r}") from None
    if not step > 0:
        raise DomainError("grid step must be positive")
    if stop < start:
        return np.empty(0)
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def interior_hull(nodes) -> tuple[float, float]:
    """Span between the 10th and 90th percentile of the node positions."""
    lo, hi = np.percentile(np.asarray(nodes, dtype=float), [10, 90])
    return float(lo), float(hi)


# ---------------------------------------------------------------------------

def potential_series(mats: OperatorMatrices, basis: BasisSet, x, column: int = 0):
    """Series estimate of ``V(x)`` from one column of the potential matrix.

    ``column = 0`` needs no division since ``Q₀ = 1``; other columns divide by
    ``Qₙ(y)`` and are unreliable near its zeros.
    """
    x = basis.check_domain(x)
    Q = basis.Q(basis.y_of_x(x), mats.N)
    out = np.tensordot(mats.V[:, column], Q, axes=(0, 0))
    if column:
        with np.errstate(divide="ignore", invalid="ignore"):
            out = out / Q[column]
    return out if np.ndim(out) else float(out)


def quadrature_sample(mats: OperatorMatrices, basis: BasisSet, column: int = 0):
    """``(x_nodes, V(x_nodes))`` at the Gauss nodes of the basis polynomials."""
    y = quadrature_nodes(basis.jacobi(mats.N))
    lo, hi = basis.y_range
    ok = (y > lo) & (y < hi)
    if not np.any(ok):
        raise NoValidNodesError("no Jacobi eigenvalue lies inside the range of the coordinate map")
    if not np.all(ok):
        warnings.warn(f"dropped {int((~ok).sum())} nodes outside the coordinate range", RuntimeWarning,
                      stacklevel=2)
    x = np.sort(basis.x_of_y(y[ok]))
    ok_x = basis.in_domain(x)
    x = x[ok_x]
    if x.size == 0:
        raise NoValidNodesError("no valid nodes in the basis domain")
    return x, np.asarray(potential_series(mats, basis, x, column), dtype=float)


# ---------------------------------------------------------------------------
# continued-fraction fit

def leja_order(x: np.ndarray, start: int | None = None) -> np.ndarray:
    """Greedy ordering maximising the product of distances to earlier points."""
    n = x.size
    if start is None:
        start = int(np.argmax(np.abs(x - x.mean())))
    order = [start]
    taken = np.zeros(n, dtype=bool)
    taken[start] = True
    with np.errstate(divide="ignore"):
        score = np.log(np.abs(x - x[start]))
    for _ in range(n - 1):
        masked = np.where(taken, -np.inf, score)
        j = int(np.argmax(masked))
        order.append(j)
        taken[j] = True
        with np.errstate(divide="ignore"):
            score = score + np.log(np.abs(x - x[j]))
    return np.array(order)


@dataclass(frozen=True)
class RationalFit:
    nodes: np.ndarray          # (x, V) pairs in the order used
    coefficients: np.ndarray   # inverse differences
    max_node_residual: float = field(default=0.0)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        xs = self.nodes[:, 0]
        a = self.coefficients
        r = np.zeros_like(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            for k in range(a.size - 1, 0, -1):
                r = (x - xs[k - 1]) / (a[k] + r)
        out = a[0] + r
        return out if out.ndim else float(out)

    evaluate = __call__


def _thiele(x, f, preference):
    """Inverse differences with adaptive pivot choice.

    At each depth the next interpolation node is the first one in
    ``preference`` whose inverse difference is finite and whose difference to
    every other finite entry is not negligible.  When no such node exists the
    first finite one is taken; exactly vanishing differences then produce
    infinite inverse differences, which become zero one level later
    (projective Thiele recursion).
    """
    phi = f.astype(float).copy()
    remaining = list(preference)
    xs, coef = [], []
    while remaining:
        rem = np.array(remaining)
        finite = rem[np.isfinite(phi[rem])]
        if finite.size == 0:
            raise PivotError(f"no finite inverse difference left at depth {len(coef)}")
        pick = finite[0]
        for c in finite:
            others = finite[finite != c]
            d = np.abs(phi[others] - phi[c])
            if np.all(d > _PIVOT_REL * np.maximum(np.abs(phi[others]), abs(phi[c]))):
                pick = c
                break
        a_k = phi[pick]
        xs.append(x[pick])
        coef.append(a_k)
        remaining.remove(int(pick))
        if not remaining:
            break
        rest = np.array(remaining)
        d = phi[rest] - a_k
        if np.all(np.isfinite(d)) and np.all(np.abs(d) <= _PIVOT_REL * np.maximum(np.abs(phi[rest]), abs(a_k))):
            break   # current convergent already reproduces every remaining node
        with np.errstate(divide="ignore", invalid="ignore"):
            new = (x[rest] - x[pick]) / d
        if np.any(np.isnan(new)):
            raise PivotError(f"undefined inverse difference at depth {len(coef)}")
        phi[rest] = new
    return np.array(xs), np.array(coef)


def rational_fit(points) -> RationalFit:
    """Thiele continued-fraction interpolant through ``points`` (rows of x, V)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] < 2:
        raise DegenerateNodesError("need at least two points")
    x, f = pts[:, 0], pts[:, 1]
    if np.unique(x).size != x.size:
        raise DegenerateNodesError("duplicate x in rational fit nodes")
    if not np.all(np.isfinite(pts)):
        raise DegenerateNodesError("non-finite data in rational fit nodes")

    best = None
    # second attempt: Leja ordering started from the node nearest the centre
    for start in (None, int(np.argmin(np.abs(x - x.mean())))):
        try:
            xs, coef = _thiele(x, f, leja_order(x, start))
        except PivotError:
            if start is not None and best is None:
                raise
            continue
        fit = RationalFit(np.column_stack([xs, np.interp(xs, x[np.argsort(x)], f[np.argsort(x)])]), coef)
        with np.errstate(all="ignore"):
            resid = float(np.nanmax(np.abs(fit(x) - f))) if np.all(np.isfinite(fit(x))) else math.inf
        fit = RationalFit(fit.nodes, coef, resid)
        if best is None or resid < best.max_node_residual:
            best = fit
        if resid <= 1e-9 * max(1.0, float(np.abs(f).max())):
            break
    return best


# ---------------------------------------------------------------------------

def morse_exact(params: PhysicalParams, x):
    """``λ²/8 [e^{-2λx} + 2(2μ-1) e^{-λx}]``."""
    lam, mu = params.lam, params.mu
    y = np.exp(-lam * np.asarray(x, dtype=float))
    out = lam ** 2 / 8 * (y * y + 2 * (2 * mu - 1) * y)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class PotentialTable:
    x: np.ndarray
    V: np.ndarray
    method: Method
    N: int
    convergence_metric: float
    extrapolated: np.ndarray
    nodes: np.ndarray

    @property
    def points(self) -> np.ndarray:
        return np.column_stack([self.x, self.V])


def _evaluate(mats, basis, grid, method, column):
    nodes, values = quadrature_sample(mats, basis, column)
    if grid.size == 0:
        return np.empty(0), nodes
    if method is Method.SERIES:
        V = np.asarray(potential_series(mats, basis, grid, column), dtype=float)
    else:
        V = np.asarray(rational_fit(np.column_stack([nodes, values]))(grid), dtype=float)
    return V, nodes


def reconstruct_potential(mats: OperatorMatrices, basis: BasisSet, grid, method: Method | str = Method.SERIES,
                          reference: OperatorMatrices | None = None, column: int = 0) -> PotentialTable:
    """Sample ``V`` on ``grid`` (an array or a ``start:stop:step`` string).

    ``reference`` is the same system at a larger truncation; when given, the
    table's ``convergence_metric`` is the largest change in V between the two
    over grid points inside the node hull.
    """
    method = Method(method)
    grid = parse_grid(grid) if isinstance(grid, str) else np.asarray(grid, dtype=float).ravel()
    if grid.size > 1 and np.any(np.diff(grid) <= 0):
        raise DomainError("grid must be strictly increasing")
    basis.check_domain(grid)
    V, nodes = _evaluate(mats, basis, grid, method, column)
    extrapolated = (grid < nodes[0]) | (grid > nodes[-1])
    metric = math.nan
    if reference is not None and grid.size:
        V_ref, _ = _evaluate(reference, basis, grid, method, column)
        inside = ~extrapolated
        if np.any(inside):
            metric = float(np.abs(V_ref - V)[inside].max())
    if not np.all(np.isfinite(V)):
        raise SingularityError("reconstructed potential is not finite on the grid")
    return PotentialTable(grid, V, method, mats.N, metric, extrapolated, nodes)


def reconstruct(system: QuantumSystem, N: int, grid, method: Method | str = Method.SERIES,
                column: int = 0, convergence_step: int = 10) -> PotentialTable:
    """Assemble the system at ``N`` (and ``N + convergence_step``) and reconstruct."""
    mats = assemble_system(system, N)
    reference = None
    if convergence_step:
        try:
            reference = assemble_system(system, N + convergence_step)
        except SingularityError as exc:
            warnings.warn(f"convergence metric unavailable: {exc}", RuntimeWarning, stacklevel=2)
    return reconstruct_potential(mats, system.basis, grid, method, reference, column)


def column_discrepancy(mats: OperatorMatrices, basis: BasisSet, x) -> np.ndarray:
    """``|V₁(x) - V₀(x)|``: column-1 versus column-0 estimates, an error gauge."""
    return np.abs(np.asarray(potential_series(mats, basis, x, 1)) - np.asarray(potential_series(mats, basis, x, 0)))
