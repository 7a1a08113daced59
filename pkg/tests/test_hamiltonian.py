import math
import warnings

import numpy as np
import pytest

from conftest import FIGURE_PARAMS
from oracles import KINETIC_CASES, fd_kinetic
from spectral_design.errors import SingularError
from spectral_design.hamiltonian import (QuantumSystem, assemble, assemble_system, cdh_matrix,
                                         kinetic_gegenbauer, kinetic_hermite, kinetic_matrix, kinetic_morse,
                                         kinetic_radial)
from spectral_design.linalg import tridiag_eigen
from spectral_design.ortho_poly import gegenbauer_offdiag
from spectral_design.system import PhysicalParams, bound_spectrum, exp_gauss_map, radial_inverse_map


@pytest.mark.parametrize("name", sorted(KINETIC_CASES))
def test_kinetic_against_finite_differences(name):
    params, x = KINETIC_CASES[name]
    system = QuantumSystem.build(name, params)
    T = kinetic_matrix(name, params, 5)
    ref = fd_kinetic(system.basis, x, 4, ell=params.ell if name == "radial" else 0)
    assert np.abs(T - ref).max() <= 1e-5


def test_morse_kinetic_corner():
    T = kinetic_morse(PhysicalParams(mu=-3.7, a=2.5, nu=2.5), 6)
    # -(1/2)[(4ν² + 2ν)/4 - (2ν² + ν(1-ν))] = ν/4
    assert T[0, 0] == pytest.approx(0.625, rel=1e-14)
    assert T[0, 1] == T[1, 0]


def test_radial_kinetic_corner():
    T = kinetic_radial(PhysicalParams(mu=-7.7, a=7.7, ell=1), 4)
    assert T[0, 0] == pytest.approx(1.25, rel=1e-15)
    assert T[0, 1] == pytest.approx(0.5 * math.sqrt(2.5), rel=1e-15)
    assert T[0, 1] == pytest.approx(0.790569, abs=1e-6)


def test_hermite_kinetic_entries():
    lam = 1.7
    T = kinetic_hermite(PhysicalParams(mu=-4.3, a=4.3, lam=lam), 5)
    assert T[0, 0] == pytest.approx(lam ** 2 / 4)
    assert T[0, 2] == pytest.approx(-lam ** 2 / 4 * math.sqrt(2))
    assert T[0, 1] == 0.0 and T[1, 2] == 0.0


def test_gegenbauer_offdiag_first():
    G = gegenbauer_offdiag(3.2, 3)
    assert G[0] == pytest.approx(0.5 * math.sqrt(2 / 4.2), rel=1e-15)
    assert G[0] == pytest.approx(0.345033, abs=1e-6)


def test_gegenbauer_kinetic_corner():
    T, asym = kinetic_gegenbauer(PhysicalParams(mu=-3.2, a=3.2, nu=3.2), 8, return_asymmetry=True)
    # frozen after agreement with the finite-difference oracle
    assert T[0, 0] == pytest.approx(0.8148809518, rel=1e-9)
    assert asym <= 1e-12


@pytest.mark.parametrize("name", ["morse", "radial", "expgauss", "sinh"])
def test_kinetic_positive_definite(name):
    T = kinetic_matrix(name, FIGURE_PARAMS[name], 30)
    assert np.array_equal(T, T.T)
    assert np.linalg.eigvalsh(T).min() > 0


# --- assembly ---------------------------------------------------------------

def test_morse_potential_corner(morse_params):
    m = assemble_system(QuantumSystem.build("morse", morse_params), 10)
    assert m.V[0, 0] == pytest.approx(0.5 * -12.25 - 0.625, rel=1e-14)
    assert np.array_equal(m.H, 0.5 * m.R.dense())
    # H tridiagonal and T pentadiagonal leave V pentadiagonal
    assert np.all(np.triu(m.V, 3) == 0)


def test_one_by_one_expgauss():
    p = PhysicalParams(mu=-4.3, a=3.0, alpha=0.2, lam=1.4)
    m = assemble("expgauss", exp_gauss_map(p.lam, p.alpha), p, 1)
    A0 = (p.mu + p.a) ** 2 - p.mu ** 2
    assert m.H[0, 0] == pytest.approx(0.5 * p.lam ** 2 * math.expm1(p.alpha * A0), rel=1e-14)


def test_radial_inverse_paths_agree():
    p = FIGURE_PARAMS["radial"]
    m = assemble("radial", radial_inverse_map(p.lam, p.alpha), p, 20)
    assert m.diagnostics["inverse_discrepancy"] <= 1e-8


def test_radial_singular_R():
    # a = -2μ makes A₀ = (μ+a)² - μ² vanish, so the 1x1 R is zero
    p = PhysicalParams(mu=-0.5, a=1.0, alpha=0.5)
    with pytest.raises(SingularError):
        assemble("radial", radial_inverse_map(1.0, 0.5), p, 1)


@pytest.mark.parametrize("name,N", [("morse", 40), ("radial", 40), ("expgauss", 20), ("sinh", 16)])
def test_matrix_invariants(name, N):
    m = assemble_system(QuantumSystem.build(name, FIGURE_PARAMS[name]), N)
    for M in (m.T, m.H, m.V):
        assert np.abs(M - M.T).max() <= 1e-10 * max(1.0, np.abs(M).max())
    assert np.array_equal(m.V, m.H - m.T)
    with pytest.raises(ValueError):
        m.V[0, 0] = 1.0


@pytest.mark.parametrize("name,N", [("morse", 40), ("radial", 40), ("expgauss", 20), ("sinh", 16)])
def test_eigenvalue_transport(name, N):
    system = QuantumSystem.build(name, FIGURE_PARAMS[name])
    m = assemble_system(system, N)
    lam = np.linalg.eigvalsh(m.R.dense())
    expected = np.sort(np.asarray(system.spectral_map.forward(lam), dtype=float))
    got = np.linalg.eigvalsh(m.H)
    assert np.abs(got - expected).max() <= 1e-9 * np.abs(expected).max()


def _bound_errors(name, sizes):
    p = FIGURE_PARAMS[name]
    system = QuantumSystem.build(name, p)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        E = bound_spectrum(system.spectral_map, p).energies
    out = []
    for N in sizes:
        if name in ("morse", "radial"):
            ev = np.linalg.eigvalsh(assemble_system(system, N).H)
        else:
            # eigenvalues of E(R) through the transported spectrum of R: a dense
            # solve of H loses the small ones next to e^{α λ_max}
            ev = np.sort(system.spectral_map.forward(tridiag_eigen(cdh_matrix(p, N), vectors=False).values))
        out.append(np.abs(ev[:E.size] - E).max())
    return out


@pytest.mark.parametrize("name,sizes", [("morse", (20, 40, 80)), ("radial", (20, 40, 80)),
                                        ("expgauss", (10, 20, 40)), ("sinh", (10, 20, 40))])
def test_bound_levels_improve_with_size(name, sizes):
    with np.errstate(over="ignore"):
        errors = _bound_errors(name, sizes)
    assert all(b < a for a, b in zip(errors, errors[1:]))
