import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special as sp

from spectral_design.errors import DegenerateRecursionError, DomainError, ZeroOffdiagError
from spectral_design.ortho_poly import (GegenbauerBasis, HermiteBasis, LaguerreMorseBasis, RadialLaguerreBasis,
                                        RecursionCoefficients, basis_eval, cdh_recursion, eval_recursion,
                                        gauss_rule, gegenbauer, gegenbauer_derivative_identity, hermite,
                                        jacobi_matrix, laguerre, quadrature_nodes)

BASES = {
    "laguerre_morse": LaguerreMorseBasis(lam=1.0, nu=2.5),
    "radial": RadialLaguerreBasis(lam=0.8, ell=1),
    "hermite": HermiteBasis(lam=1.3),
    "gegenbauer": GegenbauerBasis(lam=1.1, nu=3.2),
}
# integration interval in x for each basis (functions are negligible outside)
SUPPORT = {"laguerre_morse": (-6.0, 30.0), "radial": (0.0, 12.0), "hermite": (-9.0, 9.0),
           "gegenbauer": (-25.0, 25.0)}


# --- recursion -------------------------------------------------------------

def test_p0_only():
    c = RecursionCoefficients(np.array([2.0, 1.0]), np.array([3.0, 1.0]))
    assert np.array_equal(eval_recursion(c, 0.7, 0), [1.0])


def test_first_degree_from_coefficients():
    c = RecursionCoefficients(np.array([2.0]), np.array([3.0]))
    assert eval_recursion(c, 5.0, 1)[1] == 1.0


def test_cdh_coefficients_at_morse_parameters():
    c = cdh_recursion(-3.7, 2.5, 3)
    assert c.diag[0] == pytest.approx(-12.25, abs=1e-12)
    assert c.diag[1] == pytest.approx(-8.65, abs=1e-12)
    assert c.offdiag[0] == pytest.approx(1.2 * math.sqrt(5), rel=1e-14)
    assert c.offdiag[0] == pytest.approx(2.683282, abs=1e-6)


def test_cdh_first_degree_vanishes_at_a0():
    c = cdh_recursion(-3.7, 2.5, 4)
    assert eval_recursion(c, c.diag[0], 1)[1] == pytest.approx(0.0, abs=1e-15)


def test_cdh_degenerate_parameters():
    with pytest.raises(DegenerateRecursionError):
        cdh_recursion(-4.3, 4.3, 5)
    loose = cdh_recursion(-4.3, 4.3, 5, strict=False)
    assert loose.offdiag[0] == 0.0
    with pytest.raises(ZeroOffdiagError):
        eval_recursion(loose, 1.0, 2)


def _families(N):
    out = {"cdh": cdh_recursion(-3.7, 2.5, N)}
    out.update({name: b.recursion(N) for name, b in BASES.items()})
    return out


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=20, max_size=20))
def test_recursion_residual(raw):
    N = 32
    for name, c in _families(N).items():
        # sample s within the spectral range of the family
        ev = np.linalg.eigvalsh(jacobi_matrix(c, N).dense())
        s = 0.5 * (ev[0] + ev[-1]) + np.asarray(raw) / 3 * 0.5 * (ev[-1] - ev[0])
        P = eval_recursion(c, s, N)
        A, B = c.diag, c.offdiag
        for n in range(1, 31):
            terms = [s * P[n], A[n] * P[n], B[n - 1] * P[n - 1], B[n] * P[n + 1]]
            resid = terms[0] - terms[1] - terms[2] - terms[3]
            # round-off is bounded by the largest term, not by the (cancelling) result
            scale = np.maximum(1.0, sum(np.abs(t) for t in terms))
            assert np.all(np.abs(resid) <= 1e-10 * scale), name


# --- Jacobi matrices and nodes ---------------------------------------------

def test_jacobi_single():
    c = RecursionCoefficients(np.array([4.5, 1.0]), np.array([0.3, 0.2]))
    J = jacobi_matrix(c, 1)
    assert np.array_equal(J.dense(), [[4.5]])


def test_hermite_jacobi_two():
    J = HermiteBasis(1.0).jacobi(2)
    assert np.allclose(J.diag, [0, 0]) and np.allclose(J.offdiag, [math.sqrt(0.5)])


def test_cdh_jacobi_two():
    J = jacobi_matrix(cdh_recursion(-3.7, 2.5, 2), 2)
    assert np.allclose(J.diag, [-12.25, -8.65]) and np.allclose(J.offdiag, [2.683282], atol=1e-6)


def test_hermite_nodes():
    assert np.allclose(quadrature_nodes(HermiteBasis(1.0).jacobi(2)), [-1 / math.sqrt(2), 1 / math.sqrt(2)])
    assert np.allclose(quadrature_nodes(HermiteBasis(1.0).jacobi(3)), [-math.sqrt(1.5), 0, math.sqrt(1.5)],
                       atol=1e-14)


def test_single_node():
    c = RecursionCoefficients(np.array([-0.4]), np.array([1.0]))
    assert np.array_equal(quadrature_nodes(jacobi_matrix(c, 1)), [-0.4])


@pytest.mark.parametrize("name", sorted(BASES))
def test_nodes_strictly_increasing_and_match_roots(name):
    basis = BASES[name]
    y = quadrature_nodes(basis.jacobi(12))
    assert np.all(np.diff(y) > 0)
    # the nodes are the zeros of the classical polynomial of degree 12
    assert np.abs(basis.classical(12, y)).max() <= 1e-8 * np.abs(basis.classical(12, np.linspace(y[0], y[-1], 50))).max()


@pytest.mark.parametrize("name", sorted(BASES) + ["cdh"])
def test_gauss_rule_exactness(name):
    N = 10
    c = cdh_recursion(-3.7, 2.5, N + 1) if name == "cdh" else BASES[name].recursion(N + 1)
    nodes, weights = gauss_rule(c, N)
    Q = eval_recursion(c, nodes, N)
    gram = (Q * weights) @ Q.T
    for i in range(N + 1):
        for j in range(N + 1):
            if i + j <= 2 * N - 1:
                assert gram[i, j] == pytest.approx(float(i == j), abs=1e-8)


# --- basis functions ---------------------------------------------------------

@pytest.mark.parametrize("name", sorted(BASES))
def test_orthonormality_by_quadrature(name):
    basis = BASES[name]
    lo, hi = SUPPORT[name]
    lo = max(lo, 1e-12) if name == "radial" else lo

    def overlap(n, m):
        f = lambda x: basis_eval(basis, n, x) * basis_eval(basis, m, x)
        return integrate.quad(f, lo, hi, limit=400, epsabs=1e-13, epsrel=1e-12)[0]

    for n in range(6):
        for m in range(n, 6):
            assert overlap(n, m) == pytest.approx(float(n == m), abs=1e-8), (n, m)


@pytest.mark.parametrize("name", sorted(BASES))
def test_recursion_and_classical_routes_agree(name):
    basis = BASES[name]
    lo, hi = SUPPORT[name]
    x = np.linspace(lo + 0.1, hi * 0.6, 97)
    phi = basis.phi_all(x, 15)
    for n in range(15):
        direct = basis_eval(basis, n, x)
        assert np.allclose(phi[n], direct, rtol=1e-9, atol=1e-12 * np.abs(direct).max())


def test_q0_is_one():
    for basis in BASES.values():
        assert np.all(basis.Q(np.array([0.1, 0.5]), 3)[0] == 1.0)


def test_hermite_ground_state_at_origin():
    assert basis_eval(HermiteBasis(1.0), 0, 0.0) == pytest.approx(math.pi ** -0.25, rel=1e-14)
    assert math.pi ** -0.25 == pytest.approx(0.7511255, abs=1e-7)


def test_laguerre_ground_state_peak():
    b = LaguerreMorseBasis(1.0, 2.5)
    x_peak = -math.log(2 * b.nu)
    expected = math.sqrt(1.0 / math.gamma(2 * b.nu)) * (2 * b.nu) ** b.nu * math.exp(-b.nu)
    assert basis_eval(b, 0, x_peak) == pytest.approx(expected, rel=1e-13)
    x = np.linspace(-4, 4, 2001)
    assert basis_eval(b, 0, x).max() <= expected * (1 + 1e-12)


def test_gegenbauer_odd_vanishes_at_center():
    assert basis_eval(GegenbauerBasis(1.0, 3.2), 1, 0.0) == 0.0


def test_radial_domain():
    with pytest.raises(DomainError):
        basis_eval(BASES["radial"], 0, 0.0)
    with pytest.raises(DomainError):
        BASES["radial"].phi_all(np.array([1.0, -0.5]), 3)


def test_large_index_normalisation_is_finite():
    b = LaguerreMorseBasis(1.0, 2.5)
    assert math.isfinite(basis_eval(b, 150, 0.3))
    assert math.isfinite(basis_eval(GegenbauerBasis(1.0, 3.2), 200, 0.3))


# --- classical polynomials against scipy -------------------------------------

@pytest.mark.parametrize("n", [0, 1, 2, 5, 9])
def test_classical_polynomials(n):
    y = np.linspace(-0.9, 0.9, 11)
    assert np.allclose(gegenbauer(n, 3.2, y), sp.eval_gegenbauer(n, 3.2, y), rtol=1e-12, atol=1e-12)
    assert np.allclose(hermite(n, 3 * y), sp.eval_hermite(n, 3 * y), rtol=1e-12, atol=1e-10)
    assert np.allclose(laguerre(n, 4.0, 5 + 5 * y), sp.eval_genlaguerre(n, 4.0, 5 + 5 * y), rtol=1e-12,
                       atol=1e-10)


# --- Gegenbauer derivative identity ------------------------------------------

def test_gegenbauer_identity_n0():
    assert gegenbauer_derivative_identity(1.5, 0, 0.4) < 1e-9


@pytest.mark.parametrize("nu,n,y", [(1.5, 2, 0.3), (2.5, 5, -0.7), (3.2, 7, 0.55)])
def test_gegenbauer_identity(nu, n, y):
    assert gegenbauer_derivative_identity(nu, n, y) < 1e-6


def test_gegenbauer_identity_domain():
    with pytest.raises(DomainError):
        gegenbauer_derivative_identity(1.5, 2, 1.0)
