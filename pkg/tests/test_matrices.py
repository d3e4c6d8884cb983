import numpy as np
import pytest

from dgsvv.gas import GasModel, conserved, entropy_vars, primitives
from dgsvv.matrices import NS_KINETIC_MATRIX, gp_matrices, ns_thermo_matrices

GAS = GasModel()


def random_primitives(n, seed=0):
    rng = np.random.default_rng(seed)
    rho = 0.2 + 2.0 * rng.random(n)
    u, v, w = (rng.standard_normal(n) for _ in range(3))
    p = 0.2 + 3.0 * rng.random(n)
    return rho, u, v, w, p


def check_factorization(B, L, Dvec, tol=1e-10):
    rec = np.einsum("...ji,...j,...jk->...ik", L, Dvec, L)
    scale = np.abs(B).max(axis=(-2, -1), keepdims=True)
    assert np.abs(rec - B).max() <= tol * scale.max()
    # diagonal nonnegative, B symmetric PSD
    assert Dvec.min() >= -1e-14 * np.abs(Dvec).max()
    assert np.abs(B - np.swapaxes(B, -1, -2)).max() <= 1e-12 * scale.max()
    eig = np.linalg.eigvalsh(B)
    assert eig.min() >= -1e-10 * scale.max()


def test_kinetic_matrix_structure():
    C = NS_KINETIC_MATRIX
    assert C.shape == (15, 15)
    # stress block spot values: normal 4/3, shear 1, cross coupling -2/3 / 1
    assert C[1, 1] == pytest.approx(4 / 3)
    assert C[2, 2] == 1.0 and C[3, 3] == 1.0
    assert C[6, 7] == 0.0
    assert C[1, 7] == pytest.approx(-2 / 3)
    assert C[2, 6] == 1.0
    # symmetric positive semi-definite quadratic form on stress modes
    sym = 0.5 * (C + C.T)
    assert np.linalg.eigvalsh(sym).min() >= -1e-12


def test_kinetic_dissipation_sign():
    """G : C G >= 0 for random gradient stacks (trace-free + dilatation)."""
    rng = np.random.default_rng(1)
    G = rng.standard_normal((1000, 15))
    quad = np.einsum("ni,ij,nj->n", G, NS_KINETIC_MATRIX, G)
    assert quad.min() >= -1e-12 * (G**2).sum(axis=1).max()


def test_thermo_factorization_random():
    rho, u, v, w, p = random_primitives(1000, seed=2)
    B, L, Dvec = ns_thermo_matrices(rho, u, v, w, p, 0.7, GAS)
    check_factorization(B, L, Dvec)


def test_gp_factorization_random():
    rho, u, v, w, p = random_primitives(1000, seed=3)
    B, L, Dvec = gp_matrices(rho, u, v, w, p, 0.3, 0.8, GAS)
    check_factorization(B, L, Dvec)


def test_gp_alpha_only_rank_structure():
    # alpha part alone: B = alpha*rho * (qq^T/rho^2 + Lambda^2 e5 e5^T) blocks
    rho, u, v, w, p = 1.3, 0.4, -0.2, 0.1, 0.9
    B, _, _ = gp_matrices(rho, u, v, w, p, 0.0, 1.0, GAS)
    e = (p / (GAS.gamma - 1.0) + 0.5 * rho * (u * u + v * v + w * w)) / rho
    lam2 = (p / rho) ** 2 / (GAS.gamma - 1.0)
    qvec = np.array([1.0, u, v, w, e])
    blk = rho * (np.outer(qvec, qvec) + lam2 * np.outer(
        np.eye(5)[4], np.eye(5)[4]))
    for d in range(3):
        sl = slice(5 * d, 5 * d + 5)
        assert np.abs(B[sl, sl] - blk).max() < 1e-12


def test_thermo_dissipation_contraction():
    """w-gradient contraction G . B G >= 0 on random data (entropy decay)."""
    rng = np.random.default_rng(4)
    rho, u, v, w, p = random_primitives(200, seed=5)
    B, _, _ = ns_thermo_matrices(rho, u, v, w, p, 1.0, GAS)
    G = rng.standard_normal((200, 15))
    quad = np.einsum("ni,nij,nj->n", G, B, G)
    assert quad.min() >= -1e-12 * np.abs(B).max() * (G**2).sum(axis=1).max()


def test_thermo_matrix_is_viscous_flux_jacobian():
    """Oracle: B applied to an exact entropy-variable gradient reproduces
    the Navier-Stokes viscous flux (tau, tau.u + k grad T) for a known
    velocity/temperature field."""
    gas = GAS
    rho0, p0 = 1.2, 0.9
    mu = 0.37
    # linear velocity field u = (a.x, b.y-ish): prescribe grad of primitives
    grad_u = np.array([[0.3, -0.1, 0.2],
                       [0.05, 0.4, -0.25],
                       [-0.15, 0.1, 0.2]])  # grad_u[d, i] = du_i/dx_d
    vel = np.array([0.6, -0.3, 0.2])
    grad_T = np.array([0.07, -0.02, 0.11])
    grad_rho = np.zeros(3)
    T0 = p0 / (rho0 * gas.R)
    grad_p = rho0 * gas.R * grad_T + gas.R * T0 * grad_rho

    # entropy-variable gradient via the chain rule on primitives
    def wvars(rho, uvec, p):
        q = conserved(rho, *uvec, p, gas)
        return entropy_vars(q, gas, "thermo")

    eps = 1e-7
    G = np.zeros((3, 5))
    for d in range(3):
        up = vel + eps * grad_u[d]
        um = vel - eps * grad_u[d]
        wp = wvars(rho0 + eps * grad_rho[d], up, p0 + eps * grad_p[d])
        wm = wvars(rho0 - eps * grad_rho[d], um, p0 - eps * grad_p[d])
        G[d] = (wp - wm) / (2 * eps)

    B, _, _ = ns_thermo_matrices(rho0, *vel, p0, mu, gas)
    F = (B @ G.reshape(15)).reshape(3, 5)

    # reference Navier-Stokes flux
    S = 0.5 * (grad_u + grad_u.T)
    tau = 2 * mu * S - (2 * mu / 3) * np.trace(S) * np.eye(3)
    kappa = mu * gas.gamma * gas.R / ((gas.gamma - 1.0) * gas.Pr)
    ref = np.zeros((3, 5))
    ref[:, 1:4] = tau
    ref[:, 4] = tau @ vel + kappa * grad_T
    assert np.abs(F - ref).max() < 1e-5


def test_gp_zero_coefficients_zero_flux():
    rho, u, v, w, p = random_primitives(10, seed=6)
    B, _, Dvec = gp_matrices(rho, u, v, w, p, 0.0, 0.0, GAS)
    assert np.abs(B).max() == 0.0
    assert np.abs(Dvec).max() == 0.0
