import numpy as np
import pytest

from dgsvv.gas import (
    AdmissibilityError,
    GasModel,
    check_admissible,
    conserved,
    density_gradient_from_w,
    entropy_density,
    entropy_kinetic,
    entropy_potential,
    entropy_thermo,
    entropy_vars,
)

GAS = GasModel()


def random_states(n, seed=0):
    rng = np.random.default_rng(seed)
    rho = 0.2 + 2.0 * rng.random(n)
    u, v, w = (rng.standard_normal(n) for _ in range(3))
    p = 0.2 + 3.0 * rng.random(n)
    return conserved(rho, u, v, w, p, GAS)


def test_roundtrip():
    from dgsvv.gas import primitives

    q = random_states(100)
    rho, u, v, w, p = primitives(q, GAS)
    assert np.allclose(conserved(rho, u, v, w, p, GAS), q, atol=1e-13)


def test_admissibility_raises():
    q = conserved(1.0, 0.0, 0.0, 0.0, 1.0, GAS)
    check_admissible(q, GAS)
    bad = q.copy()
    bad[..., 0] = -1.0
    with pytest.raises(AdmissibilityError):
        check_admissible(bad, GAS)
    bad = q.copy()
    bad[..., 4] = 0.0  # pressure becomes negative
    with pytest.raises(AdmissibilityError):
        check_admissible(bad, GAS)


@pytest.mark.parametrize("entropy_set", ["kinetic", "thermo"])
def test_entropy_variables_are_entropy_gradient(entropy_set):
    """Finite-difference oracle: w = dE/dq for both entropy functions."""
    q = random_states(50, seed=3)
    W = entropy_vars(q, GAS, entropy_set)
    eps = 1e-6
    for comp in range(5):
        dq = np.zeros(5)
        dq[comp] = eps
        Ep = entropy_density(q + dq, GAS, entropy_set)
        Em = entropy_density(q - dq, GAS, entropy_set)
        fd = (Ep - Em) / (2 * eps)
        assert np.abs(fd - W[..., comp]).max() < 5e-8


def test_thermo_potential_identity():
    """FD oracle for d psi = f . dw along random state-space directions."""
    from dgsvv.fluxes import euler_flux

    rng = np.random.default_rng(5)
    q = random_states(50, seed=4)
    dq = rng.standard_normal(q.shape)
    eps = 1e-7
    psi_p = entropy_potential(q + eps * dq, GAS, "thermo")
    psi_m = entropy_potential(q - eps * dq, GAS, "thermo")
    w_p = entropy_vars(q + eps * dq, GAS, "thermo")
    w_m = entropy_vars(q - eps * dq, GAS, "thermo")
    f = euler_flux(q, GAS)
    lhs = (psi_p - psi_m) / (2 * eps)
    rhs = np.einsum("...dv,...v->...d", f, (w_p - w_m) / (2 * eps))
    scale = np.abs(f).max()
    assert np.abs(lhs - rhs).max() < 2e-6 * scale


def test_kinetic_variable_flux_contraction():
    """Kinetic-energy pair: f . dw = p du_d (pressure-work contraction);
    the full differential of psi^K adds the transfer term u_d dp."""
    from dgsvv.fluxes import euler_flux
    from dgsvv.gas import primitives

    rng = np.random.default_rng(6)
    q = random_states(50, seed=4)
    dq = rng.standard_normal(q.shape)
    eps = 1e-7
    w_p = entropy_vars(q + eps * dq, GAS, "kinetic")
    w_m = entropy_vars(q - eps * dq, GAS, "kinetic")
    dw = (w_p - w_m) / (2 * eps)
    f = euler_flux(q, GAS)
    lhs = np.einsum("...dv,...v->...d", f, dw)
    rp = primitives(q + eps * dq, GAS)
    rm = primitives(q - eps * dq, GAS)
    _, _, _, _, p = primitives(q, GAS)
    du = np.stack([(rp[1 + d] - rm[1 + d]) / (2 * eps) for d in range(3)], -1)
    scale = np.abs(f).max()
    assert np.abs(lhs - p[..., None] * du).max() < 2e-6 * scale


def test_spot_values():
    q = conserved(2.0, 3.0, 0.0, 0.0, 5.0, GAS)
    assert abs(entropy_kinetic(q) - 0.5 * 2 * 9) < 1e-13
    s = np.log(5.0) - 1.4 * np.log(2.0)
    assert abs(entropy_thermo(q, GAS) - (-2 * s / 0.4)) < 1e-13
    W = entropy_vars(q, GAS, "kinetic")
    assert np.allclose(W, [-4.5, 3.0, 0.0, 0.0, 0.0], atol=1e-13)
    psi = entropy_potential(q, GAS, "thermo")
    assert np.allclose(psi, [6.0, 0.0, 0.0], atol=1e-13)
    psi = entropy_potential(q, GAS, "kinetic")
    assert np.allclose(psi, [15.0, 0.0, 0.0], atol=1e-13)


def test_density_gradient_recovery():
    """q^T grad(w^S) reproduces grad(rho) (FD oracle along one direction)."""
    rng = np.random.default_rng(9)
    q = random_states(30, seed=8)
    dq = rng.standard_normal(q.shape)
    eps = 1e-7
    wp = entropy_vars(q + eps * dq, GAS, "thermo")
    wm = entropy_vars(q - eps * dq, GAS, "thermo")
    grad_w = ((wp - wm) / (2 * eps))[..., None, :] * np.ones((1, 3, 1))
    grad_rho = density_gradient_from_w(q, grad_w)
    assert np.abs(grad_rho - dq[..., :1]).max() < 2e-6
