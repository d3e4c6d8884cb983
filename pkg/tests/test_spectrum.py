import numpy as np
import pytest

from dgsvv.basis import operator_set
from dgsvv.gas import GasModel, conserved
from dgsvv.mesh import build_box_mesh
from dgsvv.spectrum import (
    kinetic_energy_spectrum,
    lagrange_eval_matrix,
    uniform_grid_field,
)

GAS = GasModel()


def test_lagrange_eval_matrix_reproduces_polynomials():
    ops = operator_set(4)
    targets = np.linspace(-1.0, 1.0, 9)
    P = lagrange_eval_matrix(ops.nodes, targets)
    for deg in range(5):
        vals = P @ ops.nodes**deg
        assert np.abs(vals - targets**deg).max() < 1e-12
    # rows sum to one (partition of unity), exact hit on a node
    assert np.abs(P.sum(axis=1) - 1.0).max() < 1e-12
    Pn = lagrange_eval_matrix(ops.nodes, ops.nodes)
    assert np.abs(Pn - np.eye(5)).max() < 1e-12


def test_uniform_grid_field_linear_exact():
    N, counts = 3, [2, 3]
    mesh = build_box_mesh([(0.0, 1.0), (0.0, 1.0)], counts, N=N,
                          periodic=[True, True])
    f = 2.0 * mesh.X[..., 0] - 0.5 * mesh.X[..., 1]
    grid = uniform_grid_field(f[..., 0], counts, N)
    n = N + 1
    x = np.arange(counts[0] * n) / (counts[0] * n)
    y = np.arange(counts[1] * n) / (counts[1] * n)
    ref = 2.0 * x[:, None] - 0.5 * y[None, :]
    assert np.abs(grid - ref).max() < 1e-12


def box_state(counts, N, fill):
    mesh = build_box_mesh([(0.0, 2 * np.pi)] * 3, counts, N=N,
                          periodic=[True] * 3)
    x, y, z = (mesh.X[..., d] for d in range(3))
    rho, u, v, w, p = fill(x, y, z)
    return conserved(rho, u, v, w, p, GAS)


def test_single_mode_lands_in_shell_one():
    def fill(x, y, z):
        one = np.ones_like(x)
        return one, np.sin(x), 0 * x, 0 * x, 10 * one

    Q = box_state([4, 4, 4], 4, fill)
    k, E, err = kinetic_energy_spectrum(Q, [4, 4, 4], 4, GAS)
    assert err < 1e-12
    assert E[1] / E.sum() > 0.999
    # mean of sin^2 / 2 up to the N=4 resampling interpolation error
    assert E.sum() == pytest.approx(0.25, rel=1e-4)


def test_parseval_white_noise():
    rng = np.random.default_rng(3)

    def fill(x, y, z):
        one = np.ones_like(x)
        return (one, rng.standard_normal(x.shape),
                rng.standard_normal(x.shape), rng.standard_normal(x.shape),
                10 * one)

    Q = box_state([3, 3, 3], 3, fill)
    k, E, err = kinetic_energy_spectrum(Q, [3, 3, 3], 3, GAS)
    assert err < 1e-12
    assert np.all(E >= 0)
    assert k[0] == 0 and np.all(np.diff(k) == 1)


def test_vortex_mode_shell():
    """u = sin x cos y cos z: |k| = sqrt(3) rounds into shell 2."""

    def fill(x, y, z):
        one = np.ones_like(x)
        u = np.sin(x) * np.cos(y) * np.cos(z)
        v = -np.cos(x) * np.sin(y) * np.cos(z)
        return one, u, v, 0 * x, 100 * one

    Q = box_state([4, 4, 4], 4, fill)
    _, E, err = kinetic_energy_spectrum(Q, [4, 4, 4], 4, GAS)
    assert err < 1e-12
    assert E[2] / E.sum() > 0.999
