"""Filtered artificial-dissipation fluxes (spectral vanishing viscosity).

The dissipation intensity is modulated per Legendre mode by a nonnegative
kernel. Two flux forms exist:

  * scalar-coefficient form (constant matrix C, e.g. the kinetic-energy
    viscous stress):   F = sqrt(a/J) C Filter(sqrt(J a) G)
  * Cholesky form (state-dependent B = L^T D L, e.g. thermodynamic
    Navier-Stokes or Guermond-Popov):
                       F = (1/sqrt(J)) L^T sqrt(D) Filter(sqrt(J D) L G)

Both are nonnegative-dissipation operators for any nonnegative kernel,
which is what makes the artificial viscosity entropy stable.
"""

from dataclasses import dataclass, field

import numpy as np

from .basis import FilterSpec, OperatorSet, power_kernel

FLUX_FAMILIES = ("ns-kinetic", "ns-thermo", "guermond-popov")


@dataclass(frozen=True)
class SVVConfig:
    flux_family: str = "guermond-popov"
    p_svv_smooth: float = 0.0
    p_svv_shock: float = 0.0
    mu1: float = 0.0
    mu2: float = 0.0
    alpha1: float = 0.0
    alpha2: float = 0.0
    sensor_threshold: float = np.inf
    high_pass: bool = False
    les_enabled: bool = False
    c_s: float = 0.2

    def __post_init__(self):
        if self.flux_family not in FLUX_FAMILIES:
            raise ValueError(f"unknown SVV flux family {self.flux_family!r}")
        for name in ("mu1", "mu2", "alpha1", "alpha2", "c_s"):
            if getattr(self, name) < 0:
                raise ValueError(f"svv.{name} must be nonnegative")

    @property
    def enabled(self) -> bool:
        return (
            self.les_enabled
            or self.mu1 > 0
            or self.mu2 > 0
            or self.alpha1 > 0
            or self.alpha2 > 0
        )


def tensor_kernel(specs, high_pass: bool) -> np.ndarray:
    """Combine per-direction 1-D kernels into a multi-dimensional one.

    high_pass=True keeps only modes that are high in every direction
    (product rule); False flags modes high in any direction
    (complement-product rule).
    """
    coeffs = [np.asarray(s.coeffs, dtype=float) for s in specs]
    grids = np.meshgrid(*coeffs, indexing="ij")
    if high_pass:
        out = np.ones_like(grids[0])
        for g in grids:
            out = out * g
    else:
        out = np.ones_like(grids[0])
        for g in grids:
            out = out * (1.0 - g)
        out = 1.0 - out
    return out


def dim_kernel(spec: FilterSpec, dim: int, high_pass: bool) -> np.ndarray:
    """Same 1-D kernel replicated per direction, padded to 3 node axes."""
    specs = [spec] * dim
    k = tensor_kernel(specs, high_pass)
    return k.reshape(k.shape + (1,) * (3 - dim))


def apply_filter(ops: OperatorSet, kernel: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Modal filter on element fields X of shape (..., n0, n1, n2, C).

    Forward-transforms each node axis of extent N+1, multiplies by the
    kernel array, and transforms back. Axes of extent 1 are untouched.
    """
    n = ops.N + 1
    axes = [a for a in (-4, -3, -2) if X.shape[a] == n]
    Y = X
    for a in axes:
        Y = np.moveaxis(np.matmul(ops.F, np.moveaxis(Y, a, -2)), -2, a)
    Y = Y * kernel[..., None]
    for a in axes:
        Y = np.moveaxis(np.matmul(ops.B, np.moveaxis(Y, a, -2)), -2, a)
    return Y


def _flatten_blocks(G):
    # (..., 3, 5) -> (..., 15)
    return G.reshape(G.shape[:-2] + (15,))


def _unflatten_blocks(X):
    return X.reshape(X.shape[:-1] + (3, 5))


def filtered_flux_scalar_coeff(ops, kernel, J, alpha, C, G):
    """Scalar-coefficient filtered flux sqrt(a/J) C Filter(sqrt(J a) G).

    J and alpha are nodal scalar fields; C is a constant 15x15 matrix;
    G has shape (..., n0, n1, n2, 3, 5).
    """
    if np.any(np.asarray(alpha) < 0):
        raise ValueError("negative viscosity coefficient")
    scale_in = np.sqrt(J * alpha)[..., None]
    X = _flatten_blocks(G) * scale_in
    X = apply_filter(ops, kernel, X)
    X = X @ C.T
    X *= (np.sqrt(alpha / J))[..., None]
    return _unflatten_blocks(X)


def filtered_flux_cholesky(ops, kernel, J, L, Dvec, G):
    """Cholesky-form filtered flux (1/sqrt(J)) L^T sqrt(D) Filter(sqrt(J D) L G)."""
    if np.any(Dvec < -1e-14 * np.abs(Dvec).max(initial=0.0)):
        raise ValueError("negative Cholesky diagonal")
    Dpos = np.maximum(Dvec, 0.0)
    X = np.einsum("...ij,...j->...i", L, _flatten_blocks(G))
    X = X * np.sqrt(J[..., None] * Dpos)
    X = apply_filter(ops, kernel, X)
    X = np.sqrt(Dpos) * X
    X = np.einsum("...ji,...j->...i", L, X)
    X /= np.sqrt(J)[..., None]
    return _unflatten_blocks(X)


def sensor_values(grad_rho, weights, dim: int) -> np.ndarray:
    """Per-element shock sensor sqrt(sum_nodes omega |grad rho|^2).

    grad_rho has shape (ne, n0, n1, n2, 3); weights is the 1-D quadrature
    weight vector; the reference-element multi-weight is the tensor product
    over the active directions.
    """
    w = weights
    omega = w.reshape(-1, 1, 1)
    if dim >= 2:
        omega = omega * w.reshape(1, -1, 1)
    if dim == 3:
        omega = omega * w.reshape(1, 1, -1)
    mag2 = np.sum(grad_rho**2, axis=-1)
    return np.sqrt(np.einsum("eijk,ijk->e", mag2, omega))


def smagorinsky_viscosity(grad_u, cell_volume, N: int, c_s: float):
    """LES eddy viscosity mu_a = C_S^2 Delta^2 |S|.

    grad_u[..., d, i] = du_i/dx_d; Delta^3 = cell volume/(N+1)^3;
    |S| = sqrt(2 S_ij S_ij) with S the symmetric velocity-gradient part.
    """
    S = 0.5 * (grad_u + np.swapaxes(grad_u, -1, -2))
    mag = np.sqrt(2.0 * np.sum(S * S, axis=(-1, -2)))
    delta = np.asarray(cell_volume) ** (1.0 / 3.0) / (N + 1)
    return (c_s * delta) ** 2 * mag
