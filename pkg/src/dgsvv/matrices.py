"""Dissipative flux matrices for the viscous and artificial-viscosity terms.

All matrices are 15x15 block matrices (3 space directions x 5 variables)
acting on stacked entropy-variable gradients. The state-dependent families
come with their analytic factorizations B = L^T D L, where D is diagonal
and nonnegative for admissible states; the factors are what the filtered
artificial fluxes are built from.

Functions are vectorized: scalar inputs give (15,15) matrices, field inputs
of shape S give (S..., 15, 15).
"""

import numpy as np

from .gas import GasModel


def _shape(*fields):
    return np.broadcast(*fields).shape


def ns_kinetic_matrix() -> np.ndarray:
    """Constant viscous-stress matrix for the kinetic-energy variable set.

    The energy row is not part of this matrix; the (tau.u + q) closure is
    assembled separately from the momentum rows of the flux.
    """
    C = np.zeros((15, 15))
    diag = {0: (4 / 3, 1, 1), 1: (1, 4 / 3, 1), 2: (1, 1, 4 / 3)}
    for d, vals in diag.items():
        for m, val in enumerate(vals):
            C[5 * d + 1 + m, 5 * d + 1 + m] = val
    # off-diagonal coupling blocks; lower blocks are transposes
    for (i, j, r, c) in ((0, 1, 1, 2), (0, 2, 1, 3), (1, 2, 2, 3)):
        C[5 * i + r, 5 * j + c] = -2 / 3
        C[5 * i + c, 5 * j + r] = 1.0
        C[5 * j + c, 5 * i + r] = -2 / 3
        C[5 * j + r, 5 * i + c] = 1.0
    C.setflags(write=False)
    return C


NS_KINETIC_MATRIX = ns_kinetic_matrix()


def ns_thermo_matrices(rho, u, v, w, p, mu, gas: GasModel, factors_only=False):
    """Viscous-flux matrix for the thermodynamic variable set with factors.

    Returns (B, L, Dvec) with B = L^T diag(Dvec) L; the mu*p/rho scaling is
    carried by B and Dvec, L is dimensionless. factors_only skips the
    assembly of B (returned as None) for the filtered-flux hot path.
    """
    shape = _shape(rho, u, v, w, p)
    rho, u, v, w, p = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (rho, u, v, w, p))
    )
    vtot2 = u * u + v * v + w * w
    tpr = gas.theta * p / rho
    scale = np.asarray(mu, dtype=float) * p / rho

    B = None
    if not factors_only:
        B = np.zeros(shape + (15, 15))

        def blk(i, j, r, c, val):
            B[..., 5 * i + r, 5 * j + c] = val
            if i != j:
                B[..., 5 * j + c, 5 * i + r] = val

        # diagonal blocks (each internally symmetric)
        for d, (a1, a2, a3, vel) in enumerate(
            ((4 / 3, 1, 1, u), (1, 4 / 3, 1, v), (1, 1, 4 / 3, w))
        ):
            blk(d, d, 1, 1, a1)
            blk(d, d, 2, 2, a2)
            blk(d, d, 3, 3, a3)
            cross = (a1 * u, a2 * v, a3 * w)
            for m in range(3):
                blk(d, d, 1 + m, 4, cross[m])
                blk(d, d, 4, 1 + m, cross[m])
            blk(d, d, 4, 4, vel * vel / 3 + vtot2 + tpr)
        # off-diagonal blocks, pattern (d1, d2, u_d1, u_d2)
        for (i, j, ui, uj) in ((0, 1, u, v), (0, 2, u, w), (1, 2, v, w)):
            blk(i, j, 1 + i, 1 + j, -2 / 3)
            blk(i, j, 1 + i, 4, -2 / 3 * uj)
            blk(i, j, 1 + j, 1 + i, 1.0)
            blk(i, j, 1 + j, 4, ui)
            blk(i, j, 4, 1 + i, uj)
            blk(i, j, 4, 1 + j, -2 / 3 * ui)
            blk(i, j, 4, 4, ui * uj / 3)

        B *= scale[..., None, None]

    L = np.zeros(shape + (15, 15))
    one = np.ones(shape)
    entries = [
        # L11
        (0, 0, 1, 1, one), (0, 0, 1, 4, u),
        (0, 0, 2, 2, one), (0, 0, 2, 4, v),
        (0, 0, 3, 3, one), (0, 0, 3, 4, w),
        (0, 0, 4, 4, one),
        # L22
        (1, 1, 2, 2, one), (1, 1, 2, 4, v),
        (1, 1, 3, 3, one), (1, 1, 3, 4, w),
        (1, 1, 4, 4, one),
        # L33
        (2, 2, 4, 4, one),
        # L12
        (0, 1, 1, 2, -0.5 * one), (0, 1, 1, 4, -0.5 * v),
        (0, 1, 2, 1, one), (0, 1, 2, 4, u),
        # L13
        (0, 2, 1, 3, -0.5 * one), (0, 2, 1, 4, -0.5 * w),
        (0, 2, 3, 1, one), (0, 2, 3, 4, u),
        # L23
        (1, 2, 2, 3, -one), (1, 2, 2, 4, -w),
        (1, 2, 3, 2, one), (1, 2, 3, 4, v),
    ]
    for (i, j, r, c, val) in entries:
        L[..., 5 * i + r, 5 * j + c] = val

    dvec = np.zeros(shape + (15,))
    base = [0, 4 / 3, 1, 1, 0, 0, 0, 1, 1, 0, 0, 0, 0, 0, 0]
    for k, val in enumerate(base):
        if val:
            dvec[..., k] = val
    for k in (4, 9, 14):
        dvec[..., k] = tpr
    dvec *= scale[..., None]
    return B, L, dvec


def gp_matrices(rho, u, v, w, p, mu_a, alpha_a, gas: GasModel,
                factors_only=False):
    """Guermond-Popov dissipation matrix with its factorization.

    B = alpha_a*rho*B_alpha + mu_a*p*B_mu = L^T diag(Dvec) L. The alpha part
    regularizes density (a rank-one mass-diffusion structure), the mu part
    acts on momentum and energy. factors_only skips the assembly of B
    (returned as None) for the filtered-flux hot path.
    """
    shape = _shape(rho, u, v, w, p, mu_a, alpha_a)
    rho, u, v, w, p, mu_a, alpha_a = np.broadcast_arrays(
        *(np.asarray(a, dtype=float) for a in (rho, u, v, w, p, mu_a, alpha_a))
    )
    vtot2 = u * u + v * v + w * w
    e = p / ((gas.gamma - 1.0) * rho) + 0.5 * vtot2
    lam = (p / rho) / np.sqrt(gas.gamma - 1.0)
    ar = alpha_a * rho
    mp = mu_a * p
    vels = (u, v, w)

    B = None
    if not factors_only:
        B = np.zeros(shape + (15, 15))
        # alpha part: per-direction rank-one outer product plus Lambda term
        qv = np.stack([np.ones(shape), u, v, w, e], axis=-1)
        outer = ar[..., None, None] * qv[..., :, None] * qv[..., None, :]
        for d in range(3):
            B[..., 5 * d : 5 * d + 5, 5 * d : 5 * d + 5] += outer
            B[..., 5 * d + 4, 5 * d + 4] += ar * lam * lam

        def blk(i, j, r, c, val):
            B[..., 5 * i + r, 5 * j + c] += mp * val
            if i != j:
                B[..., 5 * j + c, 5 * i + r] += mp * val

        for d in range(3):
            for m in range(3):
                coef = 1.0 if m == d else 0.5
                blk(d, d, 1 + m, 1 + m, coef * np.ones(shape))
                blk(d, d, 1 + m, 4, coef * vels[m])
                blk(d, d, 4, 1 + m, coef * vels[m])
            blk(d, d, 4, 4, 0.5 * (vels[d] ** 2 + vtot2))
        for (i, j) in ((0, 1), (0, 2), (1, 2)):
            blk(i, j, 1 + j, 1 + i, 0.5 * np.ones(shape))
            blk(i, j, 1 + j, 4, 0.5 * vels[i])
            blk(i, j, 4, 1 + i, 0.5 * vels[j])
            blk(i, j, 4, 4, 0.5 * vels[i] * vels[j])

    L = np.zeros(shape + (15, 15))
    one = np.ones(shape)
    for d in range(3):
        row = 5 * d
        L[..., row, 5 * d + 0] = one
        L[..., row, 5 * d + 1] = u
        L[..., row, 5 * d + 2] = v
        L[..., row, 5 * d + 3] = w
        L[..., row, 5 * d + 4] = e
        L[..., 5 * d + 4, 5 * d + 4] = lam
        for m in range(d, 3):
            L[..., 5 * d + 1 + m, 5 * d + 1 + m] = one
            L[..., 5 * d + 1 + m, 5 * d + 4] = vels[m]
    # off-diagonal momentum shuffles
    for (i, j, r) in ((0, 1, 2), (0, 2, 3), (1, 2, 3)):
        L[..., 5 * i + r, 5 * j + i + 1] = one
        L[..., 5 * i + r, 5 * j + 4] = vels[i]

    dvec = np.zeros(shape + (15,))
    mask_ar = (0, 4, 5, 9, 10, 14)
    mask_mp = {1: 1.0, 2: 0.5, 3: 0.5, 7: 1.0, 8: 0.5, 13: 1.0}
    for k in mask_ar:
        dvec[..., k] = ar
    for k, coef in mask_mp.items():
        dvec[..., k] = coef * mp
    return B, L, dvec
