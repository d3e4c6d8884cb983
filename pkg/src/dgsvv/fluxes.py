"""Inviscid fluxes: physical, two-point split-form, and interface solvers.

Two-point volume fluxes (documented fully since they are the backbone of
the entropy-conservative split form):

Pirozzoli (kinetic energy preserving), direction d:
    F_rho   = {{rho}} {{u_d}}
    F_mom_i = F_rho {{u_i}} + {{p}} delta_id
    F_E     = F_rho {{h}},   h = (rho E + p)/rho

Chandrashekar (kinetic energy preserving and entropy conservative for the
thermodynamic entropy), with beta = rho/(2p) and logarithmic means:
    F_rho   = rho_ln {{u_d}}
    F_mom_i = F_rho {{u_i}} + p_hat delta_id,   p_hat = {{rho}}/(2 {{beta}})
    F_E     = F_rho (1/(2(gamma-1) beta_ln) - {{u^2}}/2 - {{v^2}}/2 - {{w^2}}/2)
              + {{u}} F_mom_x + {{v}} F_mom_y + {{w}} F_mom_z

Interface fluxes are the two-point flux of the rotated states plus an
optional dissipation term: Lax-Friedrichs -1/2 lambda_max [[Q]] or matrix
dissipation -1/2 M [[W]] with M built from the entropy-scaled eigenvector
decomposition of the normal flux Jacobian.
"""

import numpy as np

from .gas import GasModel, primitives, entropy_vars_thermo

TWO_POINT_KINDS = ("central", "pirozzoli", "chandrashekar")
RIEMANN_KINDS = ("central", "lax-friedrichs", "matrix-dissipation")


def euler_flux(q, gas: GasModel):
    """Physical inviscid flux, shape (..., 3, 5)."""
    rho, u, v, w, p = primitives(q, gas)
    f = np.empty(q.shape[:-1] + (3, 5))
    hE = q[..., 4] + p  # rho*h
    for d, ud in enumerate((u, v, w)):
        f[..., d, 0] = rho * ud
        f[..., d, 1] = rho * ud * u
        f[..., d, 2] = rho * ud * v
        f[..., d, 3] = rho * ud * w
        f[..., d, d + 1] += p
        f[..., d, 4] = hE * ud
    return f


def normal_euler_flux(q, nds, gas: GasModel):
    """Inviscid flux contracted with a (possibly scaled) normal vector."""
    rho, u, v, w, p = primitives(q, gas)
    un = u * nds[..., 0] + v * nds[..., 1] + w * nds[..., 2]
    f = np.empty(q.shape)
    f[..., 0] = rho * un
    f[..., 1] = rho * un * u + p * nds[..., 0]
    f[..., 2] = rho * un * v + p * nds[..., 1]
    f[..., 3] = rho * un * w + p * nds[..., 2]
    f[..., 4] = (q[..., 4] + p) * un
    return f


def log_mean(a, b):
    """Logarithmic mean (a-b)/(ln a - ln b) with a series guard near a=b."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    f = (a - b) / (a + b)
    u = f * f
    small = u < 1e-8
    series = 1.0 + u * (1 / 3 + u * (1 / 5 + u / 7))
    with np.errstate(divide="ignore", invalid="ignore"):
        exact = np.where(small, 1.0, np.log(a / b) / np.where(small, 1.0, 2.0 * f))
    F = np.where(small, series, exact)
    return (a + b) / (2.0 * F)


def _avg(a, b):
    return 0.5 * (a + b)


def two_point_flux(kind: str, qL, qR, direction: int, gas: GasModel):
    """Symmetric consistent volume flux in the given direction (0, 1, 2)."""
    rhoL, uL, vL, wL, pL = primitives(qL, gas)
    rhoR, uR, vR, wR, pR = primitives(qR, gas)
    velL = (uL, vL, wL)
    velR = (uR, vR, wR)
    ubar = [_avg(a, b) for a, b in zip(velL, velR)]
    ud = ubar[direction]
    out = np.empty(np.broadcast(qL, qR).shape)

    if kind == "pirozzoli":
        rho_a = _avg(rhoL, rhoR)
        p_a = _avg(pL, pR)
        hL = (qL[..., 4] + pL) / rhoL
        hR = (qR[..., 4] + pR) / rhoR
        frho = rho_a * ud
        out[..., 0] = frho
        for i in range(3):
            out[..., 1 + i] = frho * ubar[i]
        out[..., 1 + direction] += p_a
        out[..., 4] = frho * _avg(hL, hR)
        return out

    if kind == "chandrashekar":
        betaL = 0.5 * rhoL / pL
        betaR = 0.5 * rhoR / pR
        rho_ln = log_mean(rhoL, rhoR)
        beta_ln = log_mean(betaL, betaR)
        p_hat = 0.5 * _avg(rhoL, rhoR) / _avg(betaL, betaR)
        frho = rho_ln * ud
        out[..., 0] = frho
        for i in range(3):
            out[..., 1 + i] = frho * ubar[i]
        out[..., 1 + direction] += p_hat
        sq = sum(_avg(a * a, b * b) for a, b in zip(velL, velR))
        out[..., 4] = frho * (0.5 / ((gas.gamma - 1.0) * beta_ln) - 0.5 * sq)
        out[..., 4] += sum(ubar[i] * out[..., 1 + i] for i in range(3))
        return out

    if kind == "central":
        fL = euler_flux(qL, gas)[..., direction, :]
        fR = euler_flux(qR, gas)[..., direction, :]
        return _avg(fL, fR)

    raise ValueError(f"unknown two-point flux kind {kind!r}")


def rotation_matrix(n):
    """5x5 state rotation induced by unit normal n (shape (..., 3)).

    Maps momentum to (normal, tangential-1, tangential-2) components and
    leaves density and energy unchanged.
    """
    n = np.asarray(n, dtype=float)
    shape = n.shape[:-1]
    # pick the coordinate axis least aligned with n to build tangentials
    ref = np.zeros(shape + (3,))
    idx = np.argmin(np.abs(n), axis=-1)
    np.put_along_axis(ref, idx[..., None], 1.0, axis=-1)
    t1 = np.cross(n, ref)
    t1 /= np.linalg.norm(t1, axis=-1, keepdims=True)
    t2 = np.cross(n, t1)
    T = np.zeros(shape + (5, 5))
    T[..., 0, 0] = 1.0
    T[..., 4, 4] = 1.0
    T[..., 1, 1:4] = n
    T[..., 2, 1:4] = t1
    T[..., 3, 1:4] = t2
    return T


def _apply(T, q):
    return np.einsum("...ij,...j->...i", T, q)


def max_wave_speed(qL, qR, gas: GasModel):
    """Pairwise bound max(|u_n| + a) with the states already rotated."""
    rhoL, uL = qL[..., 0], qL[..., 1] / qL[..., 0]
    rhoR, uR = qR[..., 0], qR[..., 1] / qR[..., 0]
    aL = np.sqrt(
        gas.gamma
        * (gas.gamma - 1.0)
        * (qL[..., 4] - 0.5 * (qL[..., 1] ** 2 + qL[..., 2] ** 2 + qL[..., 3] ** 2) / rhoL)
        / rhoL
    )
    aR = np.sqrt(
        gas.gamma
        * (gas.gamma - 1.0)
        * (qR[..., 4] - 0.5 * (qR[..., 1] ** 2 + qR[..., 2] ** 2 + qR[..., 3] ** 2) / rhoR)
        / rhoR
    )
    return np.maximum(np.abs(uL) + aL, np.abs(uR) + aR)


def dissipation_matrix(qL, qR, gas: GasModel):
    """Entropy-scaled |A| for the x-direction flux Jacobian.

    Built at the arithmetic-average primitive state as M = R diag(|lam| t) R^T
    with the standard right eigenvectors R and the scaling t that satisfies
    R diag(t) R^T = dq/dw for the thermodynamic entropy variables, so that
    M is symmetric positive semi-definite acting on entropy-variable jumps.
    """
    rhoL, uL, vL, wL, pL = primitives(qL, gas)
    rhoR, uR, vR, wR, pR = primitives(qR, gas)
    rho = _avg(rhoL, rhoR)
    u = _avg(uL, uR)
    v = _avg(vL, vR)
    w = _avg(wL, wR)
    p = _avg(pL, pR)
    g = gas.gamma
    a = np.sqrt(g * p / rho)
    H = a * a / (g - 1.0) + 0.5 * (u * u + v * v + w * w)

    shape = rho.shape
    R = np.zeros(shape + (5, 5))
    zero = np.zeros(shape)
    one = np.ones(shape)
    cols = [
        (one, u - a, v, w, H - u * a),
        (one, u, v, w, 0.5 * (u * u + v * v + w * w)),
        (zero, zero, one, zero, v),
        (zero, zero, zero, one, w),
        (one, u + a, v, w, H + u * a),
    ]
    for j, col in enumerate(cols):
        for i, entry in enumerate(col):
            R[..., i, j] = entry
    lam = np.stack(
        [np.abs(u - a), np.abs(u), np.abs(u), np.abs(u), np.abs(u + a)], axis=-1
    )
    t = np.stack(
        [rho / (2 * g), rho * (g - 1.0) / g, p, p, rho / (2 * g)], axis=-1
    )
    return np.einsum("...ik,...k,...jk->...ij", R, lam * t, R)


def riemann_flux(
    two_point_kind: str,
    riemann_kind: str,
    qL,
    qR,
    normal,
    gas: GasModel,
    rotation=None,
):
    """Interface flux F* . n via rotation to the normal frame.

    Returns the physical-frame normal flux per unit area (no surface
    Jacobian). The central kind is the bare two-point flux (entropy
    conservative for matching pairs). A precomputed rotation matrix for
    the normal may be passed to avoid rebuilding it for static meshes.
    """
    T = rotation_matrix(normal) if rotation is None else rotation
    qLr = _apply(T, qL)
    qRr = _apply(T, qR)
    f = two_point_flux(two_point_kind, qLr, qRr, 0, gas)
    if riemann_kind == "lax-friedrichs":
        lam = max_wave_speed(qLr, qRr, gas)
        f = f - 0.5 * lam[..., None] * (qRr - qLr)
    elif riemann_kind == "matrix-dissipation":
        M = dissipation_matrix(qLr, qRr, gas)
        dw = entropy_vars_thermo(qRr, gas) - entropy_vars_thermo(qLr, gas)
        f = f - 0.5 * np.einsum("...ij,...j->...i", M, dw)
    elif riemann_kind != "central":
        raise ValueError(f"unknown interface flux kind {riemann_kind!r}")
    return _apply(np.swapaxes(T, -1, -2), f)


def br1_average(aL, aR):
    """Arithmetic interface average used by the BR1 viscous coupling."""
    return 0.5 * (aL + aR)
