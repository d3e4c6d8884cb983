"""Dispersion/dissipation eigenanalysis of the 1-D advection-diffusion
DGSEM with SVV-filtered viscosity.

Single-element Bloch symbol: neighbor coupling carries the phase factor
exp(+-i K) with K = k * dx. The advective interface flux is
a U* = a {{U}} - upwind * (|a|/2) [[U]]; the viscous part uses BR1 with
mu G = mu_a H G, H the modal filter. The gradient unknowns are eliminated
exactly, leaving an (N+1)x(N+1) complex operator whose eigenvalues are
-i omega.

Reported wavenumbers are normalized per degree of freedom:
k_tilde = K/(N+1) in (0, pi].
"""

import csv
from dataclasses import dataclass, field

import numpy as np

from .basis import filter_matrix, operator_set, power_kernel


@dataclass
class VNConfig:
    N: int = 7
    a: float = 1.0
    mu: float = 0.0
    p_svv: float = 0.0
    upwind: float = 1.0
    k_tilde: np.ndarray = field(
        default_factory=lambda: np.linspace(0.01, np.pi, 120)
    )

    def __post_init__(self):
        if self.a <= 0 or self.mu < 0:
            raise ValueError("need a > 0 and mu >= 0")


def assemble_symbol(cfg: VNConfig, K: float) -> np.ndarray:
    """Bloch operator A(K) with U_t = A U on an element of width 1."""
    ops = operator_set(cfg.N)
    n = cfg.N + 1
    w0, wN = ops.weights[0], ops.weights[-1]
    Jinv = 2.0  # element width 1: d xi/d x = 2
    Dx = Jinv * ops.D
    eN = np.zeros(n)
    eN[-1] = 1.0
    e0 = np.zeros(n)
    e0[0] = 1.0
    phase_r = np.exp(1j * K)
    phase_l = np.exp(-1j * K)
    I = np.eye(n)

    # interface value operators: rows pick interior trace, neighbor phased
    # right face: own U_N and neighbor U_0 * exp(iK); left face mirrored
    own_R = np.outer(np.ones(1), eN)
    nbr_R = phase_r * np.outer(np.ones(1), e0)
    own_L = np.outer(np.ones(1), e0)
    nbr_L = phase_l * np.outer(np.ones(1), eN)

    avg_R = 0.5 * (own_R + nbr_R)
    avg_L = 0.5 * (own_L + nbr_L)
    # advective upwind states (a > 0): U* = {{U}} - upwind/2 [[U]]
    adv_R = avg_R - 0.5 * cfg.upwind * (nbr_R - own_R)
    adv_L = avg_L - 0.5 * cfg.upwind * (own_L - nbr_L)

    # advective operator: out = -a [Dx U + (U*_R - U_N) e_N Jinv/wN
    #                                + (U_0 - U*_L) e_0 Jinv/w0]
    A_adv = Dx.astype(complex).copy()
    A_adv += np.outer(eN, (adv_R - own_R)[0]) * Jinv / wN
    A_adv += np.outer(e0, (own_L - adv_L)[0]) * Jinv / w0

    # BR1 gradient: G = Dx U + ({{U}}_R - U_N) e_N Jinv/wN + (U_0 - {{U}}_L) e_0 Jinv/w0
    Gop = Dx.astype(complex).copy()
    Gop += np.outer(eN, (avg_R - own_R)[0]) * Jinv / wN
    Gop += np.outer(e0, (own_L - avg_L)[0]) * Jinv / w0

    H = filter_matrix(ops, power_kernel(cfg.N, cfg.p_svv))
    Fop = cfg.mu * (H @ Gop)  # nodal viscous flux values from U

    # viscous divergence with BR1 flux averages (neighbors share Fop,
    # phased): out += Dx F + ({{F}}_R - F_N) e_N Jinv/wN + (F_0 - {{F}}_L) e_0 Jinv/w0
    FavgR = 0.5 * (eN[None, :] @ Fop + phase_r * e0[None, :] @ Fop)
    FavgL = 0.5 * (e0[None, :] @ Fop + phase_l * eN[None, :] @ Fop)
    A_visc = Dx @ Fop
    A_visc += np.outer(eN, (FavgR - eN[None, :] @ Fop)[0]) * Jinv / wN
    A_visc += np.outer(e0, ((e0[None, :] @ Fop) - FavgL)[0]) * Jinv / w0

    return -cfg.a * A_adv + A_visc


def omega_spectrum(cfg: VNConfig, K: float) -> np.ndarray:
    """All N+1 frequencies omega = i * eigenvalue at wavenumber K."""
    A = assemble_symbol(cfg, K)
    lam = np.linalg.eigvals(A)
    return 1j * lam


def physical_mode_trace(cfg: VNConfig):
    """Sweep k and trace the physical branch by continuity.

    Returns (k_values, all_omegas (nk, N+1), physical branch (nk,)).
    The branch starts from the eigenvalue closest to the exact low-k limit
    omega = a k - i mu k^2 and follows the nearest eigenvalue afterwards.
    """
    n = cfg.N + 1
    ks = np.asarray(cfg.k_tilde) * n
    all_w = np.empty((ks.size, n), dtype=complex)
    phys = np.empty(ks.size, dtype=complex)
    phys_idx = np.empty(ks.size, dtype=int)
    prev = None
    for m, K in enumerate(ks):
        wk = omega_spectrum(cfg, K)
        order = np.argsort(wk.real)
        all_w[m] = wk[order]
        target = cfg.a * K - 1j * cfg.mu * K * K if prev is None else prev
        i = int(np.argmin(np.abs(all_w[m] - target)))
        phys[m] = all_w[m][i]
        phys_idx[m] = i
        prev = phys[m]
    return ks, all_w, phys, phys_idx


def write_curves_csv(path, cfg_base: VNConfig, p_svv_list):
    """CSV with one row per (k, branch, P_SVV) for the figure scripts."""
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["p_svv", "k_tilde", "branch_id", "re_omega", "im_omega",
                     "is_physical"])
        for p_svv in p_svv_list:
            cfg = VNConfig(
                N=cfg_base.N, a=cfg_base.a, mu=cfg_base.mu, p_svv=p_svv,
                upwind=cfg_base.upwind, k_tilde=cfg_base.k_tilde,
            )
            ks, all_w, _, phys_idx = physical_mode_trace(cfg)
            n = cfg.N + 1
            for m, K in enumerate(ks):
                for b in range(n):
                    wr.writerow([
                        p_svv, f"{K / n:.10g}", b,
                        f"{all_w[m, b].real:.12g}", f"{all_w[m, b].imag:.12g}",
                        int(b == phys_idx[m]),
                    ])
