"""The semi-discrete DGSEM right-hand side.

Strong-form assembly on Gauss-Lobatto nodes: split-form inviscid volume
divergence with two-point fluxes against metric-averaged contravariant
vectors, interface Riemann fluxes, BR1 gradients of the entropy variables,
viscous and filtered artificial-dissipation fluxes, and weakly imposed
boundary conditions through ghost states.

The entropy-variable set is bound to the flux configuration: the kinetic
set goes with Pirozzoli-type fluxes, the thermodynamic set with
Chandrashekar / Guermond-Popov.
"""

from dataclasses import dataclass, field

import numpy as np

from .basis import power_kernel
from .fluxes import (
    RIEMANN_KINDS,
    TWO_POINT_KINDS,
    normal_euler_flux,
    riemann_flux,
    rotation_matrix,
)
from .gas import (
    GasModel,
    check_admissible,
    entropy_density,
    entropy_potential,
    entropy_vars,
    primitives,
)
from .kernels import KIND_IDS, split_volume_divergence
from .matrices import NS_KINETIC_MATRIX, gp_matrices, ns_thermo_matrices
from .mesh import Mesh, face_slice
from .svv import (
    SVVConfig,
    dim_kernel,
    filtered_flux_cholesky,
    filtered_flux_scalar_coeff,
    sensor_values,
    smagorinsky_viscosity,
)

FAMILY_ENTROPY_SET = {
    "ns-kinetic": "kinetic",
    "ns-thermo": "thermo",
    "guermond-popov": "thermo",
}
TWO_POINT_ENTROPY_SET = {"pirozzoli": "kinetic", "chandrashekar": "thermo"}


@dataclass
class BoundaryData:
    """Physical data for inflow/outflow boundaries (walls need none)."""

    inflow_state: np.ndarray = None  # conserved 5-state
    outflow_pressure: float = None


@dataclass
class Numerics:
    two_point: str = "chandrashekar"
    riemann: str = "matrix-dissipation"
    svv: SVVConfig = field(default_factory=SVVConfig)
    mu: float = 0.0  # physical viscosity (thermodynamic set only)

    def __post_init__(self):
        if self.two_point not in TWO_POINT_KINDS:
            raise ValueError(f"unknown two-point flux {self.two_point!r}")
        if self.riemann not in RIEMANN_KINDS:
            raise ValueError(f"unknown interface flux {self.riemann!r}")
        if self.mu < 0:
            raise ValueError("physical viscosity must be nonnegative")

    @property
    def entropy_set(self) -> str:
        family_set = FAMILY_ENTROPY_SET[self.svv.flux_family]
        tp_set = TWO_POINT_ENTROPY_SET.get(self.two_point)
        if tp_set is not None and (self.svv.enabled or self.mu > 0) and tp_set != family_set:
            raise ValueError(
                f"two-point flux {self.two_point!r} pairs with the {tp_set} "
                f"entropy set but the dissipative family needs {family_set}"
            )
        active = tp_set or family_set
        if self.mu > 0 and active != "thermo":
            raise ValueError(
                "physical viscosity requires the thermodynamic entropy set"
            )
        return active


class SemiDiscreteOperator:
    """Assembles Q_t for a given mesh, gas model, and numerics choice."""

    def __init__(self, mesh: Mesh, gas: GasModel, numerics: Numerics,
                 boundary_data: BoundaryData = None):
        self.mesh = mesh
        self.gas = gas
        self.num = numerics
        self.bdata = boundary_data or BoundaryData()
        self.entropy_set = numerics.entropy_set
        self._kind_id = KIND_IDS[numerics.two_point]
        ops = mesh.ops
        self._w_end = ops.weights[-1]
        svv = numerics.svv
        self._kernel_smooth = dim_kernel(
            power_kernel(mesh.N, svv.p_svv_smooth), mesh.dim, svv.high_pass
        )
        self._kernel_shock = dim_kernel(
            power_kernel(mesh.N, svv.p_svv_shock), mesh.dim, svv.high_pass
        )
        self.shock_mask = np.zeros(mesh.n_elements, dtype=bool)
        self.sensor = np.zeros(mesh.n_elements)
        self.max_artificial_viscosity = max(svv.mu1, svv.mu2, svv.alpha1, svv.alpha2)
        if any(b.tag == "inflow" for b in mesh.boundaries):
            if self.bdata.inflow_state is None:
                raise ValueError("mesh has an inflow boundary but no inflow state")
        # static face geometry: area scale, unit normal, rotation matrix
        self._face_geom = [self._geom(fb.nds) for fb in mesh.faces]
        self._bnd_geom = [self._geom(bb.nds) for bb in mesh.boundaries]
        self._metric_diag = self._diag_metric(mesh)

    @staticmethod
    def _diag_metric(mesh):
        """Constant diagonal contravariant metric, or None if curvilinear.

        Uniform Cartesian meshes have Ja[..., r, c] = const * delta_rc,
        which lets the gradient and viscous volume terms skip the full
        metric contraction.
        """
        diag = np.empty(mesh.dim)
        for r in range(mesh.dim):
            col = mesh.Ja[..., r, :]
            d = col[..., r]
            diag[r] = d.flat[0]
            if not (np.all(d == diag[r])
                    and all(np.all(col[..., c] == 0.0)
                            for c in range(3) if c != r)):
                return None
        return diag

    @staticmethod
    def _geom(nds):
        ds = np.linalg.norm(nds, axis=-1)
        n = nds / ds[..., None]
        return ds, n, rotation_matrix(n)

    # ------------------------------------------------------------------
    # helpers

    @property
    def needs_gradients(self) -> bool:
        return self.num.svv.enabled or self.num.mu > 0

    @property
    def needs_sensor(self) -> bool:
        return np.isfinite(self.num.svv.sensor_threshold) and self.num.svv.enabled

    def _diff(self, A, axis: int):
        D = self.mesh.ops.D
        Am = np.moveaxis(A, 1 + axis, -2)
        return np.moveaxis(np.matmul(D, Am), -2, 1 + axis)

    @staticmethod
    def _gather(A, elems, axis, end):
        return A[(elems,) + face_slice(axis, end)]

    def _quad_weights(self):
        w = self.mesh.ops.weights
        omega = w.reshape(-1, 1, 1)
        if self.mesh.dim >= 2:
            omega = omega * w.reshape(1, -1, 1)
        if self.mesh.dim == 3:
            omega = omega * w.reshape(1, 1, -1)
        return omega

    def _face_weights(self, axis):
        """Quadrature weights on the face-perpendicular node axes."""
        w = self.mesh.ops.weights
        dims = [d for d in range(self.mesh.dim) if d != axis]
        shape = [1, 1, 1]
        omega = np.ones((1, 1, 1))
        for d in dims:
            s = [1, 1, 1]
            s[d] = w.size
            omega = omega * w.reshape(s)
        sl = face_slice(axis, 0)
        return omega[sl]

    # ------------------------------------------------------------------
    # ghost states and boundary rules

    def ghost_state(self, tag, q_int, normal):
        """Exterior state for the inviscid interface flux."""
        if tag in ("wall_free_slip", "wall_no_slip"):
            qg = q_int.copy()
            mn = np.einsum("...i,...i->...", q_int[..., 1:4], normal)
            qg[..., 1:4] -= 2.0 * mn[..., None] * normal
            return qg
        if tag == "inflow":
            return np.broadcast_to(self.bdata.inflow_state, q_int.shape).copy()
        if tag == "outflow":
            return self._outflow_ghost(q_int, normal)
        raise ValueError(f"unknown boundary tag {tag!r}")

    def _outflow_ghost(self, q_int, normal):
        gas = self.gas
        g = gas.gamma
        rho, u, v, w, p = primitives(q_int, gas)
        vel = np.stack([u, v, w], axis=-1)
        un = np.einsum("...i,...i->...", vel, normal)
        a = np.sqrt(g * p / rho)
        p0 = self.bdata.outflow_pressure
        if p0 is None:
            return q_int.copy()
        rho0 = rho * (1.0 + (p0 / p - 1.0) / g)
        a0 = np.sqrt(g * p0 / rho0)
        un0 = un + 2.0 * a / (g - 1.0) - 2.0 * a0 / (g - 1.0)
        vel0 = vel + (un0 - un)[..., None] * normal
        supersonic = un / a > 1.0
        qg = np.empty_like(q_int)
        ke0 = 0.5 * np.sum(vel0**2, axis=-1)
        qg[..., 0] = rho0
        qg[..., 1:4] = rho0[..., None] * vel0
        qg[..., 4] = p0 / (g - 1.0) + rho0 * ke0
        return np.where(supersonic[..., None], q_int, qg)

    @staticmethod
    def boundary_viscous(tag, w_int, fn_int):
        """BR1 boundary values (W*, F* . n dS) for all dissipative fluxes.

        Free-slip walls, inflow, and outflow are Neumann (no dissipative
        stress through the boundary); no-slip walls impose zero momentum
        entropy variables and keep the momentum flux rows.
        """
        if tag == "wall_no_slip":
            w_star = w_int.copy()
            w_star[..., 1:4] = 0.0
            fn_star = fn_int.copy()
            fn_star[..., 0] = 0.0
            fn_star[..., 4] = 0.0
            return w_star, fn_star
        return w_int, np.zeros_like(fn_int)

    # ------------------------------------------------------------------
    # gradients

    def gradients(self, Q, W):
        """BR1 gradient of the entropy variables, shape (..., 3, 5)."""
        mesh = self.mesh
        JG = np.zeros(W.shape[:-1] + (3, 5))
        # chain-rule metric form: grad_x = (1/J) sum_r Ja^r d/dxi_r. The
        # divergence form D_r(Ja^r W) aliases on curved elements and breaks
        # the exact pairing with the viscous volume terms.
        if self._metric_diag is not None:
            for r in range(mesh.dim):
                JG[..., r, :] = self._metric_diag[r] * self._diff(W, r)
        else:
            for r in range(mesh.dim):
                dW = self._diff(W, r)
                JG += mesh.Ja[..., r, :, None] * dW[..., None, :]
        w_end = self._w_end
        for fb in mesh.faces:
            WL = self._gather(W, fb.elem_left, fb.axis, 1)
            WR = self._gather(W, fb.elem_right, fb.axis, 0)
            w_star = 0.5 * (WL + WR)
            lift = fb.nds[..., :, None] / w_end
            JG[(fb.elem_left,) + face_slice(fb.axis, 1)] += (
                (w_star - WL)[..., None, :] * lift
            )
            JG[(fb.elem_right,) + face_slice(fb.axis, 0)] -= (
                (w_star - WR)[..., None, :] * lift
            )
        for bb in mesh.boundaries:
            WI = self._gather(W, bb.elem, bb.axis, bb.end)
            w_star, _ = self.boundary_viscous(bb.tag, WI, WI)
            JG[(bb.elem,) + face_slice(bb.axis, bb.end)] += (
                (w_star - WI)[..., None, :] * bb.nds[..., :, None] / w_end
            )
        return JG / self.mesh.J[..., None, None]

    # ------------------------------------------------------------------
    # sensor / per-step state

    def update_sensor(self, Q):
        """Evaluate the shock sensor and freeze the per-element switch.

        Uses grad(rho) recovered from the thermodynamic entropy-variable
        gradient; requires the thermodynamic set.
        """
        if not self.needs_sensor:
            return
        W = entropy_vars(Q, self.gas, "thermo")
        G = self.gradients(Q, W)
        grad_rho = np.einsum("...v,...dv->...d", Q, G)
        self.sensor = sensor_values(grad_rho, self.mesh.ops.weights, self.mesh.dim)
        self.shock_mask = self.sensor > self.num.svv.sensor_threshold

    # ------------------------------------------------------------------
    # dissipative fluxes

    def _artificial_groups(self):
        svv = self.num.svv
        idx = np.arange(self.mesh.n_elements)
        smooth = idx[~self.shock_mask]
        shock = idx[self.shock_mask]
        return (
            (smooth, self._kernel_smooth, svv.mu1, svv.alpha1),
            (shock, self._kernel_shock, svv.mu2, svv.alpha2),
        )

    def dissipative_flux(self, Q, G):
        """Total physical + filtered artificial flux, shape (..., 3, 5)."""
        mesh, gas, svv = self.mesh, self.gas, self.num.svv
        rho, u, v, w, p = primitives(Q, gas)
        F = np.zeros(Q.shape[:-1] + (3, 5))
        if self.num.mu > 0:
            B, _, _ = ns_thermo_matrices(rho, u, v, w, p, self.num.mu, gas)
            Gf = G.reshape(G.shape[:-2] + (15,))
            F += np.einsum("...ij,...j->...i", B, Gf).reshape(F.shape)
        if not svv.enabled:
            return F
        for idx, kernel, mu_c, alpha_c in self._artificial_groups():
            if idx.size == 0:
                continue
            if idx.size == mesh.n_elements:
                idx = slice(None)  # skip fancy-index copies
            Gs = G[idx]
            Js = mesh.J[idx]
            mu_n = np.full(Js.shape, mu_c)
            if svv.les_enabled and svv.flux_family == "ns-kinetic":
                grad_u = Gs[..., :3, 1:4]  # kinetic-set gradient rows are du_i/dx_d
                vol = mesh.cell_volume[idx].reshape((-1,) + (1,) * 3)
                mu_n = mu_n + smagorinsky_viscosity(grad_u, vol, mesh.N, svv.c_s)
                self.max_artificial_viscosity = max(
                    self.max_artificial_viscosity, float(mu_n.max())
                )
            if svv.flux_family == "ns-kinetic":
                Fa = filtered_flux_scalar_coeff(
                    mesh.ops, kernel, Js, mu_n, NS_KINETIC_MATRIX, Gs
                )
                # energy-row closure tau . u (adiabatic artificial flux)
                us = np.stack([u[idx], v[idx], w[idx]], axis=-1)
                Fa[..., 4] = np.einsum("...dm,...m->...d", Fa[..., 1:4], us)
            elif svv.flux_family == "ns-thermo":
                _, L, Dv = ns_thermo_matrices(
                    rho[idx], u[idx], v[idx], w[idx], p[idx], mu_n, gas,
                    factors_only=True,
                )
                Fa = filtered_flux_cholesky(mesh.ops, kernel, Js, L, Dv, Gs)
            else:  # guermond-popov
                _, L, Dv = gp_matrices(
                    rho[idx], u[idx], v[idx], w[idx], p[idx], mu_n,
                    np.full(Js.shape, alpha_c), gas, factors_only=True,
                )
                Fa = filtered_flux_cholesky(mesh.ops, kernel, Js, L, Dv, Gs)
            F[idx] += Fa
        return F

    # ------------------------------------------------------------------
    # right-hand side

    def _interior_inviscid(self, fb_index, Q):
        fb = self.mesh.faces[fb_index]
        qL = self._gather(Q, fb.elem_left, fb.axis, 1)
        qR = self._gather(Q, fb.elem_right, fb.axis, 0)
        ds, n, T = self._face_geom[fb_index]
        f_star = riemann_flux(
            self.num.two_point, self.num.riemann, qL, qR, n, self.gas,
            rotation=T,
        ) * ds[..., None]
        return qL, qR, f_star

    def _boundary_inviscid(self, bb_index, Q):
        bb = self.mesh.boundaries[bb_index]
        qI = self._gather(Q, bb.elem, bb.axis, bb.end)
        ds, n, T = self._bnd_geom[bb_index]
        qG = self.ghost_state(bb.tag, qI, n)
        f_star = riemann_flux(
            self.num.two_point, self.num.riemann, qI, qG, n, self.gas,
            rotation=T,
        ) * ds[..., None]
        return qI, f_star

    def rhs(self, Q, t: float = 0.0):
        mesh, gas = self.mesh, self.gas
        check_admissible(Q, gas, time=t)
        rho, u, v, w, p = primitives(Q, gas)
        h = (Q[..., 4] + p) / rho
        out = np.zeros_like(Q)
        split_volume_divergence(
            rho, u, v, w, p, h, mesh.Ja, mesh.ops.D, gas.gamma, self._kind_id, out
        )
        w_end = self._w_end
        for fi, fb in enumerate(mesh.faces):
            qL, qR, f_star = self._interior_inviscid(fi, Q)
            fL = normal_euler_flux(qL, fb.nds, gas)
            fR = normal_euler_flux(qR, fb.nds, gas)
            out[(fb.elem_left,) + face_slice(fb.axis, 1)] -= (f_star - fL) / w_end
            out[(fb.elem_right,) + face_slice(fb.axis, 0)] += (f_star - fR) / w_end
        for bi, bb in enumerate(mesh.boundaries):
            qI, f_star = self._boundary_inviscid(bi, Q)
            fI = normal_euler_flux(qI, bb.nds, gas)
            out[(bb.elem,) + face_slice(bb.axis, bb.end)] -= (f_star - fI) / w_end

        if self.needs_gradients:
            W = entropy_vars(Q, gas, self.entropy_set)
            G = self.gradients(Q, W)
            F = self.dissipative_flux(Q, G)
            for r in range(mesh.dim):
                if self._metric_diag is not None:
                    Ftil = self._metric_diag[r] * F[..., r, :]
                else:
                    Ftil = np.einsum("...d,...dv->...v", mesh.Ja[..., r, :], F)
                out += self._diff(Ftil, r)
            for fb in mesh.faces:
                FL = self._gather(F, fb.elem_left, fb.axis, 1)
                FR = self._gather(F, fb.elem_right, fb.axis, 0)
                FnL = np.einsum("...dv,...d->...v", FL, fb.nds)
                FnR = np.einsum("...dv,...d->...v", FR, fb.nds)
                f_star = 0.5 * (FnL + FnR)
                out[(fb.elem_left,) + face_slice(fb.axis, 1)] += (f_star - FnL) / w_end
                out[(fb.elem_right,) + face_slice(fb.axis, 0)] += (FnR - f_star) / w_end
            for bb in mesh.boundaries:
                FI = self._gather(F, bb.elem, bb.axis, bb.end)
                FnI = np.einsum("...dv,...d->...v", FI, bb.nds)
                WI = self._gather(W, bb.elem, bb.axis, bb.end)
                _, fn_star = self.boundary_viscous(bb.tag, WI, FnI)
                out[(bb.elem,) + face_slice(bb.axis, bb.end)] += (fn_star - FnI) / w_end

        out /= mesh.J[..., None]
        return out

    # ------------------------------------------------------------------
    # diagnostics

    def entropy_budget(self, Q):
        """All terms of the semi-discrete entropy identity.

        Returns a dict with lhs = sum <J Q_t, W>, the interior and boundary
        inviscid transfer terms, the viscous and artificial volume
        dissipations, and the residual of
            lhs = -(ibt_e + pbt_e + d_v + d_a).
        """
        mesh, gas = self.mesh, self.gas
        Qt = self.rhs(Q)
        W = entropy_vars(Q, gas, self.entropy_set)
        omega = self._quad_weights()
        lhs = float(
            np.sum(omega * mesh.J * np.einsum("...v,...v->...", Qt, W))
        )

        ibt = 0.0
        for fi, fb in enumerate(mesh.faces):
            qL, qR, f_star = self._interior_inviscid(fi, Q)
            WL = entropy_vars(qL, gas, self.entropy_set)
            WR = entropy_vars(qR, gas, self.entropy_set)
            psiL = np.einsum(
                "...d,...d->...", entropy_potential(qL, gas, self.entropy_set), fb.nds
            )
            psiR = np.einsum(
                "...d,...d->...", entropy_potential(qR, gas, self.entropy_set), fb.nds
            )
            prod = np.einsum("...v,...v->...", WR - WL, f_star) - (psiR - psiL)
            ibt -= float(np.sum(self._face_weights(fb.axis) * prod))

        pbt = 0.0
        for bi, bb in enumerate(mesh.boundaries):
            qI, f_star = self._boundary_inviscid(bi, Q)
            WI = entropy_vars(qI, gas, self.entropy_set)
            psiI = np.einsum(
                "...d,...d->...", entropy_potential(qI, gas, self.entropy_set), bb.nds
            )
            flow = np.einsum("...v,...v->...", WI, f_star) - psiI
            pbt += float(np.sum(self._face_weights(bb.axis) * flow))

        d_v = d_a = 0.0
        if self.needs_gradients:
            G = self.gradients(Q, W)
            rho, u, v, w, p = primitives(Q, gas)
            if self.num.mu > 0:
                B, _, _ = ns_thermo_matrices(rho, u, v, w, p, self.num.mu, gas)
                Gf = G.reshape(G.shape[:-2] + (15,))
                Fv = np.einsum("...ij,...j->...i", B, Gf).reshape(G.shape)
                d_v = float(
                    np.sum(omega * mesh.J * np.einsum("...dv,...dv->...", G, Fv))
                )
            if self.num.svv.enabled:
                Fa = self.dissipative_flux(Q, G)
                if self.num.mu > 0:
                    Fa = Fa - Fv
                d_a = float(
                    np.sum(omega * mesh.J * np.einsum("...dv,...dv->...", G, Fa))
                )
        residual = lhs + ibt + pbt + d_v + d_a
        return {
            "lhs": lhs, "ibt_e": ibt, "pbt_e": pbt,
            "d_v": d_v, "d_a": d_a, "residual": residual,
        }

    def conserved_totals(self, Q):
        omega = self._quad_weights()
        return np.einsum("eijk,ijk,eijkv->v", self.mesh.J, omega, Q)

    def total_entropy(self, Q, entropy_set=None):
        omega = self._quad_weights()
        S = entropy_density(Q, self.gas, entropy_set or self.entropy_set)
        return float(np.sum(omega * self.mesh.J * S))
