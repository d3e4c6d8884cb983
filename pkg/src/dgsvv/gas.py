"""Perfect-gas state algebra and entropy-variable sets.

Conserved states are arrays whose trailing axis holds (rho, rho*u, rho*v,
rho*w, rho*E); all functions broadcast over any leading axes.

Two convex entropies are supported:
  * kinetic energy  K = rho|u|^2/2, variables (-|u|^2/2, u, v, w, 0)
  * thermodynamic   S = -rho*s/(gamma-1), s = ln p - gamma ln rho,
    variables ((gamma-s)/(gamma-1) - rho|u|^2/(2p), rho*u/p, ..., -rho/p)
"""

from dataclasses import dataclass

import numpy as np

NVARS = 5


class AdmissibilityError(RuntimeError):
    """Raised when density or pressure becomes non-positive."""

    def __init__(self, message, where=None, time=None):
        self.where = where
        self.time = time
        extra = ""
        if where is not None:
            extra += f" at {where}"
        if time is not None:
            extra += f", t={time:.6g}"
        super().__init__(message + extra)


@dataclass(frozen=True)
class GasModel:
    gamma: float = 1.4
    R: float = 1.0
    Pr: float = 0.72

    @property
    def theta(self) -> float:
        return self.gamma / ((self.gamma - 1.0) * self.Pr)


def pressure(q, gas: GasModel):
    rho = q[..., 0]
    ke = 0.5 * (q[..., 1] ** 2 + q[..., 2] ** 2 + q[..., 3] ** 2) / rho
    return (gas.gamma - 1.0) * (q[..., 4] - ke)


def primitives(q, gas: GasModel):
    """Returns (rho, u, v, w, p)."""
    rho = q[..., 0]
    u = q[..., 1] / rho
    v = q[..., 2] / rho
    w = q[..., 3] / rho
    p = (gas.gamma - 1.0) * (q[..., 4] - 0.5 * rho * (u * u + v * v + w * w))
    return rho, u, v, w, p


def conserved(rho, u, v, w, p, gas: GasModel):
    q = np.empty(np.broadcast(rho, u, v, w, p).shape + (NVARS,))
    q[..., 0] = rho
    q[..., 1] = rho * u
    q[..., 2] = rho * v
    q[..., 3] = rho * w
    q[..., 4] = p / (gas.gamma - 1.0) + 0.5 * rho * (u * u + v * v + w * w)
    return q


def check_admissible(q, gas: GasModel, where=None, time=None):
    rho = q[..., 0]
    p = pressure(q, gas)
    if not np.all(np.isfinite(q)):
        raise AdmissibilityError("non-finite state", where=where, time=time)
    if np.any(rho <= 0) or np.any(p <= 0):
        bad = np.argwhere((rho <= 0) | (p <= 0))
        loc = tuple(bad[0]) if where is None else where
        raise AdmissibilityError(
            f"non-positive density or pressure (index {tuple(bad[0])})",
            where=loc, time=time,
        )


def sound_speed(q, gas: GasModel):
    return np.sqrt(gas.gamma * pressure(q, gas) / q[..., 0])


def entropy_kinetic(q):
    """Kinetic energy rho|u|^2/2."""
    return 0.5 * (q[..., 1] ** 2 + q[..., 2] ** 2 + q[..., 3] ** 2) / q[..., 0]


def entropy_thermo(q, gas: GasModel):
    """Mathematical entropy -rho*s/(gamma-1) with s = ln p - gamma ln rho."""
    rho = q[..., 0]
    p = pressure(q, gas)
    s = np.log(p) - gas.gamma * np.log(rho)
    return -rho * s / (gas.gamma - 1.0)


def entropy_vars_kinetic(q):
    rho, u, v, w = q[..., 0], q[..., 1], q[..., 2], q[..., 3]
    u, v, w = u / rho, v / rho, w / rho
    wv = np.empty_like(q)
    wv[..., 0] = -0.5 * (u * u + v * v + w * w)
    wv[..., 1] = u
    wv[..., 2] = v
    wv[..., 3] = w
    wv[..., 4] = 0.0
    return wv


def entropy_vars_thermo(q, gas: GasModel):
    rho, u, v, w, p = primitives(q, gas)
    s = np.log(p) - gas.gamma * np.log(rho)
    wv = np.empty_like(q)
    wv[..., 0] = (gas.gamma - s) / (gas.gamma - 1.0) - 0.5 * rho * (
        u * u + v * v + w * w
    ) / p
    wv[..., 1] = rho * u / p
    wv[..., 2] = rho * v / p
    wv[..., 3] = rho * w / p
    wv[..., 4] = -rho / p
    return wv


def entropy_vars(q, gas: GasModel, entropy_set: str):
    if entropy_set == "kinetic":
        return entropy_vars_kinetic(q)
    if entropy_set == "thermo":
        return entropy_vars_thermo(q, gas)
    raise ValueError(f"unknown entropy set {entropy_set!r}")


def entropy_density(q, gas: GasModel, entropy_set: str):
    if entropy_set == "kinetic":
        return entropy_kinetic(q)
    if entropy_set == "thermo":
        return entropy_thermo(q, gas)
    raise ValueError(f"unknown entropy set {entropy_set!r}")


def entropy_potential(q, gas: GasModel, entropy_set: str):
    """Potential psi with psi_d = w . f_d - f^E_d, per space direction.

    Thermodynamic set: psi = (rho*u, rho*v, rho*w). Kinetic set: psi = u*p
    (the pressure-work flux).
    """
    rho, u, v, w, p = primitives(q, gas)
    psi = np.empty(q.shape[:-1] + (3,))
    if entropy_set == "thermo":
        psi[..., 0] = rho * u
        psi[..., 1] = rho * v
        psi[..., 2] = rho * w
    elif entropy_set == "kinetic":
        psi[..., 0] = u * p
        psi[..., 1] = v * p
        psi[..., 2] = w * p
    else:
        raise ValueError(f"unknown entropy set {entropy_set!r}")
    return psi


def density_gradient_from_w(q, grad_w):
    """Recover grad(rho) from the thermodynamic entropy-variable gradient.

    grad(rho) = q^T grad(w); grad_w has shape (..., 3, NVARS).
    """
    return np.einsum("...v,...dv->...d", q, grad_w)
