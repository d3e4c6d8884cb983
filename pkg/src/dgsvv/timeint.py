"""Explicit time integration with CFL-based step control.

Default scheme is the five-stage fourth-order low-storage Runge-Kutta of
Carpenter and Kennedy; a three-stage SSP third-order scheme is available
as an alternative. The shock sensor is evaluated once per step, before
the first stage, and frozen across stages.
"""

from dataclasses import dataclass

import numpy as np

RK4_A = (
    0.0,
    -567301805773.0 / 1357537059087.0,
    -2404267990393.0 / 2016746695238.0,
    -3550918686646.0 / 2091501179385.0,
    -1275806237668.0 / 842570457699.0,
)
RK4_B = (
    1432997174477.0 / 9575080441755.0,
    5161836677717.0 / 13612068292357.0,
    1720146321549.0 / 2090206949498.0,
    3134564353537.0 / 4481467310338.0,
    2277821191437.0 / 14882151754819.0,
)
RK4_C = (
    0.0,
    1432997174477.0 / 9575080441755.0,
    2526269341429.0 / 6820363962896.0,
    2006345519317.0 / 3224310063776.0,
    2802321613138.0 / 2924317926251.0,
)

SCHEMES = ("rk4", "rk3-ssp")


@dataclass
class TimeConfig:
    scheme: str = "rk4"
    cfl: float = 0.4
    cfl_visc: float = 0.2
    t_end: float = 0.0
    dt: float = None  # fixed override

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown time scheme {self.scheme!r}")
        if self.cfl <= 0 or self.t_end < 0:
            raise ValueError("cfl must be positive and t_end nonnegative")


def step_rk4(rhs, Q, t, dt):
    dQ = np.zeros_like(Q)
    for a, b, c in zip(RK4_A, RK4_B, RK4_C):
        dQ = a * dQ + dt * rhs(Q, t + c * dt)
        Q = Q + b * dQ
    return Q


def step_rk3_ssp(rhs, Q, t, dt):
    Q1 = Q + dt * rhs(Q, t)
    Q2 = 0.75 * Q + 0.25 * (Q1 + dt * rhs(Q1, t + dt))
    return Q / 3.0 + 2.0 / 3.0 * (Q2 + dt * rhs(Q2, t + 0.5 * dt))


_STEPPERS = {"rk4": step_rk4, "rk3-ssp": step_rk3_ssp}


def stable_dt(op, Q, cfg: TimeConfig) -> float:
    """CFL estimate dt = cfl * min(dx_eff/(|u|+a)) with a viscous limit.

    dx_eff = element size/(N+1)^2 accounts for the clustering of the
    Gauss-Lobatto nodes.
    """
    from .gas import primitives

    mesh, gas = op.mesh, op.gas
    rho, u, v, w, p = primitives(Q, gas)
    a = np.sqrt(gas.gamma * p / rho)
    speed = np.sqrt(u * u + v * v + w * w) + a
    dx_eff = mesh.element_size.reshape((-1,) + (1,) * 3) / (mesh.N + 1) ** 2
    dt = cfg.cfl * float(np.min(dx_eff / speed))
    visc = max(op.num.mu, op.max_artificial_viscosity)
    if visc > 0:
        dt = min(dt, cfg.cfl_visc * float(np.min(dx_eff)) ** 2 / visc)
    return dt


def advance(rhs, Q, cfg: TimeConfig, *, t0=0.0, dt_fn=None, pre_step=None,
            on_step=None):
    """March Q from t0 to cfg.t_end.

    rhs(Q, t) evaluates the semi-discrete operator; dt_fn(Q) supplies the
    step size when cfg.dt is not fixed; pre_step(Q) runs once per step
    (sensor refresh); on_step(step, t, Q, dt) is the diagnostics hook.
    """
    stepper = _STEPPERS[cfg.scheme]
    t = t0
    step = 0
    while t < cfg.t_end - 1e-14:
        if pre_step is not None:
            pre_step(Q)
        dt = cfg.dt if cfg.dt is not None else dt_fn(Q)
        dt = min(dt, cfg.t_end - t)
        Q = stepper(rhs, Q, t, dt)
        t += dt
        step += 1
        if on_step is not None:
            on_step(step, t, Q, dt)
    return Q, t
