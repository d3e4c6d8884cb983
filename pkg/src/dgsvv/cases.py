"""Case driver: presets, initial conditions, and the batch run loop.

Presets encode the three benchmark configurations:

  tgv        3-D Taylor-Green vortex on the periodic [0, 2pi]^3 box with
             kinetic-set SVV (high-pass kernel) plus Smagorinsky LES.
  shu-osher  1-D shock / entropy-wave interaction with sensor-switched
             Guermond-Popov SVV and matrix-dissipation interfaces.
  ffs        Mach-3 forward-facing step with sensor-switched SVV and an
             automated higher-viscosity warm-start phase.

Every run writes a reproducibility header (resolved settings + package
version), a diagnostics CSV, and snapshots (binary fields; additionally a
plain CSV line profile in 1-D).
"""

import importlib.metadata
import os

import numpy as np

from . import io as dio
from .config import ConfigError, defaults, format_settings
from .gas import GasModel, conserved, entropy_kinetic, primitives
from .mesh import build_box_mesh, build_step_mesh
from .operator import BoundaryData, Numerics, SemiDiscreteOperator
from .svv import SVVConfig
from .timeint import TimeConfig, advance, stable_dt


def package_version() -> str:
    try:
        return importlib.metadata.version("dgsvv")
    except importlib.metadata.PackageNotFoundError:
        return "unknown"


# ----------------------------------------------------------------------
# initial conditions

def ic_uniform(X, settings, gas):
    shape = X.shape[:-1]
    one = np.ones(shape)
    return conserved(
        settings["ic.rho"] * one, settings["ic.u"] * one,
        settings["ic.v"] * one, settings["ic.w"] * one,
        settings["ic.p"] * one, gas,
    )


def ic_density_wave(X, settings, gas):
    """Smooth advected density wave: rho = 1 + 0.5 sin(2 pi x / L)."""
    x = X[..., 0]
    L = settings["mesh.x1"] - settings["mesh.x0"]
    rho = 1.0 + 0.5 * np.sin(2.0 * np.pi * (x - settings["mesh.x0"]) / L)
    u = np.full_like(x, settings["ic.u"])
    p = np.full_like(x, settings["ic.p"])
    z = np.zeros_like(x)
    return conserved(rho, u, z, z, p, gas)


def ic_tgv(X, settings, gas):
    x, y, z = X[..., 0], X[..., 1], X[..., 2]
    rho = np.ones_like(x)
    u = np.sin(x) * np.cos(y) * np.cos(z)
    v = -np.cos(x) * np.sin(y) * np.cos(z)
    w = np.zeros_like(x)
    p = 100.0 + (
        np.cos(2 * x) * np.cos(2 * z) + 2.0 * np.cos(2 * y)
        + 2.0 * np.cos(2 * x) + np.cos(2 * y) * np.cos(2 * z)
    ) / 16.0
    return conserved(rho, u, v, w, p, gas)


SHU_OSHER_LEFT = (3.857143, 2.629369, 10.3333)


def ic_shu_osher(X, settings, gas):
    x = X[..., 0]
    left = x <= -4.0
    rho = np.where(left, SHU_OSHER_LEFT[0], 1.0 + 0.2 * np.sin(5.0 * x))
    u = np.where(left, SHU_OSHER_LEFT[1], 0.0)
    p = np.where(left, SHU_OSHER_LEFT[2], 1.0)
    z = np.zeros_like(x)
    return conserved(rho, u, z, z, p, gas)


IC_KINDS = {
    "uniform": ic_uniform,
    "density-wave": ic_density_wave,
    "tgv": ic_tgv,
    "shu-osher": ic_shu_osher,
}


# ----------------------------------------------------------------------
# presets

def preset_tgv(paper_scale=False) -> dict:
    s = defaults()
    n = 8 if paper_scale else 4
    s.update({
        "preset": "tgv", "case.name": "tgv",
        "mesh.kind": "box", "mesh.dim": 3,
        "mesh.nx": n, "mesh.ny": n, "mesh.nz": n,
        "mesh.degree": 8 if paper_scale else 4,
        "mesh.x0": 0.0, "mesh.x1": 2.0 * np.pi,
        "mesh.y0": 0.0, "mesh.y1": 2.0 * np.pi,
        "mesh.z0": 0.0, "mesh.z1": 2.0 * np.pi,
        "mesh.periodic_x": True, "mesh.periodic_y": True,
        "mesh.periodic_z": True,
        "ic.kind": "tgv",
        "flux.two_point": "pirozzoli",
        "flux.riemann": "lax-friedrichs",
        "svv.family": "ns-kinetic",
        "svv.p_smooth": 1.0,
        "svv.high_pass": True,
        "les.enabled": True, "les.cs": 0.2,
        "time.t_end": 10.0,
    })
    return s


def preset_shu_osher() -> dict:
    s = defaults()
    s.update({
        "preset": "shu-osher", "case.name": "shu-osher",
        "mesh.kind": "box", "mesh.dim": 1,
        "mesh.nx": 50, "mesh.degree": 5,
        "mesh.x0": -4.5, "mesh.x1": 4.5,
        "bc.xmin": "inflow", "bc.xmax": "outflow",
        "bc.inflow.rho": SHU_OSHER_LEFT[0],
        "bc.inflow.u": SHU_OSHER_LEFT[1],
        "bc.inflow.p": SHU_OSHER_LEFT[2],
        "bc.outflow.p": 1.0,
        "ic.kind": "shu-osher",
        "flux.two_point": "chandrashekar",
        "flux.riemann": "matrix-dissipation",
        "svv.family": "guermond-popov",
        "svv.p_smooth": 2.0, "svv.p_shock": 0.0,
        "svv.mu1": 0.002, "svv.mu2": 0.002,
        "svv.alpha1": 0.002, "svv.alpha2": 0.0,
        "svv.threshold": 10.0,
        "time.t_end": 1.8,
    })
    return s


def preset_ffs() -> dict:
    s = defaults()
    s.update({
        "preset": "ffs", "case.name": "ffs",
        "mesh.kind": "step", "mesh.dim": 2,
        "mesh.nx": 15, "mesh.ny": 5, "mesh.degree": 4,
        "mesh.x0": 0.0, "mesh.x1": 3.0,
        "mesh.y0": 0.0, "mesh.y1": 1.0,
        "mesh.step_height": 0.2, "mesh.step_position": 0.6,
        "bc.inflow.rho": 1.4, "bc.inflow.u": 3.0, "bc.inflow.p": 1.0,
        "bc.outflow.p": 1.0,
        "ic.kind": "uniform",
        "ic.rho": 1.4, "ic.u": 3.0, "ic.p": 1.0,
        "flux.two_point": "chandrashekar",
        "flux.riemann": "matrix-dissipation",
        "svv.family": "guermond-popov",
        "svv.p_smooth": 4.0, "svv.p_shock": 0.0,
        "svv.mu1": 1e-3, "svv.mu2": 2e-3,
        "svv.alpha1": 1e-3, "svv.alpha2": 2e-3,
        "svv.threshold": 1.0,
        "time.t_end": 4.0,
        "warm.enabled": True, "warm.t_end": 1.0,
        "warm.mu1": 5e-3, "warm.mu2": 5e-3, "warm.alpha1": 5e-3,
    })
    return s


PRESETS = {
    "tgv": preset_tgv,
    "shu-osher": preset_shu_osher,
    "ffs": preset_ffs,
}


def resolve(assignments: dict) -> dict:
    """Full settings dict from parsed assignments, expanding any preset."""
    preset = assignments.get("preset")
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r}; choose from {sorted(PRESETS)}"
            )
        settings = PRESETS[preset]()
    else:
        settings = defaults()
    for k, v in assignments.items():
        settings[k] = v
    if settings["ic.kind"] not in IC_KINDS:
        raise ConfigError(f"unknown ic.kind {settings['ic.kind']!r}")
    return settings


# ----------------------------------------------------------------------
# assembly

def build_mesh(settings):
    kind = settings["mesh.kind"]
    N = settings["mesh.degree"]
    if kind == "step":
        return build_step_mesh(
            N,
            length=settings["mesh.x1"] - settings["mesh.x0"],
            height=settings["mesh.y1"] - settings["mesh.y0"],
            step_height=settings["mesh.step_height"],
            step_position=settings["mesh.step_position"],
            nx=settings["mesh.nx"], ny=settings["mesh.ny"],
        ), None, None, None
    if kind != "box":
        raise ConfigError(f"unknown mesh.kind {kind!r}")
    dim = settings["mesh.dim"]
    axes = "xyz"[:dim]
    extents = [(settings[f"mesh.{a}0"], settings[f"mesh.{a}1"]) for a in axes]
    counts = [settings[f"mesh.n{a}"] for a in axes]
    periodic = [settings[f"mesh.periodic_{a}"] for a in axes]
    boundary = {}
    for a in axes:
        boundary[f"{a}min"] = settings[f"bc.{a}min"]
        boundary[f"{a}max"] = settings[f"bc.{a}max"]
    mesh = build_box_mesh(extents, counts, N, periodic=periodic,
                          boundary=boundary)
    return mesh, counts, extents, periodic


def build_gas(settings) -> GasModel:
    return GasModel(gamma=settings["gas.gamma"], R=settings["gas.R"],
                    Pr=settings["gas.Pr"])


def build_numerics(settings) -> Numerics:
    svv = SVVConfig(
        flux_family=settings["svv.family"],
        p_svv_smooth=settings["svv.p_smooth"],
        p_svv_shock=settings["svv.p_shock"],
        mu1=settings["svv.mu1"], mu2=settings["svv.mu2"],
        alpha1=settings["svv.alpha1"], alpha2=settings["svv.alpha2"],
        sensor_threshold=settings["svv.threshold"],
        high_pass=settings["svv.high_pass"],
        les_enabled=settings["les.enabled"], c_s=settings["les.cs"],
    )
    try:
        return Numerics(
            two_point=settings["flux.two_point"],
            riemann=settings["flux.riemann"],
            svv=svv, mu=settings["phys.mu"],
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def build_operator(settings):
    """Resolved settings -> (operator, initial state, gas, box metadata)."""
    mesh, counts, extents, periodic = build_mesh(settings)
    gas = build_gas(settings)
    numerics = build_numerics(settings)
    try:
        numerics.entropy_set  # validates the flux/entropy pairing
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    bdata = BoundaryData(
        inflow_state=conserved(
            settings["bc.inflow.rho"], settings["bc.inflow.u"],
            settings["bc.inflow.v"], settings["bc.inflow.w"],
            settings["bc.inflow.p"], gas,
        ),
        outflow_pressure=settings["bc.outflow.p"],
    )
    op = SemiDiscreteOperator(mesh, gas, numerics, bdata)
    Q0 = IC_KINDS[settings["ic.kind"]](mesh.X, settings, gas)
    box = {"counts": counts, "extents": extents, "periodic": periodic}
    return op, Q0, gas, box


def time_config(settings) -> TimeConfig:
    return TimeConfig(
        scheme=settings["time.scheme"], cfl=settings["time.cfl"],
        cfl_visc=settings["time.cfl_visc"], t_end=settings["time.t_end"],
        dt=settings["time.dt"],
    )


# ----------------------------------------------------------------------
# run loop

def total_kinetic_energy(op, Q):
    omega = op._quad_weights()
    return float(np.sum(omega * op.mesh.J * entropy_kinetic(Q)))


def run_case(settings, progress=None):
    """Advance the configured case to t_end, writing all outputs.

    Returns (final state, final time, operator). Raises AdmissibilityError
    on solver failure and ConfigError on bad settings.
    """
    outdir = settings["output.dir"]
    os.makedirs(outdir, exist_ok=True)
    name = settings["case.name"]

    op, Q, gas, box = build_operator(settings)
    tcfg = time_config(settings)

    with open(os.path.join(outdir, f"{name}_config.txt"), "w") as fh:
        fh.write(f"# dgsvv {package_version()}\n")
        fh.write(format_settings(settings))

    diag = dio.DiagnosticsWriter(os.path.join(outdir, "diagnostics.csv"))
    interval = settings["output.interval"]
    every = max(1, settings["output.diagnostics_every"])
    state = {"next_dump": interval if interval > 0 else np.inf, "ndump": 0}

    current = {"op": op}

    def record(t, Q):
        cop = current["op"]
        rho, _, _, _, p = primitives(Q, gas)
        diag.write(
            t, total_kinetic_energy(cop, Q), cop.total_entropy(Q, "thermo"),
            float(rho.min()), float(p.min()),
            float(cop.sensor.max(initial=0.0)),
        )

    def dump(t, Q):
        tag = f"{t:.6f}".rstrip("0").rstrip(".")
        path = os.path.join(outdir, f"{name}_t{tag}.snap")
        dio.write_snapshot(path, op.mesh, Q, t, counts=box["counts"],
                           extents=box["extents"], periodic=box["periodic"])
        if op.mesh.dim == 1:
            dio.write_line_csv(
                os.path.join(outdir, f"{name}_t{tag}.csv"), op.mesh, Q, gas, t
            )
        state["ndump"] += 1

    def on_step(step, t, Q, dt):
        if step % every == 0:
            record(t, Q)
        while interval > 0 and t >= state["next_dump"] - 1e-12:
            dump(t, Q)
            state["next_dump"] += interval
        if progress is not None:
            progress(step, t, Q, dt)

    def phase(Q, t0, t_end, op_phase):
        current["op"] = op_phase
        cfg = TimeConfig(scheme=tcfg.scheme, cfl=tcfg.cfl,
                         cfl_visc=tcfg.cfl_visc, t_end=t_end, dt=tcfg.dt)
        return advance(
            op_phase.rhs, Q, cfg, t0=t0,
            dt_fn=lambda q: stable_dt(op_phase, q, cfg),
            pre_step=op_phase.update_sensor, on_step=on_step,
        )

    record(0.0, Q)
    t = 0.0
    if settings["warm.enabled"]:
        warm = dict(settings)
        warm["svv.mu1"] = settings["warm.mu1"]
        warm["svv.mu2"] = settings["warm.mu2"]
        warm["svv.alpha1"] = settings["warm.alpha1"]
        warm_op = SemiDiscreteOperator(op.mesh, gas, build_numerics(warm),
                                       op.bdata)
        Q, t = phase(Q, 0.0, min(settings["warm.t_end"], tcfg.t_end), warm_op)

    Q, t = phase(Q, t, tcfg.t_end, op)
    dump(t, Q)
    diag.close()
    return Q, t, op
