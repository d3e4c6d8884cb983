"""Run-configuration text format.

Flat dotted keys, one `key = value` assignment per line, `#` comments.
Unknown keys are errors: numerics configs die of typos otherwise. Values
are typed per key; booleans accept true/false, lists are comma separated.
"""

from dataclasses import dataclass

import numpy as np


class ConfigError(Exception):
    """Malformed configuration (unknown key, bad value, failed validation)."""


def _bool(s):
    t = str(s).strip().lower()
    if t in ("true", "yes", "on", "1"):
        return True
    if t in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _float(s):
    v = float(s)
    if not np.isfinite(v):
        raise ValueError(f"not finite: {s!r}")
    return v


def _threshold(s):
    # inf means "sensor never fires" and is the documented default
    v = float(s)
    if np.isnan(v):
        raise ValueError(f"not a threshold: {s!r}")
    return v


# key -> (parser, default)
SCHEMA = {
    "preset": (str, None),
    "case.name": (str, "run"),

    "mesh.kind": (str, "box"),            # box | step
    "mesh.dim": (int, 1),
    "mesh.nx": (int, 1),
    "mesh.ny": (int, 1),
    "mesh.nz": (int, 1),
    "mesh.degree": (int, 4),
    "mesh.x0": (_float, 0.0), "mesh.x1": (_float, 1.0),
    "mesh.y0": (_float, 0.0), "mesh.y1": (_float, 1.0),
    "mesh.z0": (_float, 0.0), "mesh.z1": (_float, 1.0),
    "mesh.periodic_x": (_bool, False),
    "mesh.periodic_y": (_bool, False),
    "mesh.periodic_z": (_bool, False),
    "mesh.step_height": (_float, 0.2),
    "mesh.step_position": (_float, 0.6),

    "bc.xmin": (str, "wall_free_slip"), "bc.xmax": (str, "wall_free_slip"),
    "bc.ymin": (str, "wall_free_slip"), "bc.ymax": (str, "wall_free_slip"),
    "bc.zmin": (str, "wall_free_slip"), "bc.zmax": (str, "wall_free_slip"),
    "bc.inflow.rho": (_float, 1.0),
    "bc.inflow.u": (_float, 0.0),
    "bc.inflow.v": (_float, 0.0),
    "bc.inflow.w": (_float, 0.0),
    "bc.inflow.p": (_float, 1.0),
    "bc.outflow.p": (_float, None),

    "ic.kind": (str, "uniform"),  # uniform | density-wave | tgv | shu-osher
    "ic.rho": (_float, 1.0),
    "ic.u": (_float, 0.0),
    "ic.v": (_float, 0.0),
    "ic.w": (_float, 0.0),
    "ic.p": (_float, 1.0),

    "gas.gamma": (_float, 1.4),
    "gas.R": (_float, 1.0),
    "gas.Pr": (_float, 0.72),
    "phys.mu": (_float, 0.0),

    "flux.two_point": (str, "chandrashekar"),
    "flux.riemann": (str, "matrix-dissipation"),

    "svv.family": (str, "guermond-popov"),
    "svv.p_smooth": (_float, 0.0),
    "svv.p_shock": (_float, 0.0),
    "svv.mu1": (_float, 0.0),
    "svv.mu2": (_float, 0.0),
    "svv.alpha1": (_float, 0.0),
    "svv.alpha2": (_float, 0.0),
    "svv.threshold": (_threshold, np.inf),
    "svv.high_pass": (_bool, False),
    "les.enabled": (_bool, False),
    "les.cs": (_float, 0.2),

    "time.scheme": (str, "rk4"),
    "time.cfl": (_float, 0.4),
    "time.cfl_visc": (_float, 0.2),
    "time.t_end": (_float, 1.0),
    "time.dt": (_float, None),

    "warm.enabled": (_bool, False),
    "warm.t_end": (_float, 1.0),
    "warm.mu1": (_float, 0.0),
    "warm.mu2": (_float, 0.0),
    "warm.alpha1": (_float, 0.0),

    "output.dir": (str, "."),
    "output.interval": (_float, 0.0),  # snapshot cadence in time units; 0 = final only
    "output.diagnostics_every": (int, 1),  # steps between diagnostics rows
}


def defaults() -> dict:
    return {k: d for k, (_, d) in SCHEMA.items()}


def parse_assignment(line: str):
    if "=" not in line:
        raise ConfigError(f"expected 'key = value': {line!r}")
    key, _, raw = line.partition("=")
    key = key.strip()
    raw = raw.strip()
    if key not in SCHEMA:
        raise ConfigError(f"unknown configuration key {key!r}")
    parser, _ = SCHEMA[key]
    try:
        return key, parser(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"bad value for {key}: {raw!r} ({exc})") from None


def parse_text(text: str) -> dict:
    """Assignments only; call resolve() to get a full settings dict."""
    out = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        try:
            key, value = parse_assignment(body)
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        out[key] = value
    return out


def parse_file(path: str) -> dict:
    with open(path) as fh:
        return parse_text(fh.read())


def format_settings(settings: dict) -> str:
    """Canonical text rendering, used for the reproducibility header."""
    lines = []
    for key in sorted(settings):
        v = settings[key]
        if isinstance(v, bool):
            v = "true" if v else "false"
        lines.append(f"{key} = {v}")
    return "\n".join(lines) + "\n"
