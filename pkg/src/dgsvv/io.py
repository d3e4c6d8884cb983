"""File outputs: binary field snapshots, 1-D line CSVs, diagnostics CSV.

Snapshot layout (self-describing, little-endian 64-bit floats):
    line 1: magic "DGSVV-SNAPSHOT-1"
    line 2: JSON header with t, dim, N, counts, extents, periodic,
            node_shape (ne, n0, n1, n2), and the variable list
    body:   node coordinates (ne, n0, n1, n2, 3) then conserved state
            (ne, n0, n1, n2, 5), C order.
"""

import csv
import json

import numpy as np

MAGIC = b"DGSVV-SNAPSHOT-1"
VARIABLES = ["rho", "rho_u", "rho_v", "rho_w", "rho_E"]

DIAGNOSTICS_COLUMNS = [
    "t", "kinetic_energy", "entropy", "dissipation_rate",
    "min_rho", "min_p", "max_sensor",
]


def write_snapshot(path, mesh, Q, t, *, counts=None, extents=None,
                   periodic=None):
    """Dump coordinates and conserved state with a JSON header.

    counts/extents/periodic describe the structured element grid when the
    mesh has one (needed by the spectrum pipeline); they may be None for
    unstructured meshes such as the step.
    """
    header = {
        "t": float(t),
        "dim": int(mesh.dim),
        "N": int(mesh.N),
        "counts": None if counts is None else [int(c) for c in counts],
        "extents": None if extents is None else
            [[float(a), float(b)] for a, b in extents],
        "periodic": None if periodic is None else [bool(p) for p in periodic],
        "node_shape": list(Q.shape[:-1]),
        "variables": VARIABLES,
    }
    with open(path, "wb") as fh:
        fh.write(MAGIC + b"\n")
        fh.write(json.dumps(header).encode() + b"\n")
        fh.write(np.ascontiguousarray(mesh.X, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(Q, dtype="<f8").tobytes())


def read_snapshot(path):
    """Return (header dict, X (ne,n0,n1,n2,3), Q (ne,n0,n1,n2,5))."""
    with open(path, "rb") as fh:
        if fh.readline().rstrip() != MAGIC:
            raise ValueError(f"{path}: not a field snapshot")
        header = json.loads(fh.readline().decode())
        shape = tuple(header["node_shape"])
        nn = int(np.prod(shape))
        X = np.frombuffer(fh.read(nn * 3 * 8), dtype="<f8").reshape(shape + (3,))
        Q = np.frombuffer(fh.read(nn * 5 * 8), dtype="<f8").reshape(shape + (5,))
    return header, X.copy(), Q.copy()


def write_line_csv(path, mesh, Q, gas, t):
    """1-D profile dump: x, rho, u, v, w, p sorted by x."""
    from .gas import primitives

    if mesh.dim != 1:
        raise ValueError("line dumps are for 1-D meshes")
    x = mesh.X[..., 0].ravel()
    rho, u, v, w, p = (f.ravel() for f in primitives(Q, gas))
    order = np.argsort(x, kind="stable")
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["x", "rho", "u", "v", "w", "p"])
        for i in order:
            wr.writerow([f"{c:.12g}" for c in
                         (x[i], rho[i], u[i], v[i], w[i], p[i])])


def read_line_csv(path):
    data = np.genfromtxt(path, delimiter=",", names=True)
    return data


class DiagnosticsWriter:
    """Streams DiagnosticsRow lines to diagnostics.csv as the run advances."""

    def __init__(self, path):
        self._fh = open(path, "w", newline="")
        self._wr = csv.writer(self._fh)
        self._wr.writerow(DIAGNOSTICS_COLUMNS)
        self._prev = None  # (t, kinetic_energy) for the -dE/dt column

    def write(self, t, kinetic_energy, entropy, min_rho, min_p, max_sensor):
        if self._prev is None or t == self._prev[0]:
            rate = 0.0
        else:
            rate = -(kinetic_energy - self._prev[1]) / (t - self._prev[0])
        self._prev = (t, kinetic_energy)
        row = (t, kinetic_energy, entropy, rate, min_rho, min_p, max_sensor)
        if not all(np.isfinite(row)):
            raise ValueError(f"non-finite diagnostics at t={t}")
        self._wr.writerow([f"{c:.12g}" for c in row])
        self._fh.flush()

    def close(self):
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()


def write_spectrum_csv(path, k, E):
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["k", "E"])
        for ki, Ei in zip(k, E):
            wr.writerow([f"{ki:.12g}", f"{Ei:.12g}"])
