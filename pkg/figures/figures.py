#!/usr/bin/env python3
"""Render publication-style figures from solver output files.

Usage: figures.py <kind> --in FILE [--ref FILE] --out FIG.png

Kinds:
    dispersion  wave-analysis CSV -> Re(omega) vs k_tilde, one curve per
                filter exponent (physical branch only)
    diffusion   wave-analysis CSV -> -Im(omega) vs k_tilde, one curve per
                filter exponent (physical branch only)
    profile     1-D line CSV -> density profile, optional reference overlay
    energy      diagnostics CSV -> kinetic energy vs time
    spectrum    spectrum CSV -> log-log E(k) with a k^(-5/3) guide line
    contours    2-D field snapshot -> density contour map

These scripts only render; the single numeric liberty taken is axis
scaling (the k^(-5/3) guide anchor). All input schemas are documented in
the solver package's io module. Images are byte-stable: identical inputs
produce identical PNG files.
"""

import argparse
import csv
import json
import sys

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SNAPSHOT_MAGIC = b"DGSVV-SNAPSHOT-1"

# fixed style so output does not depend on user config
STYLE = {
    "figure.figsize": (6.0, 4.0),
    "figure.dpi": 150,
    "savefig.dpi": 150,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.4,
}


class SchemaError(Exception):
    """Input file does not match the documented format."""


# ----------------------------------------------------------------------
# readers (file-format consumers only; no physics)

def read_csv_columns(path, required):
    """Load a header CSV and return {column: float array}.

    Raises SchemaError naming the first missing column.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise SchemaError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    for col in required:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r} "
                              f"(found {header})")
    data = np.array([[float(c) for c in r] for r in rows[1:] if r])
    if data.ndim != 2 or data.shape[1] != len(header):
        raise SchemaError(f"{path}: ragged rows")
    return {h: data[:, j] for j, h in enumerate(header)}


def read_snapshot(path):
    """Field snapshot: magic line, JSON header, raw <f8 X then Q."""
    with open(path, "rb") as fh:
        if fh.readline().rstrip() != SNAPSHOT_MAGIC:
            raise SchemaError(f"{path}: not a field snapshot")
        header = json.loads(fh.readline().decode())
        for key in ("node_shape", "variables", "dim", "t"):
            if key not in header:
                raise SchemaError(f"{path}: snapshot header lacks {key!r}")
        shape = tuple(header["node_shape"])
        nvar = len(header["variables"])
        nn = int(np.prod(shape))
        X = np.frombuffer(fh.read(nn * 3 * 8), dtype="<f8")
        Q = np.frombuffer(fh.read(nn * nvar * 8), dtype="<f8")
    if X.size != nn * 3 or Q.size != nn * nvar:
        raise SchemaError(f"{path}: truncated payload")
    return header, X.reshape(shape + (3,)), Q.reshape(shape + (nvar,))


def read_ref(path):
    """Reference overlay: two-column CSV (x, y), header optional."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if not rows:
        raise SchemaError(f"{path}: empty reference file")
    try:
        float(rows[0][0])
    except ValueError:
        rows = rows[1:]
    data = np.array([[float(r[0]), float(r[1])] for r in rows])
    return data[:, 0], data[:, 1]


# ----------------------------------------------------------------------
# renderers

def plot_wave(args, imag_part):
    cols = read_csv_columns(args.infile, ["p_svv", "k_tilde", "re_omega",
                                          "im_omega", "is_physical"])
    phys = cols["is_physical"] > 0.5
    fig, ax = plt.subplots()
    for p in sorted(set(cols["p_svv"])):
        sel = phys & (cols["p_svv"] == p)
        k = cols["k_tilde"][sel]
        w = cols["im_omega" if imag_part else "re_omega"][sel]
        order = np.argsort(k)
        y = -w[order] if imag_part else w[order]
        ax.plot(k[order], y, label=f"$P = {p:g}$")
    ax.set_xlabel(r"$\tilde{k}$")
    if imag_part:
        ax.set_ylabel(r"$-\mathrm{Im}\,\omega$")
        ax.set_title("Dissipation of the physical mode")
    else:
        ax.set_ylabel(r"$\mathrm{Re}\,\omega$")
        ax.set_title("Dispersion of the physical mode")
    ax.legend()
    return fig


def plot_profile(args):
    cols = read_csv_columns(args.infile, ["x", "rho"])
    fig, ax = plt.subplots()
    if args.ref is not None:
        xr, yr = read_ref(args.ref)
        ax.plot(xr, yr, color="0.6", lw=1.0, label="reference")
    ax.plot(cols["x"], cols["rho"], color="C0", label="computed")
    ax.set_xlabel("$x$")
    ax.set_ylabel(r"$\rho$")
    ax.set_title("Density profile")
    ax.legend()
    return fig


def plot_energy(args):
    cols = read_csv_columns(args.infile, ["t", "kinetic_energy"])
    fig, ax = plt.subplots()
    if args.ref is not None:
        xr, yr = read_ref(args.ref)
        ax.plot(xr, yr, color="0.6", lw=1.0, label="reference")
    ax.plot(cols["t"], cols["kinetic_energy"], color="C0", label="computed")
    ax.set_xlabel("$t$")
    ax.set_ylabel(r"$E_k$")
    ax.set_title("Integrated kinetic energy")
    ax.legend()
    return fig


def plot_spectrum(args):
    cols = read_csv_columns(args.infile, ["k", "E"])
    k, E = cols["k"], cols["E"]
    pos = (k > 0) & (E > 0)
    fig, ax = plt.subplots()
    if args.ref is not None:
        xr, yr = read_ref(args.ref)
        ax.loglog(xr, yr, color="0.6", lw=1.0, label="reference")
    ax.loglog(k[pos], E[pos], "o-", color="C0", ms=3, label="computed")
    if pos.sum() >= 2:
        # guide anchored at the second resolved mode
        ka = k[pos]
        anchor = min(1, ka.size - 1)
        c = E[pos][anchor] * ka[anchor] ** (5.0 / 3.0)
        ax.loglog(ka, c * ka ** (-5.0 / 3.0), "k--", lw=1.0,
                  label=r"$k^{-5/3}$")
    ax.set_xlabel("$k$")
    ax.set_ylabel("$E(k)$")
    ax.set_title("Kinetic energy spectrum")
    ax.legend()
    return fig


def plot_contours(args):
    header, X, Q = read_snapshot(args.infile)
    if header["dim"] != 2:
        raise SchemaError(f"{args.infile}: contours need a 2-D snapshot, "
                          f"got dim={header['dim']}")
    x = X[..., 0].ravel()
    y = X[..., 1].ravel()
    rho = Q[..., 0].ravel()
    fig, ax = plt.subplots()
    levels = np.linspace(rho.min(), rho.max(), 31)
    tc = ax.tricontourf(x, y, rho, levels=levels, cmap="viridis")
    ax.tricontour(x, y, rho, levels=levels, colors="k", linewidths=0.3)
    fig.colorbar(tc, ax=ax, label=r"$\rho$")
    ax.set_aspect("equal")
    ax.set_xlabel("$x$")
    ax.set_ylabel("$y$")
    ax.set_title(f"Density, $t = {header['t']:g}$")
    return fig


KINDS = {
    "dispersion": lambda a: plot_wave(a, imag_part=False),
    "diffusion": lambda a: plot_wave(a, imag_part=True),
    "profile": plot_profile,
    "energy": plot_energy,
    "spectrum": plot_spectrum,
    "contours": plot_contours,
}


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="figures.py",
        description="Render figures from solver CSV/snapshot outputs.")
    ap.add_argument("kind", choices=sorted(KINDS))
    ap.add_argument("--in", dest="infile", required=True,
                    help="input CSV or snapshot file")
    ap.add_argument("--ref", default=None,
                    help="optional two-column reference CSV overlay")
    ap.add_argument("--out", required=True, help="output image path")
    args = ap.parse_args(argv)

    plt.rcParams.update(STYLE)
    try:
        fig = KINDS[args.kind](args)
    except (OSError, SchemaError, json.JSONDecodeError, ValueError) as exc:
        print(f"figures.py: {exc}", file=sys.stderr)
        return 1
    # drop the writer metadata so identical inputs give identical bytes
    fig.savefig(args.out, metadata={"Software": None})
    plt.close(fig)
    return 0


if __name__ == "__main__":
    sys.exit(main())
