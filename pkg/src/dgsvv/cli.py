"""Command-line driver.

Subcommands:
    run         advance a configured case (file or preset) and write outputs
    vonneumann  dispersion/dissipation curves to CSV
    verify      print the 1-D operator identity residuals for a degree
    spectrum    kinetic-energy spectrum of a periodic box snapshot

Exit codes: 0 success, 1 configuration error, 2 admissibility failure.
"""

import argparse
import sys

import numpy as np

from .basis import FilterSpec, filter_matrix, operator_set
from .config import ConfigError, parse_assignment, parse_file
from .gas import AdmissibilityError


def _add_run(sub):
    p = sub.add_parser("run", help="advance a configured case")
    p.add_argument("config", nargs="?", help="configuration file")
    p.add_argument("--preset", choices=("tgv", "shu-osher", "ffs"))
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="override a configuration key")
    p.add_argument("--quiet", action="store_true")


def _cmd_run(args):
    from .cases import resolve, run_case

    assignments = {}
    if args.config:
        assignments.update(parse_file(args.config))
    if args.preset:
        assignments["preset"] = args.preset
    for item in args.overrides:
        key, value = parse_assignment(item)
        assignments[key] = value
    if assignments.get("preset") is None and not args.config:
        raise ConfigError("need a configuration file or --preset")
    settings = resolve(assignments)

    def progress(step, t, Q, dt):
        if not args.quiet and step % 200 == 0:
            print(f"step {step:6d}  t = {t:.6f}  dt = {dt:.3e}", flush=True)

    _, t, _ = run_case(settings, progress=progress)
    if not args.quiet:
        print(f"done: t = {t:.6f}, outputs in {settings['output.dir']}")
    return 0


def _add_vonneumann(sub):
    p = sub.add_parser("vonneumann", help="dispersion/dissipation curves")
    p.add_argument("--n", type=int, default=7, help="polynomial degree")
    p.add_argument("--a", type=float, default=1.0, help="advection speed")
    p.add_argument("--mu", type=float, default=0.0,
                   help="artificial viscosity")
    p.add_argument("--psvv", default="0",
                   help="comma-separated filter exponents")
    p.add_argument("--upwind", type=float, default=1.0)
    p.add_argument("--out", required=True, help="output CSV path")


def _cmd_vonneumann(args):
    from .vonneumann import VNConfig, write_curves_csv

    try:
        p_list = [float(s) for s in args.psvv.split(",") if s.strip()]
    except ValueError:
        raise ConfigError(f"bad --psvv list: {args.psvv!r}") from None
    if not p_list:
        raise ConfigError("--psvv needs at least one exponent")
    cfg = VNConfig(N=args.n, a=args.a, mu=args.mu, upwind=args.upwind)
    write_curves_csv(args.out, cfg, p_list)
    print(f"wrote {args.out}")
    return 0


def _add_verify(sub):
    p = sub.add_parser("verify", help="operator identity residuals")
    p.add_argument("--n", type=int, default=None,
                   help="polynomial degree (default: sweep 1..10)")


def operator_residuals(N: int, rng=None):
    """Residuals of the five 1-D operator identities at degree N."""
    rng = rng or np.random.default_rng(2024)
    ops = operator_set(N)
    w = ops.weights
    P = np.diag(w)
    Bnd = np.zeros((N + 1, N + 1))
    Bnd[0, 0], Bnd[-1, -1] = -1.0, 1.0
    sbp = np.abs(P @ ops.D + (P @ ops.D).T - Bnd).max()
    p1 = max(
        np.abs(ops.F @ ops.B - np.eye(N + 1)).max(),
        np.abs(ops.B @ ops.F - np.eye(N + 1)).max(),
    )
    p2 = np.abs(w[:, None] * ops.B - (ops.legendre_norms_sq[:, None] * ops.F).T).max()
    p3 = 0.0
    t1 = 0.0
    for _ in range(1000):
        U = rng.standard_normal(N + 1)
        V = rng.standard_normal(N + 1)
        lhs = np.sum(w * U * V)
        rhs = np.sum(ops.legendre_norms_sq * (ops.F @ U) * (ops.F @ V))
        p3 = max(p3, abs(lhs - rhs) / (np.linalg.norm(U) * np.linalg.norm(V)))
        kern = rng.random(N + 1)
        H = filter_matrix(ops, FilterSpec(coeffs=kern))
        quad = np.sum(w * U * (H @ U)) / np.dot(U, U)
        t1 = min(t1, quad)
    return {
        "SBP residual": sbp,
        "Property 1 (FB, BF = I)": p1,
        "Property 2 (transpose)": p2,
        "Property 3 (Parseval)": p3,
        "Theorem 1 (min quad form)": t1,
    }


def _cmd_verify(args):
    degrees = [args.n] if args.n is not None else list(range(1, 11))
    ok = True
    for N in degrees:
        res = operator_residuals(N)
        print(f"degree N = {N}")
        for name, value in res.items():
            if name.startswith("Theorem"):
                good = value >= -1e-12
            else:
                good = value <= 1e-11
            ok &= good
            print(f"  {name:<28s} {value: .3e}  {'ok' if good else 'FAIL'}")
    return 0 if ok else 1


def _add_spectrum(sub):
    p = sub.add_parser("spectrum", help="kinetic-energy spectrum of a snapshot")
    p.add_argument("snapshot")
    p.add_argument("--out", required=True, help="output CSV path")


def _cmd_spectrum(args):
    from .gas import GasModel
    from .io import read_snapshot, write_spectrum_csv
    from .spectrum import kinetic_energy_spectrum

    header, _, Q = read_snapshot(args.snapshot)
    if header.get("counts") is None or header.get("periodic") is None \
            or not all(header["periodic"]):
        raise ConfigError("spectrum needs a periodic structured-box snapshot")
    k, E, err = kinetic_energy_spectrum(Q, header["counts"], header["N"],
                                        GasModel())
    if err > 0.01:
        raise RuntimeError(f"Parseval check failed: relative error {err:.3e}")
    write_spectrum_csv(args.out, k, E)
    print(f"wrote {args.out} (Parseval error {err:.2e})")
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="dgsvv",
        description="entropy-stable DGSEM solver with spectral vanishing "
                    "viscosity",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_vonneumann(sub)
    _add_verify(sub)
    _add_spectrum(sub)
    args = parser.parse_args(argv)
    handler = {
        "run": _cmd_run,
        "vonneumann": _cmd_vonneumann,
        "verify": _cmd_verify,
        "spectrum": _cmd_spectrum,
    }[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except AdmissibilityError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
