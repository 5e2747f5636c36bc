"""Command-line front end.

Subcommands: map, ed, vqe, sample, counts, defaults, plot.  Every data
product is CSV (header row, comma separated, 17-significant-digit
values) preceded by ``#`` metadata lines carrying the config hash and
master seed.  Exit codes: 0 success, 1 configuration error, 2 numerical
non-convergence at any sweep point.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import fermion_ed, measurement, pauli, vqe
from .ansatz import complexity_report
from .circuit import run as run_circuit
from .config import RunConfig, default_yaml, load_config
from .jw import build_qubit_hamiltonian
from .model import ModelError

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NO_CONVERGENCE = 2

LN2 = math.log(2.0)


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return f"{float(value):.17g}"


def _write_csv(path, header, rows, meta):
    with open(path, "w") as fh:
        for key, value in meta:
            fh.write(f"# {key}: {value}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _meta(cfg: RunConfig):
    return [("config_hash", cfg.digest()), ("seed", cfg.vqe.seed)]


def _entropy_scale(cfg: RunConfig) -> float:
    return 1.0 / LN2 if cfg.output.log_base == "bits" else 1.0


def cmd_map(cfg: RunConfig, args) -> int:
    ham = build_qubit_hamiltonian(cfg.model, cfg.sector)
    n_terms = sum(1 for _, s in ham.terms if s.x or s.z)
    path = args.output or f"{cfg.output.prefix}_hamiltonian.txt"
    with open(path, "w") as fh:
        fh.write(f"# config_hash: {cfg.digest()}\n")
        fh.write(f"# qubits: {ham.nq} terms: {n_terms}\n")
        fh.write(pauli.dumps(ham))
    print(f"wrote {n_terms} terms to {path}")
    return EXIT_OK


def cmd_ed(cfg: RunConfig, args) -> int:
    basis = fermion_ed.enumerate_sector_basis(cfg.model.L, cfg.sector)
    cut = cfg.output.entropy_cut or vqe.default_entropy_cut(cfg.model.n_qubits)
    scale = _entropy_scale(cfg)
    rows = []
    for phi in cfg.sweep.grid():
        model = cfg.model.with_phi(phi)
        gs = fermion_ed.ground_state(fermion_ed.build_fermionic_hamiltonian(model, basis))
        cur = fermion_ed.persistent_current_ed(model, cfg.sector)
        ent = fermion_ed.entanglement_entropy_ed(gs.vector, basis, cut)
        rows.append((phi, gs.energy, cur.value, ent * scale))
    path = args.output or f"{cfg.output.prefix}_ed.csv"
    _write_csv(path, ("phi", "energy_ed", "current_ed", "entropy_ed"), rows, _meta(cfg))
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_vqe(cfg: RunConfig, args) -> int:
    result = vqe.sweep_flux(
        cfg.model, cfg.sector, cfg.sweep.grid(), cfg.vqe, mirror=cfg.sweep.mirror
    )
    scale = _entropy_scale(cfg)
    rows = []
    for pt in result.points:
        rows.append(
            (
                pt.phi,
                pt.energy_vqe,
                pt.energy_ed,
                pt.current_vqe,
                pt.current_ed,
                pt.entropy_vqe * scale,
                pt.entropy_ed * scale,
                cfg.vqe.layers,
                cfg.vqe.seed,
                pt.evals,
                pt.converged,
            )
        )
    path = args.output or f"{cfg.output.prefix}_vqe.csv"
    header = (
        "phi", "energy_vqe", "energy_ed", "current_vqe", "current_ed",
        "entropy_vqe", "entropy_ed", "layers", "seed", "evals", "converged",
    )
    _write_csv(path, header, rows, _meta(cfg))
    for idx, pt in enumerate(result.points):
        vqe.save_parameters(f"{cfg.output.prefix}_phi{idx:03d}.params", pt.theta)
    print(f"wrote {len(rows)} rows to {path}")
    if any(not pt.converged for pt in result.points):
        print("warning: non-converged sweep points flagged", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def cmd_sample(cfg: RunConfig, args) -> int:
    if cfg.vqe.shots < 1:
        raise ModelError("vqe.shots must be >= 1 for sampling")
    grid = cfg.sweep.grid()
    if len(args.params) != len(grid):
        raise ModelError(
            f"need one parameter file per grid point ({len(grid)}), got {len(args.params)}"
        )
    solver = vqe.FluxPointSolver(cfg.model, cfg.sector, replace(cfg.vqe, mode="exact"))
    rows = []
    for tag, (phi, path) in enumerate(zip(grid, args.params)):
        theta = vqe.load_parameters(path)
        if len(theta) != solver.circuit.n_parameters:
            raise ModelError(
                f"parameter file {path} has {len(theta)} values, "
                f"circuit needs {solver.circuit.n_parameters}"
            )
        state = run_circuit(solver.circuit, theta)
        model = cfg.model.with_phi(phi)
        groups = measurement.group_terms(
            build_qubit_hamiltonian(model, cfg.sector), model, cfg.sector
        )
        est = measurement.estimate_energy(
            state, groups, cfg.vqe.shots, [cfg.vqe.seed, tag]
        )
        rows.append((phi, est.mean, est.stderr, cfg.vqe.shots))
    path = args.output or f"{cfg.output.prefix}_sample.csv"
    _write_csv(path, ("phi", "mean", "stderr", "shots"), rows, _meta(cfg))
    print(f"wrote {len(rows)} rows to {path}")
    return EXIT_OK


def cmd_counts(cfg: RunConfig, args) -> int:
    report = complexity_report(
        cfg.model.N, cfg.model.L, cfg.vqe.layers, cfg.sector.n_particles
    )
    width = max(len(k) for k in report)
    for key, value in report.items():
        print(f"{key:<{width}}  {value}")
    if args.output:
        _write_csv(args.output, ("quantity", "value"), list(report.items()), _meta(cfg))
    return EXIT_OK


def cmd_defaults(args) -> int:
    sys.stdout.write(default_yaml())
    return EXIT_OK


def cmd_plot(args) -> int:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with open(args.csv) as fh:
        lines = [line for line in fh if not line.startswith("#")]
    data = np.genfromtxt(lines, delimiter=",", names=True)
    names = data.dtype.names
    if args.x not in names:
        raise ModelError(f"column {args.x!r} not in {names}")
    fig, ax = plt.subplots()
    ys = args.y or [n for n in names if n != args.x]
    for col in ys:
        if col not in names:
            raise ModelError(f"column {col!r} not in {names}")
        ax.plot(data[args.x], data[col], marker="o", markersize=3, label=col)
    ax.set_xlabel(args.x)
    ax.legend()
    fig.savefig(args.image, dpi=150, bbox_inches="tight")
    print(f"wrote {args.image}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sunvqe",
        description="VQE for SU(N) Hubbard rings with gauge flux",
    )
    parser.add_argument("--threads", type=int, default=None,
                        help="cap BLAS thread count (default: env SUNVQE_THREADS or library default)")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_config(p):
        p.add_argument("config", help="YAML run configuration")
        p.add_argument("--seed", type=int, default=None, help="override config seed")
        p.add_argument("-o", "--output", default=None, help="output path")
        return p

    with_config(sub.add_parser("map", help="write the qubit Hamiltonian as text"))
    with_config(sub.add_parser("ed", help="exact-diagonalization sweep to CSV"))
    with_config(sub.add_parser("vqe", help="variational sweep to CSV + parameter files"))
    p = with_config(sub.add_parser("sample", help="re-estimate energies from shots"))
    p.add_argument("params", nargs="+", help="parameter files, one per grid point")
    with_config(sub.add_parser("counts", help="ansatz complexity report"))
    sub.add_parser("defaults", help="print the default configuration")
    p = sub.add_parser("plot", help="render a CSV as a line plot")
    p.add_argument("csv")
    p.add_argument("image")
    p.add_argument("-x", default="phi")
    p.add_argument("-y", action="append", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads or os.environ.get("SUNVQE_THREADS")
    if threads:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ.setdefault(var, str(threads))
    try:
        if args.command == "defaults":
            return cmd_defaults(args)
        if args.command == "plot":
            return cmd_plot(args)
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg = replace(cfg, vqe=replace(cfg.vqe, seed=args.seed))
        handler = {
            "map": cmd_map,
            "ed": cmd_ed,
            "vqe": cmd_vqe,
            "sample": cmd_sample,
            "counts": cmd_counts,
        }[args.command]
        return handler(cfg, args)
    except (ModelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
