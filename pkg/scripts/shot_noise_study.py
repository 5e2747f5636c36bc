"""Re-evaluate statevector-optimal parameters with finite sampling.

Optimizes the Mott benchmark once per flux point with exact energy
measurements, then re-measures each optimal state at several shot counts
and seeds, writing per-cell means and standard errors to CSV.

    python scripts/shot_noise_study.py --points 21 --seeds 50 -o shot_noise.csv
"""

import argparse
import csv

import numpy as np

from sunvqe import jw, measurement, vqe
from sunvqe.ansatz import AnsatzSpec, build_ansatz
from sunvqe.circuit import run
from sunvqe.model import HubbardModel, SpinSector


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=21)
    ap.add_argument("--seeds", type=int, default=50)
    ap.add_argument("--shots", type=int, nargs="+", default=[8192, 16384, 32768])
    ap.add_argument("--layers", type=int, default=3)
    ap.add_argument("--budget", type=int, default=120_000)
    ap.add_argument("-o", "--output", default="shot_noise.csv")
    args = ap.parse_args()

    model = HubbardModel(L=3, N=3, U=5.0)
    sector = SpinSector((1, 1, 1))
    cfg = vqe.VqeConfig(
        layers=args.layers, optimizer="bfgs", mode="exact",
        seed=7, multistart=3, max_evals=args.budget,
    )
    grid = [k / args.points for k in range(args.points)]
    sweep = vqe.sweep_flux(model, sector, grid, cfg, mirror=True)

    circ = build_ansatz(AnsatzSpec(model, sector, args.layers, None))
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["phi", "shots", "seed", "mean", "stderr", "exact"])
        for p in sweep.points:
            state = run(circ, p.theta)
            m = model.with_phi(p.phi)
            groups = measurement.group_terms(
                jw.build_qubit_hamiltonian(m, sector), m, sector
            )
            for shots in args.shots:
                for seed in range(args.seeds):
                    est = measurement.estimate_energy(state, groups, shots, [seed])
                    w.writerow([
                        f"{p.phi:.17g}", shots, seed,
                        f"{est.mean:.17g}", f"{est.stderr:.17g}",
                        f"{p.energy_vqe:.17g}",
                    ])
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
