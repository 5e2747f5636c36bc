"""Half-chain entropy build-up with circuit depth.

Runs flux sweeps of one config at several layer counts and records the
optimized-state entropy next to the exact-diagonalization value.

    python scripts/layer_scan.py reproduce/fig3_entropy_su3.yaml --layers 1 2 3
"""

import argparse
import csv
from dataclasses import replace

from sunvqe import vqe
from sunvqe.config import load_config


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("config")
    ap.add_argument("--layers", type=int, nargs="+", default=[1, 2, 3])
    ap.add_argument("-o", "--output", default="layer_scan.csv")
    args = ap.parse_args()

    cfg = load_config(args.config)
    grid = cfg.sweep.grid()
    with open(args.output, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["layers", "phi", "energy_vqe", "energy_ed",
                    "entropy_vqe", "entropy_ed"])
        for layers in args.layers:
            vcfg = replace(cfg.vqe, layers=layers)
            sweep = vqe.sweep_flux(
                cfg.model, cfg.sector, grid, vcfg, mirror=cfg.sweep.mirror
            )
            for p in sweep.points:
                w.writerow([
                    layers, f"{p.phi:.17g}",
                    f"{p.energy_vqe:.17g}", f"{p.energy_ed:.17g}",
                    f"{p.entropy_vqe:.17g}", f"{p.entropy_ed:.17g}",
                ])
    print(f"wrote {args.output}")


if __name__ == "__main__":
    main()
