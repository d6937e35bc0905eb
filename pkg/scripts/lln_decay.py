"""Cesaro-mean decay table for seeded centred noise, as plot-ready CSV.

    python3 scripts/lln_decay.py --seeds 5 --window 8192 > lln.csv
"""
import argparse
import sys

import numpy as np

from rieszned.ar1 import random_noise
from rieszned.io import write_csv
from rieszned.lattice import global_mean, uniform_space
from rieszned.process import cesaro_norm


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, default=5)
    ap.add_argument("--atoms", type=int, default=8)
    ap.add_argument("--window", type=int, default=8192)
    ap.add_argument("--points", type=int, default=12, help="log-spaced lengths between 16 and the window")
    args = ap.parse_args()

    T = global_mean(uniform_space(args.atoms))
    lengths = np.unique(np.geomspace(16, args.window, args.points).astype(int))
    rows = []
    for seed in range(args.seeds):
        noise = random_noise(T, args.window, seed=seed)
        for m in lengths:
            v = float(cesaro_norm(noise, T, 0, int(m)).max())
            rows.append({"seed": seed, "m": int(m), "cesaro_l1": v, "scaled": v * np.sqrt(m)})
    sys.stdout.write(write_csv(rows, ("seed", "m", "cesaro_l1", "scaled")))


if __name__ == "__main__":
    main()
