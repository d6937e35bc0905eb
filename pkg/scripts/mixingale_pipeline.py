"""AR(1) -> NED certificate -> mixingale certificate, printed per gap.

    python3 scripts/mixingale_pipeline.py --theta 0.5 --steps 10 --seed 3
"""
import argparse

import numpy as np

from rieszned.ar1 import ar1_ned_certificate, generate_ar1, random_noise
from rieszned.lattice import cond_exp, uniform_space
from rieszned.process import mixingale_from_ned, verify_ned


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", type=float, default=0.5)
    ap.add_argument("--steps", type=int, default=10)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--levels", type=int, default=2, help="noise grid size; small values keep the family coarse")
    ap.add_argument("--cap", type=int, default=10)
    args = ap.parse_args()

    T = cond_exp(uniform_space(8), [[0, 1, 2, 3], [4, 5, 6, 7]])
    noise = random_noise(T, args.steps, seed=args.seed, levels=args.levels)
    inst = generate_ar1(args.theta, noise, T)
    fam = inst.family()
    ned = ar1_ned_certificate(inst, np.inf)
    print("ned:", "pass" if verify_ned(inst.process, fam, ned).passed else "FAIL")

    mix = mixingale_from_ned(inst.process, fam, ned, cap=args.cap)
    rep = mix.info["report"]
    print("mixingale:", "pass" if rep.passed else "FAIL", f"worst slack {rep.worst_slack:.4g}")
    # mixingale bounds at gap m draw on the NED and mixing sequences at m // 2
    print(f"{'m':>3} {'xi_k':>10} {'alpha_k':>10} {'phi_k':>10} {'phi_cert':>10}")
    for m in range(len(mix.phi)):
        k = m // 2
        a, ph = mix.info["alpha"][k].max(), mix.info["phi_mixing"][k].max()
        print(f"{m:>3} {ned.xi[k].max():>10.4g} {a:>10.4g} {ph:>10.4g} {mix.phi[m].max():>10.4g}")


if __name__ == "__main__":
    main()
