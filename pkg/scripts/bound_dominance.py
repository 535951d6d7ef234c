"""Simulated (error, mean decoding time) against the random-coding bound
for a few desk-scale designs with M capped."""

import argparse
import math
import warnings

from vlsf.bounds import bound_design
from vlsf.optimizer import design_vlsf_code
from vlsf.simulator import simulate_code


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--m", type=int, default=1024)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print("N     K  eps    eps_hat  eps_upper  tau_mean  n_upper   ok")
    for n, k, eps in [(500, 2, 0.1), (2000, 3, 0.05), (2000, 4, 0.05), (5000, 3, 0.01)]:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            d = design_vlsf_code(n, k, eps, 1.0)
        sim = simulate_code(d, args.trials, args.seed, m=args.m)
        b = bound_design(d, 10 * args.trials, args.seed + 1, m=args.m)
        ok = (sim.eps_hat <= b.eps_upper + 3 * math.hypot(sim.eps_stderr, b.mc_stderr["eps_upper"])
              and sim.tau_mean <= b.n_upper + 3 * math.hypot(sim.tau_stderr, b.mc_stderr["n_upper"]))
        print(f"{n:<5} {k}  {eps:<5}  {sim.eps_hat:.4f}   {b.eps_upper:.4f}     "
              f"{sim.tau_mean:8.1f}  {b.n_upper:8.1f}  {ok}")


if __name__ == "__main__":
    main()
