"""Uniform-grid design: simulated mean stopping time against N' and Lorden's bound."""

import argparse

from vlsf.optimizer import k_infinity_design
from vlsf.simulator import simulate_renewal


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--snr", type=float, default=1.0)
    args = ap.parse_args()
    for n_prime in (1e3, 1e4, 1e5):
        d = k_infinity_design(None, 1e-3, args.snr, n_prime=n_prime)
        st = simulate_renewal(d.grid_spacing, d.gamma, args.snr, args.trials, args.seed)
        print(f"N'={n_prime:>8.0f}  l={d.grid_spacing:4d}  l*E[xi]={st.tau_mean:10.1f} +- {d.grid_spacing * st.xi_ci:6.1f}"
              f"  E[xi]={st.xi_mean:8.3f}  Lorden={st.lorden_bound:8.3f}")


if __name__ == "__main__":
    main()
