"""Rate curves (K = 1..4, K = inf, converse) at P = 1, eps = 1e-3 as plot-ready CSV."""

import argparse
import sys

from vlsf import cli


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="rates.csv")
    ap.add_argument("--snr", default="1")
    ap.add_argument("--eps", default="1e-3")
    args = ap.parse_args()
    code = cli.run(["--command", "rates", "--snr", args.snr, "--eps", args.eps,
                    "--k-set", "1,2,3,4,inf", "--format", "csv", "--out", args.out])
    if code == 0:
        print(f"wrote {args.out}")
    return code


if __name__ == "__main__":
    sys.exit(main())
