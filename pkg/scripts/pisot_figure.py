"""Write the (k, beta_k, m_k) series for the Pisot sequence x^(2k+1) ... as CSV.

Usage: python scripts/pisot_figure.py [--k-max 10] [--out results/pisot.csv]
"""
import argparse
import sys
from pathlib import Path

from algebase.cli import main as cli_main


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=10)
    ap.add_argument("--out", default="results/pisot.csv")
    args = ap.parse_args(argv)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    return cli_main(["pisot", "--k-max", str(args.k_max), "--format", "csv", "--out", args.out])


if __name__ == "__main__":
    sys.exit(main())
