"""Run the Lehmer-number section experiments and write CSV files.

Produces the Mahler-measure growth of the sections and the tracked
conjugate root r_s with |P_beta(r_s)| per section.

Usage: python scripts/parry_experiment.py [--sections 12] [--outdir results]
"""
import argparse
import sys
from pathlib import Path

from algebase.cli import main as cli_main


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sections", type=int, default=12)
    ap.add_argument("--omega", default="0.8431,0.3647")
    ap.add_argument("--radius", default="0.02")
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    sec = ["--sections", str(args.sections), "--format", "csv"]
    code = cli_main(["parry", *sec, "--out", str(out / "mahler_sections.csv")])
    if code == 0:
        code = cli_main(["trace", *sec, "--omega", args.omega, "--radius", args.radius,
                         "--out", str(out / "trace.csv")])
    return code


if __name__ == "__main__":
    sys.exit(main())
