"""Recompute the degree-101 alphabet-radius table and write JSON and CSV.

Usage: python scripts/reproduce_table.py [--jobs 4] [--outdir results]
"""
import argparse
import sys
from pathlib import Path

from algebase.cli import main as cli_main


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--jobs", type=int, default=4)
    ap.add_argument("--outdir", default="results")
    args = ap.parse_args(argv)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    common = ["reproduce", "table", "--jobs", str(args.jobs)]
    code = cli_main(common + ["--out", str(out / "table.json")])
    if code == 0:
        code = cli_main(common + ["--format", "csv", "--out", str(out / "table.csv")])
    return code


if __name__ == "__main__":
    sys.exit(main())
