#!/usr/bin/env python3
"""Measure how many pair-set kernels admit a canonical triple as n grows.

Runs the exhaustive survey at k = 3 for n = 3, 4, 5 and prints the counts;
the survey is descriptive, it does not assert a threshold.

    python scripts/crt2_threshold.py [--csv DIR]
"""
import argparse
from pathlib import Path

from finlat.ramsey import crt2_survey, survey_csv


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--csv", help="directory to drop per-kernel CSV files into")
    args = parser.parse_args()
    print(f"{'n':>3} {'kernels':>8} {'admitting':>10} {'failing':>8}")
    for n in (3, 4, 5):
        survey = crt2_survey(n, 3)
        print(f"{n:>3} {survey.total:>8} {survey.admitting:>10} {len(survey.failing):>8}")
        if args.csv:
            target = Path(args.csv) / f"crt2_n{n}_k3.csv"
            target.write_text(survey_csv(survey))
            print(f"    wrote {target}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
