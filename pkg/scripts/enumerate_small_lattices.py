#!/usr/bin/env python3
"""Enumerate all lattices with up to N elements and tabulate distributivity.

Uses the test suite's brute-force poset enumerator, cross-checks the three
distributivity methods on every lattice, and prints per-size counts.

    python scripts/enumerate_small_lattices.py [N]
"""
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from oracles import enumerate_labeled_lattices, iso_classes  # noqa: E402

from finlat.lattice import birkhoff_oracle, is_distributive, satisfies_distributive_law  # noqa: E402


def main() -> int:
    max_size = int(sys.argv[1]) if len(sys.argv) > 1 else 7
    print(f"{'n':>3} {'labeled':>8} {'classes':>8} {'distributive':>13} {'agree':>6}")
    for n in range(1, max_size + 1):
        labeled = list(enumerate_labeled_lattices(n))
        classes = iso_classes(labeled)
        agree = all(
            satisfies_distributive_law(L)
            == is_distributive(L).distributive
            == birkhoff_oracle(L).distributive
            for L in labeled
        )
        dist = sum(1 for L in classes if satisfies_distributive_law(L))
        print(f"{n:>3} {len(labeled):>8} {len(classes):>8} {dist:>13} {str(agree):>6}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
