#!/usr/bin/env python3
"""Print admissible-rank tables for the small benchmark lattices.

For each lattice, enumerates every rank map passing the axioms plus the
Blass and Gaifman conditions and prints the rank vector, its rankset, and
any flags.

    python scripts/rank_tables.py
"""
from finlat.lattice import boolean_lattice, hexagon, m_lattice, pentagon
from finlat.ranked import enumerate_ranks, rank_report


def main() -> int:
    cases = [
        ("boolean(2)", boolean_lattice(2)),
        ("m(3)", m_lattice(3)),
        ("pentagon", pentagon()),
        ("hexagon", hexagon()),
    ]
    for name, L in cases:
        ranks = enumerate_ranks(L, {"axioms", "blass", "gaifman"})
        print(f"\n{name}: {len(ranks)} admissible ranks")
        for row in rank_report(L, ranks):
            labels = [L.label(v) for v in row["rho"]]
            rankset = [L.label(v) for v in row["rankset"]]
            flag = f"  [{row['flags'][0]}]" if row["flags"] else ""
            print(f"  rho={labels} rankset={rankset}{flag}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
