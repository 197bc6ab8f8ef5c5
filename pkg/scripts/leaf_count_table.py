#!/usr/bin/env python3
"""Tabulate chord and gap changes against path length over the basilica gap tree."""

import argparse
import collections
import time

from alterlam.alteration import alter, leaf_diff_report
from alterlam.gaps import gap_structure
from alterlam.lamination import basilica


def reachable(depth: int, max_n: int):
    gs = gap_structure(basilica(depth))
    start = gs.find("L")
    dist = {start.owner: 0}
    order = [start]
    for g in order:
        if dist[g.owner] == max_n:
            continue
        for h in gs.neighbours(g):
            if h.owner is not None and h.owner not in dist:
                dist[h.owner] = dist[g.owner] + 1
                order.append(h)
    return order


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    ap.add_argument("--depth", type=int, default=10, help="basilica generation to search")
    ap.add_argument("--max-n", type=int, default=6, help="largest path length")
    args = ap.parse_args(argv)

    t0 = time.perf_counter()
    base = basilica(args.depth)
    rows = collections.defaultdict(collections.Counter)
    for g in reachable(args.depth, args.max_n):
        res = alter(base, g)
        rows[res.n][leaf_diff_report(res)] += 1
    print(f"{'N':>3} {'targets':>8} {'chords':>7} {'gaps':>5}")
    for n in sorted(rows):
        for (dc, dg), count in sorted(rows[n].items()):
            print(f"{n:>3} {count:>8} {dc:>7} {dg:>5}")
    print(f"# {time.perf_counter() - t0:.1f}s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
