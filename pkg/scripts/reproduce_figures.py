#!/usr/bin/env python3
"""Regenerate the lamination diagrams and Julia renderings for the reference parameter sets.

Writes into --out: one .lam and .svg per target (added chords green, removed
chords dashed red), one .ppm per map, and classify.txt with the orbit reports.
"""

import argparse
import json
from pathlib import Path

from alterlam.alteration import alter
from alterlam.dynamics import MapParams, classify_map
from alterlam.lamination import basilica, chord_diff, write_lamination
from alterlam.render import RenderConfig, lamination_to_svg, render_julia, write_ppm

HERE = Path(__file__).resolve().parent.parent


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    ap.add_argument("--params", type=Path, default=HERE / "data" / "reference_params.json", help="parameter file")
    ap.add_argument("--out", type=Path, default=Path("figures"), help="output directory")
    ap.add_argument("--size", type=int, default=512, help="image width and height")
    ap.add_argument("--max-iter", type=int, default=500, help="escape-time iteration cap")
    ap.add_argument("--threads", type=int, default=1, help="render threads")
    ap.add_argument("--skip-julia", action="store_true", help="only write laminations")
    args = ap.parse_args(argv)

    cfg = json.loads(args.params.read_text())
    args.out.mkdir(parents=True, exist_ok=True)

    for name in cfg["laminations"]:
        res = alter(basilica(6), name)
        ref = basilica(res.final.generation)
        added, removed = chord_diff(res.final, ref)
        write_lamination(res.final, args.out / f"{name}.lam")
        svg = lamination_to_svg(res.final, [(sorted(added), "green"), (sorted(removed), "red")])
        (args.out / f"{name}.svg").write_text(svg)
        print(f"{name}: N={res.n} generation={res.final.generation} added={len(added)} removed={len(removed)}")

    report = []
    for m in cfg["maps"]:
        p = MapParams(m["n"], complex(*m["a"]), complex(*m["b"]))
        report.append(f"# {m['name']} ({m['claimed']})")
        report.extend(classify_map(p).lines())
        if not args.skip_julia:
            rc = RenderConfig(args.size, args.size, max_iter=args.max_iter)
            write_ppm(render_julia(p, rc, threads=args.threads), args.out / f"{m['name']}.ppm")
            print(f"{m['name']}: rendered")
    (args.out / "classify.txt").write_text("\n".join(report) + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
