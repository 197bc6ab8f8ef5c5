"""Command-line entry point: ``alterlam <command> ...`` (or ``python3 -m alterlam``).

Exit status is 0 on success, 1 when an input fails validation or a
computation cannot proceed, and 2 for usage errors.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from . import dynamics as dyn
from .alteration import MIN_EXTRA_DEPTH, AlterationError, alter
from .gaps import adjacency_path, format_gap_listing, gap_diff, label_to_name, parse_target, try_label
from .lamination import Chord, basilica, chord_diff, format_lamination, read_lamination, verify, write_lamination
from .render import PALETTES, RenderConfig, lamination_to_svg, render_julia, write_ppm


class _Fail(Exception):
    """Validation failure that should end the command with status 1."""


def _complex_arg(text: str) -> complex:
    try:
        return dyn.parse_complex(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected re,im (e.g. 0.0539,-0.0118), got {text!r}") from None


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _emit(text: str, out: str | None):
    if out and out != "-":
        Path(out).write_bytes(text.encode("ascii"))
    else:
        sys.stdout.write(text)


def _map_args(sp: argparse.ArgumentParser):
    sp.add_argument("--n", type=int, required=True, help="degree, at least 3")
    sp.add_argument("--a", type=_complex_arg, required=True,
                    help="perturbation as re,im (write --a=-0.1,0.2 when the real part is negative)")
    sp.add_argument("--b", type=_complex_arg, default=0j, help="additive constant as re,im")


def _params(args) -> dyn.MapParams:
    return dyn.MapParams(args.n, args.a, args.b)


# ---- lamination commands ----------------------------------------------------

def cmd_basilica(args):
    lam = basilica(args.depth)
    _emit(format_lamination(lam), args.out)
    return 0


# names, or bracketed labels that carry their own commas
_PATH_ITEM_RE = re.compile(r"\[[^\]]*\]|[^,\[\]\s]+")


def cmd_alter(args):
    target = args.target if args.target is not None else _PATH_ITEM_RE.findall(args.path)
    if args.no_extend and args.depth is None:
        raise _Fail("--no-extend needs an explicit --depth")
    start = basilica(args.depth if args.depth is not None else 0)
    res = alter(start, target, auto_extend=not args.no_extend)
    write_lamination(res.final, args.out)
    if args.steps_dir:
        d = Path(args.steps_dir)
        d.mkdir(parents=True, exist_ok=True)
        for i, lam in enumerate(res.intermediates, start=1):
            write_lamination(lam, d / f"step{i}.lam")
    names = [(label_to_name(lab) or str(lab)) if lab else "?" for lab in res.path]
    print(f"path={'/'.join(names)} N={res.n} generation={res.final.generation}")
    for i, step in enumerate(res.steps, start=1):
        print(f"step {i}: {step}")
    return 0


def cmd_diff(args):
    a, b = read_lamination(args.a), read_lamination(args.b)
    if a.generation != b.generation:
        raise _Fail(f"generations differ ({a.generation} vs {b.generation}); regenerate at equal depth")
    extra, missing = chord_diff(a, b)
    only_a, only_b = gap_diff(a, b)
    print(f"chords={max(len(extra), len(missing))} gaps={max(len(only_a), len(only_b))}")
    if args.verbose:
        for c in sorted(extra):
            print(f"+chord {c}")
        for c in sorted(missing):
            print(f"-chord {c}")
        for g in only_a:
            print(f"+gap {g}")
        for g in only_b:
            print(f"-gap {g}")
    return 0


def cmd_verify(args):
    lam = read_lamination(args.file)
    problems = verify(lam)
    if problems:
        for p in problems:
            print(f"FAIL {p}")
        return 1
    print(f"ok chords={len(lam)} generation={lam.generation} kind={lam.kind}")
    return 0


def cmd_gaps(args):
    sys.stdout.write(format_gap_listing(read_lamination(args.file)))
    return 0


def cmd_path(args):
    depth = args.depth
    if depth is None:
        depth = parse_target(args.target).generation()
        if depth is None:
            raise _Fail(f"{args.target} is not a basilica component label")
    path = adjacency_path(basilica(depth), args.target)
    for g in path:
        lab = try_label(g)
        print(f"{lab} {label_to_name(lab) or '-'}")
    print(f"N={len(path) - 1}")
    return 0


_CHORD_RE = re.compile(r"\{[^{}]*\}")


def _parse_highlight(text: str) -> tuple[list[Chord], str]:
    colour, sep, body = text.partition(":")
    if not sep or not colour:
        raise _Fail(f"highlight {text!r} should look like COLOUR:{{a,b}}{{c,d}}")
    if body.startswith("@"):
        return list(read_lamination(body[1:]).chords), colour
    chords = [Chord.parse(m) for m in _CHORD_RE.findall(body)]
    if not chords:
        raise _Fail(f"no chords in highlight {text!r}")
    return chords, colour


def cmd_svg(args):
    lam = read_lamination(args.file)
    highlight = [_parse_highlight(h) for h in args.highlight]
    if args.against:
        base = read_lamination(args.against)
        added, removed = chord_diff(lam, base)
        highlight += [(added, args.added_colour), (removed, args.removed_colour)]
    _emit(lamination_to_svg(lam, highlight), args.out)
    return 0


# ---- dynamics commands ------------------------------------------------------

def cmd_julia(args):
    cfg = RenderConfig(args.width, args.height, args.center, args.scale, args.max_iter,
                       args.escape_radius, args.palette, args.supersample, args.rotation)
    img = render_julia(_params(args), cfg, threads=args.threads)
    write_ppm(img, args.out)
    return 0


def cmd_classify(args):
    rep = dyn.classify_map(_params(args), args.max_iter, args.escape_radius, args.tol)
    print("\n".join(rep.lines()))
    return 0


def cmd_symmetry(args):
    r = dyn.symmetry_residual(_params(args), args.samples, args.seed)
    print(f"residual={r:.6e} samples={args.samples} seed={args.seed}")
    return 0 if r < args.threshold else 1


def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    ap = argparse.ArgumentParser(prog="alterlam", description="Basilica laminations, their alterations, "
                                 "and numerics for z^n + a/z^n + b.", formatter_class=fmt)
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")

    sp = sub.add_parser("basilica", help="write the basilica lamination", formatter_class=fmt)
    sp.add_argument("--depth", type=_nonneg_int, required=True, help="generation")
    sp.add_argument("--out", default="-", help="output file, - for stdout")
    sp.set_defaults(func=cmd_basilica)

    sp = sub.add_parser("alter", help="alter the basilica for a target component", formatter_class=fmt)
    tg = sp.add_mutually_exclusive_group(required=True)
    tg.add_argument("--target", help="shorthand name (M, L, R, T, ...) or label [a1,b1;a2,b2]")
    tg.add_argument("--path", help="explicit comma-separated path of names starting at L, e.g. L,M,T")
    sp.add_argument("--depth", type=_nonneg_int, default=None,
                    help=f"starting generation (default: N+{MIN_EXTRA_DEPTH}, raised to one past the "
                         "deepest crossed leaf)")
    sp.add_argument("--no-extend", action="store_true", help="use --depth as given, never deepen")
    sp.add_argument("--out", required=True, help="altered lamination file")
    sp.add_argument("--steps-dir", help="also write step1.lam ... stepN.lam here")
    sp.set_defaults(func=cmd_alter)

    sp = sub.add_parser("diff", help="count chord and gap changes between two laminations", formatter_class=fmt)
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("-v", "--verbose", action="store_true", help="list the changed chords and gaps")
    sp.set_defaults(func=cmd_diff)

    sp = sub.add_parser("verify", help="non-crossing, half-turn symmetry, pushforward onto the basilica",
                        formatter_class=fmt)
    sp.add_argument("file")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("gaps", help="list labeled gaps", formatter_class=fmt)
    sp.add_argument("file")
    sp.set_defaults(func=cmd_gaps)

    sp = sub.add_parser("path", help="adjacency path from L to a component", formatter_class=fmt)
    sp.add_argument("--target", required=True)
    sp.add_argument("--depth", type=_nonneg_int, default=None, help="generation (default: the label's own)")
    sp.set_defaults(func=cmd_path)

    sp = sub.add_parser("svg", help="draw a lamination as SVG", formatter_class=fmt)
    sp.add_argument("file")
    sp.add_argument("--out", default="-", help="output file, - for stdout")
    sp.add_argument("--highlight", action="append", default=[],
                    help="COLOUR:{a,b}{c,d} or COLOUR:@file.lam; repeatable")
    sp.add_argument("--against", help="colour chords added/removed relative to this lamination")
    sp.add_argument("--added-colour", default="#1a9641", help="stroke for chords only in FILE")
    sp.add_argument("--removed-colour", default="#d7191c", help="dashed stroke for chords only in --against")
    sp.set_defaults(func=cmd_svg)

    sp = sub.add_parser("julia", help="render the Julia set to a binary PPM", formatter_class=fmt)
    _map_args(sp)
    sp.add_argument("--width", type=_positive_int, default=512, help="pixels")
    sp.add_argument("--height", type=_positive_int, default=512, help="pixels")
    sp.add_argument("--center", type=_complex_arg, default=0j, help="re,im")
    sp.add_argument("--scale", type=float, default=4.0, help="width of the view in the plane")
    sp.add_argument("--max-iter", type=_positive_int, default=RenderConfig.max_iter, help="iterations per pixel")
    sp.add_argument("--escape-radius", type=float, default=dyn.DEFAULT_ESCAPE_RADIUS, help="|z| beyond this escapes")
    sp.add_argument("--palette", choices=PALETTES, default="phase", help="bounded-pixel shading")
    sp.add_argument("--supersample", type=_positive_int, default=1, help="k x k samples per pixel")
    sp.add_argument("--rotation", type=float, default=0.0, help="turn the view by this many full turns")
    sp.add_argument("--threads", type=_positive_int, default=1, help="output does not depend on this")
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_julia)

    sp = sub.add_parser("classify", help="orbits of both critical values", formatter_class=fmt)
    _map_args(sp)
    sp.add_argument("--max-iter", type=_positive_int, default=dyn.DEFAULT_MAX_ITER, help="orbit length")
    sp.add_argument("--escape-radius", type=float, default=dyn.DEFAULT_ESCAPE_RADIUS, help="|z| beyond this escapes")
    sp.add_argument("--tol", type=float, default=dyn.DEFAULT_TOL, help="recurrence tolerance")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("symmetry", help="check F(wz) = F(z) for n-th roots of unity w", formatter_class=fmt)
    _map_args(sp)
    sp.add_argument("--samples", type=_positive_int, default=1000, help="random points")
    sp.add_argument("--seed", type=int, default=0, help="sampling seed")
    sp.add_argument("--threshold", type=float, default=1e-10, help="exit 1 at or above this residual")
    sp.set_defaults(func=cmd_symmetry)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (_Fail, ValueError, LookupError, AlterationError, OSError) as exc:
        print(f"alterlam {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
