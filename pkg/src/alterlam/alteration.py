"""Split-and-reidentify: build the altered lamination for a given target component.

Walking the second critical value from its expected component L to the
target crosses one chord ``s_i`` per step.  The four doubling-preimages of
``s_i``'s endpoints currently form two chords of the working lamination;
the step swaps them for the other non-crossing pairing of the same four
angles.  Meeting chords are read off the original basilica.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

from .angles import halve
from .gaps import (
    SHORTHAND,
    ComponentLabel,
    Gap,
    InsufficientGeneration,
    gap_diff,
    gap_structure,
    parse_target,
    try_label,
)
from .lamination import (
    ALTERED,
    INTERMEDIATE,
    Chord,
    Lamination,
    basilica,
    chord_diff,
    chords_cross,
    rotate_half,
    validate,
)

MIN_EXTRA_DEPTH = 4

Target = Union[ComponentLabel, str, Gap, Sequence[Union[ComponentLabel, str, Gap]]]


class AlterationError(RuntimeError):
    """Internal consistency failure: the algorithm met a state it should never reach."""


@dataclass(frozen=True)
class AlterationStep:
    meeting_chord: Chord
    removed: tuple[Chord, Chord]
    added: tuple[Chord, Chord]

    def __str__(self):
        r, a = self.removed, self.added
        return f"s={self.meeting_chord} removed={r[0]},{r[1]} added={a[0]},{a[1]}"


@dataclass(frozen=True)
class AlterationResult:
    path: tuple[ComponentLabel | None, ...]
    gaps: tuple[Gap, ...]
    steps: tuple[AlterationStep, ...]
    final: Lamination
    intermediates: tuple[Lamination, ...]
    original: Lamination

    @property
    def n(self) -> int:
        return len(self.steps)


def toggle_pairing(c1: Chord, c2: Chord) -> tuple[Chord, Chord]:
    """Swap two disjoint, non-crossing chords for the other non-crossing pairing of their ends."""
    pts = sorted({c1.lo, c1.hi, c2.lo, c2.hi})
    if len(pts) != 4:
        raise ValueError(f"chords {c1} and {c2} share an endpoint")
    if chords_cross(c1, c2):
        raise ValueError(f"chords {c1} and {c2} cross")
    p1, p2, p3, p4 = pts
    if {c1, c2} == {Chord(p1, p2), Chord(p3, p4)}:
        return Chord(p1, p4), Chord(p2, p3)
    return Chord(p1, p2), Chord(p3, p4)


def meeting_chord(g1: Gap, g2: Gap) -> Chord:
    shared = g1.boundary & g2.boundary
    if not shared:
        raise ValueError(f"gaps {g1} and {g2} are not adjacent")
    if len(shared) > 1:
        raise AlterationError(f"gaps {g1} and {g2} share {len(shared)} chords")
    (c,) = shared
    return c


def _is_basilica(lam: Lamination) -> bool:
    ref = basilica(lam.generation)
    return lam is ref or lam.chords == ref.chords


def _resolve_path(lam: Lamination, target: Target) -> list[Chord]:
    """Owner chords of the gaps on the L-to-target path (owners survive deeper generations)."""
    gs = gap_structure(lam)
    if isinstance(target, (str, ComponentLabel, Gap)):
        if isinstance(target, str):
            target = parse_target(target)
        if isinstance(target, ComponentLabel):
            lab_gen = target.generation()
            if lab_gen is None:
                raise InsufficientGeneration(f"{target} is not a component of the basilica")
            # both ends of the path must be labeled at the depth we search
            need = max(lab_gen, SHORTHAND["L"].generation())
            if need > lam.generation:
                gs = gap_structure(basilica(need))
            end = gs.find(target)
        else:
            end = target
        start = gs.find(SHORTHAND["L"])
        return [g.owner for g in gs.path(start, end)]

    owners = []
    for item in target:
        if isinstance(item, Gap):
            if item.outer:
                raise ValueError("explicit path may not use the outer face")
            owners.append(item.owner)
        else:
            lab = parse_target(item) if isinstance(item, str) else item
            owners.append(lab.outer)
    if not owners or owners[0] != SHORTHAND["L"].outer:
        raise ValueError("explicit path must start at L")
    return owners


def alter(lam: Lamination, target: Target, *, auto_extend: bool = True) -> AlterationResult:
    """Alter a basilica lamination for the second critical value sitting in ``target``.

    ``target`` is a shorthand name, a label, a gap of ``lam``, or an explicit
    path (sequence of those) starting at L.  With ``auto_extend`` the working
    generation is raised to at least N + 4 and to one past the deepest
    meeting chord, whose preimages are the chords a step toggles.
    """
    if not _is_basilica(lam):
        raise ValueError("alter expects a basilica lamination")

    owners = _resolve_path(lam, target)
    meeting = owners[1:]
    n = len(meeting)
    if auto_extend:
        deepest = max((c.generation() or 0 for c in owners), default=0)
        needed = max(n + MIN_EXTRA_DEPTH, deepest + 1)
        if lam.generation < needed:
            lam = basilica(needed)

    gs = gap_structure(lam)
    gaps = []
    for c in owners:
        if c not in gs.by_owner:
            raise InsufficientGeneration(f"no gap inside {c} at generation {lam.generation}")
        gaps.append(gs.by_owner[c])
    for prev, cur in zip(gaps, gaps[1:]):
        if not (gs.parent[cur.owner] == prev.owner or gs.parent[prev.owner] == cur.owner):
            raise ValueError(f"path gaps {prev} and {cur} are not adjacent")

    working = set(lam.chords)
    steps, snaps = [], []
    for i, (prev, cur) in enumerate(zip(gaps, gaps[1:]), start=1):
        s = meeting_chord(cur, prev)
        quad = sorted(halve(s.lo) + halve(s.hi))
        current = {c for c in itertools.starmap(Chord, itertools.combinations(quad, 2)) if c in working}
        if len(current) != 2:
            raise AlterationError(
                f"step {i}: preimages of {s} form {len(current)} chords of the working lamination, expected 2")
        c1, c2 = sorted(current)
        new = toggle_pairing(c1, c2)
        working.difference_update((c1, c2))
        working.update(new)
        steps.append(AlterationStep(s, (c1, c2), new))
        kind = ALTERED if i == n else INTERMEDIATE
        snaps.append(Lamination(frozenset(working), lam.generation, kind))

    final = snaps[-1] if snaps else lam
    try:
        gap_structure(final)  # cached; later gap queries reuse it
    except ValueError:
        raise AlterationError(f"altered lamination has crossing chords: {validate(final)[:3]}") from None
    # lam is symmetric, so final is iff the changed chords are
    removed, added = chord_diff(lam, final)
    for changed in (removed, added):
        if rotate_half(Lamination(changed)).chords != changed:
            raise AlterationError("altered lamination lost its 180 degree symmetry")

    return AlterationResult(
        path=tuple(try_label(g) for g in gaps),
        gaps=tuple(gaps),
        steps=tuple(steps),
        final=final,
        intermediates=tuple(snaps),
        original=lam,
    )


def leaf_diff_report(result: AlterationResult, original: Lamination | None = None) -> tuple[int, int]:
    """(chord changes, gap changes) between the altered lamination and the basilica."""
    original = result.original if original is None else original
    if original.generation != result.final.generation:
        raise ValueError("leaf diff needs laminations of equal generation")
    extra, missing = chord_diff(result.final, original)
    new_gaps, old_gaps = gap_diff(result.final, original)
    return max(len(extra), len(missing)), max(len(new_gaps), len(old_gaps))

