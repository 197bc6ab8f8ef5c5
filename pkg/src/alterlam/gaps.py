"""Faces (gaps) of the disk cut along a lamination, their labels and adjacency.

Every chord owns the face lying just inside it (on the side of the arc
``[lo, hi]``); the remaining face touches angle 0 and is the outer face.  A
face's boundary is its owner chord plus the owner's immediate children in
the nesting tree, so adjacent faces are exactly (child owner, parent owner)
pairs and the adjacency graph is always a tree.
"""

from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass

from .angles import Angle
from .lamination import Chord, Lamination, nesting_parents, sort_chords, validate


class UnlabelableGap(ValueError):
    pass


class InsufficientGeneration(LookupError):
    pass


@dataclass(frozen=True)
class Gap:
    boundary: frozenset[Chord]
    owner: Chord | None = None

    @property
    def outer(self) -> bool:
        return self.owner is None

    @property
    def key(self) -> tuple:
        return (self.owner, tuple(sorted(self.boundary)))

    @property
    def children(self) -> frozenset[Chord]:
        return self.boundary - {self.owner} if self.owner else self.boundary

    def __str__(self):
        try:
            return str(label_gap(self))
        except UnlabelableGap:
            return f"gap(owner={self.owner}, {len(self.boundary)} chords)"


@dataclass(frozen=True, order=True)
class ComponentLabel:
    """``[a1, b1; a2, b2]``: outer chord {a1, b2} around inner chord {b1, a2}."""

    a1: Angle
    b1: Angle
    a2: Angle
    b2: Angle

    def __post_init__(self):
        if not (self.a1 < self.b1 < self.a2 < self.b2):
            raise ValueError(f"label angles must increase: {self.angles}")

    @classmethod
    def parse(cls, text: str) -> ComponentLabel:
        body = text.strip()
        if not (body.startswith("[") and body.endswith("]")) or body.count(";") != 1:
            raise ValueError(f"cannot parse component label {text!r}")
        left, right = body[1:-1].split(";")
        angles = [Angle.parse(x) for x in left.split(",") + right.split(",")]
        if len(angles) != 4:
            raise ValueError(f"cannot parse component label {text!r}")
        return cls(*angles)

    @classmethod
    def from_chords(cls, outer: Chord, inner: Chord) -> ComponentLabel:
        return cls(outer.lo, inner.lo, inner.hi, outer.hi)

    @property
    def angles(self) -> tuple[Angle, Angle, Angle, Angle]:
        return (self.a1, self.b1, self.a2, self.b2)

    @property
    def outer(self) -> Chord:
        return Chord(self.a1, self.b2)

    @property
    def inner(self) -> Chord:
        return Chord(self.b1, self.a2)

    def generation(self) -> int | None:
        gens = [self.outer.generation(), self.inner.generation()]
        if None in gens:
            return None
        return max(gens)

    def __str__(self):
        return f"[{self.a1},{self.b1};{self.a2},{self.b2}]"


def _label_key(outer: Chord, inner: Chord):
    dens = sorted((outer.lo.den, outer.hi.den, inner.lo.den, inner.hi.den))
    return (dens, (outer.lo, inner.lo, inner.hi, outer.hi))


def label_gap(gap: Gap) -> ComponentLabel:
    """Name a gap by its lowest-denominator nested pair of boundary chords.

    Pairs made of two balanced chords (equal endpoint denominators, as every
    basilica leaf is) are preferred; mixed chords such as {1/6, 1/3}, which
    only appear after re-pairing at the central component, are used only
    when nothing else is available.
    """
    if gap.owner is None:
        raise UnlabelableGap("the outer face is not labeled")
    pairs = [(gap.owner, c) for c in gap.children if gap.owner.contains(c)]
    if not pairs:
        raise UnlabelableGap(f"gap inside {gap.owner} has no nested pair at this depth")
    balanced = [p for p in pairs if p[0].balanced() and p[1].balanced()]
    outer, inner = min(balanced or pairs, key=lambda p: _label_key(*p))
    return ComponentLabel.from_chords(outer, inner)


def try_label(gap: Gap) -> ComponentLabel | None:
    try:
        return label_gap(gap)
    except UnlabelableGap:
        return None


def _L(s: str) -> ComponentLabel:
    return ComponentLabel.parse(s)


# Names M, L, R, T, B, 2L, RT, LB carry the angles printed for the basilica;
# the other five were located on basilica(6) by adjacency (see tests/test_gaps.py).
SHORTHAND: dict[str, ComponentLabel] = {
    "M": _L("[1/6,1/3;2/3,5/6]"),
    "L": _L("[1/3,5/12;7/12,2/3]"),
    "R": _L("[1/12,1/6;5/6,11/12]"),
    "T": _L("[5/24,11/48;13/48,7/24]"),
    "B": _L("[17/24,35/48;37/48,19/24]"),
    "2L": _L("[5/12,11/24;13/24,7/12]"),
    "2R": _L("[1/24,1/12;11/12,23/24]"),
    "2T": _L("[11/48,23/96;25/96,13/48]"),
    "2B": _L("[35/48,71/96;73/96,37/48]"),
    "LT": _L("[17/48,35/96;37/96,19/48]"),
    "LB": _L("[29/48,59/96;61/96,31/48]"),
    "RT": _L("[5/48,11/96;13/96,7/48]"),
    "RB": _L("[41/48,83/96;85/96,43/48]"),
}
_NAMES = {v: k for k, v in SHORTHAND.items()}


def name_to_label(name: str) -> ComponentLabel:
    try:
        return SHORTHAND[name]
    except KeyError:
        raise ValueError(f"unknown component name {name!r}; known: {', '.join(SHORTHAND)}") from None


def label_to_name(label: ComponentLabel) -> str | None:
    return _NAMES.get(label)


def parse_target(text: str) -> ComponentLabel:
    """Accept a shorthand name or an explicit ``[a1,b1;a2,b2]`` label."""
    text = text.strip()
    if text.startswith("["):
        return ComponentLabel.parse(text)
    return name_to_label(text)


class GapStructure:
    """All faces of a valid lamination plus the face adjacency tree."""

    def __init__(self, lam: Lamination):
        self.lamination = lam
        try:
            parents = nesting_parents(lam.chords)
        except ValueError:
            raise ValueError(f"lamination has crossing chords: {validate(lam)[:3]}") from None
        self.parent = parents
        children: dict[Chord | None, set[Chord]] = {None: set()}
        for c in parents:
            children[c] = set()
        for c, p in parents.items():
            children[p].add(c)
        self.children = children

    @functools.cached_property
    def by_owner(self) -> dict[Chord | None, Gap]:
        """Face inside each chord; key None is the outer face."""
        out = {None: Gap(frozenset(self.children[None]), None)}
        for c, kids in self.children.items():
            if c is not None:
                out[c] = Gap(frozenset(kids | {c}), c)
        return out

    def gap(self, owner: Chord | None) -> Gap:
        """The face owned by ``owner`` without building every other face."""
        if "by_owner" in self.__dict__:
            return self.by_owner[owner]
        kids = frozenset(self.children[owner])
        return Gap(kids if owner is None else kids | {owner}, owner)

    @property
    def gaps(self) -> list[Gap]:
        inner = sorted(c for c in self.by_owner if c is not None)
        return [self.by_owner[None]] + [self.by_owner[c] for c in inner]

    @property
    def outer(self) -> Gap:
        return self.by_owner[None]

    def inner_gaps(self) -> list[Gap]:
        return self.gaps[1:]

    def neighbours(self, gap: Gap) -> list[Gap]:
        out = [self.by_owner[c] for c in sorted(gap.children)]
        if gap.owner is not None:
            out.append(self.by_owner[self.parent[gap.owner]])
        return out

    def find(self, target: ComponentLabel | str) -> Gap:
        """The face carrying ``target`` as its label."""
        if isinstance(target, str):
            target = parse_target(target)
        gap = self.by_owner.get(target.outer)
        if gap is None or try_label(gap) != target:
            raise InsufficientGeneration(
                f"no gap labeled {target} in lamination of generation {self.lamination.generation}")
        return gap

    def path(self, start: Gap, end: Gap) -> list[Gap]:
        prev: dict[Chord | None, Chord | None] = {start.owner: start.owner}
        queue = deque([start])
        while queue:
            g = queue.popleft()
            if g.owner == end.owner:
                break
            for h in self.neighbours(g):
                if h.owner not in prev:
                    prev[h.owner] = g.owner
                    queue.append(h)
        else:
            raise InsufficientGeneration(f"{end} is unreachable from {start}")
        out = [end]
        while out[-1].owner != start.owner:
            out.append(self.by_owner[prev[out[-1].owner]])
        return out[::-1]


@functools.lru_cache(maxsize=32)
def gap_structure(lam: Lamination) -> GapStructure:
    return GapStructure(lam)


def compute_gaps(lam: Lamination) -> list[Gap]:
    """All faces, outer face first; there is always one more face than chords."""
    return gap_structure(lam).gaps


def adjacency_path(lam: Lamination, target: ComponentLabel | str | Gap) -> list[Gap]:
    """Shortest chain of adjacent gaps from L to ``target`` (both ends included)."""
    gs = gap_structure(lam)
    start = gs.find(SHORTHAND["L"])
    end = target if isinstance(target, Gap) else gs.find(target)
    if gs.by_owner.get(end.owner) != end:
        raise InsufficientGeneration(f"{end} is not a gap of this lamination")
    return gs.path(start, end)


def gap_diff(a: Lamination, b: Lamination) -> tuple[list[Gap], list[Gap]]:
    """Inner gaps whose boundary sets occur in only one of the two laminations."""
    if a.generation != b.generation:
        raise ValueError(f"generations differ ({a.generation} vs {b.generation})")
    # a face's owner is the one boundary chord enclosing the rest, so comparing
    # (owner, children) is the same as comparing boundary sets
    sa, sb = gap_structure(a), gap_structure(b)
    ka, kb = sa.children, sb.children
    only_a = [c for c in ka if c is not None and kb.get(c) != ka[c]]
    only_b = [c for c in kb if c is not None and ka.get(c) != kb[c]]
    return [sa.gap(c) for c in sort_chords(only_a)], [sb.gap(c) for c in sort_chords(only_b)]


def format_gap_listing(lam: Lamination) -> str:
    """One line per labelable inner gap, sorted by label."""
    rows = []
    for g in gap_structure(lam).inner_gaps():
        lab = try_label(g)
        if lab is not None:
            rows.append((lab, g))
    rows.sort(key=lambda r: r[0])
    return "".join(
        f"label={lab} name={label_to_name(lab) or '-'} boundary={len(g.boundary)} chords\n"
        for lab, g in rows
    )
