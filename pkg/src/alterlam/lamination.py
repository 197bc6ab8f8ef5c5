"""Non-crossing chord sets on the closed disk and the basilica lamination.

A chord joins two angles that land together.  The basilica lamination is
grown by pulling chords back under angle doubling; of the two possible
pairings of the four preimage angles we keep the one where both new chords
stay on the same side of the critical diameter {1/6, 2/3}.
"""

from __future__ import annotations

import functools
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .angles import Angle, antipode, double, halve, in_open_arc

BASILICA = "basilica"
ALTERED = "altered"
INTERMEDIATE = "intermediate"
KINDS = (BASILICA, ALTERED, INTERMEDIATE)

MINOR_LEAF_ENDS = (Angle(1, 3), Angle(2, 3))
CRITICAL_DIAMETER_ENDS = (Angle(1, 6), Angle(2, 3))

HEADER_PREFIX = "lamination v1"


class CrossingError(ValueError):
    """Raised when an operation needs a non-crossing chord set and did not get one."""


@functools.total_ordering
class Chord:
    """Unordered pair of distinct angles, stored with ``lo < hi``."""

    __slots__ = ("lo", "hi", "_h", "_nest_key")

    def __init__(self, lo: Angle, hi: Angle):
        if not lo < hi:
            raise ValueError(f"chord endpoints must satisfy lo < hi, got {lo}, {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)
        object.__setattr__(self, "_h", hash((lo, hi)))
        object.__setattr__(self, "_nest_key", (float(lo), -float(hi)))

    def __setattr__(self, name, value):
        raise AttributeError("Chord is immutable")

    def __reduce__(self):
        return (Chord, (self.lo, self.hi))

    def __eq__(self, other):
        if not isinstance(other, Chord):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __lt__(self, other):
        if not isinstance(other, Chord):
            return NotImplemented
        return (self.lo, self.hi) < (other.lo, other.hi)

    def __hash__(self):
        return self._h

    def __repr__(self):
        return f"Chord({self.lo!r}, {self.hi!r})"

    @classmethod
    def of(cls, a: Angle | str, b: Angle | str) -> Chord:
        if isinstance(a, str):
            a = Angle.parse(a)
        if isinstance(b, str):
            b = Angle.parse(b)
        if a == b:
            raise ValueError(f"degenerate chord at {a}")
        return cls(a, b) if a < b else cls(b, a)

    @classmethod
    def parse(cls, text: str) -> Chord:
        """Parse ``"a b"``, ``"a,b"`` or ``"{a,b}"``."""
        parts = text.strip().strip("{}").replace(",", " ").split()
        if len(parts) != 2:
            raise ValueError(f"cannot parse chord from {text!r}")
        return cls.of(*parts)

    @property
    def ends(self) -> tuple[Angle, Angle]:
        return (self.lo, self.hi)

    def contains(self, other: Chord) -> bool:
        """True when ``other`` is nested inside the arc ``[lo, hi]`` (shared ends allowed)."""
        return other != self and self.lo <= other.lo and other.hi <= self.hi

    def balanced(self) -> bool:
        """Both endpoints have the same denominator (true of every basilica leaf)."""
        return self.lo.den == self.hi.den

    def generation(self) -> int | None:
        """Basilica generation implied by the denominators, or None if not of the form 3*2**g."""
        d = max(self.lo.den, self.hi.den)
        if d % 3:
            return None
        q = d // 3
        if q & (q - 1):
            return None
        return max(q.bit_length() - 1, 0)

    def __str__(self):
        return f"{{{self.lo},{self.hi}}}"


def chords_cross(c1: Chord, c2: Chord) -> bool:
    ends = {c1.lo, c1.hi, c2.lo, c2.hi}
    if len(ends) < 4:
        return False
    inside = in_open_arc(c2.lo, c1.lo, c1.hi) + in_open_arc(c2.hi, c1.lo, c1.hi)
    return inside == 1


@dataclass(frozen=True)
class Lamination:
    chords: frozenset[Chord] = field(default_factory=frozenset)
    generation: int = 0
    kind: str = BASILICA

    def __post_init__(self):
        if not isinstance(self.chords, frozenset):
            object.__setattr__(self, "chords", frozenset(self.chords))
        if self.generation < 0:
            raise ValueError("generation must be non-negative")
        if self.kind not in KINDS:
            raise ValueError(f"unknown lamination kind {self.kind!r}")

    @functools.cached_property
    def sorted_chords(self) -> tuple[Chord, ...]:
        return tuple(sort_chords(self.chords))

    def __iter__(self) -> Iterator[Chord]:
        return iter(self.sorted_chords)

    def __len__(self):
        return len(self.chords)

    def __contains__(self, c):
        return c in self.chords

    def replace(self, chords: Iterable[Chord] | None = None, *, generation=None, kind=None) -> Lamination:
        return Lamination(
            frozenset(self.chords if chords is None else chords),
            self.generation if generation is None else generation,
            self.kind if kind is None else kind,
        )


# Two distinct fractions with denominators <= 2**26 differ by at least 2**-52,
# more than twice the worst rounding error of a float in [0, 1).
_FLOAT_SAFE_DEN = 1 << 26


_NEST_KEY = operator.attrgetter("_nest_key")


def _float_keys_exact(chords) -> bool:
    return max((c.lo.den if c.lo.den > c.hi.den else c.hi.den for c in chords), default=1) <= _FLOAT_SAFE_DEN


def sort_chords(chords: Iterable[Chord], *, hi_descending: bool = False) -> list[Chord]:
    """Sort by (lo, hi), or by (lo, -hi); float keys are used only when they are collision-free."""
    chords = list(chords)
    if _float_keys_exact(chords):
        if hi_descending:
            return sorted(chords, key=_NEST_KEY)
        return sorted(chords, key=lambda c: (c.lo._f, c.hi._f))
    out = sorted(chords, key=lambda c: c.hi, reverse=hi_descending)
    out.sort(key=lambda c: c.lo)
    return out


def nesting_parents(chords: Iterable[Chord]) -> dict[Chord, Chord | None]:
    """Map each chord to the smallest chord containing it (None at top level).

    One stack pass over chords sorted by (lo ascending, hi descending); a
    chord that pokes out of the current top of the stack crosses it.
    """
    chords = list(chords)
    fast = _float_keys_exact(chords)
    order = sort_chords(chords, hi_descending=True)
    parents: dict[Chord, Chord | None] = {}
    stack: list[Chord] = []
    if fast:
        his: list[float] = []
        for c in order:
            lo, neg_hi = c._nest_key
            while his and his[-1] <= lo:
                his.pop()
                stack.pop()
            if his and -neg_hi > his[-1]:
                raise CrossingError(f"{stack[-1]} crosses {c}")
            parents[c] = stack[-1] if stack else None
            stack.append(c)
            his.append(-neg_hi)
        return parents
    for c in order:
        while stack and stack[-1].hi <= c.lo:
            stack.pop()
        if stack and c.hi > stack[-1].hi:
            raise CrossingError(f"{stack[-1]} crosses {c}")
        parents[c] = stack[-1] if stack else None
        stack.append(c)
    return parents


def validate(lam: Lamination | Iterable[Chord]) -> list[tuple[Chord, Chord]]:
    """Return every crossing pair of chords; an empty list means the lamination is valid."""
    chords = lam.chords if isinstance(lam, Lamination) else list(lam)
    try:
        nesting_parents(chords)
        return []
    except CrossingError:
        pass
    chords = sort_chords(chords)
    bad = []
    for i, c1 in enumerate(chords):
        for c2 in chords[i + 1:]:
            if c2.lo >= c1.hi:
                break
            if chords_cross(c1, c2):
                bad.append((c1, c2))
    return bad


def is_valid(lam: Lamination) -> bool:
    return not validate(lam)


# Shared instances let set comparisons between related laminations succeed on identity.
_CANON: dict[Chord, Chord] = {}


def _canon(c: Chord) -> Chord:
    return _CANON.setdefault(c, c)


def pullback_chord(c: Chord) -> tuple[Chord, Chord]:
    """The two preimage chords of ``c``, paired within the halves cut by the critical diameter."""
    d0, d1 = CRITICAL_DIAMETER_ENDS
    a_pre = halve(c.lo)
    b_pre = halve(c.hi)
    if any(x in (d0, d1) for x in a_pre + b_pre):
        raise ValueError(f"{c} has a preimage on the critical diameter")
    a_in = a_pre[0] if in_open_arc(a_pre[0], d0, d1) else a_pre[1]
    b_in = b_pre[0] if in_open_arc(b_pre[0], d0, d1) else b_pre[1]
    a_out = a_pre[1] if a_in == a_pre[0] else a_pre[0]
    b_out = b_pre[1] if b_in == b_pre[0] else b_pre[0]
    return _canon(Chord.of(a_in, b_in)), _canon(Chord.of(a_out, b_out))


@functools.lru_cache(maxsize=None)
def basilica_layers(generation: int) -> tuple[frozenset[Chord], ...]:
    """New chords added at each generation 0..generation."""
    if generation < 0:
        raise ValueError("generation must be >= 0")
    if generation == 0:
        return (frozenset({_canon(Chord.of(*MINOR_LEAF_ENDS))}),)
    if generation == 1:
        return basilica_layers(0) + (frozenset({_canon(Chord.of(Angle(1, 6), Angle(5, 6)))}),)
    prev = basilica_layers(generation - 1)
    layer = set()
    for c in prev[-1]:
        layer.update(pullback_chord(c))
    return prev + (frozenset(layer),)


@functools.lru_cache(maxsize=64)
def basilica(generation: int) -> Lamination:
    chords = frozenset().union(*basilica_layers(generation))
    return Lamination(chords, generation, BASILICA)


@functools.lru_cache(maxsize=1 << 16)
def _image(c: Chord) -> Chord | None:
    a, b = double(c.lo), double(c.hi)
    return None if a == b else _canon(Chord.of(a, b))


@functools.lru_cache(maxsize=1 << 16)
def _rotated(c: Chord) -> Chord:
    return _canon(Chord.of(antipode(c.lo), antipode(c.hi)))


def pushforward(lam: Lamination) -> Lamination:
    """Image under angle doubling; diameters collapse to a point and are dropped."""
    out = {_image(c) for c in lam.chords}
    out.discard(None)
    return lam.replace(out, generation=max(lam.generation - 1, 0))


def rotate_half(lam: Lamination) -> Lamination:
    return lam.replace(_rotated(c) for c in lam.chords)


def verify(lam: Lamination) -> list[str]:
    """Problems found in a basilica-derived lamination; empty when it passes.

    Checks: no two chords cross, the chord set is invariant under rotation by
    1/2, and doubling maps it onto the basilica one generation shallower.
    """
    problems = []
    crossings = validate(lam)
    if crossings:
        c1, c2 = crossings[0]
        problems.append(f"{len(crossings)} crossing pair(s), first {c1} x {c2}")
    asym = {_rotated(c) for c in lam.chords} - lam.chords
    if asym:
        problems.append(f"not symmetric under rotation by 1/2: {len(asym)} rotated chord(s) missing")
    target = basilica(max(lam.generation - 1, 0))
    if pushforward(lam).chords != target.chords:
        problems.append(f"pushforward is not basilica({target.generation})")
    return problems


def chord_diff(a: Lamination, b: Lamination) -> tuple[frozenset[Chord], frozenset[Chord]]:
    return a.chords - b.chords, b.chords - a.chords


def format_lamination(lam: Lamination) -> str:
    lines = [f"{HEADER_PREFIX} generation={lam.generation} kind={lam.kind}"]
    lines.extend(f"{c.lo} {c.hi}" for c in lam.sorted_chords)
    return "\n".join(lines) + "\n"


def parse_lamination(text: str) -> Lamination:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].startswith(HEADER_PREFIX):
        raise ValueError("missing 'lamination v1' header")
    meta = dict(tok.split("=", 1) for tok in lines[0][len(HEADER_PREFIX):].split())
    try:
        generation = int(meta["generation"])
        kind = meta["kind"]
    except KeyError as exc:
        raise ValueError(f"header lacks {exc.args[0]}") from None
    chords = [Chord.parse(ln) for ln in lines[1:]]
    if len(set(chords)) != len(chords):
        raise ValueError("duplicate chord in lamination file")
    return Lamination(frozenset(chords), generation, kind)


def write_lamination(lam: Lamination, path) -> None:
    Path(path).write_bytes(format_lamination(lam).encode("ascii"))


def read_lamination(path) -> Lamination:
    return parse_lamination(Path(path).read_text(encoding="ascii"))
