"""Exact rational angles on the circle R/Z.

Angles are kept as reduced fractions in [0, 1).  Python integers are
unbounded, so pullback depth is limited only by memory: denominators grow
like 3 * 2**g and generation 40 would already overflow 64-bit integers.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction


@functools.total_ordering
class Angle:
    """An external angle ``num/den`` with ``0 <= num < den`` and gcd 1."""

    __slots__ = ("num", "den", "_f", "_h")

    num: int
    den: int

    def __init__(self, num: int, den: int = 1):
        if den == 0:
            raise ValueError("angle denominator must be non-zero")
        if den < 0:
            num, den = -num, -den
        num %= den
        g = math.gcd(num, den)
        num //= g
        den //= g
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        # correctly rounded, hence monotone: distinct floats already decide the order
        object.__setattr__(self, "_f", num / den)
        object.__setattr__(self, "_h", hash((num, den)))

    def __setattr__(self, name, value):
        raise AttributeError("Angle is immutable")

    def __reduce__(self):
        return (Angle, (self.num, self.den))

    @classmethod
    def parse(cls, text: str) -> Angle:
        """Parse ``"num/den"`` (or a bare integer) into an angle."""
        text = text.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            return cls(int(p), int(q))
        return cls(int(text), 1)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __float__(self) -> float:
        return self._f

    def __eq__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __lt__(self, other):
        if not isinstance(other, Angle):
            return NotImplemented
        if self._f != other._f:
            return self._f < other._f
        return self.num * other.den < other.num * self.den

    def __hash__(self):
        return self._h

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"Angle({self.num}, {self.den})"


def make_angle(num: int, den: int) -> Angle:
    return Angle(num, den)


def double(t: Angle) -> Angle:
    """The angle-doubling map t -> 2t mod 1."""
    return Angle(2 * t.num, t.den)


def halve(t: Angle) -> tuple[Angle, Angle]:
    """Both preimages of ``t`` under doubling, ``(t/2, (t+1)/2)``."""
    return Angle(t.num, 2 * t.den), Angle(t.num + t.den, 2 * t.den)


def antipode(t: Angle) -> Angle:
    return Angle(2 * t.num + t.den, 2 * t.den)


def in_open_arc(x: Angle, a: Angle, b: Angle) -> bool:
    """True iff ``x`` is strictly inside the counterclockwise arc from ``a`` to ``b``."""
    if a == b:
        raise ValueError("arc endpoints must differ")
    if a < b:
        return a < x < b
    return x > a or x < b


ZERO = Angle(0)
HALF = Angle(1, 2)
