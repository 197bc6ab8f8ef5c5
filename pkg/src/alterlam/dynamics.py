"""Numerics for the singularly perturbed maps F(z) = z^n + a/z^n + b.

Everything here is plain double precision except ``symmetry_residual``,
which works in numpy's extended ``clongdouble`` so that roundoff in the
rotated samples stays well under the 1e-10 budget for |z| up to 10.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

DEFAULT_MAX_ITER = 100_000
DEFAULT_ESCAPE_RADIUS = 1e6
DEFAULT_TOL = 1e-8
DEFAULT_MAX_PERIOD = 64

ESCAPED = "escaped"
BOUNDED = "bounded"


@dataclass(frozen=True)
class MapParams:
    n: int
    a: complex
    b: complex = 0j

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 3:
            raise ValueError(f"n must be an integer >= 3, got {self.n}")
        if self.a == 0:
            raise ValueError("a must be non-zero (a = 0 is the unperturbed polynomial)")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", complex(self.a))
        object.__setattr__(self, "b", complex(self.b))


@dataclass(frozen=True)
class OrbitResult:
    status: str
    iterations: int
    cycle_period: int | None = None
    multiplier: complex | None = None
    representative_point: complex | None = None
    cycle: tuple[complex, ...] = field(default=(), repr=False)

    @property
    def escaped(self) -> bool:
        return self.status == ESCAPED

    @property
    def bounded(self) -> bool:
        return self.status == BOUNDED

    @property
    def attracting(self) -> bool:
        return self.multiplier is not None and abs(self.multiplier) < 1


@dataclass(frozen=True)
class MapReport:
    params: MapParams
    v_plus: OrbitResult
    v_minus: OrbitResult
    same_cycle: bool

    def lines(self) -> list[str]:
        """Fixed-order ``key=value`` lines (the ``classify`` output format)."""
        vp, vm = critical_values(self.params)
        out = [
            f"n={self.params.n}",
            f"a={_fmt_complex(self.params.a)}",
            f"b={_fmt_complex(self.params.b)}",
            f"v_plus={_fmt_complex(vp)}",
            f"v_minus={_fmt_complex(vm)}",
        ]
        for name, res in (("v_plus", self.v_plus), ("v_minus", self.v_minus)):
            out.append(f"{name}.status={res.status}")
            out.append(f"{name}.iterations={res.iterations}")
            out.append(f"{name}.period={res.cycle_period if res.cycle_period else '-'}")
            mod = "-" if res.multiplier is None else f"{abs(res.multiplier):.12g}"
            out.append(f"{name}.multiplier_abs={mod}")
            out.append(f"{name}.attracting={str(res.attracting).lower()}")
        out.append(f"same_cycle={str(self.same_cycle).lower()}")
        return out


def _fmt_complex(z: complex) -> str:
    return f"{z.real:.17g},{z.imag:.17g}"


def parse_complex(text: str) -> complex:
    """``"re,im"`` (the CLI format), a bare real, or Python's ``1+2j`` syntax."""
    text = text.strip()
    if "," in text:
        re_, im = text.split(",", 1)
        return complex(float(re_), float(im))
    return complex(text.replace(" ", ""))


def critical_values(p: MapParams) -> tuple[complex, complex]:
    """(b + 2 sqrt a, b - 2 sqrt a) with the principal square root."""
    s = cmath.sqrt(p.a)
    return p.b + 2 * s, p.b - 2 * s


def critical_points(p: MapParams) -> list[complex]:
    """The 2n roots of z^(2n) = a, in order of increasing argument offset k."""
    m = 2 * p.n
    r = abs(p.a) ** (1.0 / m)
    phi = cmath.phase(p.a)
    return [cmath.rect(r, (phi + 2 * math.pi * k) / m) for k in range(m)]


def _power(z, n: int):
    # plain multiplications: exact integer powers, and the same ops for scalars and arrays
    out = None
    base = z
    while n:
        if n & 1:
            out = base if out is None else out * base
        n >>= 1
        if n:
            base = base * base
    return out


def _F(n: int, a, b, z):
    zn = _power(z, n)
    return zn + a / zn + b


def eval_F(p: MapParams, z):
    """F(z) for a complex scalar or numpy array; raises ZeroDivisionError at the pole z = 0 for scalars."""
    return _F(p.n, p.a, p.b, z)


def derivative(p: MapParams, z):
    """F'(z) = n z^(n-1) - n a / z^(n+1)."""
    zm = _power(z, p.n - 1)
    return p.n * zm - p.n * p.a / (zm * z * z)


def cycle_multiplier(p: MapParams, cycle) -> complex:
    lam = 1 + 0j
    for z in cycle:
        lam *= derivative(p, z)
    return complex(lam)


def detect_attracting_cycle(p: MapParams, tail, tol: float = DEFAULT_TOL,
                            max_period: int = DEFAULT_MAX_PERIOD) -> tuple[int, complex] | None:
    """Smallest period q <= max_period with |z[k+q] - z[k]| < tol over the last max_period pairs.

    Returns (q, multiplier) where the multiplier is the product of F' over
    the last q points, or None when nothing recurs.  Whether the cycle is
    attracting is left to the caller (|multiplier| < 1).
    """
    tail = list(tail)
    if len(tail) < 2 * max_period:
        raise ValueError(f"tail needs at least {2 * max_period} points, got {len(tail)}")
    for q in range(1, max_period + 1):
        start = len(tail) - max_period - q
        if all(abs(tail[k + q] - tail[k]) < tol for k in range(start, start + max_period)):
            return q, cycle_multiplier(p, tail[-q:])
    return None


def iterate_orbit(p: MapParams, z0: complex, max_iter: int = DEFAULT_MAX_ITER,
                  escape_radius: float = DEFAULT_ESCAPE_RADIUS, tol: float = DEFAULT_TOL,
                  max_period: int = DEFAULT_MAX_PERIOD) -> OrbitResult:
    """Follow z0 for up to max_iter steps; escape means |z_k| > escape_radius (or landing on 0)."""
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if escape_radius <= 0:
        raise ValueError("escape_radius must be positive")
    n, a, b = p.n, p.a, p.b
    z = complex(z0)
    keep = 2 * max_period
    tail: deque[complex] = deque(maxlen=keep)
    for k in range(max_iter):
        if abs(z) > escape_radius:
            return OrbitResult(ESCAPED, k)
        if z == 0:
            return OrbitResult(ESCAPED, k + 1)
        if k >= max_iter - keep:
            tail.append(z)
        zn = z ** n
        z = zn + a / zn + b
    if abs(z) > escape_radius:
        return OrbitResult(ESCAPED, max_iter)
    if len(tail) < keep:
        # short runs: extend the tail past max_iter just for cycle detection
        while len(tail) < keep and z != 0 and abs(z) <= escape_radius:
            tail.append(z)
            z = eval_F(p, z)
        if len(tail) < keep:
            return OrbitResult(BOUNDED, max_iter)
    found = detect_attracting_cycle(p, tail, tol, max_period)
    if found is None:
        return OrbitResult(BOUNDED, max_iter)
    q, lam = found
    cycle = tuple(list(tail)[-q:])
    return OrbitResult(BOUNDED, max_iter, q, lam, cycle[-1], cycle)


def _cycles_match(c1, c2, tol: float) -> bool:
    if not c1 or not c2 or len(c1) != len(c2):
        return False
    return all(min(abs(z - w) for w in c2) < tol for z in c1)


def classify_map(p: MapParams, max_iter: int = DEFAULT_MAX_ITER,
                 escape_radius: float = DEFAULT_ESCAPE_RADIUS, tol: float = DEFAULT_TOL) -> MapReport:
    vp, vm = critical_values(p)
    rp = iterate_orbit(p, vp, max_iter, escape_radius, tol)
    rm = iterate_orbit(p, vm, max_iter, escape_radius, tol)
    return MapReport(p, rp, rm, _cycles_match(rp.cycle, rm.cycle, tol))


def symmetry_residual(p: MapParams, samples: int = 1000, seed: int = 0) -> float:
    """max |F(z w^k) - F(z)| over seeded samples with |z| in [0.1, 10], w = exp(2 pi i / n), k = 1..n-1."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    r = rng.uniform(0.1, 10.0, samples).astype(np.longdouble)
    theta = rng.uniform(0.0, 2 * np.pi, samples).astype(np.longdouble)
    z = (r * np.cos(theta) + 1j * (r * np.sin(theta))).astype(np.clongdouble)
    a, b = np.clongdouble(p.a), np.clongdouble(p.b)
    pi = np.arccos(np.longdouble(-1))
    base = _F(p.n, a, b, z)
    worst = 0.0
    for k in range(1, p.n):
        ang = 2 * pi * k / p.n
        w = np.clongdouble(np.cos(ang) + 1j * np.sin(ang))
        worst = max(worst, float(np.max(np.abs(_F(p.n, a, b, z * w) - base))))
    return worst
