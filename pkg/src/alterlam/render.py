"""Escape-time pictures of Julia sets (binary PPM) and SVG chord diagrams."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .dynamics import MapParams, classify_map
from .lamination import Chord, Lamination, sort_chords

# Rows per work unit.  Fixed, so the arrays each unit sees never depend on
# how many threads share the work.
BLOCK_ROWS = 16

PALETTES = ("phase", "gray")

_BOUNDED_NO_CYCLE = (0, 0, 0)
# alternating shades for the points of an attracting cycle
_PHASE_COLORS = np.array([
    (32, 64, 160), (220, 190, 60), (40, 150, 90), (170, 60, 140),
    (90, 160, 220), (230, 120, 40), (120, 120, 120), (200, 200, 255),
], dtype=np.uint8)


@dataclass(frozen=True)
class RenderConfig:
    width: int = 512
    height: int = 512
    center: complex = 0j
    scale: float = 4.0          # width of the viewed region in the complex plane
    max_iter: int = 500
    escape_radius: float = 1e6
    palette: str = "phase"
    supersample: int = 1        # k x k samples averaged per pixel
    rotation: float = 0.0       # view turned by this many full turns about ``center``

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("width and height must be >= 1")
        if not self.scale > 0:
            raise ValueError("scale must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not self.escape_radius > 1:
            raise ValueError("escape_radius must exceed 1")
        if self.supersample < 1:
            raise ValueError("supersample must be >= 1")
        if self.palette not in PALETTES:
            raise ValueError(f"unknown palette {self.palette!r}; choose from {PALETTES}")

    @property
    def pixel_size(self) -> float:
        return self.scale / self.width

    def pixel_centers(self, rows: slice | None = None, k: int = 1) -> np.ndarray:
        """Sample points for ``rows``; row 0 is the top of the image.

        With ``k > 1`` each pixel is split into a k x k grid and the result
        has k times as many rows and columns.
        """
        rows = rows or slice(0, self.height)
        j = np.arange(self.height * k, dtype=np.float64)[rows.start * k:rows.stop * k]
        i = np.arange(self.width * k, dtype=np.float64)
        h = self.pixel_size / k
        x = (i + 0.5 - self.width * k / 2) * h
        y = -(j + 0.5 - self.height * k / 2) * h
        off = x[None, :] + 1j * y[:, None]
        if self.rotation:
            off = off * complex(math.cos(2 * math.pi * self.rotation), math.sin(2 * math.pi * self.rotation))
        return self.center + off


@dataclass(frozen=True)
class ImageBuffer:
    width: int
    height: int
    data: bytes = field(repr=False)

    def __post_init__(self):
        if len(self.data) != 3 * self.width * self.height:
            raise ValueError(f"buffer holds {len(self.data)} bytes, expected {3 * self.width * self.height}")

    def to_array(self) -> np.ndarray:
        return np.frombuffer(self.data, dtype=np.uint8).reshape(self.height, self.width, 3)

    @classmethod
    def from_array(cls, arr: np.ndarray) -> ImageBuffer:
        arr = np.ascontiguousarray(arr, dtype=np.uint8)
        h, w, c = arr.shape
        if c != 3:
            raise ValueError("expected an (h, w, 3) array")
        return cls(w, h, arr.tobytes())


def escape_field(p: MapParams, z: np.ndarray, max_iter: int, escape_radius: float):
    """Iterate every point of ``z``.

    Returns (smooth escape count or NaN for bounded points, final positions
    of bounded points or NaN for escaped ones).
    """
    shape = z.shape
    z = z.ravel().astype(np.complex128)
    smooth = np.full(z.shape, np.nan)
    final = np.full(z.shape, np.nan + 0j, dtype=np.complex128)
    idx = np.arange(z.size)
    log_r = math.log(escape_radius)
    log_n = math.log(p.n)
    with np.errstate(all="ignore"):
        for k in range(max_iter + 1):
            mag = np.abs(z)
            out = ~(mag <= escape_radius)  # NaN and inf count as escaped
            if out.any():
                m = mag[out]
                # continuous count: both z^n and a/z^n blow up by degree n
                frac = np.log(np.log(np.where(np.isfinite(m), m, 1e300)) / log_r) / log_n
                smooth[idx[out]] = k - np.clip(frac, 0.0, 1.0)
                keep = ~out
                z, idx = z[keep], idx[keep]
            if k == max_iter or not z.size:
                break
            zn = z * z
            for _ in range(p.n - 2):
                zn = zn * z
            z = zn + p.a / zn + p.b
    final[idx] = z
    return smooth.reshape(shape), final.reshape(shape)


def _attracting_cycles(p: MapParams) -> list[np.ndarray]:
    rep = classify_map(p)
    cycles = []
    for res in (rep.v_plus, rep.v_minus):
        if res.attracting:
            pts = np.array(res.cycle, dtype=np.complex128)
            if not any(len(c) == len(pts) and np.allclose(np.sort_complex(c), np.sort_complex(pts), atol=1e-6)
                       for c in cycles):
                cycles.append(pts)
    return cycles


def _colorize(smooth: np.ndarray, final: np.ndarray, cycles, palette: str) -> np.ndarray:
    rgb = np.zeros(smooth.shape + (3,), dtype=np.uint8)
    esc = ~np.isnan(smooth)
    # 0 far out, approaching 1 for slow escapes next to the Julia set
    u = 1 - np.exp(-np.where(esc, smooth, 0.0) / 8)
    if palette == "gray":
        v = (255 * u).astype(np.uint8)
        rgb[esc] = np.stack([v, v, v], axis=-1)[esc]
        return rgb
    ramp = np.stack([10 + 245 * u ** 0.8, 12 + 228 * u ** 1.2, 40 + 170 * u ** 2], axis=-1)
    rgb[esc] = np.clip(ramp, 0, 255).astype(np.uint8)[esc]
    bounded = ~esc
    if not bounded.any():
        return rgb
    if not cycles:
        rgb[bounded] = _BOUNDED_NO_CYCLE
        return rgb
    pts = np.concatenate(cycles)
    colors = np.concatenate([np.roll(_PHASE_COLORS, -3 * ci, axis=0)[np.arange(len(c)) % len(_PHASE_COLORS)]
                             for ci, c in enumerate(cycles)])
    zb = final[bounded]
    nearest = np.argmin(np.abs(zb[:, None] - pts[None, :]), axis=1)
    rgb[bounded] = colors[nearest]
    return rgb


def render_julia(p: MapParams, cfg: RenderConfig | None = None, threads: int = 1) -> ImageBuffer:
    """Escape-time picture of the filled Julia set.

    Escaping pixels get a smooth count; bounded ones are shaded by which point
    of an attracting cycle they sit nearest to after ``max_iter`` steps, so
    neighbouring Fatou components alternate.  Output bytes do not depend on
    ``threads``.
    """
    cfg = cfg or RenderConfig()
    cycles = _attracting_cycles(p)
    out = np.zeros((cfg.height, cfg.width, 3), dtype=np.uint8)

    def work(r0: int):
        rows = slice(r0, min(r0 + BLOCK_ROWS, cfg.height))
        k = cfg.supersample
        smooth, final = escape_field(p, cfg.pixel_centers(rows, k), cfg.max_iter, cfg.escape_radius)
        rgb = _colorize(smooth, final, cycles, cfg.palette)
        if k > 1:
            hh, ww = rgb.shape[0] // k, rgb.shape[1] // k
            mean = rgb.reshape(hh, k, ww, k, 3).astype(np.float64).mean(axis=(1, 3))
            rgb = np.floor(mean + 0.5).astype(np.uint8)
        out[rows] = rgb

    starts = range(0, cfg.height, BLOCK_ROWS)
    if threads <= 1:
        for r0 in starts:
            work(r0)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(work, starts))
    return ImageBuffer.from_array(out)


def ppm_bytes(img: ImageBuffer) -> bytes:
    return f"P6\n{img.width} {img.height}\n255\n".encode("ascii") + img.data


def write_ppm(img: ImageBuffer, path) -> None:
    Path(path).write_bytes(ppm_bytes(img))


def read_ppm(path) -> ImageBuffer:
    raw = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        if raw[pos:pos + 1] == b"#":
            pos = raw.index(b"\n", pos) + 1
            continue
        end = pos
        while end < len(raw) and not raw[end:end + 1].isspace():
            end += 1
        fields.append(raw[pos:end])
        pos = end
    if fields[0] != b"P6" or int(fields[3]) != 255:
        raise ValueError("only 8-bit binary PPM (P6, maxval 255) is supported")
    w, h = int(fields[1]), int(fields[2])
    pos += 1  # single whitespace byte before the raster
    return ImageBuffer(w, h, raw[pos:pos + 3 * w * h])


def pixel_mismatch(a: ImageBuffer, b: ImageBuffer) -> float:
    """Fraction of pixels whose RGB triples differ."""
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError("images differ in size")
    return float(np.mean((a.to_array() != b.to_array()).any(axis=-1)))


def rotation_mismatch(img: ImageBuffer, turns: float, tol: int = 1) -> float:
    """Fraction of pixels that disagree with the image rotated by ``turns`` about the centre.

    The rotated position of a pixel centre generally falls between four
    pixel centres; the pixel matches when every channel lies within ``tol``
    of the range spanned by those four, which is the most that resampling
    alone can explain.  Pixels whose rotated cell leaves the frame are skipped.
    """
    arr = img.to_array().astype(np.int16)
    h, w = img.height, img.width
    jj, ii = np.mgrid[0:h, 0:w]
    x = ii + 0.5 - w / 2
    y = -(jj + 0.5 - h / 2)
    c, s = math.cos(2 * math.pi * turns), math.sin(2 * math.pi * turns)
    # continuous column/row index of the rotated point (pixel centres at integers)
    fi = c * x - s * y + w / 2 - 0.5
    fj = h / 2 - 0.5 - (s * x + c * y)
    i0, j0 = np.floor(fi).astype(int), np.floor(fj).astype(int)
    ok = (i0 >= 0) & (i0 + 1 < w) & (j0 >= 0) & (j0 + 1 < h)
    i0, j0 = i0[ok], j0[ok]
    cell = np.stack([arr[j0, i0], arr[j0, i0 + 1], arr[j0 + 1, i0], arr[j0 + 1, i0 + 1]])
    lo, hi = cell.min(axis=0) - tol, cell.max(axis=0) + tol
    v = arr[jj[ok], ii[ok]]
    bad = ((v < lo) | (v > hi)).any(axis=-1)
    return float(np.mean(bad))


def _point(t) -> tuple[float, float]:
    th = 2 * math.pi * float(t)
    return math.cos(th), -math.sin(th)  # svg y points down


Highlight = Sequence[tuple[Iterable[Chord], str]]


def lamination_to_svg(lam: Lamination, highlight: Highlight = (), *, stroke: str = "#333333") -> str:
    """Unit circle plus one straight segment per chord, in sorted chord order.

    ``highlight`` is a sequence of (chords, colour); the first set naming a
    chord decides its colour.  Highlighted chords absent from ``lam`` (for
    instance the ones an alteration removed) are drawn dashed as ``ghost``
    lines after the real chords.
    """
    colour: dict[Chord, str] = {}
    for chords, col in highlight:
        for c in chords:
            colour.setdefault(c, col)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="-1.1 -1.1 2.2 2.2" '
        'width="600" height="600">',
        '<circle cx="0" cy="0" r="1" fill="none" stroke="#000000" stroke-width="0.006"/>',
    ]

    def seg(c: Chord, cls: str, col: str, extra: str = "") -> str:
        (x1, y1), (x2, y2) = _point(c.lo), _point(c.hi)
        return (f'<line class="{cls}" data-chord="{c}" x1="{x1:.6f}" y1="{y1:.6f}" x2="{x2:.6f}" y2="{y2:.6f}" '
                f'stroke="{col}" stroke-width="0.006"{extra}/>')

    for c in lam.sorted_chords:
        lines.append(seg(c, "chord", colour.get(c, stroke)))
    ghosts = sort_chords(c for c in colour if c not in lam.chords)
    for c in ghosts:
        lines.append(seg(c, "ghost", colour[c], ' stroke-dasharray="0.02 0.015"'))
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
