import dataclasses
import re

import numpy as np
import pytest

from alterlam.alteration import alter
from alterlam.dynamics import MapParams
from alterlam.lamination import Chord, Lamination, basilica
from alterlam.render import (
    ImageBuffer,
    RenderConfig,
    lamination_to_svg,
    pixel_mismatch,
    ppm_bytes,
    read_ppm,
    render_julia,
    rotation_mismatch,
    write_ppm,
)

SYM3 = MapParams(3, 0.05855 - 0.01282j, 0.02 + 0.03j)


def test_ppm_single_white_pixel(tmp_path):
    img = ImageBuffer(1, 1, b"\xff\xff\xff")
    assert ppm_bytes(img) == b"P6\n1 1\n255\n\xff\xff\xff"
    write_ppm(img, tmp_path / "w.ppm")
    assert (tmp_path / "w.ppm").read_bytes() == b"P6\n1 1\n255\n\xff\xff\xff"


def test_buffer_length_checked():
    with pytest.raises(ValueError):
        ImageBuffer(2, 1, b"\x00" * 5)


def test_ppm_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    img = ImageBuffer.from_array(rng.integers(0, 256, (7, 5, 3), dtype=np.uint8))
    write_ppm(img, tmp_path / "r.ppm")
    assert read_ppm(tmp_path / "r.ppm") == img


def test_config_validation():
    with pytest.raises(ValueError):
        RenderConfig(width=0)
    with pytest.raises(ValueError):
        RenderConfig(scale=0)
    with pytest.raises(ValueError):
        RenderConfig(palette="neon")


def test_pixel_grid_is_origin_symmetric():
    z = RenderConfig(8, 6, 0j, 2.0).pixel_centers()
    assert z.shape == (6, 8)
    assert np.allclose(z, -z[::-1, ::-1])
    assert z[0, 0].imag > 0 and z[0, 0].real < 0


def test_deterministic_across_runs_and_threads():
    cfg = RenderConfig(96, 80, 0.1j, 3.0, max_iter=200)
    one = render_julia(SYM3, cfg)
    assert render_julia(SYM3, cfg) == one
    for t in (2, 3, 8):
        assert render_julia(SYM3, cfg, threads=t).data == one.data


def test_all_escaping_has_no_bounded_pixels():
    img = render_julia(MapParams(3, 1, 10), RenderConfig(64, 64, 0j, 4.0, max_iter=50))
    arr = img.to_array()
    # escaped pixels use the ramp, which never reaches pure black; bounded would be black or a phase colour
    assert not (arr == 0).all(axis=-1).any()
    assert len(np.unique(arr.reshape(-1, 3), axis=0)) > 1


def test_bounded_pixels_show_two_phases():
    img = render_julia(SYM3, RenderConfig(128, 128, 0j, 4.0, max_iter=300))
    arr = img.to_array().reshape(-1, 3)
    blue = (arr == (32, 64, 160)).all(axis=-1).sum()
    gold = (arr == (220, 190, 60)).all(axis=-1).sum()
    assert blue > 0 and gold > 0


def test_rotated_view_matches():
    cfg = RenderConfig(128, 128, 0j, 4.0, max_iter=300)
    base = render_julia(SYM3, cfg)
    for k in (1, 2):
        assert pixel_mismatch(base, render_julia(SYM3, dataclasses.replace(cfg, rotation=k / 3))) < 0.01
    # control: a sixth of a turn is not a symmetry of this picture
    assert pixel_mismatch(base, render_julia(SYM3, dataclasses.replace(cfg, rotation=1 / 6))) > 0.05


def test_raster_rotation_mismatch_on_exact_image():
    # a disc is symmetric under any rotation; only its rim can be off
    h = w = 101
    jj, ii = np.mgrid[0:h, 0:w]
    disc = ((ii - 50) ** 2 + (jj - 50) ** 2 < 30 ** 2).astype(np.uint8) * 255
    img = ImageBuffer.from_array(np.stack([disc] * 3, axis=-1))
    assert rotation_mismatch(img, 1 / 3) < 0.01


def test_supersample_shape_and_determinism():
    cfg = RenderConfig(40, 30, 0j, 4.0, max_iter=100, supersample=2)
    img = render_julia(SYM3, cfg)
    assert (img.width, img.height) == (40, 30)
    assert render_julia(SYM3, cfg, threads=4) == img


def test_svg_basilica_three():
    svg = lamination_to_svg(basilica(3))
    assert 'viewBox="-1.1 -1.1 2.2 2.2"' in svg
    assert svg.count('class="chord"') == 8
    assert "<circle" in svg
    assert lamination_to_svg(basilica(3)) == svg


def test_svg_empty_is_circle_only():
    svg = lamination_to_svg(Lamination(frozenset(), 0))
    assert "<circle" in svg and "<line" not in svg


def test_svg_highlights_added_chords():
    res = alter(basilica(5), "M")
    added = [Chord.of("1/6", "1/3"), Chord.of("2/3", "5/6")]
    removed = [Chord.of("1/6", "5/6"), Chord.of("1/3", "2/3")]
    svg = lamination_to_svg(res.final, [(added, "green"), (removed, "red")])
    for c in added:
        (line,) = [ln for ln in svg.splitlines() if f'data-chord="{c}"' in ln]
        assert 'class="chord"' in line and 'stroke="green"' in line
    ghosts = [ln for ln in svg.splitlines() if 'class="ghost"' in ln]
    assert len(ghosts) == 2 and all('stroke="red"' in g for g in ghosts)


def test_svg_endpoint_coordinates():
    svg = lamination_to_svg(Lamination(frozenset({Chord.of("0", "1/4")}), 0))
    m = re.search(r'x1="([-\d.]+)" y1="([-\d.]+)" x2="([-\d.]+)" y2="([-\d.]+)"', svg)
    x1, y1, x2, y2 = map(float, m.groups())
    assert (x1, y1) == (1.0, -0.0) and abs(x2) < 1e-6 and y2 == -1.0
