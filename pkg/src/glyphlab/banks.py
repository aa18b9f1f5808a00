"""Seeded procedural image banks used by the noise transforms.

Three fixed pools, built lazily and cached for the process lifetime:

  * strokes:    500 thin line-like images (scratch material),
  * occluders:  64 character-fragment-like stroke images,
  * textures:   64 smooth background textures (multi-octave value noise
                plus linear gradients).

Bank contents depend only on hard-coded seeds, so every run and every
worker process sees identical pools.
"""

from __future__ import annotations

import numpy as np

from .glyphs import render_segments
from .imgcore import SIZE, clamp01
from .rng import RngStream

_STROKE_SEED = 0x5EED_0001
_OCCLUDER_SEED = 0x5EED_0002
_TEXTURE_SEED = 0x5EED_0003

_cache: dict[str, tuple[np.ndarray, ...]] = {}


def _curved_stroke(rng: RngStream, length_range, width_range, curvature: float) -> np.ndarray:
    """One soft line with slight quadratic curvature, random placement."""
    length = rng.uniform(*length_range)
    angle = rng.uniform(0.0, np.pi)
    cx = rng.uniform(10.0, 22.0)
    cy = rng.uniform(10.0, 22.0)
    bend = rng.uniform(-curvature, curvature)
    width = rng.uniform(*width_range)
    ts = np.linspace(-0.5, 0.5, 9)
    dx, dy = np.cos(angle), np.sin(angle)
    nx, ny = -dy, dx
    xs = cx + ts * length * dx + bend * (ts**2 - 0.25) * length * nx
    ys = cy + ts * length * dy + bend * (ts**2 - 0.25) * length * ny
    segs = np.stack([xs[:-1], ys[:-1], xs[1:], ys[1:]], axis=1)
    return render_segments(segs, width)


def strokes() -> tuple[np.ndarray, ...]:
    """500 thin stroke images (wide enough to survive two erosion passes)."""
    if "strokes" not in _cache:
        rng = RngStream(_STROKE_SEED)
        _cache["strokes"] = tuple(
            _curved_stroke(rng, (20.0, 30.0), (4.0, 5.5), 0.35) for _ in range(500)
        )
    return _cache["strokes"]


def occluders() -> tuple[np.ndarray, ...]:
    """64 fragment-like images: 2-3 joined strokes of medium width."""
    if "occluders" not in _cache:
        rng = RngStream(_OCCLUDER_SEED)
        out = []
        for _ in range(64):
            img = np.zeros((SIZE, SIZE))
            for _ in range(rng.integer(2, 3)):
                img = np.maximum(img, _curved_stroke(rng, (12.0, 26.0), (2.5, 5.0), 0.5))
            out.append(clamp01(img))
        _cache["occluders"] = tuple(out)
    return _cache["occluders"]


def _value_noise(rng: RngStream, cells: int) -> np.ndarray:
    """Bilinearly upsampled random grid, one octave of value noise."""
    grid = rng.uniform(0.0, 1.0, (cells + 1, cells + 1))
    coords = np.linspace(0.0, cells, SIZE)
    xs, ys = np.meshgrid(coords, coords)
    x0 = np.minimum(xs.astype(int), cells - 1)
    y0 = np.minimum(ys.astype(int), cells - 1)
    fx = xs - x0
    fy = ys - y0
    top = grid[y0, x0] * (1 - fx) + grid[y0, x0 + 1] * fx
    bot = grid[y0 + 1, x0] * (1 - fx) + grid[y0 + 1, x0 + 1] * fx
    return top * (1 - fy) + bot * fy


def textures() -> tuple[np.ndarray, ...]:
    """64 smooth backgrounds normalized to use the full [0, 1] range."""
    if "textures" not in _cache:
        rng = RngStream(_TEXTURE_SEED)
        out = []
        for i in range(64):
            if i % 4 == 0:
                # linear gradient at a random orientation
                angle = rng.uniform(0.0, 2 * np.pi)
                xs, ys = np.meshgrid(np.arange(SIZE), np.arange(SIZE))
                tex = (xs * np.cos(angle) + ys * np.sin(angle)).astype(np.float64)
            else:
                tex = np.zeros((SIZE, SIZE))
                amp = 1.0
                for cells in (4, 8, 16):
                    tex += amp * _value_noise(rng, cells)
                    amp *= 0.5
            tex -= tex.min()
            peak = tex.max()
            if peak > 0:
                tex /= peak
            out.append(tex)
        _cache["textures"] = tuple(out)
    return _cache["textures"]
