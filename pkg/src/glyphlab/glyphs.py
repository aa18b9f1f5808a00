"""Built-in 62-glyph stroke-skeleton alphabet and its rasterizer.

Each glyph is a set of polylines authored on a small design grid
(x in [0, 4], y in [-1.6, 6], y pointing up; baseline at y = 0, caps at
y = 6, x-height at 3.6). Rasterization draws soft-edged strokes by
distance-to-segment, producing white-on-black 32x32 images.

Class map: '0'-'9' -> 0-9, 'A'-'Z' -> 10-35, 'a'-'z' -> 36-61.
"""

from __future__ import annotations

import string

import numpy as np

from .imgcore import CENTER, SIZE

CLASS_CHARS = string.digits + string.ascii_uppercase + string.ascii_lowercase
N_CLASSES = len(CLASS_CHARS)  # 62

_CHAR_TO_LABEL = {c: i for i, c in enumerate(CLASS_CHARS)}


def label_for_char(char: str) -> int:
    return _CHAR_TO_LABEL[char]


def char_for_label(label: int) -> str:
    return CLASS_CHARS[label]


def _arc(cx, cy, rx, ry, a0, a1, n=12):
    """Polyline along an ellipse arc, angles in degrees, CCW positive."""
    ang = np.deg2rad(np.linspace(a0, a1, n))
    return [(cx + rx * float(np.cos(a)), cy + ry * float(np.sin(a))) for a in ang]


def _build_alphabet() -> dict[str, list[list[tuple[float, float]]]]:
    a = _arc
    g: dict[str, list[list[tuple[float, float]]]] = {}

    g["0"] = [a(2, 3, 1.55, 2.8, 0, 360, 20)]
    g["1"] = [[(1.1, 4.7), (2.2, 6), (2.2, 0)], [(1.2, 0), (3.2, 0)]]
    g["2"] = [a(2, 4.55, 1.45, 1.45, 175, 0) + [(0.6, 0), (3.4, 0)]]
    g["3"] = [a(1.9, 4.55, 1.5, 1.45, 155, -80) + a(1.9, 1.55, 1.6, 1.55, 80, -155)]
    g["4"] = [[(2.8, 0), (2.8, 6), (0.4, 1.8), (3.8, 1.8)]]
    g["5"] = [[(3.3, 6), (0.85, 6), (0.78, 3.6)] + a(2.0, 1.95, 1.55, 1.85, 115, -180)]
    g["6"] = [a(2.6, 4.0, 2.0, 2.0, 60, 180) + [(0.6, 1.7)], a(2, 1.7, 1.4, 1.7, 0, 360, 16)]
    g["7"] = [[(0.6, 6), (3.4, 6), (1.6, 0)]]
    g["8"] = [a(2, 4.45, 1.3, 1.5, 0, 360, 16), a(2, 1.5, 1.5, 1.5, 0, 360, 16)]
    g["9"] = [a(2, 4.3, 1.4, 1.65, 0, 360, 16), [(3.4, 4.3), (3.4, 1.6), (2.1, 0)]]

    g["A"] = [[(0.4, 0), (2, 6), (3.6, 0)], [(1.05, 2.3), (2.95, 2.3)]]
    g["B"] = [
        [(0.7, 0), (0.7, 6)],
        [(0.7, 6), (1.9, 6)] + a(1.9, 4.5, 1.5, 1.5, 90, -90) + [(0.7, 3)],
        [(0.7, 3), (2.0, 3)] + a(2.0, 1.5, 1.7, 1.5, 90, -90) + [(0.7, 0)],
    ]
    g["C"] = [a(2.2, 3, 1.6, 2.9, 40, 320, 16)]
    g["D"] = [[(0.7, 0), (0.7, 6)], [(0.7, 6), (1.3, 6)] + a(1.3, 3, 2.2, 3, 90, -90) + [(0.7, 0)]]
    g["E"] = [[(3.3, 6), (0.7, 6), (0.7, 0), (3.3, 0)], [(0.7, 3.1), (2.7, 3.1)]]
    g["F"] = [[(3.3, 6), (0.7, 6), (0.7, 0)], [(0.7, 3.2), (2.6, 3.2)]]
    g["G"] = [a(2.1, 3, 1.7, 2.9, 40, 320, 16), [(2.1, 2.6), (3.5, 2.6), (3.5, 1.2)]]
    g["H"] = [[(0.6, 0), (0.6, 6)], [(3.4, 0), (3.4, 6)], [(0.6, 3), (3.4, 3)]]
    g["I"] = [[(2, 0), (2, 6)], [(1.1, 6), (2.9, 6)], [(1.1, 0), (2.9, 0)]]
    g["J"] = [[(3.0, 6), (3.0, 1.6)] + a(2.0, 1.6, 1.0, 1.6, 0, -180)]
    g["K"] = [[(0.7, 0), (0.7, 6)], [(3.4, 6), (0.7, 2.5), (3.5, 0)]]
    g["L"] = [[(0.7, 6), (0.7, 0), (3.3, 0)]]
    g["M"] = [[(0.5, 0), (0.5, 6), (2, 2.8), (3.5, 6), (3.5, 0)]]
    g["N"] = [[(0.6, 0), (0.6, 6), (3.4, 0), (3.4, 6)]]
    g["O"] = [a(2, 3, 1.7, 2.9, 0, 360, 20)]
    g["P"] = [[(0.7, 0), (0.7, 6)], [(0.7, 6), (1.9, 6)] + a(1.9, 4.5, 1.6, 1.5, 90, -90) + [(0.7, 3.0)]]
    g["Q"] = [a(2, 3.1, 1.6, 2.8, 0, 360, 20), [(2.3, 1.6), (3.7, -0.2)]]
    g["R"] = [
        [(0.7, 0), (0.7, 6)],
        [(0.7, 6), (1.9, 6)] + a(1.9, 4.5, 1.6, 1.5, 90, -90) + [(0.7, 3.0)],
        [(1.7, 3.0), (3.5, 0)],
    ]
    g["S"] = [
        [(3.2, 5.0), (2.6, 5.8), (1.3, 5.9), (0.6, 5.0), (1.0, 3.9), (2.2, 3.3),
         (3.0, 2.6), (3.4, 1.6), (2.8, 0.5), (1.4, 0.2), (0.6, 1.0)]
    ]
    g["T"] = [[(0.5, 6), (3.5, 6)], [(2, 6), (2, 0)]]
    g["U"] = [[(0.6, 6), (0.6, 1.7)] + a(2, 1.7, 1.4, 1.7, 180, 360) + [(3.4, 6)]]
    g["V"] = [[(0.5, 6), (2, 0), (3.5, 6)]]
    g["W"] = [[(0.3, 6), (1.1, 0), (2, 4.2), (2.9, 0), (3.7, 6)]]
    g["X"] = [[(0.5, 6), (3.5, 0)], [(3.5, 6), (0.5, 0)]]
    g["Y"] = [[(0.5, 6), (2, 2.8), (3.5, 6)], [(2, 2.8), (2, 0)]]
    g["Z"] = [[(0.5, 6), (3.5, 6), (0.5, 0), (3.5, 0)]]

    g["a"] = [a(1.9, 1.8, 1.3, 1.75, 0, 360, 16), [(3.2, 3.55), (3.2, 0)]]
    g["b"] = [[(0.7, 6), (0.7, 0)], a(2.05, 1.8, 1.35, 1.75, 0, 360, 16)]
    g["c"] = [a(2.1, 1.8, 1.4, 1.75, 35, 325, 14)]
    g["d"] = [[(3.3, 6), (3.3, 0)], a(1.95, 1.8, 1.35, 1.75, 0, 360, 16)]
    g["e"] = [[(0.6, 1.95), (3.35, 1.95)] + a(2, 1.8, 1.4, 1.75, 6, 325, 16)]
    g["f"] = [[(3.1, 5.5), (2.4, 5.95), (1.9, 5.4), (1.9, 0)], [(1.0, 3.6), (2.9, 3.6)]]
    g["g"] = [a(1.9, 1.9, 1.3, 1.65, 0, 360, 16), [(3.2, 3.55), (3.2, -0.2)] + a(2.1, -0.2, 1.1, 1.25, 0, -160)]
    g["h"] = [[(0.7, 6), (0.7, 0)], a(1.95, 2.3, 1.25, 1.3, 180, 0) + [(3.2, 0)]]
    g["i"] = [[(2, 3.6), (2, 0)], [(2, 4.8), (2, 5.15)]]
    g["j"] = [[(2.6, 3.6), (2.6, -0.3)] + a(1.55, -0.3, 1.05, 1.2, 0, -165), [(2.6, 4.8), (2.6, 5.15)]]
    g["k"] = [[(0.7, 6), (0.7, 0)], [(3.0, 3.6), (0.7, 1.5), (3.2, 0)]]
    g["l"] = [[(2.0, 6), (2.0, 0.55), (2.6, 0.12)]]
    g["m"] = [
        [(0.5, 3.6), (0.5, 0)],
        a(1.33, 2.5, 0.83, 1.1, 180, 0) + [(2.16, 0)],
        a(3.0, 2.5, 0.84, 1.1, 180, 0) + [(3.84, 0)],
    ]
    g["n"] = [[(0.7, 3.6), (0.7, 0)], a(1.95, 2.3, 1.25, 1.3, 180, 0) + [(3.2, 0)]]
    g["o"] = [a(2, 1.8, 1.4, 1.75, 0, 360, 16)]
    g["p"] = [[(0.7, 3.6), (0.7, -1.6)], a(2.05, 1.8, 1.35, 1.7, 0, 360, 16)]
    g["q"] = [[(3.3, 3.6), (3.3, -1.6)], a(1.95, 1.8, 1.35, 1.7, 0, 360, 16)]
    g["r"] = [[(0.8, 3.6), (0.8, 0)], a(2.0, 2.25, 1.2, 1.3, 180, 15)]
    g["s"] = [
        [(3.0, 3.1), (2.3, 3.6), (1.2, 3.5), (0.75, 2.9), (1.3, 2.25), (2.5, 1.85),
         (3.1, 1.2), (2.7, 0.35), (1.5, 0.1), (0.65, 0.55)]
    ]
    g["t"] = [[(1.8, 5.3), (1.8, 0.6), (2.7, 0.1)], [(0.8, 3.6), (2.9, 3.6)]]
    g["u"] = [[(0.7, 3.6), (0.7, 1.4)] + a(1.95, 1.4, 1.25, 1.35, 180, 360), [(3.2, 3.6), (3.2, 0)]]
    g["v"] = [[(0.6, 3.6), (2, 0), (3.4, 3.6)]]
    g["w"] = [[(0.4, 3.6), (1.15, 0), (2, 2.7), (2.85, 0), (3.6, 3.6)]]
    g["x"] = [[(0.6, 3.6), (3.4, 0)], [(3.4, 3.6), (0.6, 0)]]
    g["y"] = [[(0.6, 3.6), (2.0, 0.3)], [(3.4, 3.6), (1.2, -1.5)]]
    g["z"] = [[(0.6, 3.6), (3.4, 3.6), (0.6, 0), (3.4, 0)]]

    assert sorted(g) == sorted(CLASS_CHARS)
    return g


GLYPH_STROKES = _build_alphabet()

# Design-to-pixel mapping: 3.0 px per design unit, design point (2.0, 2.2)
# lands on the image centre.
_PX_PER_UNIT = 3.0
_DESIGN_CX = 2.0
_DESIGN_CY = 2.2


def _segments_for(char: str, shear: float = 0.0) -> np.ndarray:
    """Glyph polylines as an (n, 4) array of pixel-space segments."""
    segs = []
    for poly in GLYPH_STROKES[char]:
        pts = []
        for dx, dy in poly:
            px = CENTER + (dx - _DESIGN_CX + shear * (dy - _DESIGN_CY)) * _PX_PER_UNIT
            py = CENTER - (dy - _DESIGN_CY) * _PX_PER_UNIT
            pts.append((px, py))
        for p, q in zip(pts[:-1], pts[1:]):
            segs.append((p[0], p[1], q[0], q[1]))
    return np.array(segs, dtype=np.float64)


_GRID_X, _GRID_Y = np.meshgrid(np.arange(SIZE, dtype=np.float64), np.arange(SIZE, dtype=np.float64))
_GRID_PTS = np.stack([_GRID_X.ravel(), _GRID_Y.ravel()], axis=1)  # (1024, 2)


def render_segments(segments: np.ndarray, width: float, softness: float = 0.7) -> np.ndarray:
    """Rasterize stroke segments (pixel coords) into a 32x32 image.

    Intensity is 1 within width/2 of any segment and falls off linearly
    to 0 over `softness` pixels.
    """
    if len(segments) == 0:
        return np.zeros((SIZE, SIZE), dtype=np.float64)
    a = segments[:, 0:2][None, :, :]  # (1, nseg, 2)
    b = segments[:, 2:4][None, :, :]
    ab = b - a
    denom = np.maximum((ab**2).sum(axis=2), 1e-12)
    p = _GRID_PTS[:, None, :]  # (1024, 1, 2)
    t = np.clip(((p - a) * ab).sum(axis=2) / denom, 0.0, 1.0)
    proj = a + t[:, :, None] * ab
    dist = np.sqrt(((p - proj) ** 2).sum(axis=2)).min(axis=1)
    img = np.clip((width / 2.0 + softness - dist) / softness, 0.0, 1.0)
    return img.reshape(SIZE, SIZE)


def render_glyph(char: str, width: float = 2.2, softness: float = 0.7, shear: float = 0.0) -> np.ndarray:
    """Render one alphabet glyph as a white-on-black 32x32 image."""
    return render_segments(_segments_for(char, shear=shear), width, softness)
