"""Grid-image representation and low-level numeric kernels.

Images are plain numpy arrays of shape (32, 32), dtype float64, row-major,
with intensities in [0, 1] (0 = black background, 1 = white stroke). All
kernels clamp their output back into [0, 1].

Conventions shared by every consumer:
  * coordinates are (x, y) with x = column and y = row; the pixel centre
    of img[y, x] sits at coordinates (x, y),
  * samples outside [0, 31]^2 read the background value 0,
  * ``iround`` (floor(x + 0.5)) is the rounding rule wherever a sampled
    real is snapped to a pixel index.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

SIZE = 32
CENTER = (SIZE - 1) / 2.0  # 15.5, centre of the pixel grid
N_PIXELS = SIZE * SIZE


def new_image(fill: float = 0.0) -> np.ndarray:
    return np.full((SIZE, SIZE), float(fill), dtype=np.float64)


def as_image(data) -> np.ndarray:
    """Validate and convert to a 32x32 float64 image in [0, 1]."""
    img = np.asarray(data, dtype=np.float64)
    if img.shape != (SIZE, SIZE):
        raise ValueError(f"image must be {SIZE}x{SIZE}, got {img.shape}")
    if np.any(img < 0.0) or np.any(img > 1.0) or not np.all(np.isfinite(img)):
        raise ValueError("image intensities must lie in [0, 1]")
    return img


def clamp01(img: np.ndarray) -> np.ndarray:
    return np.clip(img, 0.0, 1.0)


def iround(x):
    """Round half up: floor(x + 0.5). Works on scalars and arrays."""
    out = np.floor(np.asarray(x) + 0.5).astype(np.int64)
    return int(out) if np.isscalar(x) or out.ndim == 0 else out


# ---------------------------------------------------------------------------
# Interpolating samplers
# ---------------------------------------------------------------------------

def _gather(img: np.ndarray, iy: np.ndarray, ix: np.ndarray) -> np.ndarray:
    """Pixel lookup with out-of-bounds reads returning background 0."""
    inside = (ix >= 0) & (ix < SIZE) & (iy >= 0) & (iy < SIZE)
    vals = img[np.clip(iy, 0, SIZE - 1), np.clip(ix, 0, SIZE - 1)]
    return np.where(inside, vals, 0.0)


def bilinear_map(img: np.ndarray, xs, ys) -> np.ndarray:
    """Bilinear interpolation at real coordinates (vectorized)."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = xs - x0
    fy = ys - y0
    x0 = x0.astype(np.int64)
    y0 = y0.astype(np.int64)
    v00 = _gather(img, y0, x0)
    v01 = _gather(img, y0, x0 + 1)
    v10 = _gather(img, y0 + 1, x0)
    v11 = _gather(img, y0 + 1, x0 + 1)
    top = (1.0 - fx) * v00 + fx * v01
    bot = (1.0 - fx) * v10 + fx * v11
    return np.clip((1.0 - fy) * top + fy * bot, 0.0, 1.0)


def bilinear_sample(img: np.ndarray, x: float, y: float) -> float:
    """Weighted average of the 4 pixels surrounding (x, y)."""
    return float(bilinear_map(img, np.float64(x), np.float64(y)))


def _cubic_weight(t: np.ndarray) -> np.ndarray:
    # Keys cubic convolution kernel, a = -0.5; reproduces linear ramps
    # exactly and is 1 at t=0, 0 at integer offsets.
    t = np.abs(t)
    w = np.where(
        t <= 1.0,
        1.5 * t**3 - 2.5 * t**2 + 1.0,
        np.where(t < 2.0, -0.5 * t**3 + 2.5 * t**2 - 4.0 * t + 2.0, 0.0),
    )
    return w


def bicubic_map(img: np.ndarray, xs, ys) -> np.ndarray:
    """Bicubic interpolation (16-point cubic kernel), clamped to [0, 1]."""
    xs = np.asarray(xs, dtype=np.float64)
    ys = np.asarray(ys, dtype=np.float64)
    x0 = np.floor(xs)
    y0 = np.floor(ys)
    fx = xs - x0
    fy = ys - y0
    x0 = x0.astype(np.int64)
    y0 = y0.astype(np.int64)
    out = np.zeros(np.broadcast(xs, ys).shape, dtype=np.float64)
    for j in range(-1, 3):
        wy = _cubic_weight(fy - j)
        row = np.zeros_like(out)
        for i in range(-1, 3):
            wx = _cubic_weight(fx - i)
            row += wx * _gather(img, y0 + j, x0 + i)
        out += wy * row
    return np.clip(out, 0.0, 1.0)


def bicubic_sample(img: np.ndarray, x: float, y: float) -> float:
    return float(bicubic_map(img, np.float64(x), np.float64(y)))


# ---------------------------------------------------------------------------
# Gaussian convolution
# ---------------------------------------------------------------------------

@lru_cache(maxsize=256)
def _gauss_conv_matrix(kernel_size: int, variance: float) -> np.ndarray:
    """32x32 matrix applying a zero-padded 1D Gaussian convolution.

    The separable product M @ img @ M.T equals convolution with the
    normalized 2D kernel (the 2D kernel is the outer product of the 1D
    kernels and per-axis normalization multiplies out to the global one).
    """
    half = (kernel_size - 1) // 2
    d = np.arange(-half, half + 1, dtype=np.float64)
    k1 = np.exp(-(d**2) / (2.0 * variance))
    k1 /= k1.sum()
    idx = np.arange(SIZE)
    off = idx[:, None] - idx[None, :]
    mat = np.zeros((SIZE, SIZE), dtype=np.float64)
    inside = np.abs(off) <= half
    mat[inside] = k1[off[inside] + half]
    return mat


def convolve_gaussian(img: np.ndarray, kernel_size: int, variance: float) -> np.ndarray:
    """Isotropic Gaussian blur; kernel normalized to sum 1, zero padding.

    kernel_size must be odd and >= 1; variance > 0.
    """
    kernel_size = int(kernel_size)
    if kernel_size < 1 or kernel_size % 2 == 0:
        raise ValueError(f"kernel_size must be odd and positive, got {kernel_size}")
    if not variance > 0.0:
        raise ValueError(f"variance must be positive, got {variance}")
    if kernel_size == 1:
        return img.copy()
    mat = _gauss_conv_matrix(kernel_size, round(float(variance), 12))
    return np.clip(mat @ img @ mat.T, 0.0, 1.0)


def smoothing_matrix(sigma: float) -> np.ndarray:
    """Cached conv matrix for std sigma, kernel size 2*ceil(3*sigma)+1."""
    size = 2 * int(np.ceil(3.0 * sigma)) + 1
    return _gauss_conv_matrix(size, round(float(sigma) ** 2, 12))


def gaussian_smooth_field(field: np.ndarray, sigma: float) -> np.ndarray:
    """Blur an unbounded real field (no clamping) with std sigma.

    Same zero-padded convolution as convolve_gaussian, but intended for
    displacement fields rather than images.
    """
    if sigma <= 0.0:
        return field.copy()
    mat = smoothing_matrix(sigma)
    return mat @ field @ mat.T


# ---------------------------------------------------------------------------
# Grey-scale morphology
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructuringElement:
    """Small binary neighborhood mask for grey-scale dilation/erosion."""

    name: str
    rank: int
    mask: tuple  # tuple of row tuples of 0/1, hashable

    def mask_array(self) -> np.ndarray:
        return np.array(self.mask, dtype=bool)

    def active_cells(self) -> int:
        return int(self.mask_array().sum())


def _plus(n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=bool)
    lo = (n - 1) // 2
    hi = n // 2
    m[lo : hi + 1, :] = True
    m[:, lo : hi + 1] = True
    return m


def _diamond5() -> np.ndarray:
    dy, dx = np.mgrid[-2:3, -2:3]
    return (np.abs(dy) + np.abs(dx)) <= 2


def _circle5() -> np.ndarray:
    dy, dx = np.mgrid[-2:3, -2:3]
    return (dy**2 + dx**2) <= 6.25


def _thin_plus(n: int) -> np.ndarray:
    m = np.zeros((n, n), dtype=bool)
    c = (n - 1) // 2
    m[c, :] = True
    m[:, c] = True
    return m


def _build_elements() -> tuple[StructuringElement, ...]:
    shapes = [
        ("center-1x1", np.ones((1, 1), dtype=bool)),
        ("full-2x2", np.ones((2, 2), dtype=bool)),
        ("plus-3x3", _thin_plus(3)),
        ("full-3x3", np.ones((3, 3), dtype=bool)),
        ("plus-5x5", _thin_plus(5)),
        ("plus-4x4", _plus(4)),
        ("diamond-5x5", _diamond5()),
        ("full-4x4", np.ones((4, 4), dtype=bool)),
        ("circle-5x5", _circle5()),
        ("full-5x5", np.ones((5, 5), dtype=bool)),
    ]
    counts = [int(m.sum()) for _, m in shapes]
    assert counts == sorted(counts), "element ladder must grow by active cells"
    return tuple(
        StructuringElement(name, rank, tuple(tuple(int(v) for v in row) for row in m))
        for rank, (name, m) in enumerate(shapes)
    )


#: Ten elements ordered by active-cell count; rank 0 is the neutral
#: single-cell element (identity under both dilation and erosion) and the
#: largest is 5x5.
ELEMENTS: tuple[StructuringElement, ...] = _build_elements()


def morph(img: np.ndarray, elem: StructuringElement, mode: str) -> np.ndarray:
    """Grey-scale dilation (max) or erosion (min) under elem's mask.

    The mask is anchored at ((h-1)//2, (w-1)//2). Out-of-bounds neighbors
    read 0 for dilation and 1 for erosion, so borders stay neutral.
    """
    if mode not in ("dilate", "erode"):
        raise ValueError(f"mode must be 'dilate' or 'erode', got {mode!r}")
    mask = elem.mask_array()
    mh, mw = mask.shape
    fill = 0.0 if mode == "dilate" else 1.0
    pick = np.maximum if mode == "dilate" else np.minimum
    padded = np.full((SIZE + mh, SIZE + mw), fill, dtype=np.float64)
    ay, ax = (mh - 1) // 2, (mw - 1) // 2
    padded[ay : ay + SIZE, ax : ax + SIZE] = img
    out = None
    for dy, dx in np.argwhere(mask):
        window = padded[dy : dy + SIZE, dx : dx + SIZE]
        out = window.copy() if out is None else pick(out, window)
    return np.clip(out, 0.0, 1.0)


def rotate_image(img: np.ndarray, degrees: float, sampler: str = "bicubic") -> np.ndarray:
    """Rotate about the image centre; empty corners read background 0."""
    theta = np.deg2rad(degrees)
    c, s = np.cos(theta), np.sin(theta)
    ys, xs = np.mgrid[0:SIZE, 0:SIZE].astype(np.float64)
    u = xs - CENTER
    v = ys - CENTER
    src_x = CENTER + c * u + s * v
    src_y = CENTER - s * u + c * v
    fn = bicubic_map if sampler == "bicubic" else bilinear_map
    return fn(img, src_x, src_y)
