"""The 14 stochastic image transforms: geometric stage plus noise stage.

Every transform X is split into ``sample_X(rng, complexity) -> XParams``
and a deterministic ``apply_X(img, params) -> img``. Samplers are the only
consumers of randomness; parameter objects carry every sampled quantity
(including realized noise fields), so applying is pure and repeatable.

Draw budgets are documented per sampler. Skippable transforms always
consume their skip draw first, so toggling a stage downstream never
shifts another stage's randomness.

The global knob is ``complexity`` in [0, 1]: 0 means no deformation, 1 is
the strongest parameter distribution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import banks
from .imgcore import (
    CENTER,
    ELEMENTS,
    N_PIXELS,
    SIZE,
    bilinear_map,
    clamp01,
    convolve_gaussian,
    iround,
    morph,
    rotate_image,
    smoothing_matrix,
)
from .rng import RngStream

_GRID_X, _GRID_Y = np.meshgrid(np.arange(SIZE, dtype=np.float64), np.arange(SIZE, dtype=np.float64))

# Skip probabilities of the noise-stage transforms that sometimes pass through.
SKIP_PROBABILITIES = {
    "occlusion": 0.60,
    "smoothing": 0.75,
    "permute": 0.80,
    "gaussian_noise": 0.70,
    "salt_pepper": 0.75,
    "scratches": 0.85,
}


def _check_complexity(complexity: float) -> float:
    c = float(complexity)
    if not 0.0 <= c <= 1.0:
        raise ValueError(f"complexity must lie in [0, 1], got {complexity}")
    return c


# ---------------------------------------------------------------------------
# Thickness (dilation / erosion ladder)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ThicknessParams:
    mode: str  # "dilate" | "erode"
    elem_rank: int


def sample_thickness(rng: RngStream, complexity: float) -> ThicknessParams:
    """Draws: mode (1), element rank (1).

    Rank is uniform over the admissible ladder prefix: round(m*c) with
    m = 10 for dilation, 6 for erosion, capped at rank 9. The neutral
    rank 0 is always admissible.
    """
    c = _check_complexity(complexity)
    mode = "dilate" if rng.bernoulli(0.5) else "erode"
    m = 10 if mode == "dilate" else 6
    cap = min(iround(m * c), len(ELEMENTS) - 1)
    return ThicknessParams(mode=mode, elem_rank=rng.integer(0, cap))


def apply_thickness(img: np.ndarray, p: ThicknessParams) -> np.ndarray:
    if p.mode not in ("dilate", "erode"):
        raise ValueError(f"bad thickness mode {p.mode!r}")
    if not 0 <= p.elem_rank < len(ELEMENTS):
        raise ValueError(f"element rank out of range: {p.elem_rank}")
    if p.elem_rank == 0:
        return img.copy()
    return morph(img, ELEMENTS[p.elem_rank], p.mode)


# ---------------------------------------------------------------------------
# Slant (per-row shear about the vertical centre)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlantParams:
    slant: float
    direction: str  # "left" | "right"


def sample_slant(rng: RngStream, complexity: float) -> SlantParams:
    """Draws: slant ~ U[-c, c] (1), direction (1)."""
    c = _check_complexity(complexity)
    slant = rng.uniform(-c, c)
    direction = "right" if rng.bernoulli(0.5) else "left"
    return SlantParams(slant=slant, direction=direction)


def apply_slant(img: np.ndarray, p: SlantParams) -> np.ndarray:
    """Shift row y by round(slant * h), h the signed offset from centre."""
    if p.direction not in ("left", "right"):
        raise ValueError(f"bad slant direction {p.direction!r}")
    sign = 1.0 if p.direction == "right" else -1.0
    out = np.zeros_like(img)
    for y in range(SIZE):
        h = y - CENTER
        shift = int(iround(sign * p.slant * h))
        if shift >= SIZE or shift <= -SIZE:
            continue
        if shift >= 0:
            out[y, shift:] = img[y, : SIZE - shift]
        else:
            out[y, :shift] = img[y, -shift:]
    return clamp01(out)


# ---------------------------------------------------------------------------
# Affine (nearest-neighbour inverse warp, centre-origin frame)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineParams:
    a: float
    b: float
    c: float
    d: float
    e: float
    f: float


def sample_affine(rng: RngStream, complexity: float) -> AffineParams:
    """Draws: a, b, c, d, e, f (6 uniforms in that order)."""
    k = _check_complexity(complexity)
    u = rng.uniform(0.0, 1.0, 6)
    return AffineParams(
        a=1 - 3 * k + 6 * k * u[0],
        b=-3 * k + 6 * k * u[1],
        c=-4 * k + 8 * k * u[2],
        d=1 - 3 * k + 6 * k * u[3],
        e=-3 * k + 6 * k * u[4],
        f=-4 * k + 8 * k * u[5],
    )


def apply_affine(img: np.ndarray, p: AffineParams) -> np.ndarray:
    """Output (x, y) reads the input pixel nearest to the mapped point.

    Coordinates are taken relative to the image centre so the offsets
    c, f translate the glyph rather than acting from the corner.
    """
    u = _GRID_X - CENTER
    v = _GRID_Y - CENTER
    src_x = p.a * u + p.b * v + p.c + CENTER
    src_y = p.e * u + p.d * v + p.f + CENTER
    ix = iround(src_x)
    iy = iround(src_y)
    inside = (ix >= 0) & (ix < SIZE) & (iy >= 0) & (iy < SIZE)
    out = np.where(inside, img[np.clip(iy, 0, SIZE - 1), np.clip(ix, 0, SIZE - 1)], 0.0)
    return clamp01(out)


# ---------------------------------------------------------------------------
# Local elastic deformation
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class ElasticParams:
    alpha: float
    sigma: float
    dx: np.ndarray
    dy: np.ndarray


def elastic_alpha(complexity: float) -> float:
    return float(np.cbrt(complexity) * 10.0)


def elastic_sigma(complexity: float) -> float:
    return float(10.0 - 7.0 * np.cbrt(complexity))


def sample_elastic(rng: RngStream, complexity: float) -> ElasticParams:
    """Draws: one (2, 32, 32) uniform block, dx noise first then dy.

    White U[-1,1] noise is Gaussian-smoothed with std sigma, jointly
    normalized to unit maximum vector magnitude, then scaled by alpha.
    """
    c = _check_complexity(complexity)
    alpha = elastic_alpha(c)
    sigma = elastic_sigma(c)
    noise = rng.uniform(-1.0, 1.0, (2, SIZE, SIZE))
    if alpha == 0.0:
        zero = np.zeros((SIZE, SIZE))
        return ElasticParams(alpha=alpha, sigma=sigma, dx=zero, dy=zero.copy())
    mat = smoothing_matrix(sigma)
    smooth = mat @ noise @ mat.T
    peak = np.sqrt((smooth * smooth).sum(axis=0).max())
    if peak > 0:
        smooth *= alpha / peak
    return ElasticParams(alpha=alpha, sigma=sigma, dx=smooth[0], dy=smooth[1])


def apply_elastic(img: np.ndarray, p: ElasticParams) -> np.ndarray:
    if p.dx.shape != (SIZE, SIZE) or p.dy.shape != (SIZE, SIZE):
        raise ValueError("displacement fields must be 32x32")
    return bilinear_map(img, _GRID_X + p.dx, _GRID_Y + p.dy)


# ---------------------------------------------------------------------------
# Pinch (radial distortion within the centre disk)
# ---------------------------------------------------------------------------

PINCH_RADIUS = SIZE / 2.0  # 16 px disk on the 32x32 grid


@dataclass(frozen=True)
class PinchParams:
    pinch: float
    r: float = PINCH_RADIUS


def sample_pinch(rng: RngStream, complexity: float) -> PinchParams:
    """Draws: pinch ~ U[-c, 0.7c] (1)."""
    c = _check_complexity(complexity)
    return PinchParams(pinch=rng.uniform(-c, 0.7 * c))


def pinch_radius_map(d1: float, pinch: float, r: float = PINCH_RADIUS) -> float:
    """Source distance d2 for a pixel at distance d1 from the centre."""
    return math.sin(math.pi * d1 / (2.0 * r)) ** (-pinch) * d1


def apply_pinch(img: np.ndarray, p: PinchParams) -> np.ndarray:
    """Pixels inside the disk sample along their centre ray at d2; the
    exact centre and everything outside the disk are untouched."""
    dx = _GRID_X - CENTER
    dy = _GRID_Y - CENTER
    d1 = np.hypot(dx, dy)
    inside = (d1 <= p.r) & (d1 > 0.0)
    ratio = np.ones_like(d1)
    ratio[inside] = np.sin(np.pi * d1[inside] / (2.0 * p.r)) ** (-p.pinch)
    src_x = CENTER + dx * ratio
    src_y = CENTER + dy * ratio
    sampled = bilinear_map(img, src_x, src_y)
    return np.where(inside, sampled, img)


# ---------------------------------------------------------------------------
# Motion blur
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MotionBlurParams:
    angle: float  # degrees in [0, 360)
    length: float  # non-negative


def sample_motion_blur(rng: RngStream, complexity: float) -> MotionBlurParams:
    """Draws: angle (1), length magnitude (1 normal)."""
    c = _check_complexity(complexity)
    angle = rng.uniform(0.0, 360.0)
    length = abs(rng.normal(0.0, 3.0 * c))
    return MotionBlurParams(angle=angle, length=length)


def apply_motion_blur(img: np.ndarray, p: MotionBlurParams) -> np.ndarray:
    """Average of nearest-neighbour samples at unit steps 0..ceil(length)
    along the angle direction; out-of-bounds samples read 0."""
    if p.length < 0:
        raise ValueError("length must be non-negative")
    if p.length < 1.0:
        return img.copy()
    steps = int(math.ceil(p.length))
    theta = math.radians(p.angle)
    cx, sx = math.cos(theta), math.sin(theta)
    acc = np.zeros_like(img)
    for t in range(steps + 1):
        ix = iround(_GRID_X + t * cx)
        iy = iround(_GRID_Y + t * sx)
        inside = (ix >= 0) & (ix < SIZE) & (iy >= 0) & (iy < SIZE)
        acc += np.where(inside, img[np.clip(iy, 0, SIZE - 1), np.clip(ix, 0, SIZE - 1)], 0.0)
    return clamp01(acc / (steps + 1))


# ---------------------------------------------------------------------------
# Occlusion (paste a fragment rectangle, lighter pixel wins)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class OcclusionParams:
    applied: bool
    occluder: np.ndarray | None = None
    src_rect: tuple[int, int, int, int] | None = None  # x, y, w, h
    dst_pos: tuple[int, int] | None = None  # centre of the pasted rect


def sample_occlusion(rng: RngStream, complexity: float) -> OcclusionParams:
    """Draws: skip (1); if applied: occluder index, rect w, rect h,
    src x, src y, dst cx, dst cy (7 total)."""
    c = _check_complexity(complexity)
    if rng.bernoulli(SKIP_PROBABILITIES["occlusion"]):
        return OcclusionParams(applied=False)
    pool = banks.occluders()
    occ = pool[rng.integer(0, len(pool) - 1)]
    hi = min(2 + iround(14 * c), SIZE)
    w = rng.integer(2, hi)
    h = rng.integer(2, hi)
    sx = rng.integer(0, SIZE - w)
    sy = rng.integer(0, SIZE - h)
    dst = (iround(rng.normal(CENTER, 5.0)), iround(rng.normal(CENTER, 5.0)))
    return OcclusionParams(applied=True, occluder=occ, src_rect=(sx, sy, w, h), dst_pos=dst)


def apply_occlusion(img: np.ndarray, p: OcclusionParams) -> np.ndarray:
    if not p.applied:
        return img.copy()
    sx, sy, w, h = p.src_rect
    patch = p.occluder[sy : sy + h, sx : sx + w]
    # paste centred on dst_pos, clipped at the image borders
    x0 = p.dst_pos[0] - w // 2
    y0 = p.dst_pos[1] - h // 2
    out = img.copy()
    ox0, oy0 = max(x0, 0), max(y0, 0)
    ox1, oy1 = min(x0 + w, SIZE), min(y0 + h, SIZE)
    if ox0 >= ox1 or oy0 >= oy1:
        return out
    sub = patch[oy0 - y0 : oy1 - y0, ox0 - x0 : ox1 - x0]
    out[oy0:oy1, ox0:ox1] = np.maximum(out[oy0:oy1, ox0:ox1], sub)
    return clamp01(out)


# ---------------------------------------------------------------------------
# Gaussian smoothing (blend toward a blurred copy around sampled centres)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SmoothingParams:
    applied: bool
    kernel_size: int = 13
    variance: float = 2.0
    centers: tuple[tuple[int, int], ...] = ()


def sample_smoothing(rng: RngStream, complexity: float) -> SmoothingParams:
    """Draws: skip (1); if applied: kernel size, variance, centre count,
    one index per centre."""
    c = _check_complexity(complexity)
    if rng.bernoulli(SKIP_PROBABILITIES["smoothing"]):
        return SmoothingParams(applied=False)
    raw = rng.uniform(12.0, 12.0 + 20.0 * c)
    size = int(math.ceil(raw))
    if size % 2 == 0:
        size += 1
    variance = rng.uniform(2.0, 2.0 + 6.0 * c)
    n_centers = rng.integer(3, 3 + iround(10 * c))
    centers = []
    for _ in range(n_centers):
        idx = rng.integer(0, N_PIXELS - 1)
        centers.append((idx % SIZE, idx // SIZE))
    return SmoothingParams(applied=True, kernel_size=size, variance=variance, centers=tuple(centers))


def _cone_window(size: int) -> np.ndarray:
    half = (size - 1) // 2
    if half == 0:
        return np.ones((1, 1))
    dy, dx = np.mgrid[-half : half + 1, -half : half + 1].astype(np.float64)
    return np.clip(1.0 - np.sqrt(dx**2 + dy**2) / half, 0.0, 1.0)


def apply_smoothing(img: np.ndarray, p: SmoothingParams) -> np.ndarray:
    """out = (img + filtered * mask) / (mask + 1).

    filtered is the Gaussian-blurred image min-max normalized to [0, 1]
    (kept as-is when constant); mask sums a cone window of the kernel
    size at every sampled centre.
    """
    if not p.applied:
        return img.copy()
    if p.kernel_size < 1 or p.kernel_size % 2 == 0:
        raise ValueError("kernel_size must be odd and positive")
    f = convolve_gaussian(img, p.kernel_size, p.variance)
    fmin, fmax = f.min(), f.max()
    if fmax > fmin:
        f = (f - fmin) / (fmax - fmin)
    window = _cone_window(p.kernel_size)
    half = (p.kernel_size - 1) // 2
    mask = np.zeros_like(img)
    for cx, cy in p.centers:
        x0, y0 = cx - half, cy - half
        ox0, oy0 = max(x0, 0), max(y0, 0)
        ox1, oy1 = min(x0 + p.kernel_size, SIZE), min(y0 + p.kernel_size, SIZE)
        if ox0 >= ox1 or oy0 >= oy1:
            continue
        mask[oy0:oy1, ox0:ox1] += window[oy0 - y0 : oy1 - y0, ox0 - x0 : ox1 - x0]
    return clamp01((img + f * mask) / (mask + 1.0))


# ---------------------------------------------------------------------------
# Permute pixels (swap selected pixels with a random 4-neighbour)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class PermuteParams:
    applied: bool
    selected: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    directions: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))


_NEIGHBOR_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))  # left, right, up, down


def sample_permute(rng: RngStream, complexity: float) -> PermuteParams:
    """Draws: skip (1); if applied: distinct pixel selection, one
    direction per selected pixel."""
    c = _check_complexity(complexity)
    if rng.bernoulli(SKIP_PROBABILITIES["permute"]):
        return PermuteParams(applied=False)
    count = iround((c / 3.0) * N_PIXELS)
    selected = rng.choice_distinct(N_PIXELS, count).astype(np.int64)
    directions = rng.integers(0, 3, count).astype(np.int64)
    return PermuteParams(applied=True, selected=selected, directions=directions)


def apply_permute(img: np.ndarray, p: PermuteParams) -> np.ndarray:
    """Perform the listed swaps in order; swaps leaving the image are
    skipped."""
    if not p.applied or len(p.selected) == 0:
        return img.copy()
    out = img.copy()
    for idx, d in zip(p.selected, p.directions):
        y, x = divmod(int(idx), SIZE)
        ddx, ddy = _NEIGHBOR_OFFSETS[int(d)]
        nx, ny = x + ddx, y + ddy
        if 0 <= nx < SIZE and 0 <= ny < SIZE:
            out[y, x], out[ny, nx] = out[ny, nx], out[y, x]
    return clamp01(out)


# ---------------------------------------------------------------------------
# Additive Gaussian noise
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class GaussianNoiseParams:
    applied: bool
    sigma: float = 0.0
    noise: np.ndarray | None = None  # standard normals, scaled at apply time


def sample_gaussian_noise(rng: RngStream, complexity: float) -> GaussianNoiseParams:
    """Draws: skip (1); if applied: 32x32 standard normals."""
    c = _check_complexity(complexity)
    if rng.bernoulli(SKIP_PROBABILITIES["gaussian_noise"]):
        return GaussianNoiseParams(applied=False)
    return GaussianNoiseParams(applied=True, sigma=c / 10.0, noise=rng.normal(0.0, 1.0, (SIZE, SIZE)))


def apply_gaussian_noise(img: np.ndarray, p: GaussianNoiseParams) -> np.ndarray:
    if not p.applied:
        return img.copy()
    if p.sigma < 0:
        raise ValueError("sigma must be non-negative")
    return clamp01(img + p.sigma * p.noise)


# ---------------------------------------------------------------------------
# Background image addition
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class BackgroundParams:
    background: np.ndarray
    strength: float


def sample_background(rng: RngStream, complexity: float) -> BackgroundParams:
    """Draws: texture index (1), strength factor (1).

    strength = 0.8 * c * U[0.5, 1], so the glyph always stays brighter
    than the backdrop.
    """
    c = _check_complexity(complexity)
    pool = banks.textures()
    tex = pool[rng.integer(0, len(pool) - 1)]
    strength = 0.8 * c * rng.uniform(0.5, 1.0)
    return BackgroundParams(background=tex, strength=strength)


def apply_background(img: np.ndarray, p: BackgroundParams) -> np.ndarray:
    if not 0.0 <= p.strength <= 1.0:
        raise ValueError("strength must lie in [0, 1]")
    return clamp01(np.maximum(img, p.background * p.strength))


# ---------------------------------------------------------------------------
# Salt and pepper noise
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class SaltPepperParams:
    applied: bool
    fraction: float = 0.0
    positions: np.ndarray = field(default_factory=lambda: np.empty(0, dtype=np.int64))
    values: np.ndarray = field(default_factory=lambda: np.empty(0))


def sample_salt_pepper(rng: RngStream, complexity: float) -> SaltPepperParams:
    """Draws: skip (1); if applied: distinct positions, one U[0,1] value
    per position. The pixel count is round(0.2 * c * 1024)."""
    c = _check_complexity(complexity)
    if rng.bernoulli(SKIP_PROBABILITIES["salt_pepper"]):
        return SaltPepperParams(applied=False)
    fraction = 0.2 * c
    count = iround(fraction * N_PIXELS)
    positions = rng.choice_distinct(N_PIXELS, count).astype(np.int64)
    values = rng.uniform(0.0, 1.0, count)
    return SaltPepperParams(applied=True, fraction=fraction, positions=positions, values=values)


def apply_salt_pepper(img: np.ndarray, p: SaltPepperParams) -> np.ndarray:
    if not p.applied or len(p.positions) == 0:
        return img.copy()
    out = img.copy()
    out[p.positions // SIZE, p.positions % SIZE] = p.values
    return clamp01(out)


# ---------------------------------------------------------------------------
# Scratches (rotated, cropped, eroded line patches, lighter pixel wins)
# ---------------------------------------------------------------------------

@dataclass(eq=False)
class ScratchPatch:
    stroke: np.ndarray
    rotation: float  # degrees
    crop: tuple[int, int, int, int]  # x, y, w, h kept region


@dataclass(eq=False)
class ScratchParams:
    applied: bool
    patches: tuple[ScratchPatch, ...] = ()


_SCRATCH_ERODE_ELEM = ELEMENTS[2]  # plus-3x3
SCRATCH_EROSION_PASSES = 2


def sample_scratches(rng: RngStream, complexity: float) -> ScratchParams:
    """Draws: skip (1); if applied: patch count (1), then per patch:
    stroke index, rotation, crop w, crop h, crop x, crop y."""
    c = _check_complexity(complexity)
    if rng.bernoulli(SKIP_PROBABILITIES["scratches"]):
        return ScratchParams(applied=False)
    u = rng.random()
    n_patches = 1 if u < 0.5 else (2 if u < 0.8 else 3)
    pool = banks.strokes()
    patches = []
    for _ in range(n_patches):
        stroke = pool[rng.integer(0, len(pool) - 1)]
        rotation = rng.normal(0.0, 100.0 * c)
        w = rng.integer(16, SIZE)
        h = rng.integer(16, SIZE)
        x = rng.integer(0, SIZE - w)
        y = rng.integer(0, SIZE - h)
        patches.append(ScratchPatch(stroke=stroke, rotation=rotation, crop=(x, y, w, h)))
    return ScratchParams(applied=True, patches=tuple(patches))


def apply_scratches(img: np.ndarray, p: ScratchParams) -> np.ndarray:
    """Per patch: rotate (bicubic), keep only the crop rectangle, erode
    twice with the 3x3 plus element, then max-composite."""
    if not p.applied:
        return img.copy()
    out = img.copy()
    for patch in p.patches:
        line = rotate_image(patch.stroke, patch.rotation, sampler="bicubic")
        x, y, w, h = patch.crop
        kept = np.zeros_like(line)
        kept[y : y + h, x : x + w] = line[y : y + h, x : x + w]
        for _ in range(SCRATCH_EROSION_PASSES):
            kept = morph(kept, _SCRATCH_ERODE_ELEM, "erode")
        out = np.maximum(out, kept)
    return clamp01(out)


# ---------------------------------------------------------------------------
# Grey level and contrast changes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContrastParams:
    contrast: float
    invert: bool


def sample_contrast(rng: RngStream, complexity: float) -> ContrastParams:
    """Draws: contrast ~ U[1 - 0.85c, 1] (1), invert (1)."""
    c = _check_complexity(complexity)
    contrast = rng.uniform(1.0 - 0.85 * c, 1.0)
    return ContrastParams(contrast=contrast, invert=rng.bernoulli(0.5))


def apply_contrast(img: np.ndarray, p: ContrastParams) -> np.ndarray:
    """Map into [(1-C)/2, 1-(1-C)/2]; optionally invert polarity."""
    if not 0.0 <= p.contrast <= 1.0:
        raise ValueError("contrast must lie in [0, 1]")
    out = (1.0 - p.contrast) / 2.0 + p.contrast * img
    if p.invert:
        out = 1.0 - out
    return clamp01(out)


# ---------------------------------------------------------------------------
# Registry in canonical pipeline order
# ---------------------------------------------------------------------------

#: (name, sampler, applier) for all transforms, in the fixed order the
#: pipeline composes them: the geometric stage first, then the noise stage.
TRANSFORMS: tuple[tuple[str, object, object], ...] = (
    ("thickness", sample_thickness, apply_thickness),
    ("slant", sample_slant, apply_slant),
    ("affine", sample_affine, apply_affine),
    ("elastic", sample_elastic, apply_elastic),
    ("pinch", sample_pinch, apply_pinch),
    ("motion_blur", sample_motion_blur, apply_motion_blur),
    ("occlusion", sample_occlusion, apply_occlusion),
    ("smoothing", sample_smoothing, apply_smoothing),
    ("permute", sample_permute, apply_permute),
    ("gaussian_noise", sample_gaussian_noise, apply_gaussian_noise),
    ("background", sample_background, apply_background),
    ("salt_pepper", sample_salt_pepper, apply_salt_pepper),
    ("scratches", sample_scratches, apply_scratches),
    ("contrast", sample_contrast, apply_contrast),
)

TRANSFORM_NAMES: tuple[str, ...] = tuple(name for name, _, _ in TRANSFORMS)

#: The geometric ("transformation") stage used by the nistp preset.
GEOMETRIC_STAGE: tuple[str, ...] = TRANSFORM_NAMES[:5]
