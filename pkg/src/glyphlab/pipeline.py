"""Transform composition, dataset presets, and glyph sources.

``perturb`` runs the canonical transform order. For reproducibility the
sampler of *every* transform is exercised for each image, whether or not
the stage is enabled in the spec; only enabled stages are applied. This
keeps each stage's randomness independent of which other stages are
switched on, so e.g. a nistp image and a p07 image generated from the
same stream agree exactly through the geometric stage.

Presets:
  * raw    - no stages, images pass through untouched,
  * nistp  - geometric stage only (thickness .. pinch),
  * p07    - all 14 stages,
with per-stage complexity drawn uniformly from [0, 0.7] for nistp/p07.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import transforms as tr
from .dataset import LabeledDataset
from .glyphs import CLASS_CHARS, render_glyph
from .imgcore import CENTER, SIZE, bilinear_map
from .rng import RngStream

PRESET_NAMES = ("raw", "nistp", "p07")


@dataclass(frozen=True)
class FixedComplexity:
    value: float

    def draw(self, rng: RngStream) -> float:
        return self.value


@dataclass(frozen=True)
class UniformComplexity:
    lo: float
    hi: float

    def draw(self, rng: RngStream) -> float:
        return rng.uniform(self.lo, self.hi)


@dataclass(frozen=True)
class PipelineSpec:
    """Which stages run and how each stage's complexity is chosen."""

    stages: tuple[str, ...]
    complexity: FixedComplexity | UniformComplexity
    preset: str = "custom"

    def __post_init__(self):
        unknown = set(self.stages) - set(tr.TRANSFORM_NAMES)
        if unknown:
            raise ValueError(f"unknown stages: {sorted(unknown)}")

    def stage_set(self) -> frozenset[str]:
        return frozenset(self.stages)


def preset_spec(name: str, complexity: FixedComplexity | UniformComplexity | None = None) -> PipelineSpec:
    """Build one of the named presets (raw, nistp, p07)."""
    mode = complexity if complexity is not None else UniformComplexity(0.0, 0.7)
    if name == "raw":
        return PipelineSpec(stages=(), complexity=FixedComplexity(0.0), preset="raw")
    if name == "nistp":
        return PipelineSpec(stages=tr.GEOMETRIC_STAGE, complexity=mode, preset="nistp")
    if name == "p07":
        return PipelineSpec(stages=tr.TRANSFORM_NAMES, complexity=mode, preset="p07")
    raise ValueError(f"unknown preset {name!r}; expected one of {PRESET_NAMES}")


def perturb(img: np.ndarray, spec: PipelineSpec, rng: RngStream, trace: list | None = None) -> np.ndarray:
    """Send one image through the pipeline.

    When ``trace`` is a list, (stage_name, image_after_stage) snapshots
    are appended for every canonical stage.
    """
    enabled = spec.stage_set()
    out = img
    for name, sample, apply in tr.TRANSFORMS:
        c = spec.complexity.draw(rng)
        params = sample(rng, c)
        if name in enabled:
            out = apply(out, params)
        if trace is not None:
            trace.append((name, out.copy()))
    return out.copy() if out is img else out


# ---------------------------------------------------------------------------
# Glyph sources
# ---------------------------------------------------------------------------

_STYLE_LABELS = {
    "digits": tuple(range(0, 10)),
    "upper": tuple(range(10, 36)),
    "lower": tuple(range(36, 62)),
    "all": tuple(range(0, 62)),
}


class GlyphSource:
    """Source of labeled clean glyph images.

    ``draw(rng)`` consumes a fixed number of draws (label pick + 3 jitter
    draws) and returns a (32x32 image, label) pair.
    """

    def __init__(
        self,
        name: str = "synthetic",
        style: str = "all",
        seed: int = 0,
        jitter_px: float = 1.0,
        scale_jitter: float = 0.05,
        stroke_width: float = 2.2,
        softness: float = 0.7,
        shear: float = 0.0,
    ):
        if style not in _STYLE_LABELS:
            raise ValueError(f"unknown style {style!r}")
        self.name = name
        self.style = style
        self.seed = int(seed)
        self.jitter_px = float(jitter_px)
        self.scale_jitter = float(scale_jitter)
        self.labels = _STYLE_LABELS[style]
        # per-glyph width variation keyed by the source seed gives each
        # source its own rendering identity
        widths = RngStream(self.seed, spawn_key=(0xA1,)).uniform(0.85, 1.15, len(CLASS_CHARS))
        self._params = [
            (stroke_width * widths[i], softness, shear) for i in range(len(CLASS_CHARS))
        ]
        self._base: dict[int, np.ndarray] = {}

    def base_image(self, label: int) -> np.ndarray:
        if label not in self._base:
            w, soft, shear = self._params[label]
            self._base[label] = render_glyph(CLASS_CHARS[label], width=w, softness=soft, shear=shear)
        return self._base[label]

    def draw(self, rng: RngStream) -> tuple[np.ndarray, int]:
        label = self.labels[rng.integer(0, len(self.labels) - 1)]
        scale = 1.0 + rng.uniform(-self.scale_jitter, self.scale_jitter)
        tx = rng.uniform(-self.jitter_px, self.jitter_px)
        ty = rng.uniform(-self.jitter_px, self.jitter_px)
        base = self.base_image(label)
        if scale == 1.0 and tx == 0.0 and ty == 0.0:
            return base.copy(), label
        xs, ys = np.meshgrid(np.arange(SIZE, dtype=np.float64), np.arange(SIZE, dtype=np.float64))
        src_x = CENTER + (xs - CENTER - tx) / scale
        src_y = CENTER + (ys - CENTER - ty) / scale
        return bilinear_map(base, src_x, src_y), label


def synthetic_source(style: str = "all", seed: int = 0, **kwargs) -> GlyphSource:
    """Stroke-skeleton glyph source with small translation/scale jitter."""
    return GlyphSource(name=kwargs.pop("name", "synthetic"), style=style, seed=seed, **kwargs)


def standin_sources() -> dict[str, GlyphSource]:
    """The four desk-scale stand-in sources with distinct rendering
    statistics (stroke width, jitter, shear)."""
    return {
        "fonts": GlyphSource("fonts", seed=101, stroke_width=1.8, softness=0.55, jitter_px=0.6, scale_jitter=0.04),
        "captcha": GlyphSource("captcha", seed=102, stroke_width=2.6, softness=0.9, jitter_px=1.0, scale_jitter=0.05, shear=0.12),
        "ocr": GlyphSource("ocr", seed=103, stroke_width=2.0, softness=0.5, jitter_px=0.4, scale_jitter=0.03),
        "nist": GlyphSource("nist", seed=104, stroke_width=2.4, softness=0.8, jitter_px=1.0, scale_jitter=0.05),
    }


# ---------------------------------------------------------------------------
# Source mixing and dataset generation
# ---------------------------------------------------------------------------

DEFAULT_MIX = {"fonts": 0.10, "captcha": 0.25, "ocr": 0.25, "nist": 0.40}


@dataclass(frozen=True)
class SourceMix:
    """Named source weights; must sum to 1 (tolerance 1e-9)."""

    weights: tuple[tuple[str, float], ...]

    @classmethod
    def from_dict(cls, weights: dict[str, float]) -> "SourceMix":
        return cls(weights=tuple(sorted(weights.items())))

    def __post_init__(self):
        total = sum(w for _, w in self.weights)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"mix weights must sum to 1, got {total}")
        if any(w < 0 for _, w in self.weights):
            raise ValueError("mix weights must be non-negative")

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.weights)


def pick_source(rng: RngStream, mix: SourceMix) -> str:
    """Select a source name by mix weight (one uniform draw)."""
    u = rng.random()
    acc = 0.0
    for name, w in mix.weights:
        acc += w
        if u < acc:
            return name
    return mix.weights[-1][0]


def _generate_item(sources: dict[str, GlyphSource], mix: SourceMix, spec: PipelineSpec,
                   seed: int, index: int) -> tuple[np.ndarray, int]:
    rng = RngStream(seed).substream(index)
    name = pick_source(rng, mix)
    img, label = sources[name].draw(rng)
    return perturb(img, spec, rng), label


_worker_state: dict = {}


def _worker_init(sources, mix, spec, seed):
    _worker_state.update(sources=sources, mix=mix, spec=spec, seed=seed)


def _worker_run(index: int):
    s = _worker_state
    img, label = _generate_item(s["sources"], s["mix"], s["spec"], s["seed"], index)
    return index, img, label


def generate_dataset(
    n: int,
    mix: SourceMix | dict[str, float],
    spec: PipelineSpec,
    seed: int,
    sources: dict[str, GlyphSource] | None = None,
    workers: int = 1,
) -> LabeledDataset:
    """Generate n labeled images; item i depends only on (seed, i).

    Serial and parallel runs produce byte-identical datasets because each
    item owns the substream keyed by its index.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(mix, dict):
        mix = SourceMix.from_dict(mix)
    if sources is None:
        sources = standin_sources()
    missing = set(mix.names()) - set(sources)
    if missing:
        raise ValueError(f"mix references unregistered sources: {sorted(missing)}")

    images = np.empty((n, SIZE, SIZE), dtype=np.float64)
    labels = np.empty(n, dtype=np.int64)
    if workers <= 1:
        for i in range(n):
            img, label = _generate_item(sources, mix, spec, seed, i)
            images[i] = img
            labels[i] = label
    else:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_worker_init, initargs=(sources, mix, spec, seed)
        ) as pool:
            for i, img, label in pool.map(_worker_run, range(n), chunksize=max(1, n // (8 * workers))):
                images[i] = img
                labels[i] = label

    meta = {
        "seed": str(seed),
        "preset": spec.preset,
        "n": str(n),
        "mix": ",".join(f"{name}:{w:g}" for name, w in mix.weights),
    }
    return LabeledDataset(images=images, labels=labels, meta=meta)
