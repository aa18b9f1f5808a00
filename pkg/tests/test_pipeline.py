"""Pipeline composition, presets, glyph sources, and dataset generation."""

import numpy as np
import pytest

import glyphlab.transforms as tr
from glyphlab.glyphs import CLASS_CHARS
from glyphlab.imgcore import SIZE, new_image
from glyphlab.pipeline import (
    DEFAULT_MIX,
    FixedComplexity,
    PipelineSpec,
    SourceMix,
    UniformComplexity,
    generate_dataset,
    perturb,
    pick_source,
    preset_spec,
    standin_sources,
    synthetic_source,
)
from glyphlab.rng import RngStream


def glyph_image():
    return synthetic_source("all", seed=0).base_image(14)  # an 'E'


# ---------------------------------------------------------------------------
# Specs and presets
# ---------------------------------------------------------------------------

class TestPresets:
    def test_stage_lists(self):
        assert preset_spec("raw").stages == ()
        assert preset_spec("nistp").stages == (
            "thickness", "slant", "affine", "elastic", "pinch")
        assert preset_spec("p07").stages == tr.TRANSFORM_NAMES
        assert len(tr.TRANSFORM_NAMES) == 14

    def test_preset_complexity_mode(self):
        for name in ("nistp", "p07"):
            mode = preset_spec(name).complexity
            assert isinstance(mode, UniformComplexity)
            assert (mode.lo, mode.hi) == (0.0, 0.7)

    def test_unknown_preset_rejected(self):
        with pytest.raises(ValueError):
            preset_spec("mystery")

    def test_unknown_stage_rejected(self):
        with pytest.raises(ValueError):
            PipelineSpec(stages=("sharpen",), complexity=FixedComplexity(0.5))


class TestPerturb:
    def test_raw_is_identity(self):
        img = glyph_image()
        out = perturb(img, preset_spec("raw"), RngStream(1))
        assert np.array_equal(out, img)

    def test_fixed_zero_complexity_nistp_identity(self):
        img = glyph_image()
        spec = preset_spec("nistp", complexity=FixedComplexity(0.0))
        out = perturb(img, spec, RngStream(2))
        assert np.array_equal(out, img)

    def test_stage_registration_order_irrelevant(self):
        img = glyph_image()
        shuffled = PipelineSpec(
            stages=("pinch", "affine", "thickness", "elastic", "slant"),
            complexity=UniformComplexity(0.0, 0.7),
        )
        a = perturb(img, preset_spec("nistp"), RngStream(3))
        b = perturb(img, shuffled, RngStream(3))
        assert np.array_equal(a, b)

    def test_geometric_prefix_shared_with_full_pipeline(self):
        # same stream: the full pipeline agrees with the geometric preset
        # exactly up to and including the pinch stage
        img = glyph_image()
        trace_n, trace_p = [], []
        perturb(img, preset_spec("nistp"), RngStream(4), trace=trace_n)
        perturb(img, preset_spec("p07"), RngStream(4), trace=trace_p)
        for (name_n, snap_n), (name_p, snap_p) in zip(trace_n[:5], trace_p[:5]):
            assert name_n == name_p
            assert np.array_equal(snap_n, snap_p), name_n
        # raw passes stages through untouched, p07 keeps deforming
        assert np.array_equal(trace_n[-1][1], trace_n[4][1])

    def test_toggling_stages_never_shifts_the_stream(self):
        # disabled stages still consume their sampling draws, so the
        # stream lands in the same position whatever subset ran
        img = glyph_image()
        mode = UniformComplexity(0.0, 0.7)
        specs = [
            PipelineSpec(stages=(), complexity=mode),
            preset_spec("nistp", complexity=mode),
            preset_spec("p07", complexity=mode),
        ]
        streams = [RngStream(5) for _ in specs]
        for spec, stream in zip(specs, streams):
            perturb(img, spec, stream)
        probes = [s.random() for s in streams]
        assert probes[0] == probes[1] == probes[2]

    def test_disabled_middle_stage_leaves_snapshot_unchanged(self):
        img = glyph_image()
        without_elastic = PipelineSpec(
            stages=("thickness", "slant", "affine", "pinch"),
            complexity=FixedComplexity(0.6),
        )
        trace = []
        perturb(img, without_elastic, RngStream(5), trace=trace)
        names = [name for name, _ in trace]
        assert names[:5] == ["thickness", "slant", "affine", "elastic", "pinch"]
        # elastic was sampled but not applied
        assert np.array_equal(trace[3][1], trace[2][1])

    def test_determinism(self):
        img = glyph_image()
        spec = preset_spec("p07")
        a = perturb(img, spec, RngStream(6))
        b = perturb(img, spec, RngStream(6))
        assert np.array_equal(a, b)

    def test_complexity_monotone_statistically(self):
        sources = synthetic_source("all", seed=1)
        diffs = {}
        for kappa in (0.0, 0.2, 0.5, 0.8):
            spec = PipelineSpec(stages=tr.TRANSFORM_NAMES, complexity=FixedComplexity(kappa))
            deltas = []
            for i in range(120):
                rng = RngStream(1000 + i)
                img, _ = sources.draw(rng)
                out = perturb(img, spec, rng)
                deltas.append(np.abs(out - img).mean())
            diffs[kappa] = (np.mean(deltas), np.std(deltas) / np.sqrt(len(deltas)))
        kappas = sorted(diffs)
        for lo, hi in zip(kappas[:-1], kappas[1:]):
            assert diffs[hi][0] >= diffs[lo][0] - diffs[hi][1], (lo, hi, diffs)


# ---------------------------------------------------------------------------
# Glyph sources
# ---------------------------------------------------------------------------

class TestSyntheticSource:
    def test_digit_style_labels(self):
        src = synthetic_source("digits", seed=0)
        rng = RngStream(1)
        labels = {src.draw(rng)[1] for _ in range(300)}
        assert labels <= set(range(10))
        assert len(labels) == 10

    def test_all_style_label_frequencies(self):
        src = synthetic_source("all", seed=0)
        rng = RngStream(2)
        counts = np.zeros(62)
        n = 10000
        for _ in range(n):
            counts[src.draw(rng)[1]] += 1
        freqs = counts / n
        assert np.all(np.abs(freqs - 1 / 62) <= 0.2 / 62 + 3 * np.sqrt((1 / 62) / n))

    def test_zero_jitter_reproduces_base(self):
        src = synthetic_source("all", seed=0, jitter_px=0.0, scale_jitter=0.0)
        rng = RngStream(3)
        seen = {}
        for _ in range(200):
            img, label = src.draw(rng)
            if label in seen:
                assert np.array_equal(img, seen[label])
            seen[label] = img

    def test_images_valid(self):
        src = synthetic_source("all", seed=5)
        rng = RngStream(4)
        for _ in range(50):
            img, label = src.draw(rng)
            assert img.shape == (SIZE, SIZE)
            assert img.min() >= 0.0 and img.max() <= 1.0
            assert 0 <= label < 62

    def test_label_char_map(self):
        assert CLASS_CHARS[0] == "0" and CLASS_CHARS[9] == "9"
        assert CLASS_CHARS[10] == "A" and CLASS_CHARS[35] == "Z"
        assert CLASS_CHARS[36] == "a" and CLASS_CHARS[61] == "z"

    def test_sources_differ_in_rendering(self):
        sources = standin_sources()
        imgs = [s.base_image(0) for s in sources.values()]
        for i in range(len(imgs)):
            for j in range(i + 1, len(imgs)):
                assert not np.array_equal(imgs[i], imgs[j])

    def test_unknown_style_rejected(self):
        with pytest.raises(ValueError):
            synthetic_source("greek")


# ---------------------------------------------------------------------------
# Source mixing
# ---------------------------------------------------------------------------

class TestSourceMix:
    def test_weights_must_sum_to_one(self):
        with pytest.raises(ValueError):
            SourceMix.from_dict({"a": 0.5, "b": 0.6})
        SourceMix.from_dict({"a": 0.5, "b": 0.5})

    def test_default_mix(self):
        assert sum(DEFAULT_MIX.values()) == pytest.approx(1.0)
        assert DEFAULT_MIX["nist"] == 0.40

    def test_pick_source_frequencies(self):
        mix = SourceMix.from_dict(DEFAULT_MIX)
        rng = RngStream(7)
        n = 100000
        counts = {name: 0 for name in mix.names()}
        for _ in range(n):
            counts[pick_source(rng, mix)] += 1
        for name, weight in DEFAULT_MIX.items():
            assert abs(counts[name] / n - weight) < 0.01, name


# ---------------------------------------------------------------------------
# Dataset generation
# ---------------------------------------------------------------------------

class TestGenerateDataset:
    def test_raw_single_source(self):
        ds = generate_dataset(
            50, {"nist": 1.0}, preset_spec("raw"), seed=1,
            sources={"nist": synthetic_source("all", seed=104)})
        assert len(ds) == 50
        assert ds.images.min() >= 0 and ds.images.max() <= 1
        assert ds.meta["preset"] == "raw"

    def test_deterministic(self):
        spec = preset_spec("p07")
        a = generate_dataset(40, DEFAULT_MIX, spec, seed=9)
        b = generate_dataset(40, DEFAULT_MIX, spec, seed=9)
        assert np.array_equal(a.images, b.images)
        assert np.array_equal(a.labels, b.labels)

    def test_seed_changes_content(self):
        spec = preset_spec("nistp")
        a = generate_dataset(20, DEFAULT_MIX, spec, seed=1)
        b = generate_dataset(20, DEFAULT_MIX, spec, seed=2)
        assert not np.array_equal(a.images, b.images)

    def test_parallel_matches_serial(self):
        spec = preset_spec("p07")
        serial = generate_dataset(48, DEFAULT_MIX, spec, seed=3, workers=1)
        parallel = generate_dataset(48, DEFAULT_MIX, spec, seed=3, workers=2)
        assert np.array_equal(serial.images, parallel.images)
        assert np.array_equal(serial.labels, parallel.labels)

    def test_item_streams_order_independent(self):
        # item i depends only on (seed, i): a prefix of a longer run
        # matches a shorter run exactly
        spec = preset_spec("nistp")
        small = generate_dataset(10, DEFAULT_MIX, spec, seed=4)
        large = generate_dataset(25, DEFAULT_MIX, spec, seed=4)
        assert np.array_equal(small.images, large.images[:10])

    def test_unregistered_source_rejected(self):
        with pytest.raises(ValueError):
            generate_dataset(5, {"made_up": 1.0}, preset_spec("raw"), seed=0)

    def test_n_must_be_positive(self):
        with pytest.raises(ValueError):
            generate_dataset(0, DEFAULT_MIX, preset_spec("raw"), seed=0)
