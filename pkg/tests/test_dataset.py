"""CDS round trips, corruption handling, splits, and contact sheets."""

import numpy as np
import pytest

from glyphlab.dataset import (
    CdsBadMagic,
    CdsError,
    CdsLabelRange,
    CdsTruncated,
    CdsVersionMismatch,
    LabeledDataset,
    Split,
    export_contact_sheet,
    read_cds,
    write_cds,
)
from glyphlab.imgcore import SIZE
from glyphlab.rng import RngStream


def make_dataset(n, seed=0):
    rng = RngStream(seed)
    images = rng.uniform(0.0, 1.0, (n, SIZE, SIZE))
    labels = rng.integers(0, 61, n)
    return LabeledDataset(images=images, labels=labels, meta={"seed": str(seed)})


class TestLabeledDataset:
    def test_validation(self):
        with pytest.raises(ValueError):
            LabeledDataset(images=np.zeros((3, 16, 16)), labels=np.zeros(3, dtype=int))
        with pytest.raises(ValueError):
            LabeledDataset(images=np.zeros((2, SIZE, SIZE)), labels=np.array([0, 62]))
        with pytest.raises(ValueError):
            LabeledDataset(images=np.zeros((2, SIZE, SIZE)), labels=np.array([0]))

    def test_matrix_view(self):
        ds = make_dataset(4)
        assert ds.matrix().shape == (4, 1024)
        assert np.array_equal(ds.matrix()[1], ds.images[1].ravel())

    def test_subset(self):
        ds = make_dataset(10)
        sub = ds.subset(ds.labels < 30)
        assert np.all(sub.labels < 30)


class TestSplit:
    def test_disjoint_ranges(self):
        split = Split(train=(0, 6), valid=(6, 8), test=(8, 10))
        ds = make_dataset(10)
        train, valid, test = split.apply(ds)
        assert len(train) == 6 and len(valid) == 2 and len(test) == 2
        assert np.array_equal(train.images, ds.images[:6])

    def test_overlap_rejected(self):
        with pytest.raises(ValueError):
            Split(train=(0, 6), valid=(5, 8), test=(8, 10))

    def test_out_of_range_rejected(self):
        split = Split(train=(0, 6), valid=(6, 8), test=(8, 12))
        with pytest.raises(ValueError):
            split.apply(make_dataset(10))


class TestCdsRoundTrip:
    def test_write_read_quantized_fixed_point(self, tmp_path):
        path = tmp_path / "a.cds"
        ds = make_dataset(20, seed=3)
        write_cds(ds, path)
        back = read_cds(path)
        assert np.array_equal(back.labels, ds.labels)
        # one quantization step, then bit-exact forever
        assert np.abs(back.images - ds.images).max() <= 0.5 / 255 + 1e-12
        write_cds(back, path)
        again = read_cds(path)
        assert np.array_equal(again.images, back.images)
        assert back.meta["seed"] == "3"

    def test_empty_dataset_header_only(self, tmp_path):
        path = tmp_path / "empty.cds"
        ds = LabeledDataset(images=np.zeros((0, SIZE, SIZE)), labels=np.zeros(0, dtype=int))
        write_cds(ds, path)
        assert path.stat().st_size == 16
        assert len(read_cds(path)) == 0

    def test_byte_identical_rewrites(self, tmp_path):
        ds = make_dataset(10, seed=4)
        p1, p2 = tmp_path / "x.cds", tmp_path / "y.cds"
        write_cds(ds, p1)
        write_cds(ds, p2)
        assert p1.read_bytes() == p2.read_bytes()
        assert (tmp_path / "x.cds.meta").read_bytes() == (tmp_path / "y.cds.meta").read_bytes()

    def test_many_random_roundtrips(self, tmp_path):
        for seed in range(25):
            path = tmp_path / f"r{seed}.cds"
            ds = make_dataset(3, seed=seed)
            write_cds(ds, path)
            mid = read_cds(path)
            write_cds(mid, path)
            assert np.array_equal(read_cds(path).images, mid.images)


class TestCdsErrors:
    def _valid_bytes(self, tmp_path):
        path = tmp_path / "v.cds"
        write_cds(make_dataset(2, seed=1), path)
        return bytearray(path.read_bytes())

    def test_bad_magic(self, tmp_path):
        blob = self._valid_bytes(tmp_path)
        blob[:4] = b"NOPE"
        bad = tmp_path / "bad.cds"
        bad.write_bytes(blob)
        with pytest.raises(CdsBadMagic):
            read_cds(bad)

    def test_version_mismatch(self, tmp_path):
        blob = self._valid_bytes(tmp_path)
        blob[4] = 9
        bad = tmp_path / "bad.cds"
        bad.write_bytes(blob)
        with pytest.raises(CdsVersionMismatch):
            read_cds(bad)

    def test_label_out_of_range(self, tmp_path):
        blob = self._valid_bytes(tmp_path)
        blob[-1] = 62
        bad = tmp_path / "bad.cds"
        bad.write_bytes(blob)
        with pytest.raises(CdsLabelRange):
            read_cds(bad)

    def test_truncation_fuzz_never_crashes(self, tmp_path):
        blob = self._valid_bytes(tmp_path)
        for cut in [0, 3, 15, 16, 17, 500, 1024, 1040, len(blob) - 1]:
            bad = tmp_path / "cut.cds"
            bad.write_bytes(blob[:cut])
            with pytest.raises(CdsError):
                read_cds(bad)

    def test_trailing_garbage_rejected(self, tmp_path):
        blob = self._valid_bytes(tmp_path) + b"xx"
        bad = tmp_path / "long.cds"
        bad.write_bytes(blob)
        with pytest.raises(CdsTruncated):
            read_cds(bad)


class TestContactSheet:
    def test_single_tile(self, tmp_path):
        ds = make_dataset(1, seed=6)
        path = tmp_path / "one.pgm"
        export_contact_sheet(ds, 1, 1, path)
        blob = path.read_bytes()
        header, rest = blob.split(b"\n", 1)
        assert header == b"P5"
        dims, rest = rest.split(b"\n", 1)
        assert dims == b"32 32"
        maxval, pixels = rest.split(b"\n", 1)
        assert maxval == b"255"
        arr = np.frombuffer(pixels, dtype=np.uint8).reshape(32, 32)
        assert np.array_equal(arr, np.floor(ds.images[0] * 255.0 + 0.5).astype(np.uint8))

    def test_two_by_two_dimensions(self, tmp_path):
        ds = make_dataset(4, seed=7)
        path = tmp_path / "four.pgm"
        export_contact_sheet(ds, 2, 2, path)
        blob = path.read_bytes()
        dims = blob.split(b"\n")[1]
        assert dims == b"66 66"
        pixels = blob.split(b"\n", 3)[3]
        arr = np.frombuffer(pixels, dtype=np.uint8).reshape(66, 66)
        # separator gutters stay background 0
        assert np.all(arr[32:34, :] == 0)
        assert np.all(arr[:, 32:34] == 0)

    def test_oversize_request_rejected(self, tmp_path):
        ds = make_dataset(3)
        with pytest.raises(ValueError):
            export_contact_sheet(ds, 2, 2, tmp_path / "no.pgm")
