"""Labeled dataset container, CDS binary format, and P5 export.

CDS layout (all integers little-endian):

    bytes 0-3    magic "CDS1"
    bytes 4-5    version (u16, currently 1)
    bytes 6-7    reserved (u16, zero)
    bytes 8-15   item count (u64)
    then per item, a fixed 1025-byte record:
        1024 bytes  8-bit intensities, row-major (k encodes k/255)
        1 byte      label in 0..61

Dataset metadata (seed, preset, mix, ...) lives in a UTF-8 key=value
sidecar at ``<path>.meta``. Fixed-stride records keep random access O(1).
"""

from __future__ import annotations

import os
import struct
from dataclasses import dataclass, field

import numpy as np

from .imgcore import SIZE, iround

MAGIC = b"CDS1"
VERSION = 1
N_CLASSES = 62
_HEADER = struct.Struct("<4sHHQ")
_RECORD_SIZE = SIZE * SIZE + 1


class CdsError(Exception):
    """Base class for CDS file problems."""


class CdsBadMagic(CdsError):
    pass


class CdsVersionMismatch(CdsError):
    pass


class CdsTruncated(CdsError):
    pass


class CdsLabelRange(CdsError):
    pass


@dataclass(eq=False)
class LabeledDataset:
    """Images (n, 32, 32) in [0, 1] with labels in 0..61."""

    images: np.ndarray
    labels: np.ndarray
    meta: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.images = np.asarray(self.images, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.images.ndim != 3 or self.images.shape[1:] != (SIZE, SIZE):
            raise ValueError(f"images must be (n, {SIZE}, {SIZE})")
        if self.labels.shape != (self.images.shape[0],):
            raise ValueError("labels must align with images")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= N_CLASSES):
            raise ValueError("labels must lie in 0..61")

    def __len__(self) -> int:
        return self.images.shape[0]

    def matrix(self) -> np.ndarray:
        """Images flattened to (n, 1024) for training code."""
        return self.images.reshape(len(self), -1)

    def subset(self, index) -> "LabeledDataset":
        return LabeledDataset(self.images[index], self.labels[index], dict(self.meta))


@dataclass(frozen=True)
class Split:
    """Disjoint train/valid/test index ranges over one dataset."""

    train: tuple[int, int]
    valid: tuple[int, int]
    test: tuple[int, int]

    def __post_init__(self):
        spans = sorted([self.train, self.valid, self.test])
        for (a0, a1), (b0, b1) in zip(spans[:-1], spans[1:]):
            if a1 > b0 or a0 > a1:
                raise ValueError("split ranges must be well-formed and disjoint")

    def apply(self, ds: LabeledDataset) -> tuple[LabeledDataset, LabeledDataset, LabeledDataset]:
        if max(self.train[1], self.valid[1], self.test[1]) > len(ds):
            raise ValueError("split exceeds dataset size")
        return (
            ds.subset(slice(*self.train)),
            ds.subset(slice(*self.valid)),
            ds.subset(slice(*self.test)),
        )


def quantize(images: np.ndarray) -> np.ndarray:
    """Map [0, 1] reals to u8 via round(255 * v)."""
    return iround(np.asarray(images) * 255.0).astype(np.uint8)


def write_cds(ds: LabeledDataset, path: str | os.PathLike) -> None:
    """Write the dataset; round trips are bit-exact after one write."""
    records = np.empty((len(ds), _RECORD_SIZE), dtype=np.uint8)
    records[:, : SIZE * SIZE] = quantize(ds.images).reshape(len(ds), SIZE * SIZE)
    records[:, -1] = ds.labels.astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, VERSION, 0, len(ds)))
        fh.write(records.tobytes())
    if ds.meta:
        lines = [f"{k}={ds.meta[k]}" for k in sorted(ds.meta)]
        with open(f"{path}.meta", "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")


def read_cds(path: str | os.PathLike) -> LabeledDataset:
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise CdsTruncated(f"file shorter than the {_HEADER.size}-byte header")
    magic, version, _reserved, count = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise CdsBadMagic(f"bad magic {magic!r}")
    if version != VERSION:
        raise CdsVersionMismatch(f"unsupported version {version}")
    body = blob[_HEADER.size :]
    if len(body) != count * _RECORD_SIZE:
        raise CdsTruncated(
            f"expected {count * _RECORD_SIZE} record bytes, found {len(body)}"
        )
    records = np.frombuffer(body, dtype=np.uint8).reshape(count, _RECORD_SIZE) if count else np.empty((0, _RECORD_SIZE), dtype=np.uint8)
    labels = records[:, -1].astype(np.int64)
    if len(labels) and labels.max() >= N_CLASSES:
        raise CdsLabelRange(f"label {labels.max()} out of range 0..{N_CLASSES - 1}")
    images = records[:, : SIZE * SIZE].astype(np.float64).reshape(count, SIZE, SIZE) / 255.0
    meta: dict[str, str] = {}
    meta_path = f"{path}.meta"
    if os.path.exists(meta_path):
        with open(meta_path, encoding="utf-8") as fh:
            for line in fh:
                line = line.rstrip("\n")
                if line and "=" in line:
                    k, v = line.split("=", 1)
                    meta[k] = v
    return LabeledDataset(images=images, labels=labels, meta=meta)


def export_contact_sheet(ds: LabeledDataset, rows: int, cols: int, path: str | os.PathLike) -> None:
    """Tile the first rows*cols images into a binary P5 graymap.

    Tiles are separated by 2-px black gutters, so the sheet measures
    rows*32 + (rows-1)*2 by cols*32 + (cols-1)*2 pixels.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    if rows * cols > len(ds):
        raise ValueError(f"sheet needs {rows * cols} images, dataset has {len(ds)}")
    gap = 2
    height = rows * SIZE + (rows - 1) * gap
    width = cols * SIZE + (cols - 1) * gap
    sheet = np.zeros((height, width), dtype=np.uint8)
    for r in range(rows):
        for c in range(cols):
            tile = quantize(ds.images[r * cols + c])
            y0 = r * (SIZE + gap)
            x0 = c * (SIZE + gap)
            sheet[y0 : y0 + SIZE, x0 : x0 + SIZE] = tile
    with open(path, "wb") as fh:
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(sheet.tobytes())
