"""IDX (MNIST container) parsing, serialization, and two-class encoding.

Image files: big-endian magic 2051, count, rows, cols, then count*rows*cols
pixel bytes row-major. Label files: magic 2049, count, then count label
bytes. Only 28x28 images and labels 0-9 are accepted, and payloads must be
exact: parse followed by serialize reproduces the input byte for byte.
"""
from __future__ import annotations

import gzip
import logging
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoding import downsample, normalize

log = logging.getLogger(__name__)

IMAGE_MAGIC = 2051
LABEL_MAGIC = 2049
ROWS = COLS = 28


class IdxFormatError(ValueError):
    """Malformed IDX bytes."""


def _read_header(data: bytes, fmt: str, what: str) -> tuple:
    size = struct.calcsize(fmt)
    if len(data) < size:
        raise IdxFormatError(f"{what}: header truncated at {len(data)} bytes")
    return struct.unpack(fmt, data[:size])


def parse_idx_images(data: bytes) -> np.ndarray:
    """Parse image bytes into a (count, 28, 28) uint8 array."""
    magic, count, rows, cols = _read_header(data, ">IIII", "image file")
    if magic == LABEL_MAGIC:
        raise IdxFormatError("label magic in image file")
    if magic != IMAGE_MAGIC:
        raise IdxFormatError(f"image file: bad magic 0x{magic:08x}")
    if (rows, cols) != (ROWS, COLS):
        raise IdxFormatError(f"image file: expected 28x28 images, got {rows}x{cols}")
    payload = data[16:]
    expected = count * ROWS * COLS
    if len(payload) < expected:
        raise IdxFormatError(
            f"image file: truncated payload, expected {expected} bytes, "
            f"got {len(payload)}"
        )
    if len(payload) > expected:
        raise IdxFormatError(
            f"image file: {len(payload) - expected} trailing bytes after payload"
        )
    return np.frombuffer(payload, dtype=np.uint8).reshape(count, ROWS, COLS).copy()


def parse_idx_labels(data: bytes) -> np.ndarray:
    """Parse label bytes into a (count,) uint8 array of digits 0-9."""
    magic, count = _read_header(data, ">II", "label file")
    if magic == IMAGE_MAGIC:
        raise IdxFormatError("image magic in label file")
    if magic != LABEL_MAGIC:
        raise IdxFormatError(f"label file: bad magic 0x{magic:08x}")
    payload = data[8:]
    if len(payload) < count:
        raise IdxFormatError(
            f"label file: truncated payload, expected {count} bytes, got {len(payload)}"
        )
    if len(payload) > count:
        raise IdxFormatError(
            f"label file: {len(payload) - count} trailing bytes after payload"
        )
    labels = np.frombuffer(payload, dtype=np.uint8).copy()
    bad = np.nonzero(labels > 9)[0]
    if bad.size:
        raise IdxFormatError(
            f"label file: label {labels[bad[0]]} out of range at index {bad[0]}"
        )
    return labels


def serialize_idx_images(images: np.ndarray) -> bytes:
    images = np.asarray(images, dtype=np.uint8)
    if images.ndim != 3 or images.shape[1:] != (ROWS, COLS):
        raise ValueError(f"expected (n, 28, 28) images, got {images.shape}")
    header = struct.pack(">IIII", IMAGE_MAGIC, images.shape[0], ROWS, COLS)
    return header + images.tobytes()


def serialize_idx_labels(labels: np.ndarray) -> bytes:
    labels = np.asarray(labels, dtype=np.uint8)
    if labels.ndim != 1 or (labels > 9).any():
        raise ValueError("labels must be a 1-D array of digits 0-9")
    return struct.pack(">II", LABEL_MAGIC, labels.shape[0]) + labels.tobytes()


def read_idx_bytes(path: str | Path) -> bytes:
    """Read a file, transparently gunzipping when the name ends in .gz."""
    path = Path(path)
    if path.suffix == ".gz":
        with gzip.open(path, "rb") as fh:
            return fh.read()
    return path.read_bytes()


@dataclass
class Dataset:
    """Parallel image and label arrays, optionally restricted to a digit pair."""

    images: np.ndarray
    labels: np.ndarray
    class_pair: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if len(self.images) != len(self.labels):
            raise ValueError(
                f"{len(self.images)} images but {len(self.labels)} labels"
            )
        if self.class_pair is not None:
            a, b = self.class_pair
            if not np.isin(self.labels, (a, b)).all():
                raise ValueError(f"labels outside class pair {self.class_pair}")

    def __len__(self) -> int:
        return len(self.labels)


def load_dataset(images_path: str | Path, labels_path: str | Path) -> Dataset:
    images = parse_idx_images(read_idx_bytes(images_path))
    labels = parse_idx_labels(read_idx_bytes(labels_path))
    return Dataset(images=images, labels=labels)


def filter_and_encode(
    dataset: Dataset, class_pair: tuple[int, int]
) -> list[tuple[np.ndarray, int]]:
    """Keep the two digits, binarize labels (a -> 0, b -> 1), pool and encode.

    Images whose pooled 4x4 block means are all zero cannot be amplitude
    encoded; they are dropped and the drop count logged.
    """
    a, b = class_pair
    if a == b:
        raise ValueError(f"class pair must be two distinct digits, got {class_pair}")
    encoded: list[tuple[np.ndarray, int]] = []
    dropped = 0
    for image, label in zip(dataset.images, dataset.labels):
        if label != a and label != b:
            continue
        pooled = downsample(image)
        if not pooled.any():
            dropped += 1
            continue
        encoded.append((normalize(pooled), 0 if label == a else 1))
    if dropped:
        log.info("dropped %d all-zero images while encoding", dropped)
    return encoded
