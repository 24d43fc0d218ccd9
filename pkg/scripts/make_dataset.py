#!/usr/bin/env python3
"""Build the repo's sample IDX files from scikit-learn's bundled digits.

The 8x8 digit scans (intensities 0-16) ship inside scikit-learn, so no
download is needed. Each digit is upscaled to the 28x28 MNIST geometry
(3x nearest-neighbor blow-up to 24x24, centered with a 2-pixel border) and
rescaled to 0-255. A per-class 60/40 split produces train and test files
named like the MNIST originals. Output is deterministic.

Usage: python scripts/make_dataset.py [--outdir data]
"""
from __future__ import annotations

import argparse
import gzip
from pathlib import Path

import numpy as np
from sklearn.datasets import load_digits

from qmlp.mnist import serialize_idx_images, serialize_idx_labels

TRAIN_FRACTION = 0.6


def to_mnist_geometry(image8: np.ndarray) -> np.ndarray:
    big = np.kron(image8, np.ones((3, 3)))  # 24x24
    out = np.zeros((28, 28))
    out[2:26, 2:26] = big
    return np.round(out * 255.0 / 16.0).astype(np.uint8)


def split_per_class(labels: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    train_idx, test_idx = [], []
    for digit in range(10):
        idx = np.nonzero(labels == digit)[0]
        cut = int(len(idx) * TRAIN_FRACTION)
        train_idx.extend(idx[:cut])
        test_idx.extend(idx[cut:])
    return np.sort(train_idx), np.sort(test_idx)


def write(path: Path, payload: bytes) -> None:
    # mtime=0 keeps the gzip container byte-stable across rebuilds
    path.write_bytes(gzip.compress(payload, mtime=0))
    print(f"wrote {path} ({path.stat().st_size} bytes)")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--outdir", type=Path, default=Path("data"))
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    digits = load_digits()
    images = np.stack([to_mnist_geometry(img) for img in digits.images])
    labels = digits.target.astype(np.uint8)
    train_idx, test_idx = split_per_class(labels)

    write(args.outdir / "train-images-idx3-ubyte.gz",
          serialize_idx_images(images[train_idx]))
    write(args.outdir / "train-labels-idx1-ubyte.gz",
          serialize_idx_labels(labels[train_idx]))
    write(args.outdir / "t10k-images-idx3-ubyte.gz",
          serialize_idx_images(images[test_idx]))
    write(args.outdir / "t10k-labels-idx1-ubyte.gz",
          serialize_idx_labels(labels[test_idx]))
    print(f"{len(train_idx)} train / {len(test_idx)} test images")


if __name__ == "__main__":
    main()
