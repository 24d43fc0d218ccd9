#!/usr/bin/env python3
"""Reproduce the repo's shipped model on the sample digit data.

Hill-climbs binary weights on the train split of one digit pair and writes
the best model as JSON, then reports train and test accuracy under the
closed-form network. Deterministic for fixed flags.

Usage: python scripts/train_model.py [--classes 3,6] [--seed 7] [--out models/default.json]
"""
from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from qmlp.mnist import filter_and_encode, load_dataset
from qmlp.model_io import write_model
from qmlp.oracle import closed_form_finals
from qmlp.trainer import local_search


def accuracy(pairs, model) -> float:
    xs = np.stack([x for x, _ in pairs])
    labels = np.asarray([label for _, label in pairs])
    return float(np.mean(np.argmax(closed_form_finals(xs, model), axis=1) == labels))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--datadir", type=Path, default=Path("data"))
    parser.add_argument("--classes", default="3,6")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--iters", type=int, default=2000)
    parser.add_argument("--restarts", type=int, default=8)
    parser.add_argument("--out", type=Path, default=Path("models/default.json"))
    args = parser.parse_args()
    a, b = (int(v) for v in args.classes.split(","))

    train = filter_and_encode(
        load_dataset(
            args.datadir / "train-images-idx3-ubyte.gz",
            args.datadir / "train-labels-idx1-ubyte.gz",
        ),
        (a, b),
    )
    test = filter_and_encode(
        load_dataset(
            args.datadir / "t10k-images-idx3-ubyte.gz",
            args.datadir / "t10k-labels-idx1-ubyte.gz",
        ),
        (a, b),
    )

    result = local_search(
        train, seed=args.seed, max_iters=args.iters, restarts=args.restarts
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_model(result.model, args.out)
    print(f"wrote {args.out}")
    print(f"train accuracy {result.accuracy:.4f} ({len(train)} images, "
          f"restart seed {result.seed}, {len(result.trace) - 1} iterations)")
    print(f"test accuracy {accuracy(test, result.model):.4f} ({len(test)} images)")


if __name__ == "__main__":
    main()
