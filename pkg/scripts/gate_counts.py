#!/usr/bin/env python3
"""Gate-cost study: per-stage counts and sign-stage scaling.

Prints a per-stage gate-count table for the shipped model over a few sample
images, then the sign-stage cost as a function of the number of negative
weights. One phase flip costs 2*zeros(i) + 5 gates, so flipping one sign at
a time is O(2^N) gates over N-qubit registers in the worst case; the
majority rule caps the flip set at half the states (104 gates for N = 4).

Usage: python scripts/gate_counts.py [--datadir data] [--model models/default.json]
"""
from __future__ import annotations

import argparse
from pathlib import Path

import numpy as np

from qmlp.compiler import compile_network, gate_count_report, sign_stage_gate_count
from qmlp.mnist import filter_and_encode, load_dataset
from qmlp.model_io import read_model


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--datadir", type=Path, default=Path("data"))
    parser.add_argument("--model", type=Path, default=Path("models/default.json"))
    parser.add_argument("--classes", default="3,6")
    parser.add_argument("--images", type=int, default=5)
    args = parser.parse_args()
    a, b = (int(v) for v in args.classes.split(","))

    model = read_model(args.model)
    pairs = filter_and_encode(
        load_dataset(
            args.datadir / "t10k-images-idx3-ubyte.gz",
            args.datadir / "t10k-labels-idx1-ubyte.gz",
        ),
        (a, b),
    )[: args.images]

    reports = [gate_count_report(compile_network(x, model)) for x, _ in pairs]
    stages = list(reports[0])
    print("per-stage gate counts (shipped model, synthesized prep):")
    print(f"  {'image':>5} " + " ".join(f"{s:>9}" for s in stages) + f" {'total':>7}")
    for i, report in enumerate(reports):
        row = " ".join(f"{report[s]:>9}" for s in stages)
        print(f"  {i:>5} {row} {sum(report.values()):>7}")

    print("\nsign-stage gates vs negative-weight count (worst placement):")
    rng = np.random.default_rng(0)
    for negatives in range(17):
        worst = 0
        for _ in range(200):
            w = np.ones(16, dtype=int)
            w[rng.choice(16, size=negatives, replace=False)] = -1
            worst = max(worst, sign_stage_gate_count(w))
        print(f"  {negatives:>2} negative weights -> <= {worst:>3} gates")


if __name__ == "__main__":
    main()
