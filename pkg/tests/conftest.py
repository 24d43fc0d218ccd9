"""Shared builders for randomized circuit and network tests."""
from __future__ import annotations

import numpy as np
import pytest

from qmlp.compiler import QNNModel
from qmlp.sim import Circuit, Gate

GATE_KINDS = ("x", "h", "z", "ry", "cx", "cz", "ccx")


def pytest_runtest_logreport(report):
    # acceptance tests print their own PASS lines; mirror failures the same way
    if report.when == "call" and report.failed and "test_acceptance" in report.nodeid:
        print(f"\nFAIL {report.nodeid.split('::')[-1]}")


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240811)


def random_gate(rng: np.random.Generator, n: int) -> Gate:
    kinds = [k for k in GATE_KINDS if n >= {"cx": 2, "cz": 2, "ccx": 3}.get(k, 1)]
    kind = kinds[rng.integers(len(kinds))]
    arity = {"cx": 2, "cz": 2, "ccx": 3}.get(kind, 1)
    qubits = tuple(int(q) for q in rng.choice(n, size=arity, replace=False))
    angle = float(rng.uniform(-np.pi, np.pi)) if kind == "ry" else None
    return Gate(kind, qubits, angle=angle)


def random_circuit(rng: np.random.Generator, n: int, n_gates: int) -> Circuit:
    return Circuit(qubit_count=n, gates=[random_gate(rng, n) for _ in range(n_gates)])


def random_unit_nonneg(rng: np.random.Generator, size: int = 16) -> np.ndarray:
    v = rng.uniform(0.0, 1.0, size=size)
    return v / np.linalg.norm(v)


def random_model(rng: np.random.Generator) -> QNNModel:
    return QNNModel(
        w1=rng.choice((-1, 1), size=(2, 16)),
        w2=rng.choice((-1, 1), size=(2, 2)),
        norm_flag=(bool(rng.integers(2)), bool(rng.integers(2))),
        norm_para=(float(rng.uniform()), float(rng.uniform())),
    )
