"""Independent verification paths for the simulator and the compiled network.

Two deliberately different routes:
  * :func:`naive_run` rebuilds every gate as a dense 2^n x 2^n matrix from
    identity tensor products and multiplies it into the state (small
    circuits only) -- a cross-check for the strided kernels in
    :mod:`qmlp.sim`.
  * :func:`closed_form_network` evaluates the network's probabilities
    directly from the weights, never touching a circuit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compiler import QNNModel
from .sim import Circuit, zero_state

NAIVE_MAX_QUBITS = 10

_I2 = np.eye(2, dtype=np.complex128)
_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_Z = np.diag([1.0, -1.0]).astype(np.complex128)
_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2.0)
_P1 = np.diag([0.0, 1.0]).astype(np.complex128)


def _embed(n: int, factors: dict[int, np.ndarray]) -> np.ndarray:
    """kron product over all n qubit slots; qubit 0 is the last factor (LSB)."""
    m = np.eye(1, dtype=np.complex128)
    for q in range(n - 1, -1, -1):
        m = np.kron(m, factors.get(q, _I2))
    return m


def _ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def gate_matrix(gate, n: int) -> np.ndarray:
    """Full 2^n x 2^n unitary of one gate.

    Controlled gates use U = I + embed(P1 on controls, (V - I) on target),
    which adds the controlled action only on the all-controls-one subspace.
    """
    kind = gate.kind
    if kind in ("x", "h", "z", "ry"):
        single = {"x": _X, "h": _H, "z": _Z}.get(kind)
        if single is None:
            single = _ry_matrix(gate.angle)
        return _embed(n, {gate.qubits[0]: single})
    if kind == "cx":
        c, t = gate.qubits
        return np.eye(1 << n, dtype=np.complex128) + _embed(n, {c: _P1, t: _X - _I2})
    if kind == "cz":
        a, b = gate.qubits
        return np.eye(1 << n, dtype=np.complex128) + _embed(n, {a: _P1, b: _Z - _I2})
    if kind == "ccx":
        c0, c1, t = gate.qubits
        return np.eye(1 << n, dtype=np.complex128) + _embed(
            n, {c0: _P1, c1: _P1, t: _X - _I2}
        )
    raise ValueError(f"unknown gate kind {kind!r}")


def naive_run(circuit: Circuit) -> np.ndarray:
    """Dense-matrix simulation; the reference the fast kernels are held to."""
    n = circuit.qubit_count
    if n > NAIVE_MAX_QUBITS:
        raise ValueError(
            f"naive_run builds dense 2^n x 2^n matrices; {n} qubits exceeds "
            f"the {NAIVE_MAX_QUBITS}-qubit cap"
        )
    if circuit.init is not None:
        psi = circuit.init.astype(np.complex128, copy=True)
    else:
        psi = zero_state(n)
    for gate in circuit.gates:
        psi = gate_matrix(gate, n) @ psi
    return psi


@dataclass(frozen=True)
class NetworkProbabilities:
    """Per-stage one-probabilities of the two-hidden/two-output network."""

    hidden: tuple[float, float]
    raw_output: tuple[float, float]
    final_output: tuple[float, float]


def _check_encoded(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (16,):
        raise ValueError(f"encoded input must have 16 entries, got shape {x.shape}")
    if (x < 0).any():
        raise ValueError("encoded input entries must be nonnegative")
    norm = float(np.linalg.norm(x))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"encoded input norm {norm} is not 1 within 1e-10")
    return x


def _stage_probs(
    xs: np.ndarray, model: QNNModel
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Batch network probabilities; xs has shape (m, 16)."""
    hidden = np.clip((xs @ model.w1.T) ** 2 / 16.0, 0.0, 1.0)  # (m, 2)
    s_one = np.sqrt(hidden)
    s_zero = np.sqrt(1.0 - hidden)
    raw = np.empty_like(hidden)
    for j in range(2):
        terms = s_zero + model.w2[j] * s_one  # (m, 2)
        raw[:, j] = 0.25 * np.prod(terms, axis=1) ** 2
    final = np.empty_like(raw)
    for j in range(2):
        gamma = model.norm_para[j]
        if model.norm_flag[j]:
            final[:, j] = raw[:, j] * gamma
        else:
            final[:, j] = 1.0 - (1.0 - raw[:, j]) * (1.0 - gamma)
    return hidden, raw, final


def closed_form_network(x: np.ndarray, model: QNNModel) -> NetworkProbabilities:
    """Exact probabilities of the compiled network, from arithmetic alone.

    hidden_i  = (w1_i . x)^2 / 16
    raw_j     = 1/4 * prod_i (sqrt(1-hidden_i) + w2_ji * sqrt(hidden_i))^2
    final_j   = raw_j * gamma_j                  if norm_flag_j
              = 1 - (1-raw_j) * (1-gamma_j)      otherwise
    """
    x = _check_encoded(x)
    hidden, raw, final = _stage_probs(x[np.newaxis, :], model)
    return NetworkProbabilities(
        hidden=(float(hidden[0, 0]), float(hidden[0, 1])),
        raw_output=(float(raw[0, 0]), float(raw[0, 1])),
        final_output=(float(final[0, 0]), float(final[0, 1])),
    )


def closed_form_finals(xs: np.ndarray, model: QNNModel) -> np.ndarray:
    """Final-output probabilities for a batch of encoded inputs, shape (m, 2)."""
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 2 or xs.shape[1] != 16:
        raise ValueError(f"expected shape (m, 16), got {xs.shape}")
    return _stage_probs(xs, model)[2]


def classify(final_probabilities) -> int:
    """Index of the maximum probability; ties go to the lowest index."""
    probs = np.asarray(final_probabilities, dtype=np.float64)
    if probs.size == 0:
        raise ValueError("cannot classify an empty probability vector")
    return int(np.argmax(probs))
