"""Statevector simulator for the small gate set used by the network compiler.

Conventions shared by every module in this package:
  * qubit 0 is the least-significant bit of the amplitude index,
  * bitstrings are rendered with qubit n-1 leftmost.

Gate kernels act in place on the amplitude array through reshaped views
(one stride axis per involved qubit), never materializing gate matrices.
The dense-matrix reference lives in :mod:`qmlp.oracle` and is kept
deliberately different.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_INV_SQRT2 = 1.0 / math.sqrt(2.0)

#: gate kind -> number of qubit operands (controls first, target last)
GATE_ARITY = {"x": 1, "h": 1, "z": 1, "ry": 1, "cx": 2, "cz": 2, "ccx": 3}


@dataclass(frozen=True)
class Gate:
    """One elementary gate: kind, operand qubits, optional RY angle.

    ``qubits`` lists controls before the target (``cx``: (control, target),
    ``ccx``: (c0, c1, target)); ``cz`` is symmetric. ``stage`` is a free-form
    compiler annotation used for gate-count reports and QASM comments.
    """

    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None
    stage: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in GATE_ARITY:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        if len(qs) != GATE_ARITY[self.kind]:
            raise ValueError(
                f"{self.kind} expects {GATE_ARITY[self.kind]} qubits, got {qs}"
            )
        if len(set(qs)) != len(qs):
            raise ValueError(f"duplicate qubits in {self.kind} gate: {qs}")
        if any(q < 0 for q in qs):
            raise ValueError(f"negative qubit index in {qs}")
        if self.kind == "ry":
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"ry needs a finite angle, got {self.angle}")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} takes no angle")


def _check_init(init: np.ndarray, qubit_count: int) -> np.ndarray:
    init = np.asarray(init, dtype=np.complex128)
    if init.shape != (1 << qubit_count,):
        raise ValueError(
            f"init has length {init.shape}, expected 2**{qubit_count}"
        )
    norm = np.linalg.norm(init)
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"init vector norm {norm} is not 1 within 1e-10")
    return init


@dataclass(eq=False)
class Circuit:
    """An ordered gate list over ``qubit_count`` qubits.

    ``init``, when present, replaces the all-zero start state and is applied
    before any gate (direct amplitude injection; circuits carrying it cannot
    be exported to QASM). ``layout`` is optional compile-time register
    metadata and does not affect simulation.
    """

    qubit_count: int
    gates: list[Gate] = field(default_factory=list)
    init: np.ndarray | None = None
    layout: object | None = None

    def __post_init__(self) -> None:
        if self.qubit_count < 1:
            raise ValueError("qubit_count must be >= 1")
        for g in self.gates:
            self._check_gate(g)
        if self.init is not None:
            self.init = _check_init(self.init, self.qubit_count)

    def _check_gate(self, gate: Gate) -> None:
        for q in gate.qubits:
            if q >= self.qubit_count:
                raise ValueError(
                    f"gate {gate.kind} on qubit {q} exceeds circuit size "
                    f"{self.qubit_count}"
                )

    def add(self, gate: Gate) -> None:
        self._check_gate(gate)
        self.gates.append(gate)

    def extend(self, gates) -> None:
        for g in gates:
            self.add(g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Circuit):
            return NotImplemented
        if self.qubit_count != other.qubit_count or self.gates != other.gates:
            return False
        if (self.init is None) != (other.init is None):
            return False
        if self.init is not None and not np.array_equal(self.init, other.init):
            return False
        return True


def zero_state(n: int) -> np.ndarray:
    """|0...0> on n qubits."""
    psi = np.zeros(1 << n, dtype=np.complex128)
    psi[0] = 1.0
    return psi


def _qubit_count_of(state: np.ndarray) -> int:
    n = int(state.shape[0]).bit_length() - 1
    if 1 << n != state.shape[0]:
        raise ValueError(f"state length {state.shape[0]} is not a power of 2")
    return n


def _pair_view(psi: np.ndarray, q: int) -> np.ndarray:
    # axis 1 of the view is bit q
    return psi.reshape(-1, 2, 1 << q)


def _two_bit_view(psi: np.ndarray, qa: int, qb: int) -> tuple[np.ndarray, int, int]:
    """Reshape so two qubit bits become axes; returns (view, axis_a, axis_b)."""
    hi, lo = max(qa, qb), min(qa, qb)
    view = psi.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    return view, (1 if qa == hi else 3), (1 if qb == hi else 3)


def apply_gate(state: np.ndarray, gate: Gate) -> np.ndarray:
    """Apply ``gate`` to ``state`` in place and return it."""
    n = _qubit_count_of(state)
    for q in gate.qubits:
        if q >= n:
            raise ValueError(f"qubit {q} out of range for {n}-qubit state")
    kind = gate.kind
    if kind == "x":
        v = _pair_view(state, gate.qubits[0])
        tmp = v[:, 0, :].copy()
        v[:, 0, :] = v[:, 1, :]
        v[:, 1, :] = tmp
    elif kind == "z":
        v = _pair_view(state, gate.qubits[0])
        v[:, 1, :] *= -1.0
    elif kind == "h":
        v = _pair_view(state, gate.qubits[0])
        a = v[:, 0, :].copy()
        b = v[:, 1, :]
        v[:, 0, :] = (a + b) * _INV_SQRT2
        v[:, 1, :] = (a - b) * _INV_SQRT2
    elif kind == "ry":
        v = _pair_view(state, gate.qubits[0])
        c = math.cos(gate.angle / 2.0)
        s = math.sin(gate.angle / 2.0)
        a = v[:, 0, :].copy()
        b = v[:, 1, :]
        v[:, 0, :] = c * a - s * b
        v[:, 1, :] = s * a + c * b
    elif kind == "cx":
        ctrl, tgt = gate.qubits
        view, ax_c, ax_t = _two_bit_view(state, ctrl, tgt)
        sel: list[object] = [slice(None)] * 5
        sel[ax_c] = 1
        sel0 = list(sel)
        sel0[ax_t] = 0
        sel1 = list(sel)
        sel1[ax_t] = 1
        tmp = view[tuple(sel0)].copy()
        view[tuple(sel0)] = view[tuple(sel1)]
        view[tuple(sel1)] = tmp
    elif kind == "cz":
        qa, qb = gate.qubits
        view, ax_a, ax_b = _two_bit_view(state, qa, qb)
        sel = [slice(None)] * 5
        sel[ax_a] = 1
        sel[ax_b] = 1
        view[tuple(sel)] *= -1.0
    elif kind == "ccx":
        c0, c1, tgt = gate.qubits
        qs = sorted((c0, c1, tgt), reverse=True)
        q2, q1, q0 = qs
        view = state.reshape(
            -1, 2, 1 << (q2 - q1 - 1), 2, 1 << (q1 - q0 - 1), 2, 1 << q0
        )
        axis_of = {q2: 1, q1: 3, q0: 5}
        sel = [slice(None)] * 7
        sel[axis_of[c0]] = 1
        sel[axis_of[c1]] = 1
        sel0 = list(sel)
        sel0[axis_of[tgt]] = 0
        sel1 = list(sel)
        sel1[axis_of[tgt]] = 1
        tmp = view[tuple(sel0)].copy()
        view[tuple(sel0)] = view[tuple(sel1)]
        view[tuple(sel1)] = tmp
    else:  # pragma: no cover - Gate validation rejects unknown kinds
        raise ValueError(f"unknown gate kind {kind!r}")
    return state


def run(circuit: Circuit) -> np.ndarray:
    """Simulate the circuit from |0...0> (or its init vector)."""
    if circuit.init is not None:
        psi = circuit.init.astype(np.complex128, copy=True)
    else:
        psi = zero_state(circuit.qubit_count)
    for gate in circuit.gates:
        apply_gate(psi, gate)
    return psi


def marginal_prob_one(state: np.ndarray, qubit: int) -> float:
    """Probability that ``qubit`` measures 1: sum of |amp|^2 over set-bit states."""
    n = _qubit_count_of(state)
    if not 0 <= qubit < n:
        raise ValueError(f"qubit {qubit} out of range for {n}-qubit state")
    probs = np.abs(state) ** 2
    return float(probs.reshape(-1, 2, 1 << qubit)[:, 1, :].sum())


def bitstring(index: int, n: int) -> str:
    """Render a basis-state index with qubit n-1 leftmost."""
    return format(index, f"0{n}b")


def _splitmix64_uniforms(seed: int, count: int) -> np.ndarray:
    """Deterministic uniforms in [0, 1) from the splitmix64 mixer.

    Stream element i mixes ``seed + (i+1) * 0x9E3779B97F4A7C15`` (all
    arithmetic mod 2^64) and keeps the top 53 bits. Platform-independent.
    """
    inc = np.uint64(0x9E3779B97F4A7C15)
    m1 = np.uint64(0xBF58476D1CE4E5B9)
    m2 = np.uint64(0x94D049BB133111EB)
    idx = np.arange(1, count + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & 0xFFFFFFFFFFFFFFFF) + idx * inc
        z = (z ^ (z >> np.uint64(30))) * m1
        z = (z ^ (z >> np.uint64(27))) * m2
        z ^= z >> np.uint64(31)
    return (z >> np.uint64(11)).astype(np.float64) * 2.0**-53


def sample_counts(state: np.ndarray, shots: int, seed: int) -> dict[str, int]:
    """Draw ``shots`` basis states from |amp|^2 by inverse CDF.

    The CDF runs over basis states in ascending index order; uniforms come
    from the seeded splitmix64 stream, so identical (state, shots, seed)
    always yields identical counts.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    n = _qubit_count_of(state)
    cdf = np.cumsum(np.abs(state) ** 2)
    u = _splitmix64_uniforms(seed, shots)
    draws = np.searchsorted(cdf, u, side="right")
    draws = np.minimum(draws, len(cdf) - 1)  # guard the <1e-12 norm slack
    counts: dict[str, int] = {}
    for index, count in zip(*np.unique(draws, return_counts=True)):
        counts[bitstring(int(index), n)] = int(count)
    return counts


def analyze(counts: dict[str, int], n: int) -> list[float]:
    """Per-qubit one-frequencies from a counts map of length-n bitstrings."""
    total = 0
    ones = [0] * n
    for bits, count in counts.items():
        if len(bits) != n:
            raise ValueError(
                f"bitstring {bits!r} has length {len(bits)}, expected {n}"
            )
        total += count
        for q in range(n):
            if bits[n - 1 - q] == "1":
                ones[q] += count
    if total == 0:
        raise ValueError("counts map is empty")
    return [c / total for c in ones]
