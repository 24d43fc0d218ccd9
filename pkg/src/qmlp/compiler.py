"""Compile a binary-weight 16-2-2 perceptron plus one encoded input into a circuit.

Stages, in emission order, each tagged on its gates:
  prep       state preparation of the input register (or a direct init block)
  sign       per-negative-weight phase flips (X-conjugated 3-controlled-Z)
  quadratic  Hadamard accumulation of the weighted sum plus the zero/one swap
  extract    4-controlled-X copying the register's all-ones amplitude onto a
             hidden qubit (single-neuron circuits)
  relay      layer boundary of the full network: each hidden wire is
             re-prepared as an independent qubit at the neuron's output
             probability (see compile_network)
  output     second-layer interference block per output neuron
  norm       per-output normalization qubit and the AND/OR combiner

The sign of a neuron's weighted sum is unobservable (the activation squares
it), which both justifies the majority optimization of the sign stage and
makes the relay's probability-only re-preparation exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import chain

import numpy as np

from .encoding import synthesize_prep
from .sim import Circuit, Gate

STAGES = ("prep", "sign", "quadratic", "extract", "relay", "output", "norm")

N_INPUTS = 16
N_HIDDEN = 2
N_OUTPUTS = 2


@dataclass(frozen=True)
class QNNModel:
    """Binary weights and normalization parameters of the 16-2-2 network.

    w1 is (2, 16), w2 is (2, 2), all entries exactly +-1. Each output neuron
    carries one normalization qubit biased to norm_para; norm_flag selects
    whether it combines with the raw output by AND (True) or OR (False).
    """

    w1: np.ndarray
    w2: np.ndarray
    norm_flag: tuple[bool, bool]
    norm_para: tuple[float, float]

    def __post_init__(self) -> None:
        w1 = np.asarray(self.w1, dtype=np.int64)
        w2 = np.asarray(self.w2, dtype=np.int64)
        if w1.shape != (N_HIDDEN, N_INPUTS):
            raise ValueError(f"w1 must be {(N_HIDDEN, N_INPUTS)}, got {w1.shape}")
        if w2.shape != (N_OUTPUTS, N_HIDDEN):
            raise ValueError(f"w2 must be {(N_OUTPUTS, N_HIDDEN)}, got {w2.shape}")
        for name, w in (("w1", w1), ("w2", w2)):
            if not np.isin(w, (-1, 1)).all():
                raise ValueError(f"{name} entries must all be -1 or +1")
        object.__setattr__(self, "w1", w1)
        object.__setattr__(self, "w2", w2)
        flags = tuple(bool(f) for f in self.norm_flag)
        paras = tuple(float(p) for p in self.norm_para)
        if len(flags) != N_OUTPUTS or len(paras) != N_OUTPUTS:
            raise ValueError("norm_flag and norm_para must have one entry per output")
        for p in paras:
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"norm_para {p} outside [0, 1]")
        object.__setattr__(self, "norm_flag", flags)
        object.__setattr__(self, "norm_para", paras)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QNNModel):
            return NotImplemented
        return (
            np.array_equal(self.w1, other.w1)
            and np.array_equal(self.w2, other.w2)
            and self.norm_flag == other.norm_flag
            and self.norm_para == other.norm_para
        )


@dataclass(frozen=True)
class RegisterLayout:
    """Named qubit registers of a compiled circuit; index sets must be disjoint."""

    input_regs: tuple[tuple[int, ...], ...]
    aux: tuple[int, ...]
    hidden: tuple[int, ...]
    raw_out: tuple[int, ...]
    norm: tuple[int, ...]
    final_out: tuple[int, ...]

    def __post_init__(self) -> None:
        groups = list(self.input_regs) + [
            self.aux, self.hidden, self.raw_out, self.norm, self.final_out
        ]
        flat = list(chain.from_iterable(groups))
        if len(set(flat)) != len(flat):
            raise ValueError("register qubit sets overlap")

    @property
    def qubit_count(self) -> int:
        flat = list(chain.from_iterable(self.input_regs))
        flat += self.aux + self.hidden + self.raw_out + self.norm + self.final_out
        return max(flat) + 1

    @classmethod
    def standard(cls) -> RegisterLayout:
        """The 18-qubit two-hidden/two-output network layout."""
        return cls(
            input_regs=((0, 1, 2, 3), (4, 5, 6, 7)),
            aux=(8, 9),
            hidden=(10, 11),
            raw_out=(12, 13),
            norm=(14, 15),
            final_out=(16, 17),
        )

    @classmethod
    def single_neuron(cls) -> RegisterLayout:
        """Compact 7-qubit layout for one hidden neuron on its own."""
        return cls(
            input_regs=((0, 1, 2, 3),),
            aux=(4, 5),
            hidden=(6,),
            raw_out=(),
            norm=(),
            final_out=(),
        )


def cccz(c0: int, c1: int, c2: int, target: int, aux0: int, aux1: int,
         stage: str | None = "sign") -> list[Gate]:
    """Phase -1 iff c0 = c1 = c2 = target = 1; aux qubits restored.

    Two Toffolis AND the controls into aux1, a CZ applies the phase, and the
    Toffolis uncompute.
    """
    qubits = (c0, c1, c2, target, aux0, aux1)
    if len(set(qubits)) != 6:
        raise ValueError(f"cccz needs six distinct qubits, got {qubits}")
    return [
        Gate("ccx", (c0, c1, aux0), stage=stage),
        Gate("ccx", (c2, aux0, aux1), stage=stage),
        Gate("cz", (aux1, target), stage=stage),
        Gate("ccx", (c2, aux0, aux1), stage=stage),
        Gate("ccx", (c0, c1, aux0), stage=stage),
    ]


def ccccx(c0: int, c1: int, c2: int, c3: int, target: int, aux0: int, aux1: int,
          stage: str | None = "extract") -> list[Gate]:
    """Flip target iff all four controls are 1; aux qubits restored."""
    qubits = (c0, c1, c2, c3, target, aux0, aux1)
    if len(set(qubits)) != 7:
        raise ValueError(f"ccccx needs seven distinct qubits, got {qubits}")
    return [
        Gate("ccx", (c0, c1, aux0), stage=stage),
        Gate("ccx", (c2, c3, aux1), stage=stage),
        Gate("ccx", (aux0, aux1, target), stage=stage),
        Gate("ccx", (c2, c3, aux1), stage=stage),
        Gate("ccx", (c0, c1, aux0), stage=stage),
    ]


def _check_weights(w) -> np.ndarray:
    w = np.asarray(w, dtype=np.int64)
    if w.shape != (N_INPUTS,):
        raise ValueError(f"expected {N_INPUTS} weights, got shape {w.shape}")
    if not np.isin(w, (-1, 1)).all():
        raise ValueError("weights must all be -1 or +1")
    return w


def sign_flip_indices(w) -> list[int]:
    """Basis states whose amplitude the sign stage negates.

    The set of negative-weight indices, or its complement when that set has
    more than 8 elements (flipping every sign only changes a global phase,
    so the smaller set is always sufficient).
    """
    w = _check_weights(w)
    flips = [i for i in range(N_INPUTS) if w[i] == -1]
    if len(flips) > N_INPUTS // 2:
        flips = [i for i in range(N_INPUTS) if w[i] == 1]
    return flips


def compile_sign_stage(w, register, aux) -> list[Gate]:
    """Negate the amplitude of basis state i for every negative weight w_i.

    Each flip conjugates a 3-controlled-Z by X gates on the register qubits
    whose bit of i is 0 (register qubit k carries bit k), steering state i
    through |1111> where the phase lands.
    """
    gates: list[Gate] = []
    for i in sign_flip_indices(w):
        flips = [
            Gate("x", (register[k],), stage="sign")
            for k in range(4)
            if not i >> k & 1
        ]
        gates += flips
        gates += cccz(register[0], register[1], register[2], register[3],
                      aux[0], aux[1], stage="sign")
        gates += flips
    return gates


def compile_quadratic_stage(register, hidden: int, aux) -> list[Gate]:
    """Square the weighted sum onto one hidden qubit.

    H on the register rotates the weighted sum into the |0000> amplitude,
    X swaps it to |1111>, and a 4-controlled-X copies it out, leaving
    P(hidden = 1) = (sum_k w_k x_k)^2 / 16 after the sign stage.
    """
    gates = [Gate("h", (q,), stage="quadratic") for q in register]
    gates += [Gate("x", (q,), stage="quadratic") for q in register]
    gates += ccccx(register[0], register[1], register[2], register[3],
                   hidden, aux[0], aux[1], stage="extract")
    return gates


def _accumulate_stage(register) -> list[Gate]:
    # quadratic stage minus the extraction: sum lands on |1111>'s amplitude
    gates = [Gate("h", (q,), stage="quadratic") for q in register]
    gates += [Gate("x", (q,), stage="quadratic") for q in register]
    return gates


def compile_hidden_neuron(
    x: np.ndarray, w, layout: RegisterLayout, neuron: int
) -> list[Gate]:
    """One hidden neuron: prepare, apply signs, square onto its hidden qubit."""
    register = layout.input_regs[neuron]
    gates = synthesize_prep(x, register, layout.aux, stage="prep")
    gates += compile_sign_stage(w, register, layout.aux)
    gates += compile_quadratic_stage(register, layout.hidden[neuron], layout.aux)
    return gates


def hidden_activation(x: np.ndarray, w) -> float:
    """(w . x)^2 / 16, the one-probability a hidden neuron computes."""
    w = _check_weights(w)
    s = float(np.dot(w, np.asarray(x, dtype=np.float64)))
    return min(max(s * s / 16.0, 0.0), 1.0)


def _ry_prob_angle(p: float) -> float:
    """RY angle taking |0> to sqrt(1-p)|0> + sqrt(p)|1>."""
    return 2.0 * math.asin(math.sqrt(min(max(p, 0.0), 1.0)))


def compile_output_neuron(
    w2_row,
    hidden,
    raw: int,
    norm: int,
    final: int,
    norm_flag: bool,
    norm_para: float,
) -> list[Gate]:
    """Second-layer neuron over the two hidden qubit random variables.

    Z flips the sign of each negatively-weighted hidden wire, H/X rotate the
    signed sum of the pair into the |11> component, and a Toffoli copies it
    to the raw qubit: P(raw=1) = 1/4 * prod_i (sqrt(1-h_i) + w_i sqrt(h_i))^2
    for product-state hidden wires. The X/H/Z uncompute restores the hidden
    qubits for the other output neuron. The normalization qubit is biased to
    norm_para and combined with raw by AND (norm_flag set) or OR (clear).
    """
    w2_row = tuple(int(w) for w in w2_row)
    if len(w2_row) != N_HIDDEN or any(w not in (-1, 1) for w in w2_row):
        raise ValueError(f"second-layer weights must be two +-1 entries, got {w2_row}")
    if not 0.0 <= norm_para <= 1.0:
        raise ValueError(f"norm_para {norm_para} outside [0, 1]")
    h0, h1 = hidden

    gates = [
        Gate("z", (hidden[i],), stage="output")
        for i in range(N_HIDDEN)
        if w2_row[i] == -1
    ]
    gates += [
        Gate("h", (h0,), stage="output"),
        Gate("h", (h1,), stage="output"),
        Gate("x", (h0,), stage="output"),
        Gate("x", (h1,), stage="output"),
        Gate("ccx", (h0, h1, raw), stage="output"),
        Gate("x", (h0,), stage="output"),
        Gate("x", (h1,), stage="output"),
        Gate("h", (h0,), stage="output"),
        Gate("h", (h1,), stage="output"),
    ]
    gates += [
        Gate("z", (hidden[i],), stage="output")
        for i in reversed(range(N_HIDDEN))
        if w2_row[i] == -1
    ]

    gates.append(Gate("ry", (norm,), angle=_ry_prob_angle(norm_para), stage="norm"))
    if norm_flag:
        gates.append(Gate("ccx", (raw, norm, final), stage="norm"))
    else:
        gates += [
            Gate("x", (raw,), stage="norm"),
            Gate("x", (norm,), stage="norm"),
            Gate("ccx", (raw, norm, final), stage="norm"),
            Gate("x", (final,), stage="norm"),
            Gate("x", (raw,), stage="norm"),
            Gate("x", (norm,), stage="norm"),
        ]
    return gates


def _direct_init_vector(x: np.ndarray, layout: RegisterLayout) -> np.ndarray:
    """Full-width init amplitudes: x on every input register, |0> elsewhere."""
    vec = np.ones(1, dtype=np.complex128)
    width = 0
    for register in layout.input_regs:
        if tuple(register) != tuple(range(width, width + 4)):
            raise ValueError("direct init requires contiguous input registers")
        vec = np.kron(np.asarray(x, dtype=np.complex128), vec)
        width += 4
    out = np.zeros(1 << layout.qubit_count, dtype=np.complex128)
    out[: 1 << width] = vec
    return out


def compile_network(
    x: np.ndarray, model: QNNModel, prep: str = "synth"
) -> Circuit:
    """Full 18-qubit inference circuit for one encoded input.

    Per hidden neuron: state prep on its own register (gate synthesis, or a
    direct init block when ``prep="direct"``), the sign stage, and the
    Hadamard accumulation, leaving the signed weighted sum in the register's
    |1111> amplitude. A relay RY then re-prepares the neuron's hidden wire
    as an independent qubit at the activation probability (w1_i . x)^2 / 16.

    The relay exists because copying the amplitude out with the
    4-controlled-X entangles the hidden wire with its register, which
    destroys the interference the second layer relies on (the extracted
    branch is orthogonal to the rest, so every output probability collapses
    to 1/4). Re-preparation is exact: the activation is fixed by the input
    and weights, both known when compiling, and its sign is unobservable.

    Output neurons then consume the two hidden wires, writing AND/OR
    normalized results onto the final qubits, which are the circuit's
    declared measurement targets.
    """
    if prep not in ("synth", "direct"):
        raise ValueError(f"prep must be 'synth' or 'direct', got {prep!r}")
    layout = RegisterLayout.standard()
    x = np.asarray(x, dtype=np.float64)

    gates: list[Gate] = []
    init = None
    if prep == "direct":
        norm = float(np.linalg.norm(x))
        if abs(norm - 1.0) > 1e-10 or (x < 0).any():
            raise ValueError("direct init needs a nonnegative unit vector")
        init = _direct_init_vector(x, layout)
    for i in range(N_HIDDEN):
        register = layout.input_regs[i]
        if prep == "synth":
            gates += synthesize_prep(x, register, layout.aux, stage="prep")
        gates += compile_sign_stage(model.w1[i], register, layout.aux)
        gates += _accumulate_stage(register)
        angle = _ry_prob_angle(hidden_activation(x, model.w1[i]))
        gates.append(Gate("ry", (layout.hidden[i],), angle=angle, stage="relay"))
    for j in range(N_OUTPUTS):
        gates += compile_output_neuron(
            model.w2[j],
            layout.hidden,
            layout.raw_out[j],
            layout.norm[j],
            layout.final_out[j],
            model.norm_flag[j],
            model.norm_para[j],
        )
    return Circuit(
        qubit_count=layout.qubit_count, gates=gates, init=init, layout=layout
    )


def gate_count_report(circuit: Circuit) -> dict[str, int]:
    """Gate counts per compile stage (all stages listed, zero when absent)."""
    counts = {stage: 0 for stage in STAGES}
    other = 0
    for gate in circuit.gates:
        if gate.stage in counts:
            counts[gate.stage] += 1
        else:
            other += 1
    if other:
        counts["other"] = other
    return counts


def sign_stage_gate_count(w) -> int:
    """Closed-form size of the sign stage: sum of 2*zeros(i) + 5 over flips."""
    return sum(2 * (4 - bin(i).count("1")) + 5 for i in sign_flip_indices(w))
