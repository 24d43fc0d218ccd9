"""Network compilation: sign stage, hidden-neuron law, relay, end-to-end oracle."""
from __future__ import annotations

import numpy as np
import pytest

from qmlp.compiler import (
    QNNModel,
    RegisterLayout,
    cccz,
    ccccx,
    compile_hidden_neuron,
    compile_network,
    compile_sign_stage,
    gate_count_report,
    hidden_activation,
    sign_flip_indices,
    sign_stage_gate_count,
)
from qmlp.oracle import closed_form_network
from qmlp.sim import Circuit, Gate, marginal_prob_one, run

from conftest import random_model, random_unit_nonneg

LAYOUT = RegisterLayout.single_neuron()


def neuron_state(x, w):
    gates = compile_hidden_neuron(x, w, LAYOUT, 0)
    return run(Circuit(qubit_count=7, gates=gates))


def test_layout_invariants():
    std = RegisterLayout.standard()
    assert std.qubit_count == 18
    with pytest.raises(ValueError, match="overlap"):
        RegisterLayout(
            input_regs=((0, 1, 2, 3),),
            aux=(3, 4),
            hidden=(5,),
            raw_out=(),
            norm=(),
            final_out=(),
        )


def test_model_validation():
    good = np.ones((2, 16), dtype=int)
    with pytest.raises(ValueError, match="w1 entries"):
        QNNModel(w1=good * 0, w2=np.ones((2, 2)), norm_flag=(True, True), norm_para=(0, 0))
    with pytest.raises(ValueError, match="outside"):
        QNNModel(w1=good, w2=np.ones((2, 2)), norm_flag=(True, True), norm_para=(0.5, 1.5))


def test_cccz_flips_only_all_ones():
    # 4 data qubits (0-3) + aux (4, 5); uniform superposition over data
    gates = [Gate("h", (q,)) for q in range(4)]
    gates += cccz(0, 1, 2, 3, 4, 5)
    psi = run(Circuit(qubit_count=6, gates=gates))
    amps = psi[:16]
    assert np.allclose(amps[:15], 0.25, atol=1e-12)
    assert amps[15] == pytest.approx(-0.25, abs=1e-12)
    assert np.max(np.abs(psi[16:])) < 1e-12  # aux restored


def test_cccz_leaves_unsatisfied_controls_alone():
    gates = [Gate("x", (q,)) for q in (0, 1, 2)]  # |0111>: target q3 is 0
    gates += cccz(0, 1, 2, 3, 4, 5)
    psi = run(Circuit(qubit_count=6, gates=gates))
    assert psi[0b0111] == pytest.approx(1.0, abs=1e-12)


def test_cccz_rejects_duplicates():
    with pytest.raises(ValueError, match="distinct"):
        cccz(0, 1, 2, 3, 4, 4)


def test_ccccx_truth_table_and_aux():
    gates = [Gate("x", (q,)) for q in range(4)]
    gates += ccccx(0, 1, 2, 3, 4, 5, 6)
    psi = run(Circuit(qubit_count=7, gates=gates))
    assert psi[0b0011111] == pytest.approx(1.0, abs=1e-12)

    gates = [Gate("x", (q,)) for q in (1, 2, 3)]  # one control low
    gates += ccccx(0, 1, 2, 3, 4, 5, 6)
    psi = run(Circuit(qubit_count=7, gates=gates))
    assert psi[0b0001110] == pytest.approx(1.0, abs=1e-12)


def test_ccccx_on_superposed_controls():
    # alpha|1111> + beta|0000> on controls: target follows the 1111 branch
    a, b = 0.6, 0.8
    init = np.zeros(128, dtype=complex)
    init[0b0000] = b
    init[0b1111] = a
    circuit = Circuit(qubit_count=7, gates=ccccx(0, 1, 2, 3, 4, 5, 6), init=init)
    psi = run(circuit)
    assert psi[0b0011111] == pytest.approx(a, abs=1e-12)
    assert psi[0b0000000] == pytest.approx(b, abs=1e-12)


def test_sign_flip_indices_majority_rule():
    w = np.ones(16, dtype=int)
    assert sign_flip_indices(w) == []
    w[3] = -1
    assert sign_flip_indices(w) == [3]
    w = -np.ones(16, dtype=int)
    w[[0, 1, 2, 3]] = 1  # twelve -1 entries: compile the complement
    assert sign_flip_indices(w) == [0, 1, 2, 3]


def test_sign_stage_single_negative_weight_structure():
    w = np.ones(16, dtype=int)
    w[3] = -1  # binary 0011: X on register qubits 2 and 3 around the cccz
    gates = compile_sign_stage(w, (0, 1, 2, 3), (4, 5))
    kinds = [g.kind for g in gates]
    assert kinds == ["x", "x", "ccx", "ccx", "cz", "ccx", "ccx", "x", "x"]
    assert gates[0].qubits[0] in (2, 3) and gates[1].qubits[0] in (2, 3)


def test_sign_stage_negates_selected_amplitudes(rng):
    v = random_unit_nonneg(rng)
    w = rng.choice((-1, 1), size=16)
    init = np.zeros(128, dtype=complex)
    init[:16] = v
    circuit = Circuit(
        qubit_count=7,
        gates=compile_sign_stage(w, (0, 1, 2, 3), (4, 5)),
        init=init,
    )
    psi = run(circuit)
    want = v * w
    if sum(w == -1) > 8:
        want = -want  # complement compilation leaves a global sign
    assert np.max(np.abs(psi[:16] - want)) < 1e-12
    assert np.max(np.abs(psi[16:])) < 1e-12


def test_hidden_law_uniform_input():
    x = np.full(16, 0.25)
    w = np.ones(16, dtype=int)
    psi = neuron_state(x, w)
    assert marginal_prob_one(psi, 6) == pytest.approx(1.0, abs=1e-10)
    w[:8] = -1  # weighted sum 0
    psi = neuron_state(x, w)
    assert marginal_prob_one(psi, 6) == pytest.approx(0.0, abs=1e-10)


def test_hidden_law_basis_input_independent_of_weights(rng):
    x = np.eye(16)[0]
    for _ in range(5):
        w = rng.choice((-1, 1), size=16)
        psi = neuron_state(x, w)
        assert marginal_prob_one(psi, 6) == pytest.approx(1 / 16, abs=1e-10)


def test_hidden_law_random_cases_match_closed_form(rng):
    for _ in range(50):
        x = random_unit_nonneg(rng)
        w = rng.choice((-1, 1), size=16)
        psi = neuron_state(x, w)
        assert marginal_prob_one(psi, 6) == pytest.approx(
            hidden_activation(x, w), abs=1e-10
        )
        assert marginal_prob_one(psi, 4) < 1e-12
        assert marginal_prob_one(psi, 5) < 1e-12


def test_hidden_marginal_invariant_under_weight_negation(rng):
    x = random_unit_nonneg(rng)
    w = rng.choice((-1, 1), size=16)
    p = marginal_prob_one(neuron_state(x, w), 6)
    p_neg = marginal_prob_one(neuron_state(x, -w), 6)
    assert p == pytest.approx(p_neg, abs=1e-12)


def test_two_neurons_same_weights_same_marginals(rng):
    x = random_unit_nonneg(rng)
    w = rng.choice((-1, 1), size=16)
    layout = RegisterLayout.standard()
    gates = compile_hidden_neuron(x, w, layout, 0)
    gates += compile_hidden_neuron(x, w, layout, 1)
    psi = run(Circuit(qubit_count=18, gates=gates))
    p0 = marginal_prob_one(psi, layout.hidden[0])
    p1 = marginal_prob_one(psi, layout.hidden[1])
    assert p0 == pytest.approx(p1, abs=1e-12)


def layer_boundary_state(circuit: Circuit) -> np.ndarray:
    """State after the hidden layer, before output blocks touch the hidden wires."""
    first_layer = [g for g in circuit.gates if g.stage not in ("output", "norm")]
    prefix = Circuit(
        qubit_count=circuit.qubit_count, gates=first_layer, init=circuit.init
    )
    return run(prefix)


def test_network_example_uniform_all_plus():
    x = np.full(16, 0.25)
    model = QNNModel(
        w1=np.ones((2, 16), dtype=int),
        w2=np.ones((2, 2), dtype=int),
        norm_flag=(True, True),
        norm_para=(1.0, 1.0),
    )
    circuit = compile_network(x, model)
    assert circuit.qubit_count == 18
    layout = circuit.layout
    boundary = layer_boundary_state(circuit)
    for i in range(2):
        assert marginal_prob_one(boundary, layout.hidden[i]) == pytest.approx(
            1.0, abs=1e-9
        )
    psi = run(circuit)
    for j in range(2):
        assert marginal_prob_one(psi, layout.raw_out[j]) == pytest.approx(0.25, abs=1e-9)
        assert marginal_prob_one(psi, layout.final_out[j]) == pytest.approx(0.25, abs=1e-9)


def test_network_matches_closed_form_oracle(rng):
    for trial in range(8):
        x = random_unit_nonneg(rng)
        model = random_model(rng)
        prep = "synth" if trial % 2 else "direct"
        circuit = compile_network(x, model, prep=prep)
        layout = circuit.layout
        want = closed_form_network(x, model)
        boundary = layer_boundary_state(circuit)
        for i in range(2):
            assert marginal_prob_one(boundary, layout.hidden[i]) == pytest.approx(
                want.hidden[i], abs=1e-9
            )
        psi = run(circuit)
        for j in range(2):
            assert marginal_prob_one(psi, layout.raw_out[j]) == pytest.approx(
                want.raw_output[j], abs=1e-9
            )
            assert marginal_prob_one(psi, layout.final_out[j]) == pytest.approx(
                want.final_output[j], abs=1e-9
            )
        for a in layout.aux:
            assert marginal_prob_one(psi, a) < 1e-12


def test_output_neuron_zero_bias_edge_cases(rng):
    from qmlp.compiler import compile_output_neuron

    p = rng.uniform(0.1, 0.9, size=2)
    prep = [Gate("ry", (i,), angle=2 * np.arcsin(np.sqrt(p[i]))) for i in range(2)]
    # AND with a never-one normalization qubit kills the output
    gates = prep + compile_output_neuron((1, 1), (0, 1), 2, 3, 4, True, 0.0)
    psi = run(Circuit(qubit_count=5, gates=gates))
    assert marginal_prob_one(psi, 4) == pytest.approx(0.0, abs=1e-12)
    # OR with it passes the raw probability through
    gates = prep + compile_output_neuron((1, 1), (0, 1), 2, 3, 4, False, 0.0)
    psi = run(Circuit(qubit_count=5, gates=gates))
    assert marginal_prob_one(psi, 4) == pytest.approx(
        marginal_prob_one(psi, 2), abs=1e-12
    )


def test_network_prep_modes_agree(rng):
    x = random_unit_nonneg(rng)
    model = random_model(rng)
    psi_synth = run(compile_network(x, model, prep="synth"))
    psi_direct = run(compile_network(x, model, prep="direct"))
    layout = RegisterLayout.standard()
    for q in layout.hidden + layout.raw_out + layout.final_out:
        assert marginal_prob_one(psi_synth, q) == pytest.approx(
            marginal_prob_one(psi_direct, q), abs=1e-9
        )


def test_network_rejects_bad_prep_mode(rng):
    with pytest.raises(ValueError, match="prep"):
        compile_network(random_unit_nonneg(rng), random_model(rng), prep="qram")


def test_gate_count_report_stages(rng):
    x = random_unit_nonneg(rng)
    model = random_model(rng)
    report = gate_count_report(compile_network(x, model))
    assert report["sign"] == sign_stage_gate_count(model.w1[0]) + sign_stage_gate_count(
        model.w1[1]
    )
    assert report["relay"] == 2
    assert report["quadratic"] == 16
    assert report["prep"] > 0
    report_direct = gate_count_report(compile_network(x, model, prep="direct"))
    assert report_direct["prep"] == 0


def test_sign_stage_gate_counts():
    assert sign_stage_gate_count(np.ones(16, dtype=int)) == 0
    w = np.ones(16, dtype=int)
    w[15] = -1  # index 1111 needs no X conjugation
    assert sign_stage_gate_count(w) == 5
    worst = np.ones(16, dtype=int)
    worst[[0, 1, 2, 4, 8, 3, 5, 6]] = -1  # eight flips
    assert sign_stage_gate_count(worst) <= 104


def test_majority_optimization_never_increases_gates(rng):
    for _ in range(50):
        w = rng.choice((-1, 1), size=16)
        unoptimized = sum(
            2 * (4 - bin(i).count("1")) + 5 for i in range(16) if w[i] == -1
        )
        assert sign_stage_gate_count(w) <= unoptimized
        assert sign_stage_gate_count(w) <= 104
