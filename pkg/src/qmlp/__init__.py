"""qmlp: compile binary-weight perceptrons to quantum circuits and simulate them."""

from .compiler import (
    QNNModel,
    RegisterLayout,
    compile_hidden_neuron,
    compile_network,
    gate_count_report,
)
from .encoding import complete_to_unitary, downsample, normalize, synthesize_prep
from .oracle import classify, closed_form_network, naive_run
from .sim import Circuit, Gate, analyze, marginal_prob_one, run, sample_counts

__all__ = [
    "Circuit",
    "Gate",
    "QNNModel",
    "RegisterLayout",
    "analyze",
    "classify",
    "closed_form_network",
    "compile_hidden_neuron",
    "compile_network",
    "complete_to_unitary",
    "downsample",
    "gate_count_report",
    "marginal_prob_one",
    "naive_run",
    "normalize",
    "run",
    "sample_counts",
    "synthesize_prep",
]

__version__ = "0.1.0"
