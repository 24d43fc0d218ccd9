"""Hill-climbing search over binary weights and normalization parameters.

The objective is plain train-set accuracy under the closed-form network
probabilities (the circuit is provably equivalent, and arithmetic is orders
of magnitude faster than simulating 18 qubits per candidate). Moves flip one
weight entry, toggle one normalization flag, or step one normalization
parameter by 1/20 inside [0, 1]; non-worsening moves are accepted, so the
accuracy trace never decreases.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .compiler import N_HIDDEN, N_INPUTS, N_OUTPUTS, QNNModel
from .oracle import closed_form_finals

PARA_STEPS = 20  # norm_para lives on the grid k / PARA_STEPS


@dataclass(frozen=True)
class SearchResult:
    model: QNNModel
    accuracy: float
    trace: tuple[float, ...]
    seed: int


def _accuracy(xs: np.ndarray, labels: np.ndarray, model: QNNModel) -> float:
    finals = closed_form_finals(xs, model)
    predicted = np.argmax(finals, axis=1)
    return float(np.mean(predicted == labels))


def _random_model(rng: np.random.Generator) -> QNNModel:
    return QNNModel(
        w1=rng.choice((-1, 1), size=(N_HIDDEN, N_INPUTS)),
        w2=rng.choice((-1, 1), size=(N_OUTPUTS, N_HIDDEN)),
        norm_flag=tuple(bool(b) for b in rng.integers(2, size=N_OUTPUTS)),
        norm_para=tuple(
            int(k) / PARA_STEPS for k in rng.integers(PARA_STEPS + 1, size=N_OUTPUTS)
        ),
    )


def _propose(rng: np.random.Generator, model: QNNModel) -> QNNModel | None:
    """One random atomic move; None when the move leaves the [0,1] grid."""
    n_w1 = N_HIDDEN * N_INPUTS
    n_w2 = N_OUTPUTS * N_HIDDEN
    move = int(rng.integers(n_w1 + n_w2 + N_OUTPUTS + N_OUTPUTS))
    w1, w2 = model.w1.copy(), model.w2.copy()
    flags, paras = list(model.norm_flag), list(model.norm_para)
    if move < n_w1:
        w1[divmod(move, N_INPUTS)] *= -1
    elif move < n_w1 + n_w2:
        w2[divmod(move - n_w1, N_HIDDEN)] *= -1
    elif move < n_w1 + n_w2 + N_OUTPUTS:
        j = move - n_w1 - n_w2
        flags[j] = not flags[j]
    else:
        j = move - n_w1 - n_w2 - N_OUTPUTS
        k = round(paras[j] * PARA_STEPS) + (1 if rng.integers(2) else -1)
        if not 0 <= k <= PARA_STEPS:
            return None
        paras[j] = k / PARA_STEPS
    return QNNModel(w1=w1, w2=w2, norm_flag=tuple(flags), norm_para=tuple(paras))


def _climb(
    xs: np.ndarray, labels: np.ndarray, seed: int, max_iters: int
) -> SearchResult:
    rng = np.random.default_rng(seed)
    model = _random_model(rng)
    accuracy = _accuracy(xs, labels, model)
    trace = [accuracy]
    for _ in range(max_iters):
        if accuracy == 1.0:
            break
        candidate = _propose(rng, model)
        if candidate is not None:
            candidate_accuracy = _accuracy(xs, labels, candidate)
            if candidate_accuracy >= accuracy:
                model, accuracy = candidate, candidate_accuracy
        trace.append(accuracy)
    return SearchResult(model=model, accuracy=accuracy, trace=tuple(trace), seed=seed)


def local_search(
    train_set: list[tuple[np.ndarray, int]],
    seed: int = 0,
    max_iters: int = 500,
    restarts: int = 3,
) -> SearchResult:
    """Best hill-climbing result over ``restarts`` independent runs.

    Restart r uses seed ``seed + r``; ties in final accuracy go to the
    lowest seed, so the result is a pure function of (train_set, seed,
    max_iters, restarts).
    """
    if not train_set:
        raise ValueError("training set is empty")
    if max_iters < 0 or restarts < 1:
        raise ValueError("max_iters must be >= 0 and restarts >= 1")
    xs = np.stack([x for x, _ in train_set])
    labels = np.asarray([label for _, label in train_set])
    best: SearchResult | None = None
    for r in range(restarts):
        result = _climb(xs, labels, seed + r, max_iters)
        if best is None or result.accuracy > best.accuracy:
            best = result
    return best


def make_separable_set(
    count: int, seed: int = 0, anchor_weight: float = 0.95, jitter: float = 0.05
) -> list[tuple[np.ndarray, int]]:
    """Synthetic two-class encodings the network can separate perfectly.

    Class 0 concentrates amplitude near entry 0, class 1 near entry 15, with
    small positive jitter on the other entries. Pure basis vectors would be
    useless here: every one of them yields activation 1/16 regardless of the
    weights (a single squared amplitude survives), so the jitter mass is
    what the weighted sum actually discriminates on.
    """
    rng = np.random.default_rng(seed)
    out: list[tuple[np.ndarray, int]] = []
    for i in range(count):
        label = i % 2
        v = rng.uniform(0.0, jitter, size=16)
        v[15 if label else 0] = anchor_weight
        out.append((v / np.linalg.norm(v), label))
    return out
