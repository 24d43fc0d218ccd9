"""Hill-climbing trainer: determinism, monotone trace, synthetic convergence."""
from __future__ import annotations

import numpy as np
import pytest

from qmlp.trainer import local_search, make_separable_set


@pytest.fixture(scope="module")
def train_set():
    return make_separable_set(40, seed=1)


def test_zero_iterations_returns_initial_model(train_set):
    a = local_search(train_set, seed=9, max_iters=0, restarts=1)
    b = local_search(train_set, seed=9, max_iters=0, restarts=1)
    assert a.model == b.model
    assert a.trace == (a.accuracy,)


def test_reaches_perfect_accuracy_on_separable_set(train_set):
    result = local_search(train_set, seed=0, max_iters=500, restarts=3)
    assert result.accuracy == 1.0
    assert len(result.trace) - 1 <= 500


def test_trace_is_non_decreasing(train_set):
    for seed in range(4):
        result = local_search(train_set, seed=seed, max_iters=200, restarts=1)
        assert all(a <= b for a, b in zip(result.trace, result.trace[1:]))


def test_same_seed_reproduces_model_and_trace(train_set):
    a = local_search(train_set, seed=5, max_iters=300, restarts=2)
    b = local_search(train_set, seed=5, max_iters=300, restarts=2)
    assert a.model == b.model
    assert a.trace == b.trace
    assert a.seed == b.seed


def test_returned_model_is_valid(train_set):
    result = local_search(train_set, seed=2, max_iters=100, restarts=1)
    model = result.model
    assert np.isin(model.w1, (-1, 1)).all()
    assert np.isin(model.w2, (-1, 1)).all()
    assert all(0.0 <= p <= 1.0 for p in model.norm_para)


def test_empty_train_set_rejected():
    with pytest.raises(ValueError, match="empty"):
        local_search([], seed=0)


def test_separable_set_is_deterministic_and_unit_norm():
    a = make_separable_set(10, seed=3)
    b = make_separable_set(10, seed=3)
    for (va, la), (vb, lb) in zip(a, b):
        assert np.array_equal(va, vb) and la == lb
        assert abs(np.linalg.norm(va) - 1.0) < 1e-12
        assert (va >= 0).all()
