"""Model JSON schema: round trips and field-path diagnostics."""
from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmlp.model_io import (
    ModelFormatError,
    dumps_model,
    loads_model,
    model_to_dict,
    read_model,
    write_model,
)

import numpy as np

from conftest import random_model

VALID = {
    "w1": [[1] * 16, [-1] * 16],
    "w2": [[1, -1], [-1, 1]],
    "norm_flag": [True, False],
    "norm_para": [0.5, 0.0],
}


def as_json(**overrides) -> str:
    import json

    obj = {**VALID, **overrides}
    return json.dumps(obj)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32))
def test_write_read_identity(seed):
    model = random_model(np.random.default_rng(seed))
    assert loads_model(dumps_model(model)) == model


def test_file_round_trip(tmp_path):
    model = random_model(np.random.default_rng(0))
    path = tmp_path / "model.json"
    write_model(model, path)
    assert read_model(path) == model


def test_zero_weight_names_the_field():
    w1 = [[1] * 16, [-1] * 16]
    w1[0][5] = 0
    with pytest.raises(ModelFormatError, match=r"w1\[0\]\[5\]: expected -1 or \+1"):
        loads_model(as_json(w1=w1))


def test_missing_norm_para():
    import json

    obj = dict(VALID)
    del obj["norm_para"]
    with pytest.raises(ModelFormatError, match="norm_para: missing"):
        loads_model(json.dumps(obj))


def test_norm_para_range_and_type():
    with pytest.raises(ModelFormatError, match=r"norm_para\[1\]: 1.5 outside"):
        loads_model(as_json(norm_para=[0.0, 1.5]))
    with pytest.raises(ModelFormatError, match=r"norm_para\[0\]: expected a number"):
        loads_model(as_json(norm_para=["x", 0.0]))


def test_flag_type_checked():
    with pytest.raises(ModelFormatError, match="norm_flag"):
        loads_model(as_json(norm_flag=[1, 0]))


def test_wrong_row_counts():
    with pytest.raises(ModelFormatError, match="w2: expected 2 rows"):
        loads_model(as_json(w2=[[1, 1]]))
    with pytest.raises(ModelFormatError, match=r"w1\[1\]: expected 16 entries"):
        loads_model(as_json(w1=[[1] * 16, [1] * 15]))


def test_invalid_json_reported():
    with pytest.raises(ModelFormatError, match="invalid JSON"):
        loads_model("{not json")


def test_model_to_dict_is_plain_data():
    d = model_to_dict(random_model(np.random.default_rng(1)))
    assert set(d) == {"w1", "w2", "norm_flag", "norm_para"}
    assert all(isinstance(v, int) for row in d["w1"] for v in row)
