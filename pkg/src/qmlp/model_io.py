"""JSON serialization of trained models, with field-path error reporting."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .compiler import N_HIDDEN, N_INPUTS, N_OUTPUTS, QNNModel


class ModelFormatError(ValueError):
    """Model file violates the schema; the message names the offending field."""


def _weight_rows(obj, name: str, shape: tuple[int, int]) -> np.ndarray:
    rows, cols = shape
    if not isinstance(obj, list) or len(obj) != rows:
        raise ModelFormatError(f"{name}: expected {rows} rows")
    out = np.empty(shape, dtype=np.int64)
    for r, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise ModelFormatError(f"{name}[{r}]: expected {cols} entries")
        for c, value in enumerate(row):
            if not isinstance(value, int) or value not in (-1, 1):
                raise ModelFormatError(
                    f"{name}[{r}][{c}]: expected -1 or +1, got {value!r}"
                )
            out[r, c] = value
    return out


def model_from_dict(obj: dict) -> QNNModel:
    if not isinstance(obj, dict):
        raise ModelFormatError("model: expected a JSON object")
    for key in ("w1", "w2", "norm_flag", "norm_para"):
        if key not in obj:
            raise ModelFormatError(f"{key}: missing")
    w1 = _weight_rows(obj["w1"], "w1", (N_HIDDEN, N_INPUTS))
    w2 = _weight_rows(obj["w2"], "w2", (N_OUTPUTS, N_HIDDEN))
    flags = obj["norm_flag"]
    if (
        not isinstance(flags, list)
        or len(flags) != N_OUTPUTS
        or not all(isinstance(f, bool) for f in flags)
    ):
        raise ModelFormatError(f"norm_flag: expected {N_OUTPUTS} booleans")
    paras = obj["norm_para"]
    if not isinstance(paras, list) or len(paras) != N_OUTPUTS:
        raise ModelFormatError(f"norm_para: expected {N_OUTPUTS} numbers")
    for j, p in enumerate(paras):
        if not isinstance(p, (int, float)) or isinstance(p, bool):
            raise ModelFormatError(f"norm_para[{j}]: expected a number, got {p!r}")
        if not 0.0 <= p <= 1.0:
            raise ModelFormatError(f"norm_para[{j}]: {p} outside [0, 1]")
    return QNNModel(
        w1=w1, w2=w2, norm_flag=tuple(flags), norm_para=tuple(float(p) for p in paras)
    )


def model_to_dict(model: QNNModel) -> dict:
    return {
        "w1": model.w1.tolist(),
        "w2": model.w2.tolist(),
        "norm_flag": list(model.norm_flag),
        "norm_para": list(model.norm_para),
    }


def loads_model(text: str) -> QNNModel:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(f"model: invalid JSON ({exc})") from exc
    return model_from_dict(obj)


def dumps_model(model: QNNModel) -> str:
    return json.dumps(model_to_dict(model), indent=2) + "\n"


def read_model(path: str | Path) -> QNNModel:
    return loads_model(Path(path).read_text())


def write_model(model: QNNModel, path: str | Path) -> None:
    Path(path).write_text(dumps_model(model))
