"""Classical data -> quantum amplitudes.

An image becomes a 16-entry nonnegative unit vector (7x7 average pooling of
the 28x28 grid, then L2 normalization). That vector can be viewed three
ways, and all three must agree:
  * directly, as the amplitudes of a 4-qubit register,
  * as the first column of an orthogonal 16x16 matrix (Householder
    completion),
  * as the output of a gate-level state-preparation circuit built from a
    binary rotation tree.
"""
from __future__ import annotations

import math

import numpy as np

from .sim import Gate

IMAGE_SIDE = 28
POOL = 7
ENCODED_LEN = 16


def downsample(image: np.ndarray) -> np.ndarray:
    """28x28 grayscale -> 16 block means (non-overlapping 7x7, row-major)."""
    image = np.asarray(image)
    if image.shape != (IMAGE_SIDE, IMAGE_SIDE):
        raise ValueError(f"expected a {IMAGE_SIDE}x{IMAGE_SIDE} image, got {image.shape}")
    blocks = image.astype(np.float64).reshape(4, POOL, 4, POOL)
    return blocks.mean(axis=(1, 3)).reshape(ENCODED_LEN)


def normalize(values: np.ndarray) -> np.ndarray:
    """Scale a nonnegative vector to unit L2 norm.

    Rejects all-zero input (a blank image cannot be amplitude-encoded) and
    negative entries.
    """
    v = np.asarray(values, dtype=np.float64)
    if v.shape != (ENCODED_LEN,):
        raise ValueError(f"expected {ENCODED_LEN} values, got shape {v.shape}")
    if (v < 0).any():
        raise ValueError("negative entries cannot be encoded")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ValueError("all-zero vector cannot be normalized")
    return v / norm


def complete_to_unitary(v: np.ndarray) -> np.ndarray:
    """Orthogonal 16x16 matrix whose first column is ``v``.

    Householder reflection through (e0 - v): maps e0 to v exactly and is
    symmetric orthogonal. Returns the identity when v = e0.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (ENCODED_LEN,):
        raise ValueError(f"expected {ENCODED_LEN} values, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"input norm {norm} is not 1 within 1e-10")
    u = -v.copy()
    u[0] += 1.0  # u = e0 - v
    uu = float(u @ u)
    if uu < 1e-24:
        return np.eye(ENCODED_LEN)
    return np.eye(ENCODED_LEN) - (2.0 / uu) * np.outer(u, u)


def _controlled_ry(control: int, target: int, theta: float, stage: str | None) -> list[Gate]:
    """RY(theta) on target iff control is 1, via the RY/CX/RY/CX identity."""
    return [
        Gate("ry", (target,), angle=theta / 2.0, stage=stage),
        Gate("cx", (control, target), stage=stage),
        Gate("ry", (target,), angle=-theta / 2.0, stage=stage),
        Gate("cx", (control, target), stage=stage),
    ]


def synthesize_prep(
    v: np.ndarray,
    register: tuple[int, int, int, int],
    aux: tuple[int, int],
    stage: str | None = "prep",
) -> list[Gate]:
    """Gate list preparing amplitudes ``v`` on ``register`` from |0000>.

    Binary rotation tree: level d (d = 0..3) conditions on the first d
    register qubits and rotates register qubit d by
    theta = 2*atan2(sqrt(mass_right), sqrt(mass_left)), where the masses are
    the squared amplitudes of the two child subtrees (indices agreeing with
    the pattern on bits 0..d-1, split by bit d; register qubit k carries bit
    k of the data index). Pattern controls are realized by X-conjugated CCX
    chains through the aux qubits, which are always returned to |0>.

    Only nonnegative amplitudes are supported; zero-mass subtrees and
    zero rotations are skipped.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (ENCODED_LEN,):
        raise ValueError(f"expected {ENCODED_LEN} amplitudes, got shape {v.shape}")
    if (v < 0).any():
        raise ValueError("sign synthesis unsupported: amplitudes must be nonnegative")
    norm = float(np.linalg.norm(v))
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"amplitude norm {norm} is not 1 within 1e-10")
    if len(set(register) | set(aux)) != 6:
        raise ValueError("register and aux qubits must be distinct")

    masses = v * v
    index = np.arange(ENCODED_LEN)
    gates: list[Gate] = []
    for level in range(4):
        target = register[level]
        for pattern in range(1 << level):
            in_node = (index & ((1 << level) - 1)) == pattern
            split = (index >> level) & 1
            left = float(masses[in_node & (split == 0)].sum())
            right = float(masses[in_node & (split == 1)].sum())
            if left + right == 0.0:
                continue  # no amplitude ever reaches this branch
            theta = 2.0 * math.atan2(math.sqrt(right), math.sqrt(left))
            if theta == 0.0:
                continue
            gates.extend(
                _pattern_controlled_ry(register, aux, level, pattern, target, theta, stage)
            )
    return gates


def _pattern_controlled_ry(
    register, aux, level: int, pattern: int, target: int, theta: float, stage
) -> list[Gate]:
    """RY(theta) on target iff register[0..level-1] matches ``pattern``."""
    if level == 0:
        return [Gate("ry", (target,), angle=theta, stage=stage)]

    controls = [register[d] for d in range(level)]
    flips = [
        Gate("x", (controls[d],), stage=stage)
        for d in range(level)
        if not pattern >> d & 1
    ]

    gates = list(flips)
    if level == 1:
        gates += _controlled_ry(controls[0], target, theta, stage)
    else:
        chain = [Gate("ccx", (controls[0], controls[1], aux[0]), stage=stage)]
        top = aux[0]
        if level == 3:
            chain.append(Gate("ccx", (controls[2], aux[0], aux[1]), stage=stage))
            top = aux[1]
        gates += chain
        gates += _controlled_ry(top, target, theta, stage)
        gates += reversed(chain)
    gates += flips
    return gates
