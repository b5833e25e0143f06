"""JSON documents for states and channels.

State: {"modes": m, "mean": [2m floats], "cov": [[2m x 2m floats]]}
Channel: {"modes": m, "T": [[...]], "N": [[...]], "shift": [...]}
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .channels import GaussianChannel, validate_channel
from .core import GaussianState, validate_state
from .errors import ShapeError


def state_to_dict(state: GaussianState) -> dict:
    return {
        "modes": state.modes,
        "mean": state.mean.tolist(),
        "cov": state.cov.tolist(),
    }


def state_from_dict(doc: dict, tol: float | None = None) -> GaussianState:
    try:
        modes = int(doc["modes"])
        mean = np.asarray(doc["mean"], dtype=float)
        cov = np.asarray(doc["cov"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed state document: {exc}") from exc
    if cov.shape != (2 * modes, 2 * modes):
        raise ShapeError(
            f"state document declares {modes} modes but cov has shape {cov.shape}"
        )
    return validate_state(cov, mean, tol)


def channel_to_dict(channel: GaussianChannel) -> dict:
    return {
        "modes": channel.modes,
        "T": channel.T.tolist(),
        "N": channel.N.tolist(),
        "shift": channel.shift.tolist(),
    }


def channel_from_dict(doc: dict, tol: float | None = None) -> GaussianChannel:
    try:
        modes = int(doc["modes"])
        T = np.asarray(doc["T"], dtype=float)
        N = np.asarray(doc["N"], dtype=float)
        shift = np.asarray(doc["shift"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"malformed channel document: {exc}") from exc
    if T.shape != (2 * modes, 2 * modes):
        raise ShapeError(
            f"channel document declares {modes} modes but T has shape {T.shape}"
        )
    return validate_channel(T, N, shift, tol)


def load_state(path: str | Path, tol: float | None = None) -> GaussianState:
    with open(path) as fh:
        return state_from_dict(json.load(fh), tol)


def load_channel(path: str | Path, tol: float | None = None) -> GaussianChannel:
    with open(path) as fh:
        return channel_from_dict(json.load(fh), tol)


def save_state(state: GaussianState, path: str | Path) -> None:
    Path(path).write_text(dumps(state_to_dict(state)) + "\n")


def save_channel(channel: GaussianChannel, path: str | Path) -> None:
    Path(path).write_text(dumps(channel_to_dict(channel)) + "\n")


def dumps(doc: dict, pretty: bool = False) -> str:
    """Deterministic JSON serialization (fixed key order, repr floats)."""
    if pretty:
        return json.dumps(doc, indent=2)
    return json.dumps(doc, separators=(",", ":"))
