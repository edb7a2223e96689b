"""The Q-network: two 128-unit rectified hidden layers with 0.3 dropout and a
linear 8-way head, one output per agent action. In embedding mode the input is
the 7 feature indices, each mapped through a learned scalar embedding."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from skillscout.dialog.encoding import StateEncoder
from skillscout.dialog.types import TURN_DEPTH_CAP
from skillscout.intents import N_ACTIONS, N_INTENTS, N_METADATA
from skillscout.dialog.prompts import PROMPT_CATALOG_SIZE
from skillscout.nnet import MLP

HIDDEN_WIDTH = 128
DROPOUT = 0.3
CHECKPOINT_FORMAT_VERSION = 1

# Reference-scale feature cardinalities (191-category catalog).
REFERENCE_FEATURE_SIZES = (
    N_INTENTS, N_ACTIONS, PROMPT_CATALOG_SIZE, N_METADATA, 191, 2, TURN_DEPTH_CAP
)
REFERENCE_ONEHOT_DIM = sum(REFERENCE_FEATURE_SIZES)


class QNetwork:
    def __init__(self, mode: str, feature_sizes: tuple[int, ...] | None, input_dim: int,
                 seed: int = 0):
        if mode not in ("embedding", "onehot"):
            raise ValueError(f"unknown mode {mode!r}")
        self.mode = mode
        self.feature_sizes = tuple(feature_sizes) if feature_sizes else None
        self.input_dim = input_dim
        if mode == "embedding":
            self.mlp = MLP(
                [input_dim, HIDDEN_WIDTH, HIDDEN_WIDTH, N_ACTIONS],
                embedding_sizes=list(self.feature_sizes),
                dropout=DROPOUT,
                seed=seed,
            )
        else:
            self.mlp = MLP(
                [input_dim, HIDDEN_WIDTH, HIDDEN_WIDTH, N_ACTIONS],
                embedding_sizes=None,
                dropout=DROPOUT,
                seed=seed,
            )

    @classmethod
    def from_encoder(cls, encoder: StateEncoder, seed: int = 0) -> "QNetwork":
        if encoder.mode == "embedding":
            return cls("embedding", encoder.feature_sizes, encoder.input_dim, seed)
        return cls("onehot", None, encoder.input_dim, seed)

    @property
    def params(self):
        return self.mlp.params


def init_network(input_dim: int, seed: int) -> QNetwork:
    """Reference-scale constructor: 7 selects embedding mode, 389 one-hot."""
    if input_dim == 7:
        return QNetwork("embedding", REFERENCE_FEATURE_SIZES, 7, seed)
    if input_dim == REFERENCE_ONEHOT_DIM:
        return QNetwork("onehot", None, REFERENCE_ONEHOT_DIM, seed)
    raise ValueError(f"unsupported input_dim {input_dim}; expected 7 or {REFERENCE_ONEHOT_DIM}")


def forward(
    net: QNetwork,
    x: np.ndarray,
    mode: str = "eval",
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Q-values for one state (1-D input) or a batch (2-D input)."""
    if mode not in ("train", "eval"):
        raise ValueError(f"unknown forward mode {mode!r}")
    x = np.asarray(x)
    single = x.ndim == 1
    if x.shape[-1] != net.input_dim:
        raise ValueError(f"input width {x.shape[-1]} does not match network width {net.input_dim}")
    out, _ = net.mlp.forward(x, train=(mode == "train"), rng=rng)
    return out[0] if single else out


def sync_target(net: QNetwork, target: QNetwork) -> None:
    """Copy online parameters into the target network."""
    if net.mode != target.mode or net.input_dim != target.input_dim:
        raise ValueError("architecture mismatch between online and target networks")
    target.mlp.copy_from(net.mlp)


def save_checkpoint(net: QNetwork, path: str | Path, extra: dict | None = None) -> None:
    doc = {
        "format_version": CHECKPOINT_FORMAT_VERSION,
        "mode": net.mode,
        "feature_sizes": list(net.feature_sizes) if net.feature_sizes else None,
        "input_dim": net.input_dim,
        "hidden_width": HIDDEN_WIDTH,
        "params": {k: v.tolist() for k, v in net.params.items()},
    }
    if extra:
        doc.update(extra)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_checkpoint(path: str | Path) -> QNetwork:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != CHECKPOINT_FORMAT_VERSION:
        raise ValueError(f"unsupported checkpoint format_version {doc.get('format_version')!r}")
    fs = tuple(doc["feature_sizes"]) if doc["feature_sizes"] else None
    net = QNetwork(doc["mode"], fs, doc["input_dim"])
    for k, v in doc["params"].items():
        net.mlp.params[k] = np.asarray(v, dtype=np.float64)
    return net
