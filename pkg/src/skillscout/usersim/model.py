"""The trainable next-intent model: scalar feature embeddings, one rectified
hidden layer, softmax over the 17 intents plus end-of-dialog."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from skillscout.dialog.prompts import load_prompt_catalog
from skillscout.nnet import MLP, Adam, softmax, softmax_cross_entropy
from skillscout.usersim.dataset import (
    CLASS_INDEX,
    MODEL_CLASSES,
    N_MODEL_CLASSES,
    IntentContext,
    IntentDataset,
    intent_feature_sizes,
)

MODEL_FORMAT_VERSION = 1
N_CONTEXT_FEATURES = 6


class TrainingError(RuntimeError):
    pass


@dataclass
class IntentTrainConfig:
    hidden_width: int = 64
    learning_rate: float = 0.005
    epochs: int = 30
    batch_size: int = 256
    held_out_fraction: float = 0.1
    seed: int = 0


class IntentModel:
    def __init__(self, prompt_ids: list[str], hidden_width: int, seed: int = 0):
        self.prompt_ids = list(prompt_ids)
        self.prompt_index = {p: i for i, p in enumerate(self.prompt_ids)}
        self.hidden_width = hidden_width
        self.feature_sizes = intent_feature_sizes(len(self.prompt_ids))
        self.net = MLP(
            layer_sizes=[N_CONTEXT_FEATURES, hidden_width, N_MODEL_CLASSES],
            embedding_sizes=list(self.feature_sizes),
            dropout=0.0,
            seed=seed,
        )

    def encode(self, contexts: list[IntentContext]) -> np.ndarray:
        return np.array(
            [ctx.feature_indices(self.prompt_index) for ctx in contexts], dtype=np.int64
        )

    def predict_proba(self, contexts: list[IntentContext]) -> np.ndarray:
        logits, _ = self.net.forward(self.encode(contexts))
        return softmax(logits)

    def perplexity(self, x: np.ndarray, y: np.ndarray) -> float:
        """exp(mean negative log-likelihood) over encoded pairs."""
        logits, _ = self.net.forward(x)
        loss, _ = softmax_cross_entropy(logits, y)
        return float(np.exp(loss))


def encode_dataset(model: IntentModel, dataset: IntentDataset, indices: list[int]):
    contexts = [dataset.pairs[i][0] for i in indices]
    labels = np.array([CLASS_INDEX[dataset.pairs[i][1]] for i in indices], dtype=np.int64)
    return model.encode(contexts), labels


def train_intent_model(
    dataset: IntentDataset,
    hp: IntentTrainConfig | None = None,
    prompt_ids: list[str] | None = None,
) -> tuple[IntentModel, float]:
    """Cross-entropy training; the epoch with the lowest held-out perplexity wins."""
    hp = hp or IntentTrainConfig()
    if prompt_ids is None:
        prompt_ids = [p.prompt_id for p in load_prompt_catalog().prompts]
    rng = np.random.default_rng(hp.seed)
    if not dataset.train and not dataset.held_out:
        dataset.split(hp.held_out_fraction, rng)
    if not dataset.train:
        raise TrainingError("training split is empty")

    model = IntentModel(prompt_ids, hp.hidden_width, seed=hp.seed)
    x_train, y_train = encode_dataset(model, dataset, dataset.train)
    x_held, y_held = encode_dataset(model, dataset, dataset.held_out)
    eval_x, eval_y = (x_held, y_held) if len(y_held) else (x_train, y_train)

    opt = Adam(model.net.params, lr=hp.learning_rate)
    best = {k: v.copy() for k, v in model.net.params.items()}
    best_ppl = model.perplexity(eval_x, eval_y)
    n = len(y_train)
    for epoch in range(hp.epochs):
        order = rng.permutation(n)
        for start in range(0, n, hp.batch_size):
            idx = order[start : start + hp.batch_size]
            logits, cache = model.net.forward(x_train[idx], train=True, rng=rng)
            loss, dout = softmax_cross_entropy(logits, y_train[idx])
            if not np.isfinite(loss):
                raise TrainingError(f"non-finite loss at epoch {epoch}")
            grads = model.net.backward(cache, dout)
            opt.step(model.net.params, grads)
        ppl = model.perplexity(eval_x, eval_y)
        if not np.isfinite(ppl):
            raise TrainingError(f"non-finite perplexity at epoch {epoch}")
        if ppl < best_ppl:
            best_ppl = ppl
            best = {k: v.copy() for k, v in model.net.params.items()}
    model.net.params = best
    return model, float(best_ppl)


def sample_intent(model: IntentModel, context: IntentContext, rng: np.random.Generator):
    """One draw from the model's next-intent distribution.

    Returns a UserIntent, or END_OF_DIALOG when the model predicts the
    conversation is over.
    """
    probs = model.predict_proba([context])[0]
    cum = np.cumsum(probs)
    draw = rng.random() * cum[-1]
    return MODEL_CLASSES[int(np.searchsorted(cum, draw))]


def save_intent_model(model: IntentModel, path: str | Path) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "feature_sizes": list(model.feature_sizes),
        "hidden_width": model.hidden_width,
        "prompt_ids": model.prompt_ids,
        "classes": [c.value if hasattr(c, "value") else c for c in MODEL_CLASSES],
        "params": {k: v.tolist() for k, v in model.net.params.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_intent_model(path: str | Path) -> IntentModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format_version") != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {doc.get('format_version')!r}")
    model = IntentModel(doc["prompt_ids"], doc["hidden_width"])
    for k, v in doc["params"].items():
        model.net.params[k] = np.asarray(v, dtype=np.float64)
    return model
