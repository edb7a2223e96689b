"""Minimal feed-forward network with hand-derived backprop.

Everything runs in float64. A network is a stack of fully connected layers
with rectifier hidden activations, optional inverted dropout after each hidden
layer, and an optional per-feature scalar-embedding front end (each integer
feature index maps to one learned scalar).

Parameters live in a plain dict of numpy arrays so optimizers and
finite-difference checks can treat them uniformly.
"""

from __future__ import annotations

import numpy as np


def relu(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


class MLP:
    def __init__(
        self,
        layer_sizes: list[int],
        embedding_sizes: list[int] | None = None,
        dropout: float = 0.0,
        seed: int = 0,
    ):
        if len(layer_sizes) < 2:
            raise ValueError("need at least input and output sizes")
        if embedding_sizes is not None and layer_sizes[0] != len(embedding_sizes):
            raise ValueError("input width must equal the number of embedded features")
        self.layer_sizes = list(layer_sizes)
        self.embedding_sizes = list(embedding_sizes) if embedding_sizes is not None else None
        self.dropout = float(dropout)
        rng = np.random.default_rng(seed)
        self.params: dict[str, np.ndarray] = {}
        if self.embedding_sizes is not None:
            for f, size in enumerate(self.embedding_sizes):
                self.params[f"emb{f}"] = rng.uniform(-1.0, 1.0, size=size)
        for i, (fan_in, fan_out) in enumerate(zip(layer_sizes[:-1], layer_sizes[1:])):
            bound = 1.0 / np.sqrt(fan_in)
            self.params[f"W{i}"] = rng.uniform(-bound, bound, size=(fan_in, fan_out))
            self.params[f"b{i}"] = np.zeros(fan_out)

    @property
    def n_layers(self) -> int:
        return len(self.layer_sizes) - 1

    def forward(
        self,
        x: np.ndarray,
        train: bool = False,
        rng: np.random.Generator | None = None,
    ) -> tuple[np.ndarray, dict]:
        """Returns (output, cache). x is (B, in) floats, or (B, F) integer
        indices when the network has an embedding front end."""
        x = np.atleast_2d(np.asarray(x))
        cache: dict = {"train": train}
        if self.embedding_sizes is not None:
            idx = x.astype(np.int64)
            cache["idx"] = idx
            h = np.empty(idx.shape, dtype=np.float64)
            for f in range(idx.shape[1]):
                h[:, f] = self.params[f"emb{f}"][idx[:, f]]
        else:
            h = x.astype(np.float64)
        cache["h0"] = h
        masks = []
        for i in range(self.n_layers):
            z = h @ self.params[f"W{i}"] + self.params[f"b{i}"]
            if i < self.n_layers - 1:
                a = relu(z)
                if train and self.dropout > 0.0:
                    if rng is None:
                        raise ValueError("train-mode forward with dropout needs an rng")
                    keep = 1.0 - self.dropout
                    mask = (rng.random(a.shape) < keep) / keep
                    a = a * mask
                    masks.append(mask)
                else:
                    masks.append(None)
                cache[f"z{i}"] = z
                cache[f"h{i + 1}"] = a
                h = a
            else:
                h = z
        cache["masks"] = masks
        return h, cache

    def backward(self, cache: dict, dout: np.ndarray) -> dict[str, np.ndarray]:
        """Gradients of a scalar loss wrt every parameter, given dloss/doutput."""
        grads: dict[str, np.ndarray] = {}
        delta = np.asarray(dout, dtype=np.float64)
        for i in range(self.n_layers - 1, -1, -1):
            h_in = cache[f"h{i}"]
            grads[f"W{i}"] = h_in.T @ delta
            grads[f"b{i}"] = delta.sum(axis=0)
            if i > 0:
                delta = delta @ self.params[f"W{i}"].T
                mask = cache["masks"][i - 1]
                if mask is not None:
                    delta = delta * mask
                delta = delta * (cache[f"z{i - 1}"] > 0)
        if self.embedding_sizes is not None:
            delta_in = delta @ self.params["W0"].T
            idx = cache["idx"]
            for f in range(idx.shape[1]):
                g = np.zeros_like(self.params[f"emb{f}"])
                np.add.at(g, idx[:, f], delta_in[:, f])
                grads[f"emb{f}"] = g
        return grads

    def copy_from(self, other: "MLP") -> None:
        if self.layer_sizes != other.layer_sizes or self.embedding_sizes != other.embedding_sizes:
            raise ValueError("architecture mismatch")
        for k, v in other.params.items():
            self.params[k] = v.copy()

    def clone(self) -> "MLP":
        twin = MLP(self.layer_sizes, self.embedding_sizes, self.dropout, seed=0)
        twin.copy_from(self)
        return twin


def mse_on_selected(
    out: np.ndarray, selected: np.ndarray, targets: np.ndarray
) -> tuple[float, np.ndarray]:
    """Mean squared error over out[i, selected[i]] vs targets[i].

    Only the selected output of each row receives gradient.
    """
    rows = np.arange(out.shape[0])
    diff = out[rows, selected] - targets
    loss = float(np.mean(diff**2))
    dout = np.zeros_like(out)
    dout[rows, selected] = 2.0 * diff / out.shape[0]
    return loss, dout


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def softmax_cross_entropy(logits: np.ndarray, labels: np.ndarray) -> tuple[float, np.ndarray]:
    """Mean cross-entropy of integer labels under softmax(logits)."""
    probs = softmax(logits)
    rows = np.arange(logits.shape[0])
    eps = 1e-12
    loss = float(-np.mean(np.log(probs[rows, labels] + eps)))
    dout = probs.copy()
    dout[rows, labels] -= 1.0
    dout /= logits.shape[0]
    return loss, dout


class Adam:
    """Adaptive-moment gradient descent with bias correction."""

    def __init__(self, params: dict[str, np.ndarray], lr: float, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: dict[str, np.ndarray], grads: dict[str, np.ndarray]) -> None:
        self.t += 1
        b1c = 1.0 - self.beta1**self.t
        b2c = 1.0 - self.beta2**self.t
        for k, g in grads.items():
            self.m[k] = self.beta1 * self.m[k] + (1.0 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1.0 - self.beta2) * g**2
            m_hat = self.m[k] / b1c
            v_hat = self.v[k] / b2c
            params[k] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)


def gradient_check(
    net: MLP,
    x: np.ndarray,
    loss_fn,
    h: float = 1e-5,
    max_entries_per_group: int | None = None,
    seed: int = 0,
) -> float:
    """Max relative error between analytic and central finite-difference
    gradients. Every parameter group is covered; within a group, at most
    max_entries_per_group seeded-random entries are probed (all of them when
    None). loss_fn(out) -> (loss, dout).

    Entries whose +-h perturbation flips a rectifier's activation state are
    skipped: the loss is not differentiable inside that interval, so a central
    difference there estimates nothing.
    """
    pick = np.random.default_rng(seed)
    out, cache = net.forward(x, train=False)
    _, dout = loss_fn(out)
    grads = net.backward(cache, dout)

    def activation_pattern(c: dict):
        return [c[f"z{i}"] > 0 for i in range(net.n_layers - 1)]

    worst = 0.0
    for name, param in net.params.items():
        flat = param.reshape(-1)
        g_flat = grads[name].reshape(-1)
        if max_entries_per_group is not None and flat.size > max_entries_per_group:
            entries = pick.choice(flat.size, size=max_entries_per_group, replace=False)
        else:
            entries = range(flat.size)
        for j in entries:
            orig = flat[j]
            flat[j] = orig + h
            out_p, cache_p = net.forward(x, train=False)
            lp, _ = loss_fn(out_p)
            flat[j] = orig - h
            out_m, cache_m = net.forward(x, train=False)
            lm, _ = loss_fn(out_m)
            flat[j] = orig
            if any(
                not np.array_equal(zp, zm)
                for zp, zm in zip(activation_pattern(cache_p), activation_pattern(cache_m))
            ):
                continue
            fd = (lp - lm) / (2.0 * h)
            denom = max(abs(fd), abs(g_flat[j]), 1e-8)
            err = abs(fd - g_flat[j]) / denom
            worst = max(worst, err)
    return worst
