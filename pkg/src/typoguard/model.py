"""Classifier contract and the built-in bag-of-tokens linear model.

The certifier and attacker only require the small contract below: an
ordered tuple of classes, per-class scores, and predictions that are the
argmax of the scores with ties going to the lowest class index. The bundled
model is multinomial logistic regression over token counts, trained by
full-batch gradient descent with a fixed epoch count so that training is
exactly reproducible.
"""

from __future__ import annotations

import json
from collections import Counter
from typing import Sequence

import numpy as np

from .encoder import SEP_TOKEN

OOV_FEATURE = "<unk>"

_MODEL_MAGIC = "typoguard-model"
_MODEL_VERSION = 1


class TextClassifier:
    """Contract shared by all classifiers in this package.

    ``classes`` is the fixed label order and ``scores`` returns one real per
    class in that order. ``predict`` is derived from ``scores`` so the two
    can never disagree.
    """

    classes: tuple

    def scores(self, tokens: Sequence[str]) -> list[float]:
        raise NotImplementedError

    def predict(self, tokens: Sequence[str]):
        s = self.scores(tokens)
        return self.classes[max(range(len(s)), key=lambda i: (s[i], -i))]


def token_features(tokens: Sequence[str]) -> Counter:
    """Count features, tagging tokens by which side of the separator they sit on."""
    feats: Counter = Counter()
    segment = "a"
    for t in tokens:
        if t == SEP_TOKEN:
            segment = "b"
            continue
        feats[f"{segment}:{t}"] += 1
    return feats


class BowLinearModel(TextClassifier):
    """Multinomial logistic regression on bag-of-encoded-token counts.

    Feature index 0 is reserved for unseen tokens; its weights stay at zero
    because the feature never fires during training.
    """

    def __init__(
        self,
        classes: Sequence,
        feature_index: dict[str, int],
        weights: np.ndarray,
        bias: np.ndarray,
        hyperparams: dict[str, float],
        seed: int,
    ):
        self.classes = tuple(classes)
        self.feature_index = feature_index
        self.weights = weights
        self.bias = bias
        self.hyperparams = hyperparams
        self.seed = seed

    @classmethod
    def train(
        cls,
        dataset: Sequence[tuple[Sequence[str], object]],
        l2: float = 1e-4,
        epochs: int = 300,
        learning_rate: float = 0.5,
        seed: int = 0,
    ) -> "BowLinearModel":
        """Fit on (tokens, label) pairs. Deterministic for fixed inputs."""
        if not dataset:
            raise ValueError("training dataset is empty")
        classes = tuple(sorted({label for _, label in dataset}, key=str))
        if len(classes) < 2:
            raise ValueError(f"need at least 2 classes, got {classes}")
        class_index = {c: k for k, c in enumerate(classes)}

        names = sorted({f for tokens, _ in dataset for f in token_features(tokens)})
        feature_index = {OOV_FEATURE: 0}
        for name in names:
            feature_index[name] = len(feature_index)

        n, d, c = len(dataset), len(feature_index), len(classes)
        X = np.zeros((n, d))
        Y = np.zeros((n, c))
        for row, (tokens, label) in enumerate(dataset):
            for f, count in token_features(tokens).items():
                X[row, feature_index[f]] = count
            Y[row, class_index[label]] = 1.0

        W = np.zeros((c, d))
        b = np.zeros(c)
        for _ in range(epochs):
            Z = X @ W.T + b
            Z -= Z.max(axis=1, keepdims=True)
            P = np.exp(Z)
            P /= P.sum(axis=1, keepdims=True)
            G = (P - Y) / n
            W -= learning_rate * (G.T @ X + l2 * W)
            b -= learning_rate * G.sum(axis=0)

        return cls(
            classes=classes,
            feature_index=feature_index,
            weights=W,
            bias=b,
            hyperparams={"l2": l2, "epochs": epochs, "learning_rate": learning_rate},
            seed=seed,
        )

    def scores(self, tokens: Sequence[str]) -> list[float]:
        x = np.zeros(len(self.feature_index))
        for f, count in token_features(tokens).items():
            x[self.feature_index.get(f, 0)] += count
        return list(self.weights @ x + self.bias)

    def save(self, sink) -> None:
        """Serialize to JSON; floats round-trip exactly via repr."""
        order = sorted(self.feature_index, key=self.feature_index.get)
        payload = {
            "format": _MODEL_MAGIC,
            "version": _MODEL_VERSION,
            "classes": list(self.classes),
            "hyperparams": self.hyperparams,
            "seed": self.seed,
            "features": order,
            "weights": [[float(v) for v in row] for row in self.weights],
            "bias": [float(v) for v in self.bias],
        }
        json.dump(payload, sink, indent=2)
        sink.write("\n")

    @classmethod
    def load(cls, source) -> "BowLinearModel":
        payload = json.load(source)
        if payload.get("format") != _MODEL_MAGIC:
            raise ValueError("not a typoguard model artifact")
        if payload.get("version") != _MODEL_VERSION:
            raise ValueError(f"unsupported model version {payload.get('version')!r}")
        features = payload["features"]
        if features[0] != OOV_FEATURE:
            raise ValueError("corrupt model artifact: missing reserved feature")
        return cls(
            classes=tuple(payload["classes"]),
            feature_index={f: i for i, f in enumerate(features)},
            weights=np.array(payload["weights"]),
            bias=np.array(payload["bias"]),
            hyperparams=payload["hyperparams"],
            seed=payload["seed"],
        )

    def save_file(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            self.save(f)

    @classmethod
    def load_file(cls, path) -> "BowLinearModel":
        with open(path, encoding="utf-8") as f:
            return cls.load(f)
