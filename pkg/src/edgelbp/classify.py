"""Classifiers over feature vectors: 1-NN reference, random forest, MLP.

All three are trained from scratch here so experiments are reproducible
bit for bit: every random choice flows from a stored seed through
numpy's PCG64 stream, tie-breaks are explicit (first in training order /
earliest class), and models serialize to versioned JSON documents that
reload to identical predictors.
"""

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .descriptors import FeatureVector
from .errors import (
    DegenerateLabelsError,
    InvalidFeatureError,
    SchemeMismatchError,
)
from .fileio import atomic_write_text

MODEL_FORMAT_VERSION = 1

KINDS = ("knn", "forest", "mlp")


@dataclass(frozen=True)
class KnnConfig:
    """Nearest-exemplar reference classifier; no knobs beyond the seed slot."""

    seed: int = 0


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: Optional[int] = None
    seed: int = 0


@dataclass(frozen=True)
class MlpConfig:
    hidden_units: int = 64
    epochs: int = 200
    learning_rate: float = 0.01
    seed: int = 0


def _as_matrix(vectors):
    """Stack training vectors, validating scheme agreement and finiteness."""
    if not vectors:
        raise ValueError("training set is empty")
    scheme = vectors[0].scheme
    for v in vectors:
        if v.scheme != scheme:
            raise SchemeMismatchError(
                f"mixed schemes in training set: {scheme!r} and {v.scheme!r}"
            )
    matrix = np.stack([np.asarray(v.values, dtype=np.float64) for v in vectors])
    if not np.isfinite(matrix).all():
        raise InvalidFeatureError("training features contain NaN or infinity")
    labels = [v.label for v in vectors]
    return matrix, labels, scheme


def _class_indices(labels):
    classes = sorted(set(labels))
    if len(classes) < 2:
        raise DegenerateLabelsError(
            f"training data has {len(classes)} class(es); need at least 2"
        )
    index = {c: i for i, c in enumerate(classes)}
    y = np.array([index[l] for l in labels], dtype=np.int64)
    return classes, y


def _check_input(model, v):
    """Feature array for predict(); scheme/dims must match training."""
    if isinstance(v, FeatureVector):
        if v.scheme != model.scheme:
            raise SchemeMismatchError(
                f"model was trained on scheme {model.scheme!r}, input is {v.scheme!r}"
            )
        arr = np.asarray(v.values, dtype=np.float64)
    else:
        arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != 1 or len(arr) != model.n_features:
        raise SchemeMismatchError(
            f"model expects {model.n_features} features, got {arr.shape}"
        )
    return arr


# ---------------------------------------------------------------- 1-NN


@dataclass(frozen=True)
class KnnModel:
    kind = "knn"
    scheme: str
    classes: list
    seed: int
    exemplars: np.ndarray
    exemplar_classes: np.ndarray  # index into classes, one per exemplar

    @property
    def n_features(self):
        return self.exemplars.shape[1]

    def predict(self, v):
        arr = _check_input(self, v)
        diff = self.exemplars - arr
        d2 = np.einsum("ij,ij->i", diff, diff)
        # argmin returns the first minimum: ties go to training order
        return self.classes[int(self.exemplar_classes[np.argmin(d2)])]

    def predict_batch(self, matrix):
        return [self.predict(row) for row in np.asarray(matrix, dtype=np.float64)]

    def to_dict(self):
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "knn",
            "scheme": self.scheme,
            "classes": list(self.classes),
            "seed": int(self.seed),
            "exemplars": self.exemplars.tolist(),
            "exemplar_classes": self.exemplar_classes.tolist(),
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            scheme=doc["scheme"],
            classes=list(doc["classes"]),
            seed=int(doc["seed"]),
            exemplars=np.asarray(doc["exemplars"], dtype=np.float64),
            exemplar_classes=np.asarray(doc["exemplar_classes"], dtype=np.int64),
        )


def _train_knn(config, matrix, y, classes, scheme):
    return KnnModel(
        scheme=scheme,
        classes=classes,
        seed=int(config.seed),
        exemplars=matrix,
        exemplar_classes=y,
    )


# ---------------------------------------------------------------- forest


@dataclass(frozen=True)
class Tree:
    """Array-encoded binary decision tree.

    feature[i] is the split feature of node i, or -1 for a leaf;
    x[feature] <= threshold routes left. leaf_class holds the majority
    class index at leaves (-1 elsewhere).
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    leaf_class: np.ndarray

    def predict_batch(self, matrix):
        node = np.zeros(len(matrix), dtype=np.int64)
        pending = np.nonzero(self.feature[node] >= 0)[0]
        while pending.size:
            at = node[pending]
            go_left = matrix[pending, self.feature[at]] <= self.threshold[at]
            node[pending] = np.where(go_left, self.left[at], self.right[at])
            pending = pending[self.feature[node[pending]] >= 0]
        return self.leaf_class[node]


def _best_cut(values, y_onehot):
    """Best Gini cut for one feature: (score, threshold) or None.

    score is n * weighted Gini impurity of the two children (the parent
    term is constant per node, so minimizing this maximizes the decrease).
    Ties go to the smallest threshold.
    """
    order = np.argsort(values, kind="stable")
    v = values[order]
    cuts = np.nonzero(v[:-1] < v[1:])[0]
    if cuts.size == 0:
        return None
    prefix = np.cumsum(y_onehot[order], axis=0)
    total = prefix[-1]
    n = len(v)
    n_left = (cuts + 1).astype(np.float64)
    n_right = n - n_left
    left_counts = prefix[cuts]
    right_counts = total - left_counts
    score = (
        n_left
        - (left_counts**2).sum(axis=1) / n_left
        + n_right
        - (right_counts**2).sum(axis=1) / n_right
    )
    best = int(np.argmin(score))
    threshold = 0.5 * (v[cuts[best]] + v[cuts[best] + 1])
    return float(score[best]), float(threshold)


def _grow_tree(matrix, y, n_classes, mtry, max_depth, rng):
    feature, threshold, left, right, leaf_class = [], [], [], [], []

    def leaf(counts):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        leaf_class.append(int(np.argmax(counts)))  # first max: earliest class
        return len(feature) - 1

    def build(idx, depth):
        labels = y[idx]
        counts = np.bincount(labels, minlength=n_classes)
        if counts.max() == len(idx) or len(idx) < 2:
            return leaf(counts)
        if max_depth is not None and depth >= max_depth:
            return leaf(counts)
        candidates = rng.choice(matrix.shape[1], size=mtry, replace=False)
        onehot = np.zeros((len(idx), n_classes), dtype=np.float64)
        onehot[np.arange(len(idx)), labels] = 1.0
        best = None
        for f in candidates:
            cut = _best_cut(matrix[idx, f], onehot)
            if cut is not None and (best is None or cut[0] < best[0]):
                best = (cut[0], int(f), cut[1])
        if best is None:
            return leaf(counts)
        _, f, t = best
        node = leaf(counts)  # placeholder; overwrite as internal node
        feature[node] = f
        threshold[node] = t
        leaf_class[node] = -1
        goes_left = matrix[idx, f] <= t
        left[node] = build(idx[goes_left], depth + 1)
        right[node] = build(idx[~goes_left], depth + 1)
        return node

    build(np.arange(len(y), dtype=np.int64), 0)
    return Tree(
        feature=np.array(feature, dtype=np.int64),
        threshold=np.array(threshold, dtype=np.float64),
        left=np.array(left, dtype=np.int64),
        right=np.array(right, dtype=np.int64),
        leaf_class=np.array(leaf_class, dtype=np.int64),
    )


@dataclass(frozen=True)
class ForestModel:
    kind = "forest"
    scheme: str
    classes: list
    seed: int
    n_features: int
    trees: list

    def _votes(self, matrix):
        votes = np.zeros((len(matrix), len(self.classes)), dtype=np.int64)
        rows = np.arange(len(matrix))
        for tree in self.trees:
            votes[rows, tree.predict_batch(matrix)] += 1
        return votes

    def predict(self, v):
        arr = _check_input(self, v)
        votes = self._votes(arr[None, :])[0]
        return self.classes[int(np.argmax(votes))]  # ties: earliest class

    def predict_batch(self, matrix):
        matrix = np.asarray(matrix, dtype=np.float64)
        votes = self._votes(matrix)
        return [self.classes[i] for i in np.argmax(votes, axis=1)]

    def to_dict(self):
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "forest",
            "scheme": self.scheme,
            "classes": list(self.classes),
            "seed": int(self.seed),
            "n_features": int(self.n_features),
            "trees": [
                {
                    "feature": t.feature.tolist(),
                    "threshold": t.threshold.tolist(),
                    "left": t.left.tolist(),
                    "right": t.right.tolist(),
                    "leaf_class": t.leaf_class.tolist(),
                }
                for t in self.trees
            ],
        }

    @classmethod
    def from_dict(cls, doc):
        trees = [
            Tree(
                feature=np.asarray(t["feature"], dtype=np.int64),
                threshold=np.asarray(t["threshold"], dtype=np.float64),
                left=np.asarray(t["left"], dtype=np.int64),
                right=np.asarray(t["right"], dtype=np.int64),
                leaf_class=np.asarray(t["leaf_class"], dtype=np.int64),
            )
            for t in doc["trees"]
        ]
        return cls(
            scheme=doc["scheme"],
            classes=list(doc["classes"]),
            seed=int(doc["seed"]),
            n_features=int(doc["n_features"]),
            trees=trees,
        )


def _train_forest(config, matrix, y, classes, scheme):
    if config.n_trees < 1:
        raise ValueError("n_trees must be at least 1")
    n, d = matrix.shape
    mtry = max(1, int(math.floor(math.sqrt(d))))
    trees = []
    for i in range(config.n_trees):
        # per-tree derived seed: trees are independent of build order
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([config.seed, i])))
        bootstrap = rng.integers(0, n, size=n)
        sub = matrix[bootstrap]
        trees.append(
            _grow_tree(sub, y[bootstrap], len(classes), mtry, config.max_depth, rng)
        )
    return ForestModel(
        scheme=scheme,
        classes=classes,
        seed=int(config.seed),
        n_features=d,
        trees=trees,
    )


# ---------------------------------------------------------------- MLP


def _softmax(z):
    shifted = z - z.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


def mlp_loss_and_gradients(w1, b1, w2, b2, matrix, y_onehot):
    """Mean cross-entropy and its gradients for one sigmoid-hidden layer.

    Forward: sigmoid(x@w1 + b1) @ w2 + b2 -> softmax. Shared by training
    and by the finite-difference gradient check, so both see the exact
    same objective.
    """
    n = len(matrix)
    z1 = matrix @ w1 + b1
    a1 = 1.0 / (1.0 + np.exp(-z1))
    z2 = a1 @ w2 + b2
    shifted = z2 - z2.max(axis=1, keepdims=True)
    log_p = shifted - np.log(np.exp(shifted).sum(axis=1, keepdims=True))
    loss = -float((y_onehot * log_p).sum()) / n

    dz2 = (np.exp(log_p) - y_onehot) / n
    dw2 = a1.T @ dz2
    db2 = dz2.sum(axis=0)
    da1 = dz2 @ w2.T
    dz1 = da1 * a1 * (1.0 - a1)
    dw1 = matrix.T @ dz1
    db1 = dz1.sum(axis=0)
    return loss, (dw1, db1, dw2, db2)


def _init_mlp(seed, d, hidden, n_classes):
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    w1 = rng.uniform(-0.5, 0.5, size=(d, hidden))
    b1 = rng.uniform(-0.5, 0.5, size=hidden)
    w2 = rng.uniform(-0.5, 0.5, size=(hidden, n_classes))
    b2 = rng.uniform(-0.5, 0.5, size=n_classes)
    return w1, b1, w2, b2


@dataclass(frozen=True)
class MlpModel:
    kind = "mlp"
    scheme: str
    classes: list
    seed: int
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    loss_history: np.ndarray

    @property
    def n_features(self):
        return self.w1.shape[0]

    def _posterior(self, matrix):
        a1 = 1.0 / (1.0 + np.exp(-(matrix @ self.w1 + self.b1)))
        return _softmax(a1 @ self.w2 + self.b2)

    def predict(self, v):
        arr = _check_input(self, v)
        p = self._posterior(arr[None, :])[0]
        return self.classes[int(np.argmax(p))]  # ties: earliest class

    def predict_batch(self, matrix):
        matrix = np.asarray(matrix, dtype=np.float64)
        p = self._posterior(matrix)
        return [self.classes[i] for i in np.argmax(p, axis=1)]

    def to_dict(self):
        return {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": "mlp",
            "scheme": self.scheme,
            "classes": list(self.classes),
            "seed": int(self.seed),
            "w1": self.w1.tolist(),
            "b1": self.b1.tolist(),
            "w2": self.w2.tolist(),
            "b2": self.b2.tolist(),
            "loss_history": self.loss_history.tolist(),
        }

    @classmethod
    def from_dict(cls, doc):
        return cls(
            scheme=doc["scheme"],
            classes=list(doc["classes"]),
            seed=int(doc["seed"]),
            w1=np.asarray(doc["w1"], dtype=np.float64),
            b1=np.asarray(doc["b1"], dtype=np.float64),
            w2=np.asarray(doc["w2"], dtype=np.float64),
            b2=np.asarray(doc["b2"], dtype=np.float64),
            loss_history=np.asarray(doc["loss_history"], dtype=np.float64),
        )


def _train_mlp(config, matrix, y, classes, scheme):
    if config.hidden_units < 1:
        raise ValueError("hidden_units must be at least 1")
    if config.learning_rate <= 0:
        raise ValueError("learning_rate must be positive")
    n, d = matrix.shape
    y_onehot = np.zeros((n, len(classes)), dtype=np.float64)
    y_onehot[np.arange(n), y] = 1.0
    w1, b1, w2, b2 = _init_mlp(config.seed, d, config.hidden_units, len(classes))
    losses = np.empty(config.epochs, dtype=np.float64)
    for epoch in range(config.epochs):
        loss, (dw1, db1, dw2, db2) = mlp_loss_and_gradients(
            w1, b1, w2, b2, matrix, y_onehot
        )
        losses[epoch] = loss
        w1 = w1 - config.learning_rate * dw1
        b1 = b1 - config.learning_rate * db1
        w2 = w2 - config.learning_rate * dw2
        b2 = b2 - config.learning_rate * db2
    return MlpModel(
        scheme=scheme,
        classes=classes,
        seed=int(config.seed),
        w1=w1,
        b1=b1,
        w2=w2,
        b2=b2,
        loss_history=losses,
    )


def mlp_gradient_check(config, matrix, labels, h=1e-5):
    """Max relative error of backprop gradients vs central differences.

    Every weight and bias is perturbed by ±h; relative error uses
    |analytic − numeric| / max(|analytic| + |numeric|, 1e-6).
    """
    matrix = np.asarray(matrix, dtype=np.float64)
    classes, y = _class_indices(list(labels))
    n, d = matrix.shape
    y_onehot = np.zeros((n, len(classes)), dtype=np.float64)
    y_onehot[np.arange(n), y] = 1.0
    params = _init_mlp(config.seed, d, config.hidden_units, len(classes))
    _, grads = mlp_loss_and_gradients(*params, matrix, y_onehot)

    worst = 0.0
    for which, grad in enumerate(grads):
        flat_param = params[which]
        for idx in np.ndindex(*flat_param.shape):
            def loss_at(value):
                bumped = [p.copy() for p in params]
                bumped[which][idx] = value
                return mlp_loss_and_gradients(*bumped, matrix, y_onehot)[0]

            base = flat_param[idx]
            numeric = (loss_at(base + h) - loss_at(base - h)) / (2.0 * h)
            analytic = grad[idx]
            rel = abs(analytic - numeric) / max(abs(analytic) + abs(numeric), 1e-6)
            worst = max(worst, rel)
    return worst


# ---------------------------------------------------------------- API


_TRAINERS = {"knn": _train_knn, "forest": _train_forest, "mlp": _train_mlp}

MODEL_TYPES = {"knn": KnnModel, "forest": ForestModel, "mlp": MlpModel}

DEFAULT_CONFIGS = {"knn": KnnConfig, "forest": ForestConfig, "mlp": MlpConfig}


def train(kind, config, vectors):
    """Fit a classifier of the given kind on labeled FeatureVectors."""
    if kind not in _TRAINERS:
        raise ValueError(f"unknown classifier kind {kind!r}; expected one of {KINDS}")
    if config is None:
        config = DEFAULT_CONFIGS[kind]()
    matrix, labels, scheme = _as_matrix(vectors)
    classes, y = _class_indices(labels)
    return _TRAINERS[kind](config, matrix, y, classes, scheme)


def predict(model, v):
    return model.predict(v)


def save_model(path, model):
    atomic_write_text(path, json.dumps(model.to_dict(), sort_keys=True))


def load_model(path):
    with open(path, encoding="utf-8") as handle:
        doc = json.load(handle)
    version = doc.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"unsupported model format_version {version!r}")
    kind = doc.get("kind")
    if kind not in MODEL_TYPES:
        raise ValueError(f"unknown model kind {kind!r}")
    return MODEL_TYPES[kind].from_dict(doc)
