"""Permutation Decision Forest and a bootstrap-bagging baseline.

In ``permutation`` mode every tree sees all instances and all features; the
only thing that varies is instance order. ``bootstrap`` mode resamples rows
with replacement and draws ``ceil(sqrt(d))`` features per tree, as a
conventional random-forest style comparison.

Per-tree randomness comes from a Philox stream keyed by ``(seed, tree_index)``
so a tree's training order never depends on which trees were built before it
or on how many worker threads ran.
"""
from __future__ import annotations

import enum
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import tree as tree_mod
from .data import Dataset
from .errors import DomainError, ModelFormatError
from .tree import DecisionTree, TrainConfig

__all__ = [
    "BaggingMode",
    "ForestConfig",
    "ForestModel",
    "tree_rng",
    "permute",
    "permutation_order",
    "fit_forest",
    "predict_majority",
    "serialize_forest",
    "deserialize_forest",
]

FORMAT_NAME = "etcforest-forest"
FORMAT_VERSION = 1


class BaggingMode(str, enum.Enum):
    PERMUTATION = "permutation"
    BOOTSTRAP = "bootstrap"


@dataclass(frozen=True)
class ForestConfig:
    n_estimators: int = 5
    seed: int = 0
    tree_config: TrainConfig = field(default_factory=TrainConfig)
    bagging_mode: BaggingMode = BaggingMode.PERMUTATION

    def __post_init__(self):
        if int(self.n_estimators) < 1:
            raise DomainError("n_estimators must be >= 1")
        object.__setattr__(self, "n_estimators", int(self.n_estimators))
        object.__setattr__(self, "seed", int(self.seed))
        try:
            object.__setattr__(self, "bagging_mode", BaggingMode(self.bagging_mode))
        except ValueError:
            raise DomainError(f"unknown bagging mode {self.bagging_mode!r}") from None

    def to_dict(self):
        return {
            "n_estimators": self.n_estimators,
            "seed": self.seed,
            "bagging_mode": self.bagging_mode.value,
            "tree_config": self.tree_config.to_dict(),
        }


@dataclass(frozen=True)
class ForestModel:
    trees: tuple[DecisionTree, ...]
    config: ForestConfig
    per_tree_orders: tuple[tuple[int, ...], ...]
    # feature subsets per tree; None means all features
    per_tree_features: tuple[tuple[int, ...] | None, ...] = ()

    @property
    def class_names(self):
        return self.trees[0].class_names

    @property
    def n_features(self):
        return self.trees[0].n_features

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.array([predict_majority(self, row) for row in X], dtype=np.int64)


def tree_rng(seed: int, tree_index: int) -> np.random.Generator:
    """Independent generator for tree ``tree_index`` of a forest seeded ``seed``."""
    key = ((int(seed) % (1 << 64)) << 64) | (int(tree_index) % (1 << 64))
    return np.random.Generator(np.random.Philox(key=key))


def permutation_order(n: int, tree_index: int, seed: int) -> np.ndarray:
    return tree_rng(seed, tree_index).permutation(n)


def permute(dataset: Dataset, tree_index: int, seed: int) -> Dataset:
    """Uniformly shuffled copy of ``dataset``; rows keep their labels."""
    if dataset.n_instances == 0:
        raise DomainError("cannot permute an empty dataset")
    return dataset.take(permutation_order(dataset.n_instances, tree_index, seed))


def _draw(dataset: Dataset, config: ForestConfig, i: int):
    n, d = dataset.n_instances, dataset.n_features
    rng = tree_rng(config.seed, i)
    if config.bagging_mode is BaggingMode.PERMUTATION:
        return rng.permutation(n), None
    rows = rng.integers(0, n, size=n)
    k = math.ceil(math.sqrt(d))
    feats = np.sort(rng.choice(d, size=k, replace=False))
    return rows, feats


def fit_forest(dataset: Dataset, config: ForestConfig, n_jobs: int = 1,
               orders=None, features=None) -> ForestModel:
    """Train ``config.n_estimators`` trees.

    Parameters
    ----------
    dataset : Dataset
    config : ForestConfig
    n_jobs : int
        Worker threads. Results do not depend on it.
    orders, features : sequences, optional
        Replay explicit per-tree row orders (and feature subsets) instead of
        drawing them from the seed, e.g. to rebuild a saved model.
    """
    if dataset.n_instances == 0:
        raise DomainError("cannot fit a forest on an empty dataset")
    if orders is None:
        drawn = [_draw(dataset, config, i) for i in range(config.n_estimators)]
        orders = [o for o, _ in drawn]
        features = [f for _, f in drawn]
    else:
        if len(orders) != config.n_estimators:
            raise DomainError("need one order per estimator")
        features = list(features) if features is not None else [None] * len(orders)

    def build(i):
        return tree_mod.fit(dataset.take(orders[i]), config.tree_config, features[i])

    if n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trees = list(pool.map(build, range(config.n_estimators)))
    else:
        trees = [build(i) for i in range(config.n_estimators)]
    return ForestModel(
        tuple(trees),
        config,
        tuple(tuple(int(j) for j in o) for o in orders),
        tuple(None if f is None else tuple(int(j) for j in f) for f in features),
    )


def predict_majority(forest: ForestModel, instance) -> int:
    """Plain majority vote; a tie goes to the smallest class id."""
    if not forest.trees:
        raise DomainError("forest has no trees")
    votes = [tree_mod.predict(t, instance) for t in forest.trees]
    counts = np.bincount(votes, minlength=len(forest.class_names))
    return int(np.argmax(counts))


def serialize_forest(forest: ForestModel) -> str:
    doc = {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "config": forest.config.to_dict(),
        "per_tree_orders": [list(o) for o in forest.per_tree_orders],
        "per_tree_features": [None if f is None else list(f) for f in forest.per_tree_features],
        "trees": [tree_mod.to_document(t) for t in forest.trees],
    }
    return json.dumps(doc)


def from_forest_document(doc) -> ForestModel:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} document", "format")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported version {doc.get('version')!r}", "version")
    try:
        cfg = dict(doc["config"])
        cfg["tree_config"] = TrainConfig(**cfg["tree_config"])
        config = ForestConfig(**cfg)
        trees = tuple(tree_mod.from_document(t) for t in doc["trees"])
        orders = tuple(tuple(o) for o in doc["per_tree_orders"])
        feats = tuple(None if f is None else tuple(f) for f in doc["per_tree_features"])
    except (KeyError, TypeError, DomainError) as exc:
        raise ModelFormatError(f"invalid forest document: {exc}") from None
    if len(trees) != config.n_estimators or len(orders) != len(trees):
        raise ModelFormatError("tree count does not match n_estimators", "trees")
    return ForestModel(trees, config, orders, feats)


def deserialize_forest(text: str) -> ForestModel:
    return from_forest_document(tree_mod.load_json(text))
