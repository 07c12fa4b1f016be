"""Binary threshold decision trees grown by impurity gain.

With ``structural_etc`` impurity the tree is a Permutation Decision Tree: the
split chosen at each node depends on the order of the instances reaching it.
Children always inherit their parent's instance order.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Union

import numba
import numpy as np

from .data import Dataset
from .errors import DomainError, ModelFormatError
from .etc_core import _DENSE_LIMIT, _etc_dense, _etc_sorted, _workspace, etc_value
from .impurity import ImpurityKind

__all__ = [
    "TrainConfig",
    "SplitCandidate",
    "Leaf",
    "Split",
    "DecisionTree",
    "candidate_splits",
    "best_split",
    "fit",
    "predict",
    "serialize",
    "deserialize",
    "to_document",
    "from_document",
    "to_dot",
    "dot_structure",
]

TIE_BREAK = "lowest_feature_then_threshold"
FORMAT_NAME = "etcforest-tree"
FORMAT_VERSION = 1

# float gains closer than this count as tied (entropy/gini only; ETC gains
# are compared exactly as integers)
_GAIN_EPS = 1e-12


@dataclass(frozen=True)
class TrainConfig:
    impurity_kind: ImpurityKind = ImpurityKind.STRUCTURAL_ETC
    max_depth: int = 10
    min_gain: float = 0.0
    tie_break: str = TIE_BREAK

    def __post_init__(self):
        object.__setattr__(self, "impurity_kind", ImpurityKind.parse(self.impurity_kind))
        if int(self.max_depth) < 1:
            raise DomainError("max_depth must be >= 1")
        object.__setattr__(self, "max_depth", int(self.max_depth))
        object.__setattr__(self, "min_gain", float(self.min_gain))
        if self.tie_break != TIE_BREAK:
            raise DomainError(f"unsupported tie_break {self.tie_break!r}")

    def to_dict(self):
        return {
            "impurity_kind": self.impurity_kind.value,
            "max_depth": self.max_depth,
            "min_gain": self.min_gain,
            "tie_break": self.tie_break,
        }


@dataclass(frozen=True)
class SplitCandidate:
    feature_index: int
    threshold: float
    gain: float


@dataclass(frozen=True)
class Leaf:
    label: int
    counts: tuple[int, ...]


@dataclass(frozen=True)
class Split:
    feature: int
    threshold: float
    left: "Node"   # value <= threshold
    right: "Node"  # value > threshold


Node = Union[Leaf, Split]


@dataclass(frozen=True)
class DecisionTree:
    root: Node
    config: TrainConfig
    n_features: int
    class_names: tuple[str, ...]
    feature_names: tuple[str, ...] = field(default=())

    @property
    def depth(self) -> int:
        def walk(node):
            return 0 if isinstance(node, Leaf) else 1 + max(walk(node.left), walk(node.right))
        return walk(self.root)

    @property
    def n_nodes(self) -> int:
        def walk(node):
            return 1 if isinstance(node, Leaf) else 1 + walk(node.left) + walk(node.right)
        return walk(self.root)

    def predict(self, X) -> np.ndarray:
        X = np.atleast_2d(np.asarray(X, dtype=np.float64))
        return np.array([predict(self, row) for row in X], dtype=np.int64)


# ---------------------------------------------------------------------------
# split search
# ---------------------------------------------------------------------------

def candidate_splits(values) -> list[float]:
    """Sorted distinct values of one feature at a node, minus the largest."""
    return [float(v) for v in np.unique(np.asarray(values, dtype=np.float64))[:-1]]


@numba.njit(cache=True, nogil=True)
def _etc_of(labels, n, counts, firsts, touched, dense):
    if dense:
        return _etc_dense(labels[:n], counts, firsts, touched)
    return _etc_sorted(labels[:n])


@numba.njit(cache=True, nogil=True)
def _best_etc_split(X, y, counts, firsts, dense):
    # Returns (feature, threshold, weighted child ETC * n). Scans features and
    # thresholds in ascending order and keeps the first strict minimum.
    n, d = X.shape
    left = np.empty(n, dtype=np.int64)
    right = np.empty(n, dtype=np.int64)
    touched = np.empty(n, dtype=np.int64)
    best_f = -1
    best_t = 0.0
    best_w = np.int64(-1)
    for f in range(d):
        col = X[:, f]
        values = np.unique(col)
        for ti in range(values.shape[0] - 1):
            t = values[ti]
            nl = 0
            nr = 0
            for i in range(n):
                if col[i] <= t:
                    left[nl] = y[i]
                    nl += 1
                else:
                    right[nr] = y[i]
                    nr += 1
            el = _etc_of(left, nl, counts, firsts, touched, dense)
            er = _etc_of(right, nr, counts, firsts, touched, dense)
            w = nl * el + nr * er
            if best_f < 0 or w < best_w:
                best_f = f
                best_t = t
                best_w = w
    return best_f, best_t, best_w


def _best_structural(X, y, n_classes, config):
    n = len(y)
    width = n_classes + n + 1
    dense = width * width <= _DENSE_LIMIT
    if dense:
        counts, firsts = _workspace.tables(width)
    else:
        counts = firsts = np.zeros(1, dtype=np.int64)
    f, t, w = _best_etc_split(X, y, counts, firsts, dense)
    if f < 0:
        return None
    g = etc_value(y) - w / n
    return SplitCandidate(int(f), float(t), float(g)) if g > config.min_gain else None


def _node_impurity(counts, n, kind):
    # counts: (..., k) class counts, n: (...,) totals; rows with n == 0 give 0
    p = np.divide(counts, n[..., None], out=np.zeros(counts.shape), where=n[..., None] > 0)
    if kind is ImpurityKind.GINI:
        return 1.0 - (p * p).sum(axis=-1)
    logs = np.log2(p, out=np.zeros_like(p), where=p > 0)
    return -(p * logs).sum(axis=-1)


def _best_probabilistic(X, y, n_classes, config):
    n, d = X.shape
    onehot = np.zeros((n, n_classes))
    onehot[np.arange(n), y] = 1.0
    total = onehot.sum(axis=0)
    parent = _node_impurity(total[None, :], np.array([float(n)]), config.impurity_kind)[0]
    best = None
    for f in range(d):
        order = np.argsort(X[:, f], kind="stable")
        xs = X[order, f]
        cum = np.cumsum(onehot[order], axis=0)
        # last position of each distinct value, excluding the maximum
        ends = np.flatnonzero(xs[:-1] != xs[1:])
        if ends.size == 0:
            continue
        left = cum[ends]
        right = total - left
        nl = (ends + 1).astype(float)
        nr = n - nl
        child = (nl * _node_impurity(left, nl, config.impurity_kind)
                 + nr * _node_impurity(right, nr, config.impurity_kind)) / n
        gains = parent - child
        j = int(np.flatnonzero(gains >= gains.max() - _GAIN_EPS)[0])
        if best is None or gains[j] > best.gain + _GAIN_EPS:
            best = SplitCandidate(f, float(xs[ends[j]]), float(gains[j]))
    if best is None or not best.gain > config.min_gain:
        return None
    return best


def best_split(X, y, config: TrainConfig, n_classes: int | None = None):
    """Highest-gain ``(feature, threshold)`` split of one node, or None.

    ``X`` and ``y`` hold the node's instances in order. Ties go to the lower
    feature index, then the lower threshold. Only splits with gain strictly
    above ``config.min_gain`` qualify.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    if n_classes is None:
        n_classes = int(y.max()) + 1 if y.size else 0
    if len(y) < 2:
        return None
    if config.impurity_kind is ImpurityKind.STRUCTURAL_ETC:
        return _best_structural(X, y, n_classes, config)
    return _best_probabilistic(X, y, n_classes, config)


# ---------------------------------------------------------------------------
# fitting and prediction
# ---------------------------------------------------------------------------

def _leaf(y, n_classes):
    counts = np.bincount(y, minlength=n_classes)
    return Leaf(int(np.argmax(counts)), tuple(int(c) for c in counts))


def fit(dataset: Dataset, config: TrainConfig | None = None, features=None) -> DecisionTree:
    """Grow a tree on ``dataset`` in its current row order.

    Parameters
    ----------
    dataset : Dataset
    config : TrainConfig, optional
    features : sequence of int, optional
        Restrict splits to these columns (used by the bootstrap baseline).
        Split nodes still record indices into the full feature set.
    """
    config = config or TrainConfig()
    if dataset.n_instances == 0:
        raise DomainError("cannot fit a tree on an empty dataset")
    cols = np.arange(dataset.n_features) if features is None else np.asarray(features, dtype=np.int64)
    X = np.ascontiguousarray(dataset.X[:, cols])
    y = dataset.y
    k = dataset.n_classes

    def grow(rows, depth):
        labels = y[rows]
        if depth >= config.max_depth or np.all(labels == labels[0]):
            return _leaf(labels, k)
        cand = best_split(X[rows], labels, config, k)
        if cand is None:
            return _leaf(labels, k)
        mask = X[rows, cand.feature_index] <= cand.threshold
        return Split(
            int(cols[cand.feature_index]),
            cand.threshold,
            grow(rows[mask], depth + 1),
            grow(rows[~mask], depth + 1),
        )

    root = grow(np.arange(dataset.n_instances), 0)
    return DecisionTree(root, config, dataset.n_features, tuple(dataset.class_names),
                        tuple(dataset.feature_names))


def _required_features(node) -> int:
    if isinstance(node, Leaf):
        return 0
    return max(node.feature + 1, _required_features(node.left), _required_features(node.right))


def predict(tree: DecisionTree, instance) -> int:
    """Class id of the leaf reached by ``instance``."""
    x = np.asarray(instance, dtype=np.float64).ravel()
    if x.size < _required_features(tree.root):
        raise DomainError(
            f"instance has {x.size} features, tree needs at least {_required_features(tree.root)}"
        )
    node = tree.root
    while isinstance(node, Split):
        node = node.left if x[node.feature] <= node.threshold else node.right
    return node.label


# ---------------------------------------------------------------------------
# model documents
# ---------------------------------------------------------------------------

def _node_to_dict(node):
    if isinstance(node, Leaf):
        return {"leaf": node.label, "counts": list(node.counts)}
    return {
        "feature": node.feature,
        "threshold": node.threshold,
        "left": _node_to_dict(node.left),
        "right": _node_to_dict(node.right),
    }


def to_document(tree: DecisionTree) -> dict:
    return {
        "format": FORMAT_NAME,
        "version": FORMAT_VERSION,
        "config": tree.config.to_dict(),
        "n_features": tree.n_features,
        "feature_names": list(tree.feature_names),
        "class_names": list(tree.class_names),
        "root": _node_to_dict(tree.root),
    }


def _require(doc, key, kind, path):
    if not isinstance(doc, dict) or key not in doc:
        raise ModelFormatError(f"missing field {key!r}", path)
    value = doc[key]
    if kind is int and isinstance(value, bool) or not isinstance(value, kind):
        raise ModelFormatError(f"field {key!r} has the wrong type", f"{path}.{key}")
    return value


def _node_from_dict(doc, path):
    if not isinstance(doc, dict):
        raise ModelFormatError("node must be an object", path)
    if "leaf" in doc:
        label = _require(doc, "leaf", int, path)
        counts = _require(doc, "counts", list, path)
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in counts):
            raise ModelFormatError("leaf counts must be integers", f"{path}.counts")
        return Leaf(label, tuple(counts))
    feature = _require(doc, "feature", int, path)
    threshold = _require(doc, "threshold", (int, float), path)
    return Split(
        feature,
        float(threshold),
        _node_from_dict(_require(doc, "left", dict, path), f"{path}.left"),
        _node_from_dict(_require(doc, "right", dict, path), f"{path}.right"),
    )


def from_document(doc: dict) -> DecisionTree:
    if not isinstance(doc, dict) or doc.get("format") != FORMAT_NAME:
        raise ModelFormatError(f"not a {FORMAT_NAME} document", "format")
    if doc.get("version") != FORMAT_VERSION:
        raise ModelFormatError(f"unsupported version {doc.get('version')!r}", "version")
    cfg = _require(doc, "config", dict, "$")
    try:
        config = TrainConfig(**cfg)
    except (TypeError, DomainError) as exc:
        raise ModelFormatError(f"invalid config: {exc}", "config") from None
    return DecisionTree(
        _node_from_dict(_require(doc, "root", dict, "$"), "root"),
        config,
        _require(doc, "n_features", int, "$"),
        tuple(_require(doc, "class_names", list, "$")),
        tuple(doc.get("feature_names", ())),
    )


def serialize(tree: DecisionTree) -> str:
    return json.dumps(to_document(tree), indent=2)


def load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelFormatError(
            f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}", exc.pos
        ) from None


def deserialize(text: str) -> DecisionTree:
    return from_document(load_json(text))


# ---------------------------------------------------------------------------
# DOT rendering
# ---------------------------------------------------------------------------

def format_threshold(t: float) -> str:
    """Shortest round-trip text for ``t`` without a trailing ``.0``."""
    s = repr(float(t))
    return s[:-2] if s.endswith(".0") else s


def to_dot(tree: DecisionTree) -> str:
    """Graphviz digraph with one node per tree node, numbered in pre-order."""
    lines = ["digraph tree {"]
    edges = []
    counter = iter(range(1 << 62))

    def emit(node):
        i = next(counter)
        if isinstance(node, Leaf):
            lines.append(f'  n{i} [label="Class-{tree.class_names[node.label]}", shape=ellipse];')
            return i
        lines.append(f'  n{i} [label="f{node.feature} <= {format_threshold(node.threshold)}", shape=box];')
        left = emit(node.left)
        right = emit(node.right)
        edges.append(f'  n{i} -> n{left} [label="yes"];')
        edges.append(f'  n{i} -> n{right} [label="no"];')
        return i

    emit(tree.root)
    lines.extend(edges)
    lines.append("}")
    return "\n".join(lines) + "\n"


_DOT_NODE = re.compile(r'(\w+)\s*\[\s*label\s*=\s*"([^"]*)"')
_DOT_EDGE = re.compile(r'(\w+)\s*->\s*(\w+)(?:\s*\[\s*label\s*=\s*"([^"]*)")?')


def dot_structure(text: str):
    """Nested ``(label, yes_child, no_child)`` tuples parsed from DOT text.

    Leaves are bare label strings. Whitespace and node naming do not matter,
    so two renderings compare equal iff they describe the same tree.
    """
    labels, children = {}, {}
    targets = set()
    for line in text.splitlines():
        if "->" in line:
            m = _DOT_EDGE.search(line)
            if m:
                src, dst, edge = m.groups()
                slot = 1 if (edge or "").lower() in ("no", "false") else 0
                children.setdefault(src, [None, None])[slot] = dst
                targets.add(dst)
            continue
        m = _DOT_NODE.search(line)
        if m:
            labels[m.group(1)] = " ".join(m.group(2).split())
    roots = [n for n in labels if n not in targets]
    if len(roots) != 1:
        raise ModelFormatError(f"expected one root node, found {len(roots)}")

    def build(name):
        if name not in children:
            return labels[name]
        yes, no = children[name]
        return (labels[name], build(yes), build(no))

    return build(roots[0])
