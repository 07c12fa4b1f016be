"""Ordered datasets, CSV I/O, splitting and classification metrics.

Row order is part of a :class:`Dataset`'s identity: structural impurity, and
therefore the trees built from it, depend on it.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DomainError

__all__ = [
    "Dataset",
    "EvalReport",
    "load_csv",
    "write_csv",
    "read_order_file",
    "apply_order",
    "train_test_split",
    "confusion_matrix",
    "macro_f1",
    "eval_report",
]


@dataclass(eq=False)
class Dataset:
    """Feature matrix plus densely encoded labels, in a meaningful row order.

    Attributes
    ----------
    X : ndarray of shape (n, d), float64
    y : ndarray of shape (n,), int64
        Class ids ``0..k-1``; ``class_names[c]`` is the raw label of id ``c``.
    feature_names : list of str
    class_names : list of str
    """

    X: np.ndarray
    y: np.ndarray
    feature_names: list[str] = field(default_factory=list)
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.X = np.asarray(self.X, dtype=np.float64)
        self.y = np.asarray(self.y, dtype=np.int64)
        if self.X.ndim != 2:
            raise DomainError("feature matrix must be two-dimensional")
        if self.y.shape != (self.X.shape[0],):
            raise DomainError("labels and feature rows differ in length")
        if not self.feature_names:
            self.feature_names = [f"f{i}" for i in range(self.X.shape[1])]
        if not self.class_names:
            k = int(self.y.max()) + 1 if self.y.size else 0
            self.class_names = [str(c) for c in range(k)]
        if len(self.feature_names) != self.X.shape[1]:
            raise DomainError("feature_names length does not match column count")
        if self.y.size and (self.y.min() < 0 or self.y.max() >= len(self.class_names)):
            raise DomainError("label id outside class_names")
        if not np.isfinite(self.X).all():
            raise DomainError("feature matrix contains missing or non-finite values")

    @property
    def n_instances(self) -> int:
        return self.X.shape[0]

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    @property
    def n_classes(self) -> int:
        return len(self.class_names)

    def __len__(self):
        return self.n_instances

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.X.shape == other.X.shape
            and np.array_equal(self.X, other.X)
            and np.array_equal(self.y, other.y)
            and self.feature_names == other.feature_names
            and self.class_names == other.class_names
        )

    def take(self, rows) -> "Dataset":
        """Rows ``rows`` in the given order (repeats allowed)."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.X[rows], self.y[rows], list(self.feature_names), list(self.class_names))

    @classmethod
    def from_arrays(cls, X, labels, feature_names=None) -> "Dataset":
        """Build a dataset from raw labels, encoding them by first appearance."""
        names: dict[str, int] = {}
        y = [names.setdefault(str(lab), len(names)) for lab in labels]
        return cls(np.asarray(X, dtype=np.float64), np.asarray(y, dtype=np.int64),
                   list(feature_names or []), list(names))


@dataclass
class EvalReport:
    classes: list[int]
    confusion: np.ndarray  # rows: true class, columns: predicted class
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    macro_f1: float

    def to_dict(self, class_names=None) -> dict:
        names = [class_names[c] if class_names else str(c) for c in self.classes]
        return {
            "classes": names,
            "confusion_matrix": self.confusion.tolist(),
            "precision": self.precision.tolist(),
            "recall": self.recall.tolist(),
            "f1": self.f1.tolist(),
            "macro_f1": self.macro_f1,
        }

    def format(self, class_names=None) -> str:
        names = [class_names[c] if class_names else str(c) for c in self.classes]
        width = max(8, *(len(n) for n in names))
        lines = ["confusion matrix (rows = true, columns = predicted)"]
        lines.append(" " * width + "".join(f"{n:>{width + 1}}" for n in names))
        for n, row in zip(names, self.confusion):
            lines.append(f"{n:>{width}}" + "".join(f"{v:>{width + 1}d}" for v in row))
        lines.append("")
        lines.append(f"{'class':>{width}} {'precision':>9} {'recall':>9} {'f1':>9}")
        for n, p, r, f in zip(names, self.precision, self.recall, self.f1):
            lines.append(f"{n:>{width}} {p:9.4f} {r:9.4f} {f:9.4f}")
        lines.append(f"macro F1 = {self.macro_f1:.4f}  (0/0 precision or recall counts as 0)")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# CSV
# ---------------------------------------------------------------------------

def load_csv(path, label_column=-1) -> Dataset:
    """Read a headed, comma-separated file into a :class:`Dataset`.

    ``label_column`` is a header name or a column index (negative counts from
    the end). All other columns must parse as floats. Row order is kept.
    """
    path = Path(path)
    if not path.is_file():
        raise DomainError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise DomainError(f"{path}: missing header row")
    header = [h.strip() for h in rows[0]]
    d = len(header)
    if isinstance(label_column, str) and not label_column.lstrip("-").isdigit():
        if label_column not in header:
            raise DomainError(f"{path}: unknown label column {label_column!r}")
        label_idx = header.index(label_column)
    else:
        label_idx = int(label_column)
        if not -d <= label_idx < d:
            raise DomainError(f"{path}: label column index {label_idx} out of range")
        label_idx %= d
    body = rows[1:]
    if not body:
        raise DomainError(f"{path}: no instances")
    feature_idx = [j for j in range(d) if j != label_idx]
    X = np.empty((len(body), len(feature_idx)))
    labels = []
    for i, row in enumerate(body):
        line = i + 2
        if len(row) != d:
            raise DomainError(f"{path}: row {line} has {len(row)} fields, expected {d}")
        for k, j in enumerate(feature_idx):
            try:
                X[i, k] = float(row[j])
            except ValueError:
                raise DomainError(
                    f"{path}: cannot parse {row[j]!r} as a number at row {line}, column {header[j]!r}"
                ) from None
        labels.append(row[label_idx].strip())
    return Dataset.from_arrays(X, labels, [header[j] for j in feature_idx])


def write_csv(dataset: Dataset, path, label_name: str = "label") -> None:
    """Write ``dataset`` so that :func:`load_csv` reads it back unchanged."""
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([*dataset.feature_names, label_name])
        for row, c in zip(dataset.X, dataset.y):
            w.writerow([repr(float(v)) for v in row] + [dataset.class_names[c]])


def read_order_file(path) -> list[int]:
    """Parse a 1-based comma-separated permutation and return it 0-based."""
    text = Path(path).read_text(encoding="utf-8")
    return parse_order(text)


def parse_order(text: str) -> list[int]:
    tokens = [t for t in text.replace("\n", ",").split(",") if t.strip()]
    try:
        one_based = [int(t) for t in tokens]
    except ValueError:
        raise DomainError(f"order must list integers, got {text.strip()[:40]!r}") from None
    return [i - 1 for i in one_based]


# ---------------------------------------------------------------------------
# ordering and splitting
# ---------------------------------------------------------------------------

def apply_order(dataset: Dataset, order: Sequence[int]) -> Dataset:
    """Reorder rows; ``order[i]`` is the 0-based source row of new row ``i``."""
    order = [int(i) for i in order]
    if sorted(order) != list(range(dataset.n_instances)):
        raise DomainError(f"order is not a permutation of 0..{dataset.n_instances - 1}")
    return dataset.take(order)


def train_test_split(dataset: Dataset, test_fraction: float = 0.2, seed: int = 0,
                     stratify: bool = False):
    """Seeded shuffle, then the first ``ceil(n * (1 - f))`` rows train.

    With ``stratify`` the same rule is applied within each class and the two
    sides are then shuffled once more, so class proportions are kept.
    """
    n = dataset.n_instances
    if not 0 < test_fraction < 1:
        raise DomainError("test_fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    if not stratify:
        perm = rng.permutation(n)
        n_train = math.ceil(n * (1 - test_fraction))
        train_idx, test_idx = perm[:n_train], perm[n_train:]
    else:
        train_parts, test_parts = [], []
        for c in range(dataset.n_classes):
            members = rng.permutation(np.flatnonzero(dataset.y == c))
            k = math.ceil(members.size * (1 - test_fraction))
            train_parts.append(members[:k])
            test_parts.append(members[k:])
        train_idx = rng.permutation(np.concatenate(train_parts))
        test_idx = rng.permutation(np.concatenate(test_parts))
    if train_idx.size == 0 or test_idx.size == 0:
        raise DomainError(f"split of {n} instances at test_fraction={test_fraction} leaves a side empty")
    return dataset.take(train_idx), dataset.take(test_idx)


# ---------------------------------------------------------------------------
# metrics
# ---------------------------------------------------------------------------

def confusion_matrix(y_true, y_pred, classes):
    index = {c: i for i, c in enumerate(classes)}
    m = np.zeros((len(classes), len(classes)), dtype=np.int64)
    for t, p in zip(y_true, y_pred):
        m[index[t], index[p]] += 1
    return m


def _safe_ratio(num, den):
    return np.divide(num, den, out=np.zeros(num.shape, dtype=float), where=den > 0)


def eval_report(y_true, y_pred) -> EvalReport:
    """Confusion matrix and per-class scores over classes seen in either input."""
    y_true = [int(v) for v in y_true]
    y_pred = [int(v) for v in y_pred]
    if len(y_true) != len(y_pred):
        raise DomainError(f"length mismatch: {len(y_true)} true vs {len(y_pred)} predicted")
    if not y_true:
        raise DomainError("cannot evaluate zero predictions")
    classes = sorted(set(y_true) | set(y_pred))
    m = confusion_matrix(y_true, y_pred, classes)
    tp = np.diag(m).astype(float)
    precision = _safe_ratio(tp, m.sum(axis=0).astype(float))
    recall = _safe_ratio(tp, m.sum(axis=1).astype(float))
    f1 = _safe_ratio(2 * precision * recall, precision + recall)
    return EvalReport(classes, m, precision, recall, f1, float(f1.mean()))


def macro_f1(y_true, y_pred, class_count: int | None = None) -> float:
    """Unweighted mean F1 over the classes present in ``y_true`` or ``y_pred``.

    ``class_count`` is accepted for symmetry with the encoded label space and
    only validates that labels fall inside it.
    """
    if class_count is not None and any(
        not 0 <= int(v) < class_count for v in (*y_true, *y_pred)
    ):
        raise DomainError(f"label outside 0..{class_count - 1}")
    return eval_report(y_true, y_pred).macro_f1
