"""Impurity measures and split gains over ordered label sequences.

Shannon entropy and Gini depend only on class proportions. Structural
impurity is the ETC of the labels in instance order, so it changes when the
instances are reordered. Child label sequences keep the parent's order.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from typing import Sequence

from .errors import DomainError
from .etc_core import etc_value

__all__ = [
    "ImpurityKind",
    "shannon_entropy",
    "gini",
    "structural_impurity",
    "impurity",
    "weighted_child_impurity",
    "gain",
]


class ImpurityKind(str, enum.Enum):
    SHANNON_ENTROPY = "shannon_entropy"
    GINI = "gini"
    STRUCTURAL_ETC = "structural_etc"

    @classmethod
    def parse(cls, value) -> "ImpurityKind":
        """Accept enum members, canonical names and the short CLI spellings."""
        if isinstance(value, cls):
            return value
        aliases = {"entropy": cls.SHANNON_ENTROPY, "etc": cls.STRUCTURAL_ETC}
        key = str(value).lower()
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown impurity kind {value!r}") from None


def _proportions(labels: Sequence[int]) -> list[float]:
    if len(labels) == 0:
        raise DomainError("impurity of empty node")
    n = len(labels)
    # sorted class order keeps the float sum independent of label order
    counts = Counter(labels)
    return [counts[c] / n for c in sorted(counts)]


def shannon_entropy(labels: Sequence[int]) -> float:
    """First-order Shannon entropy of the class distribution, in bits."""
    return -sum(p * math.log2(p) for p in _proportions(labels) if p > 0) + 0.0


def gini(labels: Sequence[int]) -> float:
    return 1.0 - sum(p * p for p in _proportions(labels))


def structural_impurity(labels: Sequence[int]) -> int:
    """ETC of the labels in their given order."""
    return etc_value(labels)


_MEASURES = {
    ImpurityKind.SHANNON_ENTROPY: shannon_entropy,
    ImpurityKind.GINI: gini,
    ImpurityKind.STRUCTURAL_ETC: structural_impurity,
}


def impurity(labels: Sequence[int], kind) -> float:
    return _MEASURES[ImpurityKind.parse(kind)](labels)


def weighted_child_impurity(partition: Sequence[Sequence[int]], kind) -> float:
    """Size-weighted mean impurity of the parts; empty parts contribute 0."""
    kind = ImpurityKind.parse(kind)
    total = sum(len(p) for p in partition)
    if total == 0:
        raise DomainError("partition has no labels")
    return sum(len(p) / total * impurity(p, kind) for p in partition if len(p))


def _is_subsequence(part: Sequence[int], parent: Sequence[int]) -> bool:
    it = iter(parent)
    return all(any(x == y for y in it) for x in part)


def gain(parent: Sequence[int], partition: Sequence[Sequence[int]], kind) -> float:
    """Impurity reduction achieved by splitting ``parent`` into ``partition``.

    With ``structural_etc`` this is ETC gain; the value can be negative since
    children may be structurally less regular than the parent.
    """
    kind = ImpurityKind.parse(kind)
    if len(parent) == 0:
        raise DomainError("impurity of empty node")
    if Counter(parent) != Counter(x for p in partition for x in p):
        raise DomainError("partition mismatch")
    if kind is ImpurityKind.STRUCTURAL_ETC and not all(
        _is_subsequence(p, parent) for p in partition
    ):
        raise DomainError("partition mismatch: parts must keep the parent order")
    return impurity(parent, kind) - weighted_child_impurity(partition, kind)
