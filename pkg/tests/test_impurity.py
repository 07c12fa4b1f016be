import math

import numpy as np

import pytest

from etcforest.errors import DomainError
from etcforest.impurity import (
    ImpurityKind, gain, gini, impurity, shannon_entropy, structural_impurity,
    weighted_child_impurity,
)

from oracles import entropy_from_counts, gini_from_counts, naive_etc

TOY_LABELS_B = [1, 2, 1, 1, 2, 2, 2, 1, 1, 2, 2, 2, 2, 1]  # instances 14,3,10,12,2,4,5,11,9,8,7,1,6,13


def test_entropy_and_gini_of_toy_counts():
    labels = [2] * 8 + [1] * 6
    assert shannon_entropy(labels) == pytest.approx(0.985, abs=1e-3)
    assert shannon_entropy(labels) == pytest.approx(entropy_from_counts([6, 8]), abs=1e-15)
    assert gini(labels) == pytest.approx(0.490, abs=1e-3)
    assert gini(labels) == pytest.approx(float(gini_from_counts([6, 8])), abs=1e-15)


@pytest.mark.parametrize("labels, h, g", [([1] * 6, 0.0, 0.0), ([1, 2], 1.0, 0.5), ([1, 2] * 3, 1.0, 0.5)])
def test_small_cases(labels, h, g):
    assert shannon_entropy(labels) == h
    assert gini(labels) == g


@pytest.mark.parametrize("fn", [shannon_entropy, gini])
def test_empty_node_is_an_error(fn):
    with pytest.raises(DomainError, match="empty"):
        fn([])


def test_structural_impurity_of_toy_permutations():
    assert structural_impurity([2] * 8 + [1] * 6) == 7
    assert structural_impurity(TOY_LABELS_B) == 8
    assert structural_impurity([3] * 4) == 0


def test_weighted_child_impurity_examples():
    assert weighted_child_impurity([[1, 1], [2, 2]], "gini") == 0
    assert weighted_child_impurity([[2, 2, 2], [1, 1, 1]], "structural_etc") == 0
    expected = 4 / 6 * naive_etc([1, 2, 1, 2]) + 2 / 6 * naive_etc([1, 2])
    assert naive_etc([1, 2, 1, 2]) == 1
    assert weighted_child_impurity([[1, 2, 1, 2], [1, 2]], "structural_etc") == pytest.approx(expected)
    assert weighted_child_impurity([[1, 2], []], "gini") == 0.5
    with pytest.raises(DomainError):
        weighted_child_impurity([[], []], "gini")


def test_gain_examples():
    assert gain([1, 1, 1], [[1], [1, 1]], "etc") == 0
    assert gain([2, 2, 1, 1], [[2, 2], [1, 1]], "entropy") == 1.0
    parent = [2] * 8 + [1] * 6
    right = [2, 2] + [1] * 6
    expected = 7 - (6 / 14 * 0 + 8 / 14 * naive_etc(right))
    assert gain(parent, [[2] * 6, right], "structural_etc") == pytest.approx(expected)


def test_gain_rejects_mismatched_partition():
    with pytest.raises(DomainError, match="mismatch"):
        gain([1, 2, 2], [[1], [2]], "gini")
    with pytest.raises(DomainError, match="order"):
        gain([1, 1, 2], [[2, 1], [1]], "etc")


@pytest.mark.parametrize("kind", list(ImpurityKind))
def test_trivial_partition_has_zero_gain(kind):
    labels = [1, 2, 2, 1, 1, 2, 1]
    assert gain(labels, [labels], kind) == pytest.approx(0.0, abs=1e-12)


def test_kind_aliases():
    assert ImpurityKind.parse("etc") is ImpurityKind.STRUCTURAL_ETC
    assert ImpurityKind.parse("entropy") is ImpurityKind.SHANNON_ENTROPY
    assert impurity([1, 2], "gini") == 0.5
    with pytest.raises(DomainError):
        ImpurityKind.parse("misclassification")


def test_entropy_bounded_by_log_classes():
    labels = [0, 1, 2, 0, 1, 2, 2]
    assert 0 <= shannon_entropy(labels) <= math.log2(3)
    assert 0 <= gini(labels) <= 1 - 1 / 3


def test_etc_gain_takes_both_signs():
    rng = np.random.default_rng(11)
    signs = set()
    for _ in range(300):
        labels = rng.integers(0, 2, 10).tolist()
        side = rng.integers(0, 2, 10).astype(bool)
        left = [x for x, s in zip(labels, side) if s]
        right = [x for x, s in zip(labels, side) if not s]
        if left and right:
            signs.add(np.sign(gain(labels, [left, right], "etc")))
    assert {-1.0, 1.0} <= signs
