"""Property checks run by the acceptance suite at 1000 examples each.

Functions here are named ``check_*`` so pytest does not collect them twice.
"""
import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from etcforest.data import Dataset
from etcforest.etc_core import etc, etc_value, is_homogeneous, nsrps_step
from etcforest.forest import ForestConfig, deserialize_forest, fit_forest, serialize_forest
from etcforest.impurity import gain, gini, shannon_entropy
from etcforest.tree import TrainConfig, deserialize, fit, serialize

EXAMPLES = 1000
thorough = settings(max_examples=EXAMPLES, deadline=None, derandomize=True,
                    suppress_health_check=[HealthCheck.too_slow])

symbols = st.lists(st.integers(0, 5), max_size=40)
kinds = st.sampled_from(["structural_etc", "gini", "shannon_entropy"])


@st.composite
def datasets(draw, min_rows=1, max_rows=20):
    n = draw(st.integers(min_rows, max_rows))
    d = draw(st.integers(1, 3))
    X = draw(st.lists(st.lists(st.integers(0, 4), min_size=d, max_size=d), min_size=n, max_size=n))
    y = draw(st.lists(st.integers(0, 2), min_size=n, max_size=n))
    return Dataset(np.array(X, dtype=float), np.array(y), class_names=["a", "b", "c"])


@thorough
@given(symbols)
def check_etc_bounds(s):
    value = etc_value(s)
    assert 0 <= value <= max(0, len(s) - 1)
    assert (value == 0) == is_homogeneous(s)


@thorough
@given(symbols, st.permutations(range(6)), st.integers(0, 1000))
def check_etc_relabel_invariance(s, perm, offset):
    relabelled = [perm[x] * 7 + offset for x in s]
    assert etc_value(relabelled) == etc_value(s) == etc(relabelled)[0]


@thorough
@given(st.lists(st.integers(0, 3), min_size=1, max_size=40), st.randoms(use_true_random=False))
def check_probabilistic_impurities_ignore_order(labels, rnd):
    shuffled = list(labels)
    rnd.shuffle(shuffled)
    assert shannon_entropy(shuffled) == shannon_entropy(labels)
    assert gini(shuffled) == gini(labels)


@thorough
@given(symbols)
def check_nsrps_strictly_shortens(s):
    current = tuple(s)
    fresh = max(s, default=-1) + 1
    while not is_homogeneous(current):
        nxt, _ = nsrps_step(current, fresh)
        assert len(nxt) < len(current)
        current, fresh = nxt, fresh + 1


@thorough
@given(st.lists(st.tuples(st.integers(0, 2), st.booleans()), min_size=2, max_size=40))
def check_probabilistic_gain_non_negative(rows):
    labels = [lab for lab, _ in rows]
    left = [lab for lab, side in rows if side]
    right = [lab for lab, side in rows if not side]
    if not left or not right:
        return
    assert gain(labels, [left, right], "shannon_entropy") >= -1e-12
    assert gain(labels, [left, right], "gini") >= -1e-12


@thorough
@given(datasets(), kinds, st.integers(1, 6))
def check_fit_deterministic(ds, kind, depth):
    config = TrainConfig(kind, depth)
    first = fit(ds, config)
    second = fit(Dataset(ds.X.copy(), ds.y.copy(), class_names=list(ds.class_names)), config)
    assert first == second
    assert first.depth <= depth


@thorough
@given(datasets(min_rows=2), st.integers(0, 2**63 - 1), st.sampled_from(["permutation", "bootstrap"]))
def check_forest_reproducible_across_threads(ds, seed, mode):
    cfg = ForestConfig(3, seed, TrainConfig("structural_etc", 4), mode)
    serial = fit_forest(ds, cfg, n_jobs=1)
    threaded = fit_forest(ds, cfg, n_jobs=3)
    assert serial == threaded
    assert serial.predict(ds.X).tolist() == threaded.predict(ds.X).tolist()


@thorough
@given(datasets(), kinds)
def check_model_round_trip(ds, kind):
    tree = fit(ds, TrainConfig(kind, 5))
    assert deserialize(serialize(tree)) == tree
    forest = fit_forest(ds, ForestConfig(2, 1, TrainConfig(kind, 3)))
    assert deserialize_forest(serialize_forest(forest)) == forest


@thorough
@given(datasets(), kinds)
def check_ensemble_of_one(ds, kind):
    config = TrainConfig(kind, 5)
    identity = list(range(ds.n_instances))
    forest = fit_forest(ds, ForestConfig(1, 0, config), orders=[identity])
    tree = fit(ds, config)
    assert forest.trees[0] == tree
    assert forest.predict(ds.X).tolist() == tree.predict(ds.X).tolist()


PROPERTY_CHECKS = {
    "ETC bounds, zero iff homogeneous": check_etc_bounds,
    "ETC relabelling invariance": check_etc_relabel_invariance,
    "entropy/Gini permutation invariance": check_probabilistic_impurities_ignore_order,
    "NSRPS strict length decrease": check_nsrps_strictly_shortens,
    "entropy/Gini binary-split gain >= 0": check_probabilistic_gain_non_negative,
    "tree fit determinism": check_fit_deterministic,
    "forest seed reproducibility across threads": check_forest_reproducible_across_threads,
    "model round-trip identity": check_model_round_trip,
    "ensemble-of-one equivalence": check_ensemble_of_one,
}
