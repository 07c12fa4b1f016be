import numpy as np
import pytest

from etcforest.data import (
    Dataset, apply_order, eval_report, load_csv, macro_f1, read_order_file, train_test_split,
    write_csv,
)
from etcforest.errors import DomainError
from etcforest.reproduce import reference_path

TOY_ROWS = [(1, 1, 2), (1, 2, 2), (1, 3, 2), (2, 1, 2), (2, 2, 2), (2, 3, 2), (4, 1, 2),
            (4, 2, 2), (4, 3, 1), (4, 4, 1), (5, 1, 1), (5, 2, 1), (5, 3, 1), (5, 4, 1)]


def test_toy_csv_matches_table(toy):
    assert toy.X.tolist() == [[a, b] for a, b, _ in TOY_ROWS]
    assert [toy.class_names[c] for c in toy.y] == [str(c) for *_, c in TOY_ROWS]
    assert toy.feature_names == ["f0", "f1"]
    assert toy.class_names == ["2", "1"]


def test_load_errors(tmp_path):
    with pytest.raises(DomainError, match="no such file"):
        load_csv(tmp_path / "missing.csv")
    p = tmp_path / "empty.csv"
    p.write_text("f0,label\n")
    with pytest.raises(DomainError, match="no instances"):
        load_csv(p)
    p.write_text("f0,f1,label\n1,abc,x\n")
    with pytest.raises(DomainError, match=r"row 2, column 'f1'"):
        load_csv(p)
    p.write_text("f0,label\n1,x\n2\n")
    with pytest.raises(DomainError, match="row 3 has 1 fields"):
        load_csv(p)
    with pytest.raises(DomainError, match="unknown label column"):
        load_csv(reference_path("toy.csv"), "class")


def test_label_column_by_name_or_index(tmp_path):
    p = tmp_path / "d.csv"
    p.write_text("y,a,b\nno,1,2\nyes,3,4\n")
    by_name = load_csv(p, "y")
    by_index = load_csv(p, 0)
    assert by_name == by_index
    assert by_name.feature_names == ["a", "b"] and by_name.class_names == ["no", "yes"]


def test_write_then_load_is_identity(tmp_path):
    rng = np.random.default_rng(0)
    ds = Dataset.from_arrays(rng.normal(size=(30, 4)) * 1e3, rng.choice(["a", "b", "c"], 30))
    path = tmp_path / "rt.csv"
    write_csv(ds, path)
    assert load_csv(path, "label") == ds


def test_apply_order(toy, perms):
    b = apply_order(toy, perms["B"])
    assert b.X[0].tolist() == [5.0, 4.0] and b.class_names[b.y[0]] == "1"
    assert apply_order(toy, range(14)) == toy
    inverse = np.argsort(perms["B"])
    assert apply_order(b, inverse) == toy
    with pytest.raises(DomainError):
        apply_order(toy, [0] * 14)


def test_order_file_is_one_based():
    assert read_order_file(reference_path("permutation_B.txt"))[:3] == [13, 2, 9]


def test_train_test_split():
    ds = Dataset.from_arrays(np.arange(20.0).reshape(10, 2), list("ababababab"))
    train, test = train_test_split(ds, 0.2, seed=1)
    assert (len(train), len(test)) == (8, 2)
    again = train_test_split(ds, 0.2, seed=1)
    assert again[0] == train and again[1] == test
    rows = sorted(map(tuple, np.vstack([train.X, test.X]).tolist()))
    assert rows == sorted(map(tuple, ds.X.tolist()))
    with pytest.raises(DomainError):
        train_test_split(ds.take([0]), 0.2)
    with pytest.raises(DomainError):
        train_test_split(ds, 1.0)


def test_stratified_split_keeps_proportions():
    ds = Dataset.from_arrays(np.arange(40.0).reshape(20, 2), ["a"] * 10 + ["b"] * 10)
    train, test = train_test_split(ds, 0.2, seed=0, stratify=True)
    assert np.bincount(test.y).tolist() == [2, 2]


def test_macro_f1_examples():
    assert macro_f1([3, 1, 2], [3, 1, 2]) == 1.0
    # hand-computed: each class has precision 1/2 and recall 1/2
    report = eval_report([1, 1, 2, 2], [1, 2, 1, 2])
    assert report.f1.tolist() == [0.5, 0.5] and report.macro_f1 == 0.5
    # class 1: P=1/2 R=1 F1=2/3; class 2: never predicted, F1=0
    assert macro_f1([1, 2], [1, 1]) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        macro_f1([1, 2], [1])


def test_confusion_matrix_reconciles():
    y_true, y_pred = [0, 0, 1, 2, 2, 2], [0, 1, 1, 2, 0, 2]
    r = eval_report(y_true, y_pred)
    assert r.confusion.sum() == 6
    assert r.confusion.sum(axis=1).tolist() == [2, 1, 3]
    assert "macro F1" in r.format(["x", "y", "z"])


def test_macro_f1_relabel_symmetry():
    rng = np.random.default_rng(5)
    y_true, y_pred = rng.integers(0, 4, 50), rng.integers(0, 4, 50)
    perm = np.array([2, 0, 3, 1])
    assert macro_f1(perm[y_true], perm[y_pred]) == pytest.approx(macro_f1(y_true, y_pred))
