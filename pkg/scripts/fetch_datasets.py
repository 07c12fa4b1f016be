#!/usr/bin/env python3
"""Write the six benchmark datasets as CSV files into a data directory.

Sources, in order of preference:

    iris, wine, breast_cancer_wisconsin   scikit-learn's bundled copies
    haberman, ionosphere                  the keel-ds package's bundled copies,
                                          else the UCI repository
    seeds                                 the UCI repository (network needed)

Every CSV has a header row and the class in the last column, ``label``.
Checksums of the generated files are compared against datasets_manifest.json;
a mismatch is reported but the file is kept.

Usage:
    python scripts/fetch_datasets.py [--data-dir DIR] [--only NAME ...]

DIR defaults to $ETC_FOREST_DATA_DIR, then ./data.
"""
import argparse
import csv
import hashlib
import io
import json
import os
import sys
import urllib.request
from pathlib import Path

UCI = "https://archive.ics.uci.edu/ml/machine-learning-databases"
URLS = {
    "haberman": f"{UCI}/haberman/haberman.data",
    "ionosphere": f"{UCI}/ionosphere/ionosphere.data",
    "seeds": f"{UCI}/00236/seeds_dataset.txt",
}
MANIFEST = Path(__file__).with_name("datasets_manifest.json")


def _download(url):
    with urllib.request.urlopen(url, timeout=30) as resp:
        return resp.read().decode("utf-8")


def _sklearn(loader_name):
    from sklearn import datasets

    bunch = getattr(datasets, loader_name)()
    names = [str(n).replace(",", " ") for n in bunch.feature_names]
    labels = [str(bunch.target_names[t]) for t in bunch.target]
    return names, [list(map(float, row)) for row in bunch.data], labels


def _keel(name, group):
    import keel_ds

    path = Path(keel_ds.__file__).parent / "data" / group / "raw" / f"{name}.dat"
    rows = [line.split(",") for line in path.read_text().splitlines()
            if line.strip() and not line.startswith("@")]
    d = len(rows[0]) - 1
    return [f"a{i}" for i in range(d)], [[float(v) for v in r[:-1]] for r in rows], \
        [r[-1].strip() for r in rows]


def _uci_comma(name, names):
    rows = [r for r in csv.reader(io.StringIO(_download(URLS[name]))) if r]
    return names, [[float(v) for v in r[:-1]] for r in rows], [r[-1].strip() for r in rows]


def iris():
    return _sklearn("load_iris")


def wine():
    return _sklearn("load_wine")


def breast_cancer_wisconsin():
    return _sklearn("load_breast_cancer")


def haberman():
    try:
        return _keel("haberman", "imbalanced")
    except ImportError:
        return _uci_comma("haberman", ["age", "year", "nodes"])


def ionosphere():
    try:
        return _keel("ionosphere", "balanced")
    except ImportError:
        return _uci_comma("ionosphere", [f"a{i}" for i in range(34)])


def seeds():
    rows = [line.split() for line in _download(URLS["seeds"]).splitlines() if line.strip()]
    names = ["area", "perimeter", "compactness", "kernel_length", "kernel_width",
             "asymmetry", "groove_length"]
    return names, [[float(v) for v in r[:7]] for r in rows], [r[7] for r in rows]


SOURCES = {
    "iris": iris,
    "breast_cancer_wisconsin": breast_cancer_wisconsin,
    "haberman": haberman,
    "ionosphere": ionosphere,
    "seeds": seeds,
    "wine": wine,
}


def write(path, names, rows, labels):
    with path.open("w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow([*names, "label"])
        for row, label in zip(rows, labels):
            w.writerow([repr(v) for v in row] + [label])


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--data-dir", default=os.environ.get("ETC_FOREST_DATA_DIR", "data"))
    parser.add_argument("--only", nargs="*", choices=sorted(SOURCES))
    args = parser.parse_args(argv)

    out = Path(args.data_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = json.loads(MANIFEST.read_text())
    failures = 0
    for name in args.only or SOURCES:
        path = out / f"{name}.csv"
        try:
            write(path, *SOURCES[name]())
        except Exception as exc:  # report and carry on with the rest
            print(f"[skip] {name}: {exc}", file=sys.stderr)
            failures += 1
            continue
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        expected = manifest.get(name, {}).get("sha256")
        if expected is None:
            status = "no checksum on record"
        elif expected == digest:
            status = "checksum ok"
        else:
            status = f"CHECKSUM MISMATCH (expected {expected[:12]}...)"
        print(f"[ok] {name} -> {path} sha256={digest[:12]}... {status}")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
