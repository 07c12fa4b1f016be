"""Command-line interface: ``etcforest <command> ...``.

Exit codes: 0 success, 1 domain or data error, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import forest as forest_mod
from . import tree as tree_mod
from .data import apply_order, eval_report, load_csv, read_order_file
from .errors import EtcForestError, ModelFormatError
from .etc_core import etc
from .impurity import gini, shannon_entropy, structural_impurity
from .reproduce import REPRODUCERS, reproduce_table4


def _out(args, text, doc):
    if args.format == "json":
        print(json.dumps(doc, indent=2))
    else:
        print(text)


def _int_tokens(parser, text, what):
    tokens = [t.strip() for t in text.split(",") if t.strip()]
    try:
        return [int(t) for t in tokens]
    except ValueError:
        parser.error(f"{what} must be comma-separated integers, got {text!r}")


def cmd_etc(args, parser):
    symbols = _int_tokens(parser, args.sequence or "", "sequence")
    if any(s < 0 for s in symbols):
        parser.error("symbols must be non-negative")
    value, trace = etc(symbols)
    lines = [f"ETC = {value}"]
    if args.trace:
        lines.append("step 0: " + ",".join(map(str, trace.sequences[0])))
        for k, (step, seq) in enumerate(zip(trace.steps, trace.sequences[1:]), 1):
            lines.append(f"step {k}: replace {step.pair} -> {step.replacement}: "
                         + ",".join(map(str, seq)))
    doc = {"value": value}
    if args.trace:
        doc["trace"] = [{"pair": list(s.pair), "replacement": s.replacement,
                         "length_after": s.length_after, "sequence": list(q)}
                        for s, q in zip(trace.steps, trace.sequences[1:])]
    _out(args, "\n".join(lines), doc)
    return 0


def cmd_impurity(args, parser):
    tokens = [t.strip() for t in args.labels.split(",") if t.strip()]
    if not tokens:
        parser.error("need at least one label")
    ids: dict[str, int] = {}
    labels = [ids.setdefault(t, len(ids)) for t in tokens]
    values = {}
    if args.measure in ("etc", "all"):
        values["etc"] = structural_impurity(labels)
    if args.measure in ("entropy", "all"):
        values["entropy"] = shannon_entropy(labels)
    if args.measure in ("gini", "all"):
        values["gini"] = gini(labels)
    text = "  ".join(f"{k}={v:.3f}" if isinstance(v, float) else f"{k}={v}" for k, v in values.items())
    _out(args, text, values)
    return 0


def _load_training_data(args):
    ds = load_csv(args.data, args.label_col)
    if getattr(args, "order", None):
        ds = apply_order(ds, read_order_file(args.order))
    elif getattr(args, "seed", None) is not None:
        ds = forest_mod.permute(ds, 0, args.seed)
    return ds


def cmd_train(args, parser):
    ds = _load_training_data(args)
    config = tree_mod.TrainConfig(args.impurity, args.max_depth, args.min_gain)
    model = tree_mod.fit(ds, config)
    text = tree_mod.serialize(model)
    if args.out:
        Path(args.out).write_text(text + "\n")
    if args.dot:
        Path(args.dot).write_text(tree_mod.to_dot(model))
    _out(args, f"trained tree: depth={model.depth} nodes={model.n_nodes}"
               + (f" -> {args.out}" if args.out else ""), tree_mod.to_document(model))
    return 0


def cmd_forest_train(args, parser):
    ds = load_csv(args.data, args.label_col)
    config = forest_mod.ForestConfig(
        args.n_estimators, args.seed,
        tree_mod.TrainConfig(args.impurity, args.max_depth, args.min_gain), args.mode,
    )
    model = forest_mod.fit_forest(ds, config, n_jobs=args.n_jobs)
    text = forest_mod.serialize_forest(model)
    if args.out:
        Path(args.out).write_text(text + "\n")
    lines = [f"tree {i}: depth={t.depth} nodes={t.n_nodes}" for i, t in enumerate(model.trees)]
    distinct = len({t.root for t in model.trees})
    lines.append(f"{len(model.trees)} trees, {distinct} structurally distinct")
    _out(args, "\n".join(lines), json.loads(text))
    return 0


def load_model(path):
    doc = tree_mod.load_json(Path(path).read_text())
    fmt = doc.get("format") if isinstance(doc, dict) else None
    if fmt == tree_mod.FORMAT_NAME:
        return tree_mod.from_document(doc)
    if fmt == forest_mod.FORMAT_NAME:
        return forest_mod.from_forest_document(doc)
    raise ModelFormatError(f"unknown model format {fmt!r}", "format")


def cmd_evaluate(args, parser):
    model = load_model(args.model)
    ds = load_csv(args.data, args.label_col)
    if ds.n_features != model.n_features:
        raise EtcForestError(f"model expects {model.n_features} features, data has {ds.n_features}")
    names = list(model.class_names)
    for name in ds.class_names:
        if name not in names:
            names.append(name)
    y_true = [names.index(ds.class_names[c]) for c in ds.y]
    report = eval_report(y_true, model.predict(ds.X))
    _out(args, report.format(names), report.to_dict(names))
    return 0


def cmd_predict(args, parser):
    model = load_model(args.model)
    try:
        x = [float(t) for t in args.features.split(",") if t.strip()]
    except ValueError:
        parser.error(f"features must be comma-separated numbers, got {args.features!r}")
    if len(x) != model.n_features:
        raise EtcForestError(f"model expects {model.n_features} features, got {len(x)}")
    label = int(model.predict(np.array([x]))[0])
    _out(args, model.class_names[label], {"class": model.class_names[label]})
    return 0


def cmd_reproduce(args, parser):
    if args.what == "table4":
        checks = reproduce_table4(args.repeats, args.data_dir)
    else:
        checks = REPRODUCERS[args.what]()
    passed = all(c.passed for c in checks)
    doc = {"what": args.what, "passed": passed,
           "checks": [{"name": c.name, "computed": str(c.computed), "published": str(c.expected),
                       "passed": c.passed, "detail": c.detail} for c in checks]}
    _out(args, "\n".join(c.line() for c in checks), doc)
    return 0 if passed else 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["text", "json"], default="text")

    parser = argparse.ArgumentParser(prog="etcforest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("etc", parents=[common], help="ETC of a symbol sequence")
    p.add_argument("sequence", nargs="?", default="", help="comma-separated integers, e.g. 0,0,0,1,1")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_etc)

    p = sub.add_parser("impurity", parents=[common], help="impurity of a label sequence")
    p.add_argument("labels", help="comma-separated labels, in order")
    p.add_argument("--measure", choices=["etc", "entropy", "gini", "all"], default="all")
    p.set_defaults(func=cmd_impurity)

    def data_args(p):
        p.add_argument("--data", required=True)
        p.add_argument("--label-col", default="-1", help="header name or column index (default: last)")
        p.add_argument("--impurity", choices=["etc", "entropy", "gini"], default="etc")
        p.add_argument("--max-depth", type=int, default=10)
        p.add_argument("--min-gain", type=float, default=0.0)

    p = sub.add_parser("train", parents=[common], help="train one decision tree")
    data_args(p)
    order = p.add_mutually_exclusive_group()
    order.add_argument("--order", help="file with a 1-based comma-separated row order")
    order.add_argument("--seed", type=int, help="shuffle rows with this seed before training")
    p.add_argument("--out")
    p.add_argument("--dot")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("forest-train", parents=[common], help="train a forest")
    data_args(p)
    p.add_argument("--mode", choices=["permutation", "bootstrap"], default="permutation")
    p.add_argument("--n-estimators", type=int, default=5)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_forest_train)

    p = sub.add_parser("evaluate", parents=[common], help="confusion matrix and macro F1")
    p.add_argument("--model", required=True)
    p.add_argument("--data", required=True)
    p.add_argument("--label-col", default="-1")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("predict", parents=[common], help="predict one instance")
    p.add_argument("--model", required=True)
    p.add_argument("--features", required=True, help="comma-separated feature values")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("reproduce", parents=[common], help="recompute published tables and figures")
    p.add_argument("--what", choices=sorted(REPRODUCERS), required=True)
    p.add_argument("--repeats", type=int, default=5, help="seeded splits for table4")
    p.add_argument("--data-dir", help="directory with the benchmark CSVs")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for name in ("max_depth", "n_estimators"):
        if getattr(args, name, 1) < 1:
            parser.error(f"--{name.replace('_', '-')} must be >= 1")
    try:
        return args.func(args, parser)
    except (EtcForestError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
