"""Command-line entry point.

Subcommands: denoise, augment, train, eval, sweep, gradcheck.  Exit
codes: 0 success, 1 usage or input error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from .algebra import ALGEBRA_KINDS
from .config import ConfigError, RunConfig, config_lines, load_config
from .dataset import CsvFormatError, Dataset, Sample, load_dataset, write_dataset
from .development import DevParams
from .gradcheck import run_suite
from .metrics import classify, confusion, metrics
from .model import (
    DenseHead,
    TrainConfig,
    TrainingDivergedError,
    predict_proba_samples,
    trace_lines,
    train,
)
from .sampling import augment_training_split, smote, split
from .sweep import coordinate_descent, parse_sweep
from .wavelet import WaveletSpec, dwt_denoise


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_io_flags(parser, labels_required=True):
    parser.add_argument("--data", required=True, help="values CSV (series_id,t,ch_0,...)")
    parser.add_argument("--labels", required=labels_required, help="labels CSV (series_id,label)")
    parser.add_argument("--out", required=True, help="output directory")


def build_parser():
    parser = _Parser(prog="pathdev", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="wavelet-denoise a dataset")
    _add_io_flags(p)
    p.add_argument("--levels", type=int, default=4, help="decomposition depth (default 4)")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("augment", help="oversample the minority class")
    _add_io_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=5, help="SMOTE neighborhood size")
    p.add_argument(
        "--target-count",
        type=int,
        default=None,
        help="synthetic samples to add (default: balance the classes)",
    )
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("train", help="split, balance, and train a classifier")
    _add_io_flags(p)
    p.add_argument("--config", help="key=value config file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--algebra", choices=ALGEBRA_KINDS, default=None, help="override the algebra")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("eval", help="evaluate a trained model on a dataset")
    p.add_argument("--model", required=True, help="model.json written by train")
    p.add_argument("--data", required=True, help="values CSV (series_id,t,ch_0,...)")
    p.add_argument("--labels", required=True, help="labels CSV (series_id,label)")
    p.add_argument("--out", default=None, help="optional directory for eval_report.json")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="coordinate-descent hyperparameter search")
    _add_io_flags(p)
    p.add_argument("--config", help="base config file")
    p.add_argument("--sweep", required=True, dest="sweep_file", help="sweep spec file")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("gradcheck", help="check the backward pass against finite differences")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--channels", type=int, default=3)
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--steps", type=int, default=10)
    p.add_argument("--corrupt", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_gradcheck)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except (UsageError, ConfigError, CsvFormatError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (TrainingDivergedError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


def _ensure_out(path):
    os.makedirs(path, exist_ok=True)
    return path


def cmd_denoise(args) -> int:
    data = load_dataset(args.data, args.labels)
    spec = WaveletSpec(levels=args.levels)
    removed = 0.0
    points = 0
    cleaned = []
    for sample in data:
        out = dwt_denoise(sample.series, spec)
        removed += float(np.sum((sample.series - out) ** 2))
        points += sample.series.size
        cleaned.append(replace(sample, series=out))
    _ensure_out(args.out)
    write_dataset(Dataset(tuple(cleaned)), _p(args.out, "values.csv"), _p(args.out, "labels.csv"))
    print(f"denoised {len(data)} series; mean squared change (power removed): {removed / points:.6e}")
    return 0


def cmd_augment(args) -> int:
    data = load_dataset(args.data, args.labels)
    labels = data.labels()
    counts = {cls: int((labels == cls).sum()) for cls in (0, 1)}
    minority = 0 if counts[0] < counts[1] else 1
    target = args.target_count
    if target is None:
        target = counts[1 - minority] - counts[minority]
    if target <= 0:
        print("classes already balanced; nothing to do")
        _ensure_out(args.out)
        write_dataset(data, _p(args.out, "values.csv"), _p(args.out, "labels.csv"))
        return 0
    minority_samples = [s for s in data if s.label == minority]
    shapes = {s.series.shape for s in minority_samples}
    if len(shapes) != 1:
        raise UsageError("augment requires equal-length minority series")
    shape = shapes.pop()
    flat = np.stack([s.series.ravel() for s in minority_samples])
    synthetic = smote(flat, k=args.k, target_count=target, seed=args.seed)
    extra = tuple(
        Sample(series_id=f"smote_{i:05d}", series=vec.reshape(shape), label=minority)
        for i, vec in enumerate(synthetic)
    )
    _ensure_out(args.out)
    write_dataset(
        Dataset(data.samples + extra), _p(args.out, "values.csv"), _p(args.out, "labels.csv")
    )
    print(f"added {target} synthetic minority samples (label {minority})")
    return 0


def _load_run_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if getattr(args, "seed", None) is not None:
        cfg = cfg.with_value("seed", args.seed)
    if getattr(args, "algebra", None):
        cfg = cfg.with_value("algebra", args.algebra)
    return cfg


def _train_once(data: Dataset, cfg: RunConfig):
    tagged = split(data, seed=cfg.seed)
    tagged = augment_training_split(tagged, seed=cfg.seed)
    train_cfg = TrainConfig(
        lr=cfg.lr,
        epochs=cfg.epochs,
        batch_size=cfg.batch_size,
        l2_weight=cfg.l2_weight,
        seed=cfg.seed,
    )
    result = train(tagged, cfg.algebra, cfg.dev_order, train_cfg, hidden_width=cfg.hidden_width)
    return tagged, result


def model_to_dict(cfg: RunConfig, channels, result):
    return {
        "algebra": cfg.algebra,
        "dev_order": cfg.dev_order,
        "channels": channels,
        "theta": result.params.theta.tolist(),
        "head": {
            "w1": result.head.w1.tolist(),
            "b1": result.head.b1.tolist(),
            "w2": result.head.w2.tolist(),
            "b2": result.head.b2.tolist(),
        },
        "threshold": result.threshold,
        "best_epoch": result.best_epoch,
        "config": cfg.to_key_values(),
        "val_report": result.report.to_dict(),
    }


def load_model(path):
    with open(path) as fh:
        data = json.load(fh)
    params = DevParams(algebra=data["algebra"], theta=np.asarray(data["theta"]))
    head = DenseHead(
        w1=np.asarray(data["head"]["w1"]),
        b1=np.asarray(data["head"]["b1"]),
        w2=np.asarray(data["head"]["w2"]),
        b2=np.asarray(data["head"]["b2"]),
    )
    return params, head, float(data["threshold"]), data


def cmd_train(args) -> int:
    cfg = _load_run_config(args)
    data = load_dataset(args.data, args.labels)
    tagged, result = _train_once(data, cfg)
    out = _ensure_out(args.out)

    with open(_p(out, "model.json"), "w") as fh:
        json.dump(model_to_dict(cfg, data.channels, result), fh, sort_keys=True)
        fh.write("\n")
    with open(_p(out, "trace.csv"), "w") as fh:
        fh.write("\n".join(trace_lines(result.trace)) + "\n")
    with open(_p(out, "val_report.json"), "w") as fh:
        fh.write(result.report.to_json() + "\n")
    for tag, stem in (("validation", "val"), ("test", "test")):
        subset = tagged.subset(tag)
        if len(subset):
            write_dataset(subset, _p(out, f"{stem}_values.csv"), _p(out, f"{stem}_labels.csv"))
    with open(_p(out, "split_assignments.csv"), "w") as fh:
        fh.write("series_id,split\n")
        for sample in tagged:
            fh.write(f"{sample.series_id},{sample.split}\n")

    report = result.report
    print(
        f"best epoch {result.best_epoch}: validation specificity "
        f"{report.specificity}, npv {report.npv}, threshold {result.threshold!r}"
    )
    return 0


def cmd_eval(args) -> int:
    params, head, threshold, _ = load_model(args.model)
    data = load_dataset(args.data, args.labels)
    if data.channels != params.channels:
        raise UsageError(
            f"dataset has {data.channels} channels but the model expects {params.channels}"
        )
    samples = list(data)
    probs = predict_proba_samples(params, head, samples)
    predictions = classify(probs[:, 1], threshold)
    counts = confusion([s.label for s in samples], predictions)
    report = metrics(counts, threshold=threshold)
    payload = report.to_json()
    print(payload)
    if args.out:
        _ensure_out(args.out)
        with open(_p(args.out, "eval_report.json"), "w") as fh:
            fh.write(payload + "\n")
    return 0


def cmd_sweep(args) -> int:
    base = _load_run_config(args)
    with open(args.sweep_file) as fh:
        spec = parse_sweep(fh.read(), source=args.sweep_file)
    data = load_dataset(args.data, args.labels)

    def evaluate(cfg: RunConfig):
        _, result = _train_once(data, cfg)
        report = result.report
        return {
            "specificity": report.specificity if report.specificity is not None else 0.0,
            "npv": report.npv,
            "threshold": result.threshold,
            "best_epoch": result.best_epoch,
        }

    best_cfg, best_result, leaderboard = coordinate_descent(base, spec, evaluate)
    out = _ensure_out(args.out)
    with open(_p(out, "leaderboard.jsonl"), "w") as fh:
        for row in leaderboard:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    with open(_p(out, "best_config.txt"), "w") as fh:
        fh.write("\n".join(config_lines(best_cfg)) + "\n")
    print(
        f"best config after {len(leaderboard)} runs: specificity "
        f"{best_result['specificity']}; written to {_p(out, 'best_config.txt')}"
    )
    return 0


def cmd_gradcheck(args) -> int:
    ok, rows = run_suite(
        channels=args.channels,
        order=args.order,
        steps=args.steps,
        seed=args.seed,
        corrupt=args.corrupt,
    )
    for row in rows:
        print(row)
    print("gradcheck:", "PASS" if ok else "FAIL")
    return 0 if ok else 2


def _p(directory, name):
    return os.path.join(directory, name)


if __name__ == "__main__":
    sys.exit(main())
