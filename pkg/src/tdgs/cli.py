"""Command-line pipeline: synth, analyze, pairs, train, eval, clean, sweep, curves.

Every command is deterministic given its flags (seeds included), so re-runs
produce byte-identical artifacts.  `--config file.json` supplies defaults
with the same keys as the flags (dashes become underscores); explicit flags
win over the file.

Exit codes: 0 success, 1 validation/usage error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from fractions import Fraction
from math import comb

import numpy as np

from . import class_structure as cs
from . import data_model, evaluation, pairing, svm_smo


def _parse_ratio(text: str) -> cs.Ratio:
    return cs.INF if text == "inf" else Fraction(text)


def _ratio_key(r: cs.Ratio) -> str:
    return "inf" if cs.is_infinite(r) else str(Fraction(r))


def _write_lines(path, lines) -> None:
    with open(path, "w") as f:
        f.write("\n".join(lines) + "\n")


# ---------------------------------------------------------------- commands

def _feature_config(args) -> pairing.FeatureConfig:
    return pairing.FeatureConfig(
        include_diff_vector=bool(args.include_diff_vector),
        resample_len=int(args.resample_len),
    )


def _train_config(args) -> svm_smo.TrainConfig:
    return svm_smo.TrainConfig(
        penalty_c=float(args.penalty_c),
        kkt_tol=float(args.kkt_tol),
        max_passes=int(args.max_passes),
        seed=int(args.seed),
    )


def cmd_synth(args) -> int:
    faults = [int(x) for x in str(args.faults).split(",")]
    shots = data_model.synthesize(
        n_channels=int(args.channels),
        n_shots=int(args.shots),
        samples_per_shot=int(args.samples),
        faults_per_shot=faults,
        seed=int(args.seed),
    )
    data_model.save_shots(shots, args.out)
    report = cs.class_ratios(data_model.structure_of(shots))
    print(f"wrote {args.out}: {len(shots)} shots x {shots[0].n_channels} channels")
    _print_structure(report)
    return 0


def _print_structure(report: cs.ClassStructureReport) -> None:
    print(f"total_pairs={report.total_pairs}")
    print(f"similar={report.similar}")
    print(f"dissimilar={report.dissimilar}")
    print(f"raw_ratio={cs.format_ratio(report.raw_ratio)}")
    print(f"tdgs_ratio={cs.format_ratio(report.tdgs_ratio)}")
    print(f"balanced_improved={report.balanced_improved}")


def cmd_analyze(args) -> int:
    shots = data_model.load_shots(args.data)
    report = cs.class_ratios(data_model.structure_of(shots))
    _print_structure(report)
    if args.out:
        _write_lines(args.out, [
            "total_pairs,similar,dissimilar,raw_ratio,tdgs_ratio,balanced_improved",
            f"{report.total_pairs},{report.similar},{report.dissimilar},"
            f"{cs.format_ratio(report.raw_ratio)},{cs.format_ratio(report.tdgs_ratio)},"
            f"{str(report.balanced_improved).lower()}",
        ])
    return 0


def cmd_pairs(args) -> int:
    shots = data_model.load_shots(args.data)
    samples = pairing.build_pairs(shots, _feature_config(args))
    _write_lines(args.out, pairing.pairs_csv_lines(samples))
    print(f"wrote {args.out}: {len(samples)} pair samples")
    return 0


def _labeled_matrix(samples):
    """Keep tagged samples only; (features, +-1 labels)."""
    usable = [s for s in samples if s.tag != "unknown"]
    if not usable:
        raise ValueError("no labeled pair samples (all tags unknown)")
    X = np.array([s.features for s in usable])
    y = np.array([evaluation.TAG_TO_LABEL[s.tag] for s in usable])
    return X, y, usable


def cmd_train(args) -> int:
    shots = data_model.load_shots(args.data)
    fc = _feature_config(args)
    samples = pairing.build_pairs(shots, fc)
    X, y, _ = _labeled_matrix(samples)
    model = svm_smo.train(X, y, _train_config(args))
    report = cs.class_ratios(data_model.structure_of(shots))
    model.metadata = {
        "feature_config": {
            "include_diff_vector": fc.include_diff_vector,
            "resample_len": fc.resample_len,
        },
        "train_class_structure": _ratio_key(report.tdgs_ratio),
    }
    svm_smo.save_model(model, args.model_out)
    print(f"wrote {args.model_out}: {len(model.alphas)} support vectors, "
          f"train structure {cs.format_ratio(report.tdgs_ratio)}")
    return 0


def _model_feature_config(model: svm_smo.SvmModel) -> pairing.FeatureConfig:
    fc = model.metadata.get("feature_config", {})
    return pairing.FeatureConfig(
        include_diff_vector=bool(fc.get("include_diff_vector", False)),
        resample_len=int(fc.get("resample_len", 256)),
    )


def cmd_eval(args) -> int:
    shots = data_model.load_shots(args.data)
    model = svm_smo.load_model(args.model)
    samples = pairing.build_pairs(shots, _model_feature_config(model))
    X, _, usable = _labeled_matrix(samples)
    preds = svm_smo.predict_many(model, X)
    cm = evaluation.confusion(list(preds), [s.tag for s in usable])
    structure = _parse_ratio(model.metadata.get("train_class_structure", "inf"))
    report = evaluation.make_report(cm, structure)
    print(f"tp={cm.tp} fn={cm.fn} fp={cm.fp} tn={cm.tn}")
    print(f"recall_dissimilar={report.recall_pos:.6f}")
    print(f"recall_similar={report.recall_neg:.6f}")
    print(f"g_mean={report.g_mean:.6f}")
    if args.report_out:
        doc = {
            "confusion": {"tp": cm.tp, "fn": cm.fn, "fp": cm.fp, "tn": cm.tn},
            "recall_dissimilar": report.recall_pos,
            "recall_similar": report.recall_neg,
            "g_mean": report.g_mean,
            "train_class_structure": _ratio_key(structure),
        }
        with open(args.report_out, "w") as f:
            json.dump(doc, f, indent=1, sort_keys=True)
            f.write("\n")
    return 0


def cmd_clean(args) -> int:
    shots = data_model.load_shots(args.data)
    model = svm_smo.load_model(args.model)
    fc = _model_feature_config(model)
    threshold = float(args.threshold)
    flagged_total = 0
    cleaned = []
    for shot in shots:
        samples = pairing.build_pairs([shot], fc)
        preds = svm_smo.predict_many(model, np.array([s.features for s in samples]))
        pair_preds = {
            (s.channel_a, s.channel_b): int(p) for s, p in zip(samples, preds)
        }
        flagged = evaluation.flag_incorrect_channels(shot, pair_preds, threshold)
        flagged_total += len(flagged)
        cleaned.append(
            data_model.Shot(
                shot_id=shot.shot_id,
                dt=shot.dt,
                channels=[
                    data_model.ChannelTrace(
                        channel_index=c.channel_index,
                        samples=c.samples.copy(),
                        label="incorrect" if c.channel_index in flagged else "correct",
                    )
                    for c in shot.channels
                ],
            )
        )
    data_model.save_shots(cleaned, args.out)
    print(f"wrote {args.out}: flagged {flagged_total} channels across {len(shots)} shots")
    return 0


def enumerate_subsets(pool_size: int, subset_size: int, cap: int, seed: int):
    """All C(pool, subset) index subsets, or a seeded sample when over cap."""
    if not 1 <= subset_size <= pool_size:
        raise ValueError("subset size must be in [1, pool size]")
    n_total = comb(pool_size, subset_size)
    if n_total <= cap:
        return list(itertools.combinations(range(pool_size), subset_size)), False
    rng = np.random.default_rng(seed)
    picked = set()
    while len(picked) < cap:
        picked.add(tuple(sorted(rng.choice(pool_size, subset_size, replace=False))))
    return sorted(picked), True


def run_sweep(pool_shots, val_shots, subset_size: int,
              train_cfg: svm_smo.TrainConfig, fc: pairing.FeatureConfig,
              cap: int, seed: int):
    """Train one classifier per shot subset, score all on the shared
    validation set, and average G-mean per exact class structure."""
    per_shot_samples = [pairing.build_pairs([s], fc) for s in pool_shots]
    val_samples = pairing.build_pairs(val_shots, fc)
    Xv, _, val_usable = _labeled_matrix(val_samples)
    val_tags = [s.tag for s in val_usable]

    subsets, sampled = enumerate_subsets(len(pool_shots), subset_size, cap, seed)
    if sampled:
        print(
            f"warning: {comb(len(pool_shots), subset_size)} subsets exceed "
            f"cap {cap}; sampling {cap} with seed {seed}",
            file=sys.stderr,
        )

    reports = []
    skipped = 0
    for subset in subsets:
        samples = [s for idx in subset for s in per_shot_samples[idx]]
        try:
            X, y, _ = _labeled_matrix(samples)
            model = svm_smo.train(X, y, train_cfg)
        except ValueError:
            skipped += 1  # single-class subset: nothing to train on
            continue
        structure = cs.class_ratios(
            data_model.structure_of([pool_shots[i] for i in subset])
        ).tdgs_ratio
        preds = svm_smo.predict_many(model, Xv)
        cm = evaluation.confusion(list(preds), val_tags)
        reports.append(evaluation.make_report(cm, structure))
    if not reports:
        raise ValueError("every subset was single-class; nothing to sweep")
    return evaluation.grouped_assessment(reports), len(subsets), skipped


def cmd_sweep(args) -> int:
    pool = data_model.load_shots(args.pool)
    val = data_model.load_shots(args.validation)
    grouped, n_subsets, skipped = run_sweep(
        pool, val, int(args.subset_size), _train_config(args),
        _feature_config(args), int(args.cap), int(args.seed),
    )
    lines = ["class_structure,mean_gmean,n_sets"]
    for structure, mean_g, count in grouped:
        lines.append(f"{cs.format_ratio(structure)},{mean_g!r},{count}")
    _write_lines(args.out, lines)
    print(f"wrote {args.out}: {n_subsets} subsets, {skipped} skipped, "
          f"{len(grouped)} structure groups")
    return 0


def cmd_curves(args) -> int:
    q_grid = [Fraction(part) for part in str(args.q_grid).split(",")]
    points = cs.transformation_curve(int(args.channels), q_grid)
    lines = cs.curve_csv_lines(points)
    if args.out:
        _write_lines(args.out, lines)
        print(f"wrote {args.out}: {len(points)} points")
    else:
        print("\n".join(lines))
    return 0


# ------------------------------------------------------------- arg plumbing

def _add_feature_flags(p):
    p.add_argument("--include-diff-vector", action=argparse.BooleanOptionalAction)
    p.add_argument("--resample-len", type=int)


def _add_train_flags(p):
    p.add_argument("--penalty-c", type=float)
    p.add_argument("--kkt-tol", type=float)
    p.add_argument("--max-passes", type=int)


DEFAULTS = {
    "synth": {"channels": 11, "shots": 7, "samples": 500,
              "faults": "1,1,0,2,0,1,1", "seed": 0},
    "analyze": {"out": None},
    "pairs": {"include_diff_vector": False, "resample_len": 256},
    "train": {"penalty_c": 20.0, "kkt_tol": 1e-3, "max_passes": 50, "seed": 0,
              "include_diff_vector": False, "resample_len": 256},
    "eval": {"report_out": None},
    "clean": {"threshold": 0.5},
    "sweep": {"subset_size": 7, "cap": 2000, "seed": 0,
              "penalty_c": 20.0, "kkt_tol": 1e-3, "max_passes": 50,
              "include_diff_vector": False, "resample_len": 256},
    "curves": {"q_grid": "0", "out": None},
}

COMMANDS = {
    "synth": cmd_synth,
    "analyze": cmd_analyze,
    "pairs": cmd_pairs,
    "train": cmd_train,
    "eval": cmd_eval,
    "clean": cmd_clean,
    "sweep": cmd_sweep,
    "curves": cmd_curves,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdgs",
        description="Similarity-pair data cleaning for multi-channel measurements",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def new(name, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.add_argument("--config", help="JSON file of defaults for this command")
        return p

    p = new("synth", help="generate a labeled synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--channels", type=int)
    p.add_argument("--shots", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--faults", help="comma list of incorrect channels per shot")
    p.add_argument("--seed", type=int)

    p = new("analyze", help="report class structure of a dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--out", help="optional CSV output")

    p = new("pairs", help="dump pair samples to CSV")
    p.add_argument("--data", required=True)
    p.add_argument("--out", required=True)
    _add_feature_flags(p)

    p = new("train", help="train the pair classifier")
    p.add_argument("--data", required=True)
    p.add_argument("--model-out", required=True)
    p.add_argument("--seed", type=int)
    _add_train_flags(p)
    _add_feature_flags(p)

    p = new("eval", help="evaluate a model on a labeled dataset")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--report-out")

    p = new("clean", help="flag incorrect channels with a trained model")
    p.add_argument("--data", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--threshold", type=float)

    p = new("sweep", help="class-structure sweep over shot subsets")
    p.add_argument("--pool", required=True)
    p.add_argument("--validation", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--subset-size", type=int)
    p.add_argument("--cap", type=int)
    p.add_argument("--seed", type=int)
    _add_train_flags(p)
    _add_feature_flags(p)

    p = new("curves", help="emit class-structure transformation curve CSV")
    p.add_argument("--channels", type=int, required=True)
    p.add_argument("--q-grid", help="comma list of error rates, e.g. 0,1/4,0.5")
    p.add_argument("--out")

    return parser


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    merged = dict(DEFAULTS.get(args.command, {}))
    if getattr(args, "config", None):
        with open(args.config) as f:
            file_cfg = json.load(f)
        if not isinstance(file_cfg, dict):
            raise ValueError(f"{args.config}: config must be a JSON object")
        unknown = set(file_cfg) - set(vars(args))
        if unknown:
            raise ValueError(f"{args.config}: unknown keys {sorted(unknown)}")
        merged.update(file_cfg)
    for key, value in vars(args).items():
        if key in ("command", "config"):
            continue
        if value is not None:
            merged[key] = value
        elif key not in merged:
            merged[key] = None
    return argparse.Namespace(command=args.command, **merged)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        args = _merge_config(args)
        return COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
