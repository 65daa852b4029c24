#!/usr/bin/env python3
"""
voxmark CLI - Main Application Entry Point
------------------------------------------
One command per stage: synthesize a corpus, extract features, run the group
statistics and the cross-validated experiments, and train, inspect or apply
a model. Every report echoes the effective configuration and seed.
"""
import argparse
import logging
import os
import sys
from typing import Dict, List, Optional, Sequence

from . import __version__
from .config import CLASSIFIERS, RunConfig, load_config
from .corpus import CorpusProfile, Gender, SAGroup, generate_corpus, parse_manifest
from .errors import ConfigError, VoxmarkError
from .eval import (
    CVOptions,
    FoldSettings,
    ModelSpec,
    cross_validate,
    gender_configurations,
    gender_sweeps,
    sa_dataset,
    split_by_utterance_eval,
    sweep_feature_count,
    utterance_type_classification,
)
from .eval.crossval import fit_preparation, gender_array, prepare
from .features import (
    FeatureMatrix,
    describe_by_gender,
    extract_corpus,
    normalize_array,
    read_feature_matrix,
    write_feature_matrix,
)
from .learn import load_model, render_tree, save_model, train_gender_classifier
from .log import console, setup_logging
from .reporter import (
    print_comparisons,
    print_cv,
    print_describe,
    print_extraction,
    print_predictions,
    print_sweep,
    print_transfer,
    print_written,
    report_document,
    write_csv_atomic,
    write_json_atomic,
    write_rows_csv,
)
from .stats import group_comparisons, utterance_comparisons

log = logging.getLogger(__name__)

# Execution-only keys; they never change a result, so reports leave them out.
NON_REPORTED_KEYS = ("jobs", "log_level")


# ── Shared helpers ────────────────────────────────────────────────────────────
def _config_echo(cfg: RunConfig) -> dict:
    doc = cfg.to_dict()
    for key in NON_REPORTED_KEYS:
        doc.pop(key, None)
    return doc


def _out_path(cfg: RunConfig, name: str) -> str:
    return os.path.join(cfg.out, name)


def _load_matrix(cfg: RunConfig) -> FeatureMatrix:
    if cfg.features:
        matrix = read_feature_matrix(cfg.features)
    elif cfg.manifest:
        corpus = parse_manifest(cfg.manifest)
        matrix, _ = extract_corpus(corpus, cfg.dsp_params(), cfg.effective_jobs)
    else:
        raise ConfigError("no input: pass --features or --manifest")
    names = cfg.feature_names
    if names:
        try:
            matrix = matrix.select(names)
        except KeyError as e:
            raise ConfigError(f"feature_subset: {e.args[0]}") from None
    return matrix


def _cv_options(cfg: RunConfig) -> CVOptions:
    return CVOptions(norm_scope=cfg.norm_scope, rank_scope=cfg.rank_scope,
                     outlier_k=cfg.outlier_k, jobs=cfg.effective_jobs)


def _fold_settings(cfg: RunConfig) -> FoldSettings:
    return FoldSettings(k=cfg.folds, mode=cfg.effective_fold_mode,
                        stratified=cfg.stratified, seed=cfg.seed)


def _specs(cfg: RunConfig) -> List[ModelSpec]:
    return [ModelSpec(name, cfg.model_params(name)) for name in cfg.classifiers]


def _per_model_csv(base: str, model: str, several: bool, primary: bool) -> List[str]:
    """File names for one model's plot CSV: `base.csv` for the first model,
    `base_<model>.csv` for every model when several are run."""
    names = [f"{base}.csv"] if primary else []
    if several:
        names.append(f"{base}_{model}.csv")
    return names


def _write_report(cfg: RunConfig, body: dict, warnings: Sequence[str] = (),
                  name: str = "report.json") -> str:
    path = _out_path(cfg, name)
    write_json_atomic(path, report_document(_config_echo(cfg), cfg.seed, body, warnings))
    return path


# ── Commands ──────────────────────────────────────────────────────────────────
def cmd_synth(cfg: RunConfig) -> int:
    profile = CorpusProfile(
        n_speakers=cfg.synth_speakers,
        n_utterances=cfg.synth_utterances,
        sample_rate_hz=cfg.synth_sample_rate,
        spread=cfg.synth_spread,
        group_shift_db=cfg.synth_group_shift_db,
        utterance_gap_db=cfg.synth_utterance_gap_db,
        refusal_only=cfg.synth_refusal_only,
        seed=cfg.seed,
    )
    metas = generate_corpus(cfg.out, profile)
    print_written([_out_path(cfg, "manifest.csv"), f"{len(metas)} WAV file(s) under "
                   f"{_out_path(cfg, 'audio')}"])
    return 0


def cmd_extract(cfg: RunConfig) -> int:
    if not cfg.manifest:
        raise ConfigError("extract needs --manifest")
    corpus = parse_manifest(cfg.manifest)
    matrix, rejections = extract_corpus(corpus, cfg.dsp_params(), cfg.effective_jobs)
    target = cfg.features or _out_path(cfg, "features.csv")
    write_feature_matrix(target, matrix)
    warnings = [f"{r.recording_id}: {r.reason}: {r.error}" for r in rejections]
    report = _write_report(cfg, {"rows": len(matrix), "features_csv": target,
                                 "rejected": [r.to_dict() for r in rejections]},
                           warnings, "extract.json")
    print_extraction(len(matrix), rejections)
    print_written([target, report])
    return 0


def cmd_stats(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    group, warnings = group_comparisons(matrix, cfg.split_by_gender, cfg.outlier_k, cfg.outlier_mode)
    paired, paired_warnings = utterance_comparisons(matrix)
    warnings = warnings + paired_warnings
    for message in warnings:
        log.warning(message)
    path = _write_report(cfg, {"comparisons": group + paired}, warnings, "stats.json")
    print_comparisons(group, "LSA vs HSA")
    if paired:
        print_comparisons(paired, "Refusal vs consent")
    print_written([path])
    return 0


def cmd_describe(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    table = describe_by_gender(matrix)
    path = _out_path(cfg, "describe.csv")
    write_csv_atomic(path, table, float_format="%.6g")
    print_describe(table, cfg.shimmer_percent)
    print_written([path])
    return 0


def _run_cv(cfg: RunConfig, matrix: FeatureMatrix):
    data = sa_dataset(matrix)
    settings = _fold_settings(cfg)
    plan = settings.plan(data)
    results = [cross_validate(data, spec, plan, _cv_options(cfg)) for spec in _specs(cfg)]
    return plan.summary(data.labels), results


def _write_rocs(cfg: RunConfig, results, base: str = "roc") -> List[str]:
    written = []
    several = len(results) > 1
    for i, result in enumerate(results):
        if result.roc is None:
            continue
        for name in _per_model_csv(base, result.model, several, i == 0):
            path = _out_path(cfg, name)
            write_rows_csv(path, ("fpr", "tpr"), result.roc.points)
            written.append(path)
    return written


def cmd_cv(cfg: RunConfig) -> int:
    plan, results = _run_cv(cfg, _load_matrix(cfg))
    warnings = [w for r in results for w in r.warnings]
    body = {"fold_plan": plan, "models": {r.model: r.to_dict() for r in results}}
    written = [_write_report(cfg, body, warnings)] + _write_rocs(cfg, results)
    print_cv(results)
    print_written(written)
    return 0


def cmd_roc(cfg: RunConfig) -> int:
    plan, results = _run_cv(cfg, _load_matrix(cfg))
    warnings = [w for r in results for w in r.warnings]
    body = {
        "fold_plan": plan,
        "models": {r.model: {"auc": None if r.roc is None else r.roc.auc,
                             "roc": None if r.roc is None else [list(p) for p in r.roc.points]}
                   for r in results},
    }
    written = [_write_report(cfg, body, warnings)] + _write_rocs(cfg, results)
    print_cv(results)
    print_written(written)
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    data = sa_dataset(_load_matrix(cfg))
    settings = _fold_settings(cfg)
    plan = settings.plan(data)
    options = _cv_options(cfg)
    specs = _specs(cfg)
    written, body = [], {"fold_plan": plan.summary(data.labels), "models": {}}
    header = ("k", "mean_accuracy", "std_accuracy")
    for i, spec in enumerate(specs):
        sweep = sweep_feature_count(data, spec, plan, options)
        entry = sweep.to_dict()
        for name in _per_model_csv("sweep", spec.name, len(specs) > 1, i == 0):
            written.append(_out_path(cfg, name))
            write_rows_csv(written[-1], header, sweep.to_rows())
        print_sweep(sweep)
        if cfg.per_gender:
            per_gender = gender_sweeps(data, spec, settings, options)
            entry["per_gender"] = {g: s.to_dict() for g, s in sorted(per_gender.items())}
            for gender, gs in sorted(per_gender.items()):
                suffix = gender if i == 0 else f"{gender}_{spec.name}"
                written.append(_out_path(cfg, f"sweep_{suffix}.csv"))
                write_rows_csv(written[-1], header, gs.to_rows())
                print_sweep(gs, f"Feature-count sweep ({spec.name}, {gender})")
        body["models"][spec.name] = entry
    written.insert(0, _write_report(cfg, body))
    print_written(written)
    return 0


def cmd_transfer(cfg: RunConfig) -> int:
    data = sa_dataset(_load_matrix(cfg))
    specs = _specs(cfg)
    written, body, warnings = [], {"models": {}}, []
    for i, spec in enumerate(specs):
        result = gender_configurations(data, spec, _fold_settings(cfg), _cv_options(cfg))
        body["models"][spec.name] = result.to_dict()
        warnings.extend(result.unified.warnings)
        for name in _per_model_csv("transfer", spec.name, len(specs) > 1, i == 0):
            written.append(_out_path(cfg, name))
            write_rows_csv(written[-1], ("train_gender", "test_gender", "accuracy"),
                           result.transfer.to_rows())
        print_cv([result.unified, *(result.per_gender[g] for g in sorted(result.per_gender))])
        print_transfer(result.transfer, f"{spec.name}: train gender x test gender accuracy")
    written.insert(0, _write_report(cfg, body, warnings))
    print_written(written)
    return 0


def cmd_utt(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    settings, options = _fold_settings(cfg), _cv_options(cfg)
    body, results, warnings = {"models": {}}, [], []
    for spec in _specs(cfg):
        utterance = utterance_type_classification(matrix, spec, settings, options)
        split = split_by_utterance_eval(matrix, spec, settings, options)
        results.append(utterance)
        warnings.extend(utterance.warnings)
        body["models"][spec.name] = {
            "utterance_type": utterance.to_dict(),
            "sa_by_utterance": {kind: r.to_dict() for kind, r in sorted(split.items())},
        }
        print_cv([utterance])
        console.print(f"[cyan]{spec.name}[/] SA accuracy by utterance type: " + ", ".join(
            f"{kind} {r.mean['accuracy']:.3f}" for kind, r in sorted(split.items())))
    written = [_write_report(cfg, body, warnings)] + _write_rocs(cfg, results)
    print_written(written)
    return 0


def _whole_data_model(cfg: RunConfig, matrix: FeatureMatrix, spec: ModelSpec):
    """Fit on every LSA/HSA row, winsorized and gender-normalized on all of them."""
    data = sa_dataset(matrix)
    genders = gender_array(data)
    bounds, stats = fit_preparation(data.vectors, genders, data.columns, cfg.outlier_k)
    model = spec.fit(data.with_vectors(prepare(data.vectors, genders, bounds, stats)))
    return model.with_context(columns=data.columns, norm_stats=stats), data


def cmd_train(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    model, _ = _whole_data_model(cfg, matrix, _specs(cfg)[0])
    labeled = matrix.take(matrix.sa_groups != SAGroup.EXCLUDED.value)
    if len(set(labeled.genders.tolist())) == 2:
        model = model.with_context(gender_model=train_gender_classifier(labeled, cfg.gender_l2))
    else:
        log.warning("single-gender training data: no gender classifier stored")
    path = cfg.model or _out_path(cfg, "model.json")
    save_model(path, model)
    print_written([path])
    return 0


def cmd_predict(cfg: RunConfig) -> int:
    if not cfg.model:
        raise ConfigError("predict needs --model")
    model = load_model(cfg.model)
    matrix = _load_matrix(cfg)
    try:
        matrix = matrix.select(model.columns)
    except KeyError as e:
        raise ConfigError(f"input lacks model column(s): {e.args[0]}") from None
    genders = matrix.genders
    if cfg.infer_gender:
        if model.gender_model is None:
            raise ConfigError("model file carries no gender classifier")
        genders = model.gender_model.predict(matrix.values)
    vectors = matrix.values
    if model.norm_stats is not None:
        vectors = normalize_array(vectors, genders, model.norm_stats)
    proba = model.predict_proba(vectors)
    rows = [
        {"recording_id": m.recording_id, "gender": str(g), "probability": float(p),
         "label": "HSA" if p >= 0.5 else "LSA"}
        for m, g, p in zip(matrix.metas, genders, proba)
    ]
    path = _out_path(cfg, "predictions.csv")
    write_rows_csv(path, ("recording_id", "gender", "probability", "label"),
                   [[r["recording_id"], r["gender"], r["probability"], r["label"]] for r in rows])
    print_predictions(rows)
    print_written([path])
    return 0


def cmd_tree(cfg: RunConfig) -> int:
    matrix = _load_matrix(cfg)
    spec = ModelSpec("tree", cfg.model_params("tree"))
    subsets = [(None, matrix)]
    if cfg.per_gender:
        subsets = [(g.value, matrix.take(matrix.genders == g.value)) for g in (Gender.FEMALE, Gender.MALE)]
    for gender, subset in subsets:
        model, data = _whole_data_model(cfg, subset, spec)
        title = "decision tree" if gender is None else f"decision tree ({gender})"
        console.print(render_tree(model, data.columns, title=title))
    return 0


COMMANDS = {
    "synth": (cmd_synth, "generate a seeded synthetic corpus (WAVs + manifest)"),
    "extract": (cmd_extract, "extract the 18 acoustic features into a CSV"),
    "stats": (cmd_stats, "LSA vs HSA ANOVAs and refusal vs consent paired t-tests"),
    "describe": (cmd_describe, "per-gender feature means and SDs"),
    "cv": (cmd_cv, "cross-validated SA classification"),
    "roc": (cmd_roc, "pooled out-of-fold ROC curves"),
    "sweep": (cmd_sweep, "accuracy by number of top-ranked features"),
    "transfer": (cmd_transfer, "unified, gender-specific and cross-gender configurations"),
    "utt": (cmd_utt, "refusal vs consent classifier and SA accuracy per utterance type"),
    "train": (cmd_train, "train one model on all rows and save it"),
    "predict": (cmd_predict, "apply a saved model to a feature matrix or manifest"),
    "tree": (cmd_tree, "print the decision tree fitted on all rows"),
}


# ── Argument parsing ──────────────────────────────────────────────────────────
def _common(parser: argparse.ArgumentParser):
    add = parser.add_argument
    add("--config", help="TOML config file (flat key = value)")
    add("--manifest", help="manifest CSV")
    add("--features", help="feature-matrix CSV")
    add("--out", help="output directory")
    add("--model", help="model JSON file")
    add("--seed", type=int)
    add("--jobs", type=int, help="worker processes (0 = all cores)")
    add("--paper-fidelity", dest="paper_fidelity", action="store_true", default=None,
        help="whole-data normalization and ranking, per-recording folds")
    add("--fold-mode", dest="fold_mode", choices=("speaker", "recording"))
    add("--folds", type=int)
    add("--classifier", help=f"{' | '.join(CLASSIFIERS)} | all, or a comma-separated list")
    add("--feature-subset", dest="feature_subset", help="comma-separated feature names")
    add("--outlier-mode", dest="outlier_mode", choices=("clip", "exclude_value"))
    add("--split-by-gender", dest="split_by_gender", action="store_true", default=None)
    add("--per-gender", dest="per_gender", action="store_true", default=None)
    add("--infer-gender", dest="infer_gender", action="store_true", default=None)
    add("--shimmer-percent", dest="shimmer_percent", action="store_true", default=None)
    add("--speakers", dest="synth_speakers", type=int)
    add("--utterances", dest="synth_utterances", type=int)
    add("--refusal-only", dest="synth_refusal_only", action="store_true", default=None)
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true")
    verbosity.add_argument("-q", "--quiet", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voxmark",
        description="Acoustic speech markers of social anxiety: extraction, statistics, evaluation.",
    )
    parser.add_argument("--version", action="version", version=f"voxmark {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_text) in COMMANDS.items():
        _common(sub.add_parser(name, help=help_text, description=help_text))
    return parser


OVERRIDE_KEYS = (
    "manifest", "features", "out", "model", "seed", "jobs", "paper_fidelity", "fold_mode",
    "folds", "classifier", "feature_subset", "outlier_mode", "split_by_gender", "per_gender",
    "infer_gender", "shimmer_percent", "synth_speakers", "synth_utterances", "synth_refusal_only",
)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides: Dict[str, object] = {key: getattr(args, key) for key in OVERRIDE_KEYS}
    if args.verbose:
        overrides["log_level"] = "DEBUG"
    elif args.quiet:
        overrides["log_level"] = "WARNING"
    return load_config(args.config, overrides)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
        setup_logging(cfg.log_level)
        handler = COMMANDS[args.command][0]
        return handler(cfg)
    except VoxmarkError as e:
        console.print(f"[bold red]error[/] ({type(e).__name__}): {e}")
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
