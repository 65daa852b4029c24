import json

import pandas as pd
import pytest

from voxmark.cli import build_parser, main
from voxmark.features import FEATURE_NAMES, write_feature_matrix

from .conftest import build_matrix


@pytest.fixture
def features_csv(tmp_path):
    def make(**kwargs):
        path = tmp_path / "features.csv"
        write_feature_matrix(path, build_matrix(**kwargs))
        return str(path)
    return make


def run(*argv):
    return main([str(a) for a in argv])


# ── Parser ────────────────────────────────────────────────────────────────────
def test_every_command_is_registered():
    parser = build_parser()
    for command in ("synth", "extract", "stats", "describe", "cv", "roc", "sweep",
                    "transfer", "utt", "train", "predict", "tree"):
        args = parser.parse_args([command])
        assert args.command == command


def test_verbose_and_quiet_are_exclusive():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["cv", "-v", "-q"])


# ── Extraction ────────────────────────────────────────────────────────────────
def test_synth_then_extract(tmp_path):
    out = tmp_path / "corpus"
    assert run("synth", "--out", out, "--speakers", 2, "--utterances", 2, "--seed", 1) == 0
    assert len(list((out / "audio").glob("*.wav"))) == 4

    assert run("extract", "--manifest", out / "manifest.csv", "--out", out, "--jobs", 1) == 0
    frame = pd.read_csv(out / "features.csv")
    assert len(frame.columns) == 6 + len(FEATURE_NAMES)
    report = json.loads((out / "extract.json").read_text())
    assert report["rows"] + len(report["rejected"]) == 4
    assert report["rows"] == len(frame)


def test_missing_audio_fails_before_writing(tmp_path, wav_corpus):
    manifest = wav_corpus(missing=("r1",))
    out = tmp_path / "out"
    assert run("extract", "--manifest", manifest, "--out", out, "--jobs", 1) == 1
    assert not (out / "features.csv").exists()


def test_silent_clip_is_rejected_not_fatal(tmp_path, wav_corpus):
    manifest = wav_corpus(silent=("r2",))
    out = tmp_path / "out"
    assert run("extract", "--manifest", manifest, "--out", out, "--jobs", 1) == 0
    assert len(pd.read_csv(out / "features.csv")) == 2
    report = json.loads((out / "extract.json").read_text())
    assert [r["recording_id"] for r in report["rejected"]] == ["r2"]
    assert report["warnings"]


# ── Experiments ───────────────────────────────────────────────────────────────
def test_cv_report_is_reproducible(tmp_path, features_csv):
    features = features_csv(n_speakers=20, shift={"jitter": 2.0})
    out = tmp_path / "cv"
    reports = []
    for jobs in (1, 1, 2):
        assert run("cv", "--features", features, "--out", out, "--classifier", "knn",
                   "--jobs", jobs) == 0
        reports.append((out / "report.json").read_bytes())
    assert reports[0] == reports[1] == reports[2]

    report = json.loads(reports[0])
    assert "jobs" not in report["config"]
    assert "log_level" not in report["config"]
    assert report["seed"] == 0
    assert set(report["models"]) == {"knn"}
    assert (out / "roc.csv").exists()


def test_several_classifiers_get_their_own_roc_files(tmp_path, features_csv):
    features = features_csv(n_speakers=20, shift={"jitter": 2.0})
    out = tmp_path / "cv"
    assert run("cv", "--features", features, "--out", out, "--classifier", "knn,logistic",
               "--jobs", 1) == 0
    for name in ("roc.csv", "roc_knn.csv", "roc_logistic.csv"):
        assert (out / name).exists()


def test_sweep_writes_one_row_per_feature_count(tmp_path, features_csv):
    features = features_csv(n_speakers=20, shift={"jitter": 2.0})
    out = tmp_path / "sweep"
    assert run("sweep", "--features", features, "--out", out, "--classifier", "knn",
               "--jobs", 1) == 0
    frame = pd.read_csv(out / "sweep.csv")
    assert list(frame.columns) == ["k", "mean_accuracy", "std_accuracy"]
    assert frame["k"].tolist() == list(range(1, 19))


def test_roc_and_utterance_reports(tmp_path, features_csv):
    features = features_csv(n_speakers=20, shift={"jitter": 2.0}, utterance_shift={"shimmer": 2.0})
    out = tmp_path / "roc"
    assert run("roc", "--features", features, "--out", out, "--classifier", "knn", "--jobs", 1) == 0
    report = json.loads((out / "report.json").read_text())
    assert 0.0 <= report["models"]["knn"]["auc"] <= 1.0
    assert run("utt", "--features", features, "--out", out, "--classifier", "knn", "--jobs", 1) == 0
    report = json.loads((out / "report.json").read_text())
    assert set(report["models"]["knn"]["sa_by_utterance"]) == {"consent", "refusal"}


def test_transfer_writes_matrix(tmp_path, features_csv):
    features = features_csv(n_speakers=40, shift={"jitter": 2.0})
    out = tmp_path / "transfer"
    assert run("transfer", "--features", features, "--out", out, "--classifier", "logistic",
               "--jobs", 1) == 0
    frame = pd.read_csv(out / "transfer.csv")
    assert len(frame) == 4


def test_stats_and_describe(tmp_path, features_csv):
    features = features_csv(n_speakers=12, per_speaker=2)
    out = tmp_path / "stats"
    assert run("stats", "--features", features, "--out", out) == 0
    report = json.loads((out / "stats.json").read_text())
    assert any(r["comparison"] == "LSA vs HSA" for r in report["comparisons"])
    assert run("describe", "--features", features, "--out", out) == 0
    assert len(pd.read_csv(out / "describe.csv")) == 2 * len(FEATURE_NAMES)


def test_train_then_predict(tmp_path, features_csv):
    features = features_csv(n_speakers=20, shift={"jitter": 2.0})
    out = tmp_path / "model"
    assert run("train", "--features", features, "--out", out, "--classifier", "logistic") == 0
    model = out / "model.json"
    assert model.exists()
    assert run("predict", "--features", features, "--out", out, "--model", model) == 0
    frame = pd.read_csv(out / "predictions.csv")
    assert len(frame) == 40
    assert set(frame["label"]) <= {"LSA", "HSA"}
    assert run("predict", "--features", features, "--out", out, "--model", model,
               "--infer-gender") == 0


def test_tree_prints(features_csv):
    assert run("tree", "--features", features_csv(n_speakers=12, shift={"jitter": 3.0})) == 0


# ── Exit codes ────────────────────────────────────────────────────────────────
def test_input_errors_exit_one(tmp_path, features_csv):
    features = features_csv(n_speakers=20)
    assert run("cv", "--features", features, "--out", tmp_path, "--classifier", "svm") == 1
    assert run("cv", "--out", tmp_path) == 1
    assert run("predict", "--features", features, "--out", tmp_path) == 1


def test_analysis_errors_exit_two(tmp_path, features_csv):
    # four speakers cannot fill ten speaker-level folds
    features = features_csv(n_speakers=4)
    assert run("cv", "--features", features, "--out", tmp_path, "--classifier", "knn",
               "--jobs", 1) == 2
