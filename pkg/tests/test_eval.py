import dataclasses

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from voxmark.corpus import CorpusProfile, UtteranceType, generate_corpus, parse_manifest
from voxmark.errors import (
    ConfigError,
    FoldError,
    LengthMismatch,
    MissingUtteranceLabels,
    SingleClass,
    TooFewGroups,
    TooFewRows,
)
from voxmark.eval import (
    CVOptions,
    FoldSettings,
    ModelSpec,
    compute_metrics,
    cross_validate,
    gender_configurations,
    gender_sweeps,
    make_folds,
    rank_auc,
    roc_auc,
    sa_dataset,
    split_by_utterance_eval,
    sweep_feature_count,
    utterance_dataset,
    utterance_type_classification,
)
from voxmark.features import FEATURE_NAMES, extract_corpus
from voxmark.learn import LabeledSet
from voxmark.stats import rank_features_anova

from .conftest import build_matrix

EVERY_FEATURE = {name: 2.0 for name in FEATURE_NAMES}
KNN = ModelSpec("knn", {"k": 3})


def rows(n, positives, groups=None):
    labels = np.r_[np.ones(positives), np.zeros(n - positives)]
    return LabeledSet(np.zeros((n, 1)), labels, groups)


# ── Folds ─────────────────────────────────────────────────────────────────────
def test_exactly_divisible_stratified_folds():
    plan = make_folds(rows(20, 10), k=10, mode="per_recording")
    summary = plan.summary(rows(20, 10).labels)
    assert summary["fold_sizes"] == [2] * 10
    assert summary["fold_positives"] == [1] * 10


def test_sixty_three_rows_in_ten_folds():
    data = rows(63, 32)
    summary = make_folds(data, k=10, mode="per_recording", seed=4).summary(data.labels)
    assert set(summary["fold_sizes"]) <= {6, 7}
    assert set(summary["fold_positives"]) <= {3, 4}


def test_speaker_rows_share_a_fold():
    groups = ["big"] * 24 + [f"s{i}" for i in range(20)]
    plan = make_folds(rows(44, 22, groups), k=10, mode="per_speaker")
    assert len(set(plan.assignment[:24].tolist())) == 1


def test_too_few_groups():
    with pytest.raises(TooFewGroups):
        make_folds(rows(20, 10, [f"s{i % 5}" for i in range(20)]), k=10)
    with pytest.raises(TooFewGroups):
        make_folds(rows(20, 10), k=10, mode="per_speaker")
    with pytest.raises(TooFewGroups):
        make_folds(rows(20, 10), k=1, mode="per_recording")


def test_unknown_fold_mode():
    with pytest.raises(ValueError):
        make_folds(rows(20, 10), k=5, mode="per_session")


@given(n=st.integers(10, 60), k=st.integers(2, 10), seed=st.integers(0, 2**16), data=st.data())
def test_fold_plan_invariants(n, k, seed, data):
    positives = data.draw(st.integers(0, n))
    speakers = data.draw(st.lists(st.integers(0, n // 2), min_size=n, max_size=n))
    labeled = rows(n, positives, [f"s{s}" for s in speakers])
    if len(set(speakers)) >= k:
        plan = make_folds(labeled, k=k, mode="per_speaker", seed=seed)
        assert set(plan.assignment.tolist()) == set(range(k))
        for speaker in set(speakers):
            mask = np.array(speakers) == speaker
            assert len(set(plan.assignment[mask].tolist())) == 1
        again = make_folds(labeled, k=k, mode="per_speaker", seed=seed)
        assert np.array_equal(plan.assignment, again.assignment)
    plan = make_folds(labeled, k=k, mode="per_recording", seed=seed)
    summary = plan.summary(labeled.labels)
    assert max(summary["fold_positives"]) - min(summary["fold_positives"]) <= 1
    negatives = np.array(summary["fold_sizes"]) - np.array(summary["fold_positives"])
    assert negatives.max() - negatives.min() <= 1


# ── Metrics ───────────────────────────────────────────────────────────────────
def test_all_correct():
    m = compute_metrics([1, 0, 1], [1, 0, 1])
    assert (m.accuracy, m.precision, m.recall) == (1.0, 1.0, 1.0)


def test_confusion_hand_count():
    m = compute_metrics([1, 1, 1, 0, 0], [1, 1, 0, 1, 0])
    assert (m.tp, m.fp, m.fn, m.tn) == (2, 1, 1, 1)
    assert m.accuracy == pytest.approx(0.6)
    assert m.precision == pytest.approx(2 / 3)
    assert m.recall == pytest.approx(2 / 3)


def test_no_positive_predictions():
    m = compute_metrics([0, 0, 0], [1, 0, 1])
    assert m.precision is None
    assert m.recall == 0.0


def test_metric_input_errors():
    with pytest.raises(LengthMismatch):
        compute_metrics([1, 0], [1])
    with pytest.raises(SingleClass):
        roc_auc([0.2, 0.4], [1, 1])


@pytest.mark.parametrize("scores, labels, auc", [
    ([0.9, 0.8, 0.2, 0.1], [1, 1, 0, 0], 1.0),
    ([0.9, 0.8, 0.2, 0.1], [0, 0, 1, 1], 0.0),
    ([0.9, 0.3, 0.4, 0.1], [1, 1, 0, 0], 0.75),
])
def test_auc_examples(scores, labels, auc):
    curve = roc_auc(scores, labels)
    assert curve.auc == pytest.approx(auc)
    assert curve.points[0] == (0.0, 0.0)
    assert curve.points[-1] == (1.0, 1.0)


def test_tied_scores_take_the_diagonal():
    curve = roc_auc([0.5, 0.5], [1, 0])
    assert curve.points == ((0.0, 0.0), (1.0, 1.0))
    assert curve.auc == 0.5


@given(st.lists(st.tuples(st.integers(0, 5), st.booleans()), min_size=2, max_size=40))
def test_trapezoid_auc_equals_rank_auc(pairs):
    scores = np.array([s for s, _ in pairs], dtype=float)
    labels = np.array([y for _, y in pairs])
    assume(labels.any() and not labels.all())
    assert roc_auc(scores, labels).auc == pytest.approx(rank_auc(scores, labels), abs=1e-12)


# ── Cross-validation ──────────────────────────────────────────────────────────
def sa_data(**kwargs):
    return sa_dataset(build_matrix(**kwargs))


def test_separable_corpus_gp():
    data = sa_data(n_speakers=20, shift={name: 6.0 for name in FEATURE_NAMES})
    result = cross_validate(data, ModelSpec("gp"), FoldSettings().plan(data))
    assert result.accuracy >= 0.98
    assert result.roc.auc >= 0.99
    assert len(result.folds) == 10
    assert not np.isnan(result.scores).any()


def test_label_free_corpus_is_at_chance():
    data = sa_data(n_speakers=80, seed=11)
    result = cross_validate(data, ModelSpec("logistic"), FoldSettings(seed=3).plan(data))
    assert result.accuracy == pytest.approx(0.5, abs=0.15)
    assert result.roc.auc == pytest.approx(0.5, abs=0.15)


def shuffle_speaker_labels(data, seed):
    """Reassign whole speakers' labels at random; class counts are kept."""
    speakers = np.unique(data.groups)
    own = {s: data.labels[data.groups == s][0] for s in speakers}
    drawn = np.random.default_rng(seed).permutation(speakers)
    mapping = {s: own[d] for s, d in zip(speakers, drawn)}
    return dataclasses.replace(data, labels=np.array([mapping[g] for g in data.groups]))


def test_shuffled_group_labels_are_at_chance():
    data = sa_data(n_speakers=160, per_speaker=1, shift={"jitter": 2.0}, seed=2)
    plan_settings = FoldSettings(seed=1)
    accuracy, auc = [], []
    for seed in range(5):
        shuffled = shuffle_speaker_labels(data, seed)
        result = cross_validate(shuffled, ModelSpec("logistic"), plan_settings.plan(shuffled))
        accuracy.append(result.accuracy)
        auc.append(result.roc.auc)
    assert np.mean(accuracy) == pytest.approx(0.5, abs=0.12)
    assert np.mean(auc) == pytest.approx(0.5, abs=0.1)
    # the unshuffled matrix is far from chance
    signal = cross_validate(data, ModelSpec("logistic"), plan_settings.plan(data))
    assert signal.accuracy >= 0.75


def test_shuffled_utterance_types_are_at_chance():
    matrix = build_matrix(n_speakers=40, per_speaker=4, utterance_shift=EVERY_FEATURE, seed=4)
    accuracy = []
    for seed in range(5):
        order = np.random.default_rng(seed).permutation(len(matrix))
        metas = tuple(dataclasses.replace(m, utterance_type=matrix.metas[i].utterance_type)
                      for m, i in zip(matrix.metas, order))
        shuffled = type(matrix)(metas, matrix.values, matrix.columns)
        accuracy.append(utterance_type_classification(shuffled, ModelSpec("logistic"), FoldSettings()).accuracy)
    assert np.mean(accuracy) == pytest.approx(0.5, abs=0.1)


def test_train_only_ranking_does_not_lift_a_coin_flip_sweep():
    data = sa_data(n_speakers=200, per_speaker=1, shift={"jitter": 1.0}, seed=6)
    curves = []
    for seed in range(3):
        shuffled = shuffle_speaker_labels(data, seed)
        sweep = sweep_feature_count(shuffled, ModelSpec("logistic"), FoldSettings(seed=seed).plan(shuffled),
                                    CVOptions(rank_scope="train", norm_scope="train"))
        curves.append([p.mean_accuracy for p in sweep.points])
    ceiling = 0.5 + 2.0 * np.sqrt(0.25 / len(data))
    assert np.max(np.mean(curves, axis=0)) < ceiling


def test_top_k_equal_to_all_features_is_plain_cv():
    data = sa_data(n_speakers=20, shift={"jitter": 2.0})
    plan = FoldSettings().plan(data)
    plain = cross_validate(data, KNN, plan)
    full = cross_validate(data, KNN, plan, top_k=len(FEATURE_NAMES))
    assert plain.to_dict() == full.to_dict()


def test_top_k_keeps_ranked_columns():
    data = sa_data(n_speakers=20, shift={"jitter": 3.0})
    result = cross_validate(data, KNN, FoldSettings().plan(data), CVOptions(rank_scope="all"), top_k=1)
    assert {outcome.columns for outcome in result.folds} == {("jitter",)}


def test_job_count_does_not_change_results():
    data = sa_data(n_speakers=20, shift={"jitter": 2.0})
    plan = FoldSettings().plan(data)
    serial = cross_validate(data, KNN, plan, CVOptions(jobs=1))
    pooled = cross_validate(data, KNN, plan, CVOptions(jobs=3))
    assert serial.to_dict() == pooled.to_dict()


def test_failing_fold_names_model_and_fold():
    data = sa_data(n_speakers=20)
    with pytest.raises(FoldError) as info:
        cross_validate(data, ModelSpec("knn", {"k": 500}), FoldSettings().plan(data))
    assert info.value.model == "knn"
    assert info.value.fold == 0


def test_unknown_classifier_is_an_input_error():
    data = sa_data(n_speakers=20)
    with pytest.raises(ConfigError):
        cross_validate(data, ModelSpec("svm"), FoldSettings().plan(data))


def test_single_class_skips_roc():
    matrix = build_matrix(n_speakers=20)
    data = sa_dataset(matrix.take(matrix.sa_groups == "HSA"))
    result = cross_validate(data, KNN, FoldSettings(k=5).plan(data))
    assert result.roc is None
    assert any("ROC skipped" in w for w in result.warnings)
    assert result.accuracy == 1.0


def test_cv_report_shape():
    data = sa_data(n_speakers=20, shift={"jitter": 2.0})
    doc = cross_validate(data, KNN, FoldSettings().plan(data)).to_dict()
    assert set(doc) >= {"model", "fold_plan", "folds", "mean", "std", "undefined_precision_folds", "auc", "roc"}
    assert doc["fold_plan"]["mode"] == "per_speaker"
    assert sum(doc["fold_plan"]["fold_sizes"]) == 40


def test_norm_scope_is_validated():
    with pytest.raises(ValueError):
        CVOptions(norm_scope="test")


# ── Feature-count sweep ───────────────────────────────────────────────────────
def test_sweep_ranks_the_informative_feature_first():
    data = sa_data(n_speakers=30, shift={"intensity_mean": 3.0}, seed=5)
    sweep = sweep_feature_count(data, KNN, FoldSettings().plan(data))
    assert sweep.ranking.names[0] == "intensity_mean"
    assert [p.k for p in sweep.points] == list(range(1, 19))
    assert sweep.points[0].mean_accuracy >= 0.8
    assert sweep.best.mean_accuracy >= sweep.points[-1].mean_accuracy
    assert len(sweep.to_rows()) == 18


def test_gender_sweeps_cover_both_genders():
    data = sa_data(n_speakers=40, shift={"intensity_mean": 3.0})
    sweeps = gender_sweeps(data, KNN, FoldSettings(k=5))
    assert sorted(sweeps) == ["female", "male"]


# ── Gender configurations ─────────────────────────────────────────────────────
def test_opposite_gender_shift_does_not_transfer():
    data = sa_data(n_speakers=40, shift=EVERY_FEATURE, opposite_by_gender=True)
    configs = gender_configurations(data, KNN, FoldSettings())
    transfer = configs.transfer
    assert transfer.genders == ("female", "male")
    for own in transfer.genders:
        assert transfer.get(own, own) == configs.per_gender[own].accuracy
    diagonal = np.mean([transfer.get(g, g) for g in transfer.genders])
    across = np.mean([transfer.get("female", "male"), transfer.get("male", "female")])
    assert diagonal - across >= 0.2
    assert len(transfer.to_rows()) == 4


def test_gender_with_one_speaker():
    matrix = build_matrix(n_speakers=40)
    keep = (matrix.genders == "female") | (matrix.speaker_ids == "s002")
    data = sa_dataset(matrix.take(keep))
    with pytest.raises(TooFewGroups):
        gender_configurations(data, KNN, FoldSettings())


def test_single_gender_has_no_configurations():
    matrix = build_matrix(n_speakers=40)
    data = sa_dataset(matrix.take(matrix.genders == "female"))
    with pytest.raises(TooFewGroups):
        gender_configurations(data, KNN, FoldSettings(k=5))


# ── Utterance types ───────────────────────────────────────────────────────────
def test_group_signal_only_in_refusals():
    matrix = build_matrix(n_speakers=40, shift=EVERY_FEATURE, refusal_only=True)
    results = split_by_utterance_eval(matrix, KNN, FoldSettings())
    assert results["refusal"].accuracy >= results["consent"].accuracy + 0.15


def test_identical_subsets_give_identical_metrics():
    matrix = build_matrix(n_speakers=20, per_speaker=1)
    metas = tuple(dataclasses.replace(m, recording_id=m.recording_id + "c",
                                      utterance_type=UtteranceType.CONSENT) for m in matrix.metas)
    doubled = type(matrix)(matrix.metas + metas, np.vstack([matrix.values, matrix.values]), matrix.columns)
    results = split_by_utterance_eval(doubled, KNN, FoldSettings())
    assert results["refusal"].mean == results["consent"].mean


def test_refusal_consent_classifier():
    matrix = build_matrix(n_speakers=20, per_speaker=4, utterance_shift=EVERY_FEATURE)
    result = utterance_type_classification(matrix, KNN, FoldSettings())
    assert result.accuracy >= 0.9


def test_unknown_utterance_types_only():
    matrix = build_matrix(n_speakers=10)
    metas = tuple(dataclasses.replace(m, utterance_type=UtteranceType.UNKNOWN) for m in matrix.metas)
    unknown = type(matrix)(metas, matrix.values, matrix.columns)
    with pytest.raises(MissingUtteranceLabels):
        utterance_type_classification(unknown, KNN, FoldSettings())
    with pytest.raises(MissingUtteranceLabels):
        split_by_utterance_eval(unknown, KNN, FoldSettings())


def test_utterance_dataset_drops_unknown_rows():
    matrix = build_matrix(n_speakers=10)
    metas = list(matrix.metas)
    metas[0] = dataclasses.replace(metas[0], utterance_type=UtteranceType.UNKNOWN)
    data = utterance_dataset(type(matrix)(tuple(metas), matrix.values, matrix.columns))
    assert len(data) == len(matrix) - 1


def test_sa_dataset_drops_excluded_range():
    matrix = build_matrix(n_speakers=4)
    metas = tuple(dataclasses.replace(m, lsas_score=40) if m.speaker_id == "s000" else m
                  for m in matrix.metas)
    data = sa_dataset(type(matrix)(metas, matrix.values, matrix.columns))
    assert len(data) == len(matrix) - 2
    assert data.labels.tolist() == [1, 1, 0, 0, 1, 1]
    with pytest.raises(TooFewRows):
        sa_dataset(type(matrix)(tuple(dataclasses.replace(m, lsas_score=40) for m in metas),
                                matrix.values, matrix.columns))


# ── Synthetic corpus, audio to metrics ────────────────────────────────────────
# speaker spread is narrowed so the fixed-seed margins hold
CORPUS = dict(n_speakers=64, sample_rate_hz=16000, spread=0.25, seed=21)


def extracted(root, **profile):
    generate_corpus(root, CorpusProfile(**{**CORPUS, **profile}))
    matrix, rejected = extract_corpus(parse_manifest(root / "manifest.csv"), jobs=4)
    assert len(rejected) <= len(matrix) // 50
    return matrix


@pytest.fixture(scope="module")
def synth_matrix(tmp_path_factory):
    return extracted(tmp_path_factory.mktemp("synth"), n_utterances=24)


@pytest.mark.slow
def test_intensity_mean_ranks_first_on_synth_audio(synth_matrix):
    ranking = rank_features_anova(synth_matrix, synth_matrix.sa_groups == "HSA")
    assert ranking.names[0] == "intensity_mean"


@pytest.mark.slow
def test_gp_beats_shuffled_labels_on_synth_audio(synth_matrix):
    data = sa_dataset(synth_matrix)
    settings = FoldSettings(seed=2)
    real = cross_validate(data, ModelSpec("gp"), settings.plan(data))
    shuffled = shuffle_speaker_labels(data, seed=9)
    null = cross_validate(shuffled, ModelSpec("gp"), settings.plan(shuffled))
    standard_error = real.std["accuracy"] / np.sqrt(settings.k)
    assert real.accuracy - null.accuracy >= 3.0 * standard_error


@pytest.mark.slow
def test_utterance_type_is_learnable_on_synth_audio(synth_matrix):
    result = utterance_type_classification(synth_matrix, ModelSpec("gp"), FoldSettings(seed=2))
    assert result.accuracy >= 0.60
    assert result.roc.auc >= 0.65


@pytest.mark.slow
def test_refusal_only_shift_favours_refusals_on_synth_audio(tmp_path):
    matrix = extracted(tmp_path, n_utterances=4, refusal_only=True)
    results = split_by_utterance_eval(matrix, ModelSpec("gp"), FoldSettings(seed=2))
    assert results["refusal"].accuracy >= results["consent"].accuracy
