import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate, special

from voxmark.errors import LengthMismatch, TooFewSamples, ZeroVariance
from voxmark.stats import (
    anova_oneway,
    f_survival,
    group_comparisons,
    paired_t,
    rank_arrays,
    rank_features_anova,
    t_two_sided,
    utterance_comparisons,
)

from .conftest import build_matrix


def f_density(x, d1, d2):
    return math.sqrt((d1 * x) ** d1 * d2 ** d2 / (d1 * x + d2) ** (d1 + d2)) / (
        x * special.beta(d1 / 2, d2 / 2))


def t_density(x, df):
    return math.gamma((df + 1) / 2) / (math.sqrt(df * math.pi) * math.gamma(df / 2)) * (
        1 + x * x / df) ** (-(df + 1) / 2)


# ── ANOVA ─────────────────────────────────────────────────────────────────────
def test_anova_hand_example():
    result = anova_oneway([[1, 2, 3], [4, 5, 6]])
    assert result.f_value == pytest.approx(13.5, abs=1e-9)
    assert result.eta_squared == pytest.approx(13.5 / 17.5, abs=1e-9)
    assert (result.df_between, result.df_within) == (1, 4)


def test_anova_p_value_matches_integrated_density():
    oracle, _ = integrate.quad(f_density, 13.5, np.inf, args=(1, 4))
    assert anova_oneway([[1, 2, 3], [4, 5, 6]]).p_value == pytest.approx(oracle, abs=1e-6)
    assert oracle == pytest.approx(0.0213, abs=1e-4)


def test_identical_groups_give_zero_f():
    result = anova_oneway([[1.0, 2.0, 4.0], [4.0, 1.0, 2.0]])
    assert (result.f_value, result.eta_squared, result.p_value) == (0.0, 0.0, 1.0)


def test_zero_within_variance_gives_infinite_f():
    result = anova_oneway([[1.0, 1.0], [3.0, 3.0]])
    assert math.isinf(result.f_value)
    assert result.p_value == 0.0


def test_anova_needs_two_values_per_group():
    with pytest.raises(TooFewSamples):
        anova_oneway([[1.0, 2.0], [3.0]])
    with pytest.raises(TooFewSamples):
        anova_oneway([[1.0, 2.0]])


def test_three_groups():
    result = anova_oneway([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert (result.df_between, result.df_within) == (2, 6)
    assert result.f_value == pytest.approx(27.0)


@given(st.lists(st.floats(-100, 100), min_size=2, max_size=12),
       st.lists(st.floats(-100, 100), min_size=2, max_size=12))
def test_two_group_f_is_pooled_t_squared(a, b):
    a, b = np.array(a), np.array(b)
    pooled = (((a - a.mean()) ** 2).sum() + ((b - b.mean()) ** 2).sum()) / (a.size + b.size - 2)
    assume(pooled > 1e-3 and abs(a.mean() - b.mean()) > 1e-3)
    t = (a.mean() - b.mean()) / math.sqrt(pooled * (1 / a.size + 1 / b.size))
    result = anova_oneway([a, b])
    assert result.f_value == pytest.approx(t * t, rel=1e-9)
    assert result.p_value == pytest.approx(t_two_sided(t, a.size + b.size - 2), rel=1e-9, abs=1e-12)


def test_f_survival_edges():
    assert f_survival(0.0, 1, 4) == 1.0
    assert f_survival(math.inf, 1, 4) == 0.0


# ── Paired t ──────────────────────────────────────────────────────────────────
def test_paired_t_hand_example():
    result = paired_t([2.0, 4.0, 6.0], [1.0, 2.0, 3.0])
    assert result.t_value == pytest.approx(2 * math.sqrt(3), abs=1e-9)
    assert result.cohens_d == pytest.approx(2.0, abs=1e-9)
    assert result.df == 2
    oracle = 2 * integrate.quad(t_density, 2 * math.sqrt(3), np.inf, args=(2,))[0]
    assert result.p_value == pytest.approx(oracle, abs=1e-6)


def test_paired_t_equal_samples():
    result = paired_t([1.0, 5.0, 2.0], [1.0, 5.0, 2.0])
    assert (result.t_value, result.cohens_d, result.p_value) == (0.0, 0.0, 1.0)


def test_constant_nonzero_difference():
    with pytest.raises(ZeroVariance):
        paired_t([2.0, 3.0, 4.0], [1.0, 2.0, 3.0])


def test_paired_t_length_mismatch():
    with pytest.raises(LengthMismatch):
        paired_t([1.0, 2.0, 3.0], [1.0, 2.0])


# ── Ranking ───────────────────────────────────────────────────────────────────
def test_disjoint_feature_ranks_first():
    values = np.array([[0.0, 1.0], [1.0, 2.0], [10.0, 1.0], [11.0, 2.0]])
    ranking = rank_arrays(values, [0, 0, 1, 1], ("b_same", "a_split"))
    assert ranking.names == ("a_split", "b_same")
    assert dict(ranking.entries)["b_same"] == 0.0
    assert ranking.to_records()[0] == {"rank": 1, "feature": "a_split", "f_value": ranking.entries[0][1]}


def test_ranking_ignores_row_order():
    rng = np.random.default_rng(3)
    values = rng.standard_normal((30, 5))
    labels = np.arange(30) % 2
    order = rng.permutation(30)
    columns = tuple("abcde")
    assert rank_arrays(values, labels, columns) == rank_arrays(values[order], labels[order], columns)


def test_shifted_feature_ranks_first():
    matrix = build_matrix(n_speakers=30, shift={"intensity_mean": 3.0}, seed=7)
    ranking = rank_features_anova(matrix, matrix.sa_groups == "HSA")
    assert ranking.top(1) == ("intensity_mean",)


def test_rank_label_length():
    with pytest.raises(LengthMismatch):
        rank_features_anova(build_matrix(n_speakers=4), [0, 1])


# ── Comparisons ───────────────────────────────────────────────────────────────
def test_group_comparisons_recover_shift():
    matrix = build_matrix(n_speakers=40, shift={"intensity_mean": -3.0}, seed=2)
    records, _ = group_comparisons(matrix)
    by_feature = {(r["feature"], r["comparison"]): r for r in records}
    intensity = by_feature[("intensity_mean", "LSA vs HSA")]
    assert intensity["statistic"] > 10
    assert intensity["groups"]["HSA"]["mean"] < intensity["groups"]["LSA"]["mean"]
    assert ("mean_f0", "LSA vs HSA (female)") in by_feature
    assert ("mean_f0", "LSA vs HSA (male)") in by_feature


def test_split_by_gender_compares_every_feature_twice():
    records, _ = group_comparisons(build_matrix(n_speakers=16), split_by_gender=True)
    assert all(r["comparison"].endswith(("(female)", "(male)")) for r in records)
    assert len(records) == 2 * 8


def test_identical_groups_give_zero_f_everywhere():
    base = build_matrix(n_speakers=8, per_speaker=1)
    # speakers 2i (LSA) and 2i+1 (HSA) share their values
    values = np.repeat(base.values[::2], 2, axis=0)
    records, _ = group_comparisons(base.with_values(values))
    assert records
    assert all(r["statistic"] == 0.0 for r in records)


def test_group_comparisons_need_both_groups():
    matrix = build_matrix(n_speakers=8)
    lsa_only = matrix.take(matrix.sa_groups == "LSA")
    with pytest.raises(TooFewSamples):
        group_comparisons(lsa_only)


def test_utterance_comparisons():
    matrix = build_matrix(n_speakers=20, per_speaker=4, utterance_shift={"intensity_mean": 2.0}, seed=9)
    records, warnings = utterance_comparisons(matrix)
    intensity = next(r for r in records if r["feature"] == "intensity_mean")
    assert intensity["statistic"] > 3
    assert intensity["effect_size"] > 0
    assert intensity["df"] == [19]
    assert not warnings


def test_utterance_comparisons_need_both_types():
    matrix = build_matrix(n_speakers=6, per_speaker=1)
    records, warnings = utterance_comparisons(matrix)
    assert records == []
    assert len(warnings) == 1
