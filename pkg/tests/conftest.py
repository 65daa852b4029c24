import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from voxmark.corpus import (
    Gender,
    RecordingMeta,
    SynthSpec,
    UtteranceType,
    synthesize_utterance,
    write_manifest,
    write_wav,
)
from voxmark.features import FEATURE_NAMES, FeatureMatrix

settings.register_profile("default", max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None)
settings.register_profile("quick", max_examples=10, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SAMPLE_RATE = 16000


def build_matrix(n_speakers=20, per_speaker=2, shift=None, seed=0, noise=1.0,
                 opposite_by_gender=False, refusal_only=False, utterance_shift=None,
                 columns=FEATURE_NAMES):
    """Synthetic feature matrix.

    Speakers alternate LSA/HSA (odd index = HSA) and genders alternate in
    pairs, so both groups hold both genders. Utterances alternate
    refusal/consent. `shift` maps feature -> offset added to HSA rows
    (negated for male speakers with `opposite_by_gender`, applied to refusal
    rows only with `refusal_only`); `utterance_shift` maps feature -> offset
    added to refusal rows.
    """
    rng = np.random.default_rng(seed)
    shift = shift or {}
    utterance_shift = utterance_shift or {}
    metas, rows = [], []
    for i in range(n_speakers):
        hsa = i % 2 == 1
        gender = Gender.FEMALE if (i // 2) % 2 == 0 else Gender.MALE
        speaker = f"s{i:03d}"
        for j in range(per_speaker):
            kind = UtteranceType.REFUSAL if j % 2 == 0 else UtteranceType.CONSENT
            values = noise * rng.standard_normal(len(columns))
            for name, amount in shift.items():
                if hsa and (kind is UtteranceType.REFUSAL or not refusal_only):
                    sign = -1.0 if opposite_by_gender and gender is Gender.MALE else 1.0
                    values[columns.index(name)] += sign * amount
            if kind is UtteranceType.REFUSAL:
                for name, amount in utterance_shift.items():
                    values[columns.index(name)] += amount
            metas.append(RecordingMeta(f"{speaker}_{j:02d}", speaker, gender,
                                       70 if hsa else 10, kind))
            rows.append(values)
    return FeatureMatrix(tuple(metas), np.array(rows), tuple(columns))


@pytest.fixture
def matrix_factory():
    return build_matrix


@pytest.fixture
def tone():
    def make(f0_hz=200.0, sample_rate_hz=SAMPLE_RATE, **fields):
        return synthesize_utterance(SynthSpec(f0_hz=f0_hz, **fields), sample_rate_hz)
    return make


def utterance_spec(**fields):
    base = dict(f0_hz=180.0, intensity_db=65.0, leading_silence_s=0.4,
                total_speech_s=1.0, trailing_silence_s=0.2)
    base.update(fields)
    return SynthSpec(**base)


@pytest.fixture
def wav_corpus(tmp_path):
    """Writes WAVs plus manifest.csv; returns the manifest path. `silent`
    lists recording ids written as digital silence."""
    def make(n=3, silent=(), missing=()):
        metas = []
        for i in range(n):
            rid = f"r{i}"
            path = tmp_path / "audio" / f"{rid}.wav"
            if rid not in missing:
                spec = utterance_spec(f0_hz=150.0 + 20 * i)
                clip = synthesize_utterance(spec, SAMPLE_RATE)
                if rid in silent:
                    clip = clip.scaled(0.0)
                write_wav(path, clip)
            metas.append(RecordingMeta(rid, f"s{i}", Gender.FEMALE if i % 2 else Gender.MALE,
                                       10 if i % 2 else 70, UtteranceType.REFUSAL, str(path)))
        manifest = tmp_path / "manifest.csv"
        write_manifest(manifest, metas)
        return manifest
    return make
