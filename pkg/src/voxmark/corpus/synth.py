"""
Synth Module - voxmark
----------------------
Glottal-pulse utterance generator with exact jitter/shimmer/pause ground
truth, and a seeded corpus generator calibrated to published group means.
"""
import logging
import math
import os
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..errors import InvalidSpec
from .manifest import write_manifest
from .types import AudioClip, Gender, RecordingMeta, UtteranceType
from .wav import write_wav

log = logging.getLogger(__name__)

DB_REFERENCE = 2e-5
PULSE_WIDTH = 0.4  # Hann pulse width as a fraction of the nominal period


@dataclass(frozen=True)
class SynthSpec:
    f0_hz: float
    jitter_frac: float = 0.0
    shimmer_frac: float = 0.0
    intensity_db: float = 70.0
    leading_silence_s: float = 0.0
    internal_pauses: Tuple[Tuple[float, float], ...] = ()
    total_speech_s: float = 1.0
    trailing_silence_s: float = 0.0
    intensity_slope_db: float = 0.0

    def validate(self):
        if not 60.0 <= self.f0_hz <= 500.0:
            raise InvalidSpec(f"f0 {self.f0_hz} Hz outside [60, 500]")
        if not 0.0 <= self.jitter_frac < 0.2:
            raise InvalidSpec(f"jitter_frac {self.jitter_frac} outside [0, 0.2)")
        if not 0.0 <= self.shimmer_frac < 1.0:
            raise InvalidSpec(f"shimmer_frac {self.shimmer_frac} outside [0, 1)")
        if self.leading_silence_s < 0 or self.trailing_silence_s < 0:
            raise InvalidSpec("silences must be non-negative")
        if self.total_speech_s <= 0:
            raise InvalidSpec("total_speech_s must be positive")
        previous_end = 0.0
        for onset, length in self.internal_pauses:
            if length <= 0 or onset <= previous_end or onset + length >= self.total_speech_s:
                raise InvalidSpec(f"pause ({onset}, {length}) must lie inside the speech span, in order")
            previous_end = onset + length


def pulse_schedule(spec: SynthSpec) -> List[Tuple[float, float]]:
    """(start_s, relative_amplitude) for every pulse, before level scaling."""
    period = 1.0 / spec.f0_hz
    width = PULSE_WIDTH * period
    start = spec.leading_silence_s
    end = start + spec.total_speech_s
    pauses = [(start + onset, start + onset + length) for onset, length in spec.internal_pauses]

    pulses = []
    t = start
    i = 0
    while t + width <= end:
        sign = 1.0 if i % 2 == 0 else -1.0
        in_pause = any(t < p_end and t + width > p_start for p_start, p_end in pauses)
        if not in_pause:
            tilt = 10.0 ** (spec.intensity_slope_db * ((t - start) / spec.total_speech_s - 0.5) / 20.0)
            pulses.append((t, (1.0 + sign * spec.shimmer_frac) * tilt))
        t += period * (1.0 + sign * spec.jitter_frac)
        i += 1
    return pulses


def synthesize_utterance(spec: SynthSpec, sample_rate_hz: int) -> AudioClip:
    spec.validate()
    if sample_rate_hz <= 0:
        raise InvalidSpec("sample rate must be positive")
    sr = float(sample_rate_hz)
    total_s = spec.leading_silence_s + spec.total_speech_s + spec.trailing_silence_s
    n = int(round(total_s * sr))
    width = PULSE_WIDTH / spec.f0_hz
    x = np.zeros(n)

    for t, amp in pulse_schedule(spec):
        j0 = max(0, int(math.ceil(t * sr)))
        j1 = min(n - 1, int(math.floor((t + width) * sr)))
        if j1 < j0:
            continue
        idx = np.arange(j0, j1 + 1)
        x[idx] += amp * np.sin(np.pi * (idx / sr - t) / width) ** 2

    speech = np.zeros(n, dtype=bool)
    start = spec.leading_silence_s
    speech[int(round(start * sr)):int(round((start + spec.total_speech_s) * sr))] = True
    for onset, length in spec.internal_pauses:
        speech[int(round((start + onset) * sr)):int(round((start + onset + length) * sr))] = False
    rms = math.sqrt(float(np.mean(x[speech] ** 2))) if speech.any() else 0.0
    if rms == 0.0:
        raise InvalidSpec("synth settings produce no pulses")

    x *= DB_REFERENCE * 10.0 ** (spec.intensity_db / 20.0) / rms
    peak = float(np.max(np.abs(x)))
    if peak > 1.0:
        raise InvalidSpec(f"intensity {spec.intensity_db} dB needs peak {peak:.2f} > full scale")
    return AudioClip(x, sample_rate_hz)


# ── Corpus profile ────────────────────────────────────────────────────────────
# Per-gender descriptive means (SDs) and SA-group intensity levels of the
# reference study; used as generation targets.
F0_BY_GENDER = {Gender.FEMALE: (195.97, 23.64), Gender.MALE: (120.17, 16.10)}
JITTER_BY_GENDER = {Gender.FEMALE: (0.02, 0.003), Gender.MALE: (0.01, 0.003)}
SHIMMER_BY_GENDER = {Gender.FEMALE: (0.11, 0.02), Gender.MALE: (0.13, 0.02)}
LSA_INTENSITY_DB = 54.82
INTENSITY_SD_DB = 4.5
CONSENT_SHIMMER_DELTA = 0.01
UTTERANCE_NOISE_DB = 0.5
SLOPE_SD_DB = 6.0


@dataclass(frozen=True)
class CorpusProfile:
    n_speakers: int = 8
    n_utterances: int = 4
    sample_rate_hz: int = 16000
    spread: float = 1.0
    group_shift_db: float = LSA_INTENSITY_DB - 52.34
    utterance_gap_db: float = 1.75
    refusal_only: bool = False
    seed: int = 0


@dataclass(frozen=True)
class SynthUtterance:
    meta: RecordingMeta
    spec: SynthSpec


def plan_corpus(profile: CorpusProfile, audio_dir: str = "audio") -> List[SynthUtterance]:
    """Seeded per-utterance specs. Groups alternate by speaker and genders are
    balanced inside each group; utterance types alternate refusal/consent.
    `spread` scales between-speaker variation only."""
    rng = np.random.default_rng(profile.seed)
    plan = []
    for i in range(profile.n_speakers):
        hsa = i % 2 == 1
        gender = Gender.FEMALE if (i // 2) % 2 == 0 else Gender.MALE
        lsas = int(rng.integers(50, 108)) if hsa else int(rng.integers(4, 31))
        f0_mean, f0_sd = F0_BY_GENDER[gender]
        jit_mean, jit_sd = JITTER_BY_GENDER[gender]
        shim_mean, shim_sd = SHIMMER_BY_GENDER[gender]
        s = profile.spread
        speaker_f0 = float(np.clip(f0_mean + s * f0_sd * rng.standard_normal(), 70.0, 400.0))
        speaker_jitter = float(np.clip(jit_mean + s * jit_sd * rng.standard_normal(), 0.0, 0.06))
        speaker_shimmer = float(np.clip(shim_mean + s * shim_sd * rng.standard_normal(), 0.0, 0.4))
        speaker_db = LSA_INTENSITY_DB + s * INTENSITY_SD_DB * rng.standard_normal()
        speaker_id = f"s{i:03d}"

        for j in range(profile.n_utterances):
            utterance = UtteranceType.REFUSAL if j % 2 == 0 else UtteranceType.CONSENT
            refusal = utterance is UtteranceType.REFUSAL
            level = speaker_db + (profile.utterance_gap_db / 2.0) * (1.0 if refusal else -1.0)
            if hsa and (refusal or not profile.refusal_only):
                level -= profile.group_shift_db
            level += UTTERANCE_NOISE_DB * rng.standard_normal()
            shimmer = speaker_shimmer + (0.0 if refusal else CONSENT_SHIMMER_DELTA)
            speech_s = float(np.clip(rng.normal(1.4, 0.3), 0.8, 2.5))
            spec = SynthSpec(
                f0_hz=speaker_f0,
                jitter_frac=speaker_jitter / 2.0,
                shimmer_frac=shimmer / 2.0,
                intensity_db=float(level),
                leading_silence_s=float(np.clip(rng.normal(1.3, 0.3), 0.2, 3.0)),
                internal_pauses=_random_pauses(rng, speech_s),
                total_speech_s=speech_s,
                trailing_silence_s=0.2,
                intensity_slope_db=float(SLOPE_SD_DB * rng.standard_normal()),
            )
            rid = f"{speaker_id}_{j:02d}"
            meta = RecordingMeta(
                recording_id=rid,
                speaker_id=speaker_id,
                gender=gender,
                lsas_score=lsas,
                utterance_type=utterance,
                source_path=os.path.join(audio_dir, f"{rid}.wav"),
            )
            plan.append(SynthUtterance(meta, spec))
    return plan


def _random_pauses(rng, speech_s) -> Tuple[Tuple[float, float], ...]:
    count = int(rng.integers(0, 3))
    pauses = []
    cursor = 0.15
    for _ in range(count):
        length = float(rng.uniform(0.06, 0.25))
        room = speech_s - 0.15 - length - cursor
        if room <= 0.05:
            break
        onset = cursor + float(rng.uniform(0.05, min(room, 0.6)))
        pauses.append((onset, length))
        cursor = onset + length + 0.1
    return tuple(pauses)


def generate_corpus(out_dir, profile: CorpusProfile) -> List[RecordingMeta]:
    """Write every planned utterance as WAV plus `manifest.csv` under out_dir."""
    out_dir = os.fspath(out_dir)
    audio_dir = os.path.join(os.path.abspath(out_dir), "audio")
    plan = plan_corpus(profile, audio_dir)
    for item in plan:
        write_wav(item.meta.source_path, synthesize_utterance(item.spec, profile.sample_rate_hz))
    metas = [item.meta for item in plan]
    write_manifest(os.path.join(out_dir, "manifest.csv"), metas)
    log.info("synthesized %d utterances for %d speakers in %s",
             len(metas), profile.n_speakers, out_dir)
    return metas
