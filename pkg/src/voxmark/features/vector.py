"""
Vector Module - voxmark
-----------------------
The 18 per-utterance acoustic features and the extraction pipeline that
produces them from one clip.
"""
import logging
import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from ..corpus.types import AudioClip
from ..dsp import (
    DspParams,
    IntensityTrack,
    PeriodSequence,
    PitchTrack,
    Segmentation,
    detect_activity,
    extract_periods,
    runs,
    track_intensity,
    track_pitch,
)
from ..errors import NoVoicedRegion

log = logging.getLogger(__name__)

SILENCE_THRESHOLDS_MS = (50, 100, 150, 200)


@dataclass(frozen=True)
class FeatureVector:
    min_f0: float
    max_f0: float
    mean_f0: float
    std_f0: float
    intensity_min: float
    intensity_max: float
    intensity_mean: float
    intensity_std: float
    jitter: float
    shimmer: float
    jitter_voice_breaks: float
    silence_50: float
    silence_100: float
    silence_150: float
    silence_200: float
    prompt_to_start: float
    relative_silence: float
    duration: float

    def __post_init__(self):
        values = astuple(self)
        if not all(math.isfinite(v) for v in values):
            raise ValueError("feature values must be finite")
        if not self.min_f0 <= self.mean_f0 <= self.max_f0:
            raise ValueError("F0 order statistics out of order")
        if not self.intensity_min <= self.intensity_mean <= self.intensity_max:
            raise ValueError("intensity order statistics out of order")
        if not self.silence_50 >= self.silence_100 >= self.silence_150 >= self.silence_200:
            raise ValueError("silence counts must be non-increasing in the threshold")
        if not 0.0 <= self.relative_silence <= 1.0:
            raise ValueError("relative_silence must lie in [0, 1]")

    def as_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "FeatureVector":
        return cls(*(float(v) for v in values))


FEATURE_NAMES = tuple(f.name for f in fields(FeatureVector))


def compute_features(clip: AudioClip, seg: Segmentation, pitch: PitchTrack,
                     intensity: IntensityTrack, periods: PeriodSequence,
                     params: DspParams = DspParams()) -> FeatureVector:
    onset, end = seg.speech_onset_s, seg.speech_end_s
    in_span = (pitch.times_s >= onset) & (pitch.times_s <= end)
    f0 = pitch.f0_hz[in_span & pitch.voiced]
    if f0.size == 0:
        raise NoVoicedRegion("no voiced frame inside the speech span")

    levels = _span_levels(intensity, onset, end)

    pairs = periods.neighbour_pairs()
    if not pairs.any():
        raise NoVoicedRegion("jitter needs two consecutive periods in one voiced interval")
    jitter = _local_perturbation(periods.periods_s, pairs)
    shimmer = _local_perturbation(periods.peak_amplitudes, pairs)

    gaps = np.array([length for _, length in seg.silent_gaps])
    duration = end - onset
    silent = float(gaps.sum()) if gaps.size else 0.0
    relative = min(1.0, silent / duration) if duration > 0 else 0.0

    return FeatureVector(
        min_f0=float(f0.min()),
        max_f0=float(f0.max()),
        mean_f0=float(f0.mean()),
        std_f0=float(f0.std(ddof=1)) if f0.size > 1 else 0.0,
        intensity_min=float(levels.min()),
        intensity_max=float(levels.max()),
        intensity_mean=float(levels.mean()),
        intensity_std=float(levels.std(ddof=1)) if levels.size > 1 else 0.0,
        jitter=jitter,
        shimmer=shimmer,
        jitter_voice_breaks=float(count_voice_breaks(pitch, onset, end, params.voice_break_s)),
        silence_50=_count_at_least(gaps, 50),
        silence_100=_count_at_least(gaps, 100),
        silence_150=_count_at_least(gaps, 150),
        silence_200=_count_at_least(gaps, 200),
        prompt_to_start=onset,
        relative_silence=relative,
        duration=duration,
    )


def count_voice_breaks(pitch: PitchTrack, onset_s: float, end_s: float, min_break_s: float) -> int:
    """Unvoiced runs of at least `min_break_s` lying between two voiced frames of the span."""
    in_span = np.flatnonzero((pitch.times_s >= onset_s) & (pitch.times_s <= end_s))
    if in_span.size == 0:
        return 0
    voiced = pitch.voiced[in_span[0]:in_span[-1] + 1]
    hits = np.flatnonzero(voiced)
    if hits.size < 2:
        return 0
    inner = voiced[hits[0]:hits[-1] + 1]
    min_frames = min_break_s / pitch.hop_s - 1e-9
    return sum(1 for start, stop in runs(~inner) if stop - start >= min_frames)


def analyze_clip(clip: AudioClip, params: DspParams = DspParams()) -> FeatureVector:
    """intensity -> activity -> pitch -> periods -> features."""
    intensity = track_intensity(clip, params)
    seg = detect_activity(clip, intensity, params)
    pitch = track_pitch(clip, params.pitch_floor_hz, params.pitch_ceil_hz,
                        params=params, energy_threshold_db=seg.threshold_db)
    seg = seg.with_voicing(pitch)
    periods = extract_periods(clip, pitch)
    return compute_features(clip, seg, pitch, intensity, periods, params)


def _span_levels(intensity: IntensityTrack, onset, end):
    """Unclamped levels of the audible frames centred in [onset, end]; digital
    silence inside pauses carries no level."""
    audible = intensity.audible
    mask = (intensity.times_s >= onset) & (intensity.times_s <= end) & audible
    if not mask.any():
        candidates = np.flatnonzero(audible)
        nearest = candidates[np.argmin(np.abs(intensity.times_s[candidates] - (onset + end) / 2.0))]
        return intensity.raw_db[nearest:nearest + 1]
    return intensity.raw_db[mask]


def _local_perturbation(values, pairs) -> float:
    diffs = np.abs(np.diff(values))[pairs]
    return float(diffs.mean() / values.mean())


def _count_at_least(gaps, threshold_ms) -> float:
    return float(np.count_nonzero(gaps >= threshold_ms / 1000.0 - 1e-9)) if gaps.size else 0.0
