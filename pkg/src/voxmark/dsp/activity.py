"""
Activity Module - voxmark
-------------------------
Energy voice-activity detection: speech onset, speech end and the silent
gaps in between.
"""
import dataclasses
import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..corpus.types import AudioClip
from ..errors import NoSpeechDetected
from .framing import runs
from .intensity import SILENCE_FLOOR_DB, IntensityTrack, amplitude_for_db
from .params import DspParams

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Segmentation:
    speech_onset_s: float
    speech_end_s: float
    silent_gaps: Tuple[Tuple[float, float], ...]
    voiced_intervals: Tuple[Tuple[float, float], ...] = ()
    threshold_db: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.speech_onset_s <= self.speech_end_s:
            raise ValueError("segmentation needs 0 <= onset <= end")

    @property
    def duration_s(self) -> float:
        return self.speech_end_s - self.speech_onset_s

    def with_voicing(self, pitch) -> "Segmentation":
        return dataclasses.replace(self, voiced_intervals=tuple(pitch.voiced_intervals()))


def activity_threshold_db(intensity: IntensityTrack, params: DspParams = DspParams()) -> float:
    """Noise floor + offset.

    The floor is the median unclamped level of the audible frames centred in
    the first `vad_lead_s`, kept at least 2*offset below the loudest frame
    (speech from t = 0) and at most `vad_range_db` below it. A lead of pure
    digital silence gives the lower bound.
    """
    levels = intensity.raw_db
    lead = levels[intensity.times_s < params.vad_lead_s]
    if lead.size == 0:
        lead = levels[:1]
    lead = lead[np.isfinite(lead)]
    top = float(np.max(levels))
    if not np.isfinite(top):
        return SILENCE_FLOOR_DB + params.vad_offset_db
    floor = float(np.median(lead)) if lead.size else top - params.vad_range_db
    floor = min(floor, top - 2.0 * params.vad_offset_db)
    floor = max(floor, top - params.vad_range_db)
    return floor + params.vad_offset_db


def speech_frames(intensity: IntensityTrack, threshold_db: float) -> np.ndarray:
    return intensity.audible & (intensity.raw_db >= threshold_db)


def bridge_gaps(mask, max_gap):
    """Fill False runs of at most `max_gap` frames lying between True frames."""
    bridged = np.array(mask, dtype=bool)
    for start, stop in runs(~bridged):
        if start > 0 and stop < bridged.size and stop - start <= max_gap:
            bridged[start:stop] = True
    return bridged


def detect_activity(clip: AudioClip, intensity: IntensityTrack,
                    params: DspParams = DspParams()) -> Segmentation:
    threshold = activity_threshold_db(intensity, params)
    speech = speech_frames(intensity, threshold)
    if not speech.any():
        raise NoSpeechDetected(f"no frame reaches {threshold:.1f} dB")

    # gaps shorter than the hangover are bridged for onset/end only
    hangover = max(0, int(math.ceil(params.vad_hangover_s / intensity.hop_s - 1e-9)) - 1)
    active = np.flatnonzero(bridge_gaps(speech, hangover))
    first, last = int(active[0]), int(active[-1])

    loud = np.abs(clip.samples) >= amplitude_for_db(threshold)
    sr = clip.sample_rate_hz
    hop, window = intensity.hop, intensity.window

    start, stop = intensity.frame_span(first)
    onset = _first_loud(loud, start, stop, default=start)
    start, stop = intensity.frame_span(last)
    end = _last_loud(loud, start, stop, default=stop - 1) + 1

    gaps = []
    for k1, k2 in runs(~speech[first:last + 1]):
        k1 += first
        k2 += first
        gap_start = _last_loud(loud, (k1 - 1) * hop, k1 * hop, default=k1 * hop - 1) + 1
        right = (k2 - 1) * hop + window
        gap_end = _first_loud(loud, right, k2 * hop + window, default=right)
        if gap_end > gap_start:
            gaps.append((gap_start / sr, (gap_end - gap_start) / sr))

    seg = Segmentation(
        speech_onset_s=onset / sr,
        speech_end_s=min(end, clip.samples.size) / sr,
        silent_gaps=tuple(gaps),
        threshold_db=threshold,
    )
    log.debug("activity: onset %.3f s, end %.3f s, %d gaps, threshold %.1f dB",
              seg.speech_onset_s, seg.speech_end_s, len(gaps), threshold)
    return seg


def _first_loud(loud, start, stop, default):
    hits = np.flatnonzero(loud[max(start, 0):stop])
    return int(hits[0]) + max(start, 0) if hits.size else default


def _last_loud(loud, start, stop, default):
    hits = np.flatnonzero(loud[max(start, 0):stop])
    return int(hits[-1]) + max(start, 0) if hits.size else default
