"""
Intensity Module - voxmark
--------------------------
Frame-level RMS level in dB relative to 2e-5 of full scale, so a full-scale
sine reads about 91 dB. The reported levels are clamped at 0 dB; the
unclamped track keeps every relative decision exact under a change of gain.
"""
from dataclasses import dataclass

import numpy as np

from ..corpus.types import AudioClip
from .framing import frame_centres, frame_geometry, frames
from .params import DspParams

DB_REFERENCE = 2e-5
SILENCE_FLOOR_DB = 0.0


def raw_level_db(rms):
    """RMS amplitude to dB with no floor; digital silence is -inf."""
    rms = np.asarray(rms, dtype=np.float64)
    with np.errstate(divide="ignore"):
        return 20.0 * np.log10(rms / DB_REFERENCE)


def level_db(rms):
    """RMS amplitude to dB, clamped at the silence floor."""
    return np.maximum(raw_level_db(rms), SILENCE_FLOOR_DB)


def amplitude_for_db(db):
    return DB_REFERENCE * 10.0 ** (db / 20.0)


@dataclass(frozen=True)
class IntensityTrack:
    times_s: np.ndarray
    levels_db: np.ndarray
    raw_db: np.ndarray  # unclamped; -inf on digital silence
    hop_s: float
    window_s: float
    window: int
    hop: int
    sample_rate_hz: int

    def __len__(self):
        return self.levels_db.size

    @property
    def audible(self) -> np.ndarray:
        """Frames holding any signal at all."""
        return np.isfinite(self.raw_db)

    def frame_span(self, k):
        """Sample range [start, stop) covered by frame k."""
        start = k * self.hop
        return start, start + self.window


def track_intensity(clip: AudioClip, params: DspParams = DspParams()) -> IntensityTrack:
    window, hop, count = frame_geometry(
        clip.samples.size, clip.sample_rate_hz, params.intensity_window_s, params.hop_s)
    block = frames(clip.samples, window, hop)[:count]
    raw = raw_level_db(np.sqrt(np.mean(block * block, axis=1)))
    return IntensityTrack(
        times_s=frame_centres(count, window, hop, clip.sample_rate_hz),
        levels_db=np.maximum(raw, SILENCE_FLOOR_DB),
        raw_db=raw,
        hop_s=hop / clip.sample_rate_hz,
        window_s=window / clip.sample_rate_hz,
        window=window,
        hop=hop,
        sample_rate_hz=clip.sample_rate_hz,
    )
