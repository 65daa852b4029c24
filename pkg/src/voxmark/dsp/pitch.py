"""
Pitch Module - voxmark
----------------------
Normalized cross-correlation pitch tracker with octave-cost candidate
scoring and parabolic lag refinement.
"""
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Tuple

import numpy as np

from ..corpus.types import AudioClip
from ..errors import OutOfRange
from .framing import frame_centres, frame_geometry, frames, runs
from .intensity import raw_level_db, track_intensity
from .params import DspParams

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PitchTrack:
    times_s: np.ndarray
    f0_hz: np.ndarray  # NaN marks an unvoiced frame
    strength: np.ndarray
    hop_s: float
    window_s: float
    floor_hz: float
    ceil_hz: float

    def __len__(self):
        return self.f0_hz.size

    @property
    def voiced(self) -> np.ndarray:
        return ~np.isnan(self.f0_hz)

    def frames(self) -> Iterator[Tuple[float, Optional[float]]]:
        for t, f in zip(self.times_s, self.f0_hz):
            yield float(t), (None if math.isnan(f) else float(f))

    def voiced_runs(self, min_frames: int = 1) -> List[Tuple[int, int]]:
        """Maximal voiced frame runs [start, stop) of at least `min_frames`."""
        return [(a, b) for a, b in runs(self.voiced) if b - a >= min_frames]

    def run_span_s(self, start: int, stop: int) -> Tuple[float, float]:
        half = self.hop_s / 2.0
        return float(self.times_s[start] - half), float(self.times_s[stop - 1] + half)

    def voiced_intervals(self, min_frames: int = 1) -> List[Tuple[float, float]]:
        return [self.run_span_s(a, b) for a, b in self.voiced_runs(min_frames)]


def track_pitch(clip: AudioClip, floor_hz: float = 60.0, ceil_hz: float = 500.0, *,
                params: DspParams = DspParams(),
                energy_threshold_db: Optional[float] = None) -> PitchTrack:
    """Frame-wise F0.

    A frame is voiced when its best normalized correlation peak reaches
    `params.voicing_threshold` and its level reaches the activity threshold
    (computed from the clip's intensity track unless given).
    """
    if not 0.0 < floor_hz < ceil_hz:
        raise OutOfRange(f"pitch range [{floor_hz}, {ceil_hz}] Hz is not increasing")
    sr = clip.sample_rate_hz
    window, hop, count = frame_geometry(clip.samples.size, sr, params.pitch_window_s, params.hop_s)
    if energy_threshold_db is None:
        from .activity import activity_threshold_db

        energy_threshold_db = activity_threshold_db(track_intensity(clip, params), params)

    lag_min = max(2, int(math.ceil(sr / ceil_hz)))
    lag_max = min(window - 2, int(math.floor(sr / floor_hz)))
    if lag_max <= lag_min:
        raise OutOfRange(f"pitch range [{floor_hz}, {ceil_hz}] Hz leaves no lags at {sr} Hz")

    block = frames(clip.samples, window, hop)[:count]
    loud = raw_level_db(np.sqrt(np.mean(block * block, axis=1))) >= energy_threshold_db
    nccf = _nccf(block - block.mean(axis=1, keepdims=True), lag_max + 1)

    lags = np.arange(lag_min, lag_max + 1)
    r = nccf[:, lag_min:lag_max + 1]
    left = nccf[:, lag_min - 1:lag_max]
    right = nccf[:, lag_min + 1:lag_max + 2]
    peaks = (r > left) & (r >= right)
    score = r + params.octave_cost * np.log2(lag_max / lags)
    score = np.where(peaks, score, -np.inf)
    # reversed argmax: exact ties go to the longer lag
    best = lags.size - 1 - np.argmax(score[:, ::-1], axis=1)

    rows = np.arange(count)
    has_peak = np.isfinite(score[rows, best])
    strength = np.where(has_peak, r[rows, best], 0.0)
    voiced = has_peak & (strength >= params.voicing_threshold) & loud

    lag = lags[best].astype(np.float64)
    y0, y1, y2 = left[rows, best], r[rows, best], right[rows, best]
    denom = y0 - 2.0 * y1 + y2
    with np.errstate(divide="ignore", invalid="ignore"):
        shift = np.where(denom < 0, 0.5 * (y0 - y2) / denom, 0.0)
    lag = lag + np.clip(shift, -0.5, 0.5)
    f0 = np.clip(sr / lag, floor_hz, ceil_hz)

    track = PitchTrack(
        times_s=frame_centres(count, window, hop, sr),
        f0_hz=np.where(voiced, f0, np.nan),
        strength=strength,
        hop_s=hop / sr,
        window_s=window / sr,
        floor_hz=float(floor_hz),
        ceil_hz=float(ceil_hz),
    )
    log.debug("pitch: %d/%d frames voiced", int(voiced.sum()), count)
    return track


def _nccf(block, n_lags):
    """Normalized cross-correlation r[frame, lag] for lags 0..n_lags."""
    width = block.shape[1]
    size = 1 << int(math.ceil(math.log2(2 * width)))
    spectrum = np.fft.rfft(block, n=size, axis=1)
    ac = np.fft.irfft(spectrum * np.conj(spectrum), n=size, axis=1)[:, :n_lags + 1]

    energy = np.concatenate([np.zeros((block.shape[0], 1)), np.cumsum(block * block, axis=1)], axis=1)
    lags = np.arange(n_lags + 1)
    head = energy[:, width - lags]
    tail = energy[:, width:width + 1] - energy[:, lags]
    norm = np.sqrt(np.maximum(head * tail, 0.0))
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(norm > 1e-20, ac / norm, 0.0)
    return np.clip(r, -1.0, 1.0)
