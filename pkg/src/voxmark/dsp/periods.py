"""
Periods Module - voxmark
------------------------
Glottal cycle picking inside voiced intervals: successive waveform maxima
about one local period apart.
"""
import logging
import math
from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from ..corpus.types import AudioClip
from ..errors import NoVoicedRegion
from .pitch import PitchTrack

log = logging.getLogger(__name__)

MIN_VOICED_FRAMES = 3
SEARCH_TOLERANCE = 0.2


@dataclass(frozen=True)
class PeriodSequence:
    """Periods and the amplitude of the maximum opening each period.

    `interval_ids` tags every period with the voiced interval it came from;
    perturbation measures only compare neighbours within one interval.
    """

    periods_s: np.ndarray
    peak_amplitudes: np.ndarray
    interval_ids: np.ndarray
    maxima_counts: Tuple[int, ...]

    def __post_init__(self):
        if not self.periods_s.size == self.peak_amplitudes.size == self.interval_ids.size:
            raise ValueError("periods, amplitudes and interval ids must have equal length")

    def __len__(self):
        return self.periods_s.size

    @property
    def n_intervals(self) -> int:
        return len(self.maxima_counts)

    def neighbour_pairs(self) -> np.ndarray:
        """Boolean mask over i >= 1: period i and i-1 share an interval."""
        return self.interval_ids[1:] == self.interval_ids[:-1]


def extract_periods(clip: AudioClip, pitch: PitchTrack) -> PeriodSequence:
    sr = clip.sample_rate_hz
    x = clip.samples
    min_lag = sr / pitch.ceil_hz
    max_lag = sr / pitch.floor_hz
    voiced_runs = pitch.voiced_runs(MIN_VOICED_FRAMES)
    if not voiced_runs:
        raise NoVoicedRegion(f"no run of {MIN_VOICED_FRAMES} voiced frames")

    periods, amps, ids, counts = [], [], [], []
    for index, (k1, k2) in enumerate(voiced_runs):
        t0, t1 = pitch.run_span_s(k1, k2)
        s0 = max(0, int(round(t0 * sr)))
        s1 = min(x.size, int(round(t1 * sr)))
        if s1 - s0 < 3:
            continue
        times = pitch.times_s[k1:k2]
        f0 = pitch.f0_hz[k1:k2]
        segment = x[s0:s1]
        y = x if segment.max() >= -segment.min() else -x

        maxima = _walk(y, s0, s1, lambda j: sr / float(np.interp(j / sr, times, f0)), min_lag, max_lag)
        if not maxima:
            continue
        counts.append(len(maxima))
        refined = [_refine(y, j) for j in maxima]
        for (p0, a0), (p1, _) in zip(refined, refined[1:]):
            periods.append((p1 - p0) / sr)
            amps.append(a0)
            ids.append(index)

    if not periods:
        raise NoVoicedRegion("no glottal period found in any voiced interval")
    log.debug("periods: %d from %d intervals", len(periods), len(counts))
    return PeriodSequence(
        periods_s=np.asarray(periods),
        peak_amplitudes=np.asarray(amps),
        interval_ids=np.asarray(ids, dtype=np.int64),
        maxima_counts=tuple(counts),
    )


def _walk(y, s0, s1, local_period, min_lag, max_lag) -> List[int]:
    """Sample indices of successive maxima, anchored at the interval's largest."""
    anchor = s0 + int(np.argmax(y[s0:s1]))
    if y[anchor] <= 0:
        return []
    found = [anchor]
    for direction in (1, -1):
        current = anchor
        while True:
            period = local_period(current)
            near = int(math.ceil((1.0 - SEARCH_TOLERANCE) * period))
            far = int(math.floor((1.0 + SEARCH_TOLERANCE) * period))
            if direction > 0:
                lo, hi = current + near, min(current + far, s1 - 1)
            else:
                lo, hi = max(current - far, s0), current - near
            if hi <= lo:
                break
            j = lo + int(np.argmax(y[lo:hi + 1]))
            if y[j] <= 0 or j in (lo, hi) or not min_lag <= abs(j - current) <= max_lag:
                break
            found.append(j)
            current = j
    return sorted(found)


def _refine(y, j) -> Tuple[float, float]:
    """Parabolic peak position (samples) and height around index j."""
    if j <= 0 or j >= y.size - 1:
        return float(j), float(y[j])
    a, b, c = y[j - 1], y[j], y[j + 1]
    denom = a - 2.0 * b + c
    if denom >= 0:
        return float(j), float(b)
    shift = 0.5 * (a - c) / denom
    return j + shift, float(b - 0.25 * (a - c) * shift)
