"""Frame slicing shared by the pitch and intensity trackers."""
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..errors import ClipTooShort


def frame_geometry(n_samples, sample_rate_hz, window_s, hop_s):
    """(window, hop, count) in samples; raises if not even one window fits."""
    window = int(round(window_s * sample_rate_hz))
    hop = max(1, int(round(hop_s * sample_rate_hz)))
    if n_samples < window:
        raise ClipTooShort(
            f"clip of {n_samples} samples is shorter than one {window_s * 1000:.0f} ms window")
    return window, hop, 1 + (n_samples - window) // hop


def frames(samples, window, hop):
    """Read-only (count, window) view of hopped frames."""
    return sliding_window_view(samples, window)[::hop]


def frame_centres(count, window, hop, sample_rate_hz):
    return (np.arange(count) * hop + window / 2.0) / sample_rate_hz


def runs(mask):
    """Maximal runs of True as (start, stop) index pairs, stop exclusive."""
    mask = np.asarray(mask, dtype=bool)
    padded = np.concatenate(([False], mask, [False]))
    edges = np.flatnonzero(np.diff(padded.astype(np.int8)))
    return list(zip(edges[::2].tolist(), edges[1::2].tolist()))
