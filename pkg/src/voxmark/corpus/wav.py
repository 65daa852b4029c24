"""
WAV Module - voxmark
--------------------
16-bit PCM mono WAV reading and writing on top of soundfile.
"""
import logging
import os
import tempfile
from typing import Tuple

import numpy as np
import soundfile as sf

from ..errors import AudioFileNotFound, MalformedWav, UnsupportedFormat
from .types import AudioClip

log = logging.getLogger(__name__)

PCM_SCALE = 32768.0


def probe_wav(path) -> Tuple[int, int]:
    """Validate the header and return (sample_rate_hz, frames) without reading samples."""
    path = os.fspath(path)
    if not os.path.isfile(path):
        raise AudioFileNotFound(f"audio file not found: {path}")
    try:
        info = sf.info(path)
    except RuntimeError as e:
        raise MalformedWav(f"{path}: {e}") from e
    if info.format != "WAV":
        raise UnsupportedFormat(f"{path}: container {info.format}, expected WAV")
    if info.channels != 1:
        raise UnsupportedFormat(f"{path}: {info.channels} channels, expected mono")
    if info.subtype != "PCM_16":
        raise UnsupportedFormat(f"{path}: encoding {info.subtype}, expected 16-bit PCM")
    if info.frames < 1:
        raise MalformedWav(f"{path}: no sample data")
    return int(info.samplerate), int(info.frames)


def load_wav(path) -> AudioClip:
    rate, frames = probe_wav(path)
    try:
        data, _ = sf.read(os.fspath(path), dtype="int16", always_2d=False)
    except RuntimeError as e:
        raise MalformedWav(f"{path}: {e}") from e
    if data.shape[0] < frames:
        raise MalformedWav(f"{path}: truncated data ({data.shape[0]} of {frames} frames)")
    return AudioClip(data.astype(np.float64) / PCM_SCALE, rate)


def write_wav(path, clip: AudioClip) -> None:
    """Write 16-bit PCM mono; the file appears atomically at `path`."""
    pcm = np.clip(np.round(clip.samples * PCM_SCALE), -PCM_SCALE, PCM_SCALE - 1).astype(np.int16)
    path = os.fspath(path)
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(suffix=".wav", dir=directory)
    os.close(fd)
    try:
        sf.write(tmp, pcm, clip.sample_rate_hz, subtype="PCM_16", format="WAV")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.remove(tmp)
    log.debug("wrote %s (%d samples)", path, pcm.size)
