"""
Corpus Types - voxmark
----------------------
Audio buffers, recording labels and the in-memory corpus.
"""
import enum
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence, Tuple

import numpy as np

from ..errors import DuplicateId, MalformedManifest, OutOfRange

LSAS_MAX = 144


class Gender(str, enum.Enum):
    MALE = "male"
    FEMALE = "female"


class UtteranceType(str, enum.Enum):
    REFUSAL = "refusal"
    CONSENT = "consent"
    UNKNOWN = "unknown"


class SAGroup(str, enum.Enum):
    LSA = "LSA"
    HSA = "HSA"
    EXCLUDED = "Excluded"


@dataclass(frozen=True)
class AudioClip:
    """Mono samples in [-1, 1] at a fixed rate."""

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        samples = np.array(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("AudioClip must be mono (1-D samples)")
        if samples.size < 1:
            raise ValueError("AudioClip needs at least one sample")
        if not np.all(np.isfinite(samples)):
            raise ValueError("AudioClip samples must be finite")
        if np.max(np.abs(samples)) > 1.0:
            raise ValueError("AudioClip samples must lie within [-1, 1]")
        if int(self.sample_rate_hz) <= 0:
            raise ValueError("sample rate must be positive")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate_hz", int(self.sample_rate_hz))

    @property
    def duration_s(self) -> float:
        return self.samples.size / self.sample_rate_hz

    def scaled(self, gain: float) -> "AudioClip":
        return AudioClip(self.samples * gain, self.sample_rate_hz)


@dataclass(frozen=True)
class RecordingMeta:
    recording_id: str
    speaker_id: str
    gender: Gender
    lsas_score: int
    utterance_type: UtteranceType = UtteranceType.UNKNOWN
    source_path: str = ""

    def __post_init__(self):
        if not self.recording_id:
            raise MalformedManifest("recording_id must not be empty")
        if not 0 <= self.lsas_score <= LSAS_MAX:
            raise OutOfRange(f"{self.recording_id}: lsas_score {self.lsas_score} outside [0, {LSAS_MAX}]")
        object.__setattr__(self, "gender", Gender(self.gender))
        object.__setattr__(self, "utterance_type", UtteranceType(self.utterance_type))

    @property
    def sa_group(self) -> SAGroup:
        from .groups import assign_group
        return assign_group(self.lsas_score)


@dataclass(frozen=True)
class ClipHandle:
    """Deferred audio: the clip is read only when `load()` is called."""

    path: str
    sample_rate_hz: int
    loader: Callable[[str], AudioClip] = field(repr=False, compare=False, default=None)

    def load(self) -> AudioClip:
        if self.loader is None:
            from .wav import load_wav
            return load_wav(self.path)
        return self.loader(self.path)


@dataclass(frozen=True)
class CorpusEntry:
    meta: RecordingMeta
    audio: "AudioClip | ClipHandle"

    def clip(self) -> AudioClip:
        return self.audio if isinstance(self.audio, AudioClip) else self.audio.load()


@dataclass(frozen=True)
class Corpus:
    entries: Tuple[CorpusEntry, ...]

    def __post_init__(self):
        entries = tuple(self.entries)
        seen = set()
        for entry in entries:
            rid = entry.meta.recording_id
            if rid in seen:
                raise DuplicateId(f"duplicate recording_id: {rid}")
            seen.add(rid)
        object.__setattr__(self, "entries", entries)

    def __len__(self):
        return len(self.entries)

    def __iter__(self) -> Iterator[CorpusEntry]:
        return iter(self.entries)

    @property
    def metas(self) -> Sequence[RecordingMeta]:
        return [e.meta for e in self.entries]

    @property
    def sample_rate_hz(self) -> Optional[int]:
        for entry in self.entries:
            return entry.audio.sample_rate_hz
        return None
