from .groups import assign_group
from .manifest import MANIFEST_COLUMNS, parse_manifest, write_manifest
from .synth import CorpusProfile, SynthSpec, generate_corpus, plan_corpus, synthesize_utterance
from .types import AudioClip, ClipHandle, Corpus, CorpusEntry, Gender, RecordingMeta, SAGroup, UtteranceType
from .wav import load_wav, probe_wav, write_wav

__all__ = [
    "AudioClip",
    "ClipHandle",
    "Corpus",
    "CorpusEntry",
    "CorpusProfile",
    "Gender",
    "MANIFEST_COLUMNS",
    "RecordingMeta",
    "SAGroup",
    "SynthSpec",
    "UtteranceType",
    "assign_group",
    "generate_corpus",
    "load_wav",
    "parse_manifest",
    "plan_corpus",
    "probe_wav",
    "synthesize_utterance",
    "write_manifest",
    "write_wav",
]
