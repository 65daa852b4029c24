"""
Manifest Module - voxmark
-------------------------
Reads the label manifest CSV into a Corpus with deferred audio handles.
"""
import logging
import os
from typing import Iterable, List

import pandas as pd

from ..errors import DuplicateId, MalformedManifest, MixedSampleRates
from .types import LSAS_MAX, ClipHandle, Corpus, CorpusEntry, Gender, RecordingMeta, UtteranceType
from .wav import probe_wav

log = logging.getLogger(__name__)

MANIFEST_COLUMNS = ("recording_id", "speaker_id", "gender", "lsas_score", "utterance_type", "path")


def parse_manifest(path, check_audio: bool = True) -> Corpus:
    """Parse and validate every row, then probe each WAV header.

    Row problems are reported before any audio is touched. With `check_audio`
    every referenced file must exist, be 16-bit PCM mono, and share one rate.
    """
    path = os.fspath(path)
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8")
    except FileNotFoundError as e:
        raise MalformedManifest(f"manifest not found: {path}") from e
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as e:
        raise MalformedManifest(f"{path}: {e}") from e

    columns = [c.strip() for c in frame.columns]
    if tuple(columns) != MANIFEST_COLUMNS:
        raise MalformedManifest(
            f"{path}: columns must be exactly {', '.join(MANIFEST_COLUMNS)}; got {', '.join(columns)}")
    frame.columns = columns
    frame = frame.fillna("")

    base = os.path.dirname(os.path.abspath(path))
    metas: List[RecordingMeta] = []
    seen = set()
    for line, row in enumerate(frame.itertuples(index=False), start=2):
        meta = _parse_row(row, line, base)
        if meta.recording_id in seen:
            raise DuplicateId(f"{path}:{line}: duplicate recording_id {meta.recording_id!r}")
        seen.add(meta.recording_id)
        metas.append(meta)

    entries = []
    rates = set()
    for meta in metas:
        rate = probe_wav(meta.source_path)[0] if check_audio else 0
        rates.add(rate)
        entries.append(CorpusEntry(meta, ClipHandle(meta.source_path, rate)))
    if len(rates) > 1:
        raise MixedSampleRates(f"{path}: clips use several sample rates {sorted(rates)}")
    log.info("manifest %s: %d recordings", path, len(entries))
    return Corpus(tuple(entries))


def _parse_row(row, line, base) -> RecordingMeta:
    rid = row.recording_id.strip()
    if not rid:
        raise MalformedManifest(f"line {line}: empty recording_id")
    try:
        gender = Gender(row.gender.strip())
    except ValueError:
        raise MalformedManifest(f"line {line}: unknown gender {row.gender!r}") from None
    try:
        utterance = UtteranceType(row.utterance_type.strip())
    except ValueError:
        raise MalformedManifest(f"line {line}: unknown utterance_type {row.utterance_type!r}") from None
    try:
        score = int(row.lsas_score.strip())
    except ValueError:
        raise MalformedManifest(f"line {line}: lsas_score {row.lsas_score!r} is not an integer") from None
    if not 0 <= score <= LSAS_MAX:
        raise MalformedManifest(f"line {line}: lsas_score {score} outside [0, {LSAS_MAX}]")
    rel = row.path.strip()
    if not rel:
        raise MalformedManifest(f"line {line}: empty path")
    return RecordingMeta(
        recording_id=rid,
        speaker_id=row.speaker_id.strip(),
        gender=gender,
        lsas_score=score,
        utterance_type=utterance,
        source_path=os.path.normpath(os.path.join(base, rel)),
    )


def write_manifest(path, metas: Iterable[RecordingMeta]) -> None:
    """Write a manifest whose paths are relative to its own directory."""
    from ..reporter import write_csv_atomic

    base = os.path.dirname(os.path.abspath(path))
    rows = [
        {
            "recording_id": m.recording_id,
            "speaker_id": m.speaker_id,
            "gender": m.gender.value,
            "lsas_score": m.lsas_score,
            "utterance_type": m.utterance_type.value,
            "path": os.path.relpath(m.source_path, base).replace(os.sep, "/"),
        }
        for m in metas
    ]
    write_csv_atomic(path, pd.DataFrame(rows, columns=list(MANIFEST_COLUMNS)))
