"""
Extract Module - voxmark
------------------------
Corpus-level extraction: analyze every recording, keep the rows that succeed
and list the ones rejected with their reasons.
"""
import logging
from dataclasses import dataclass
from typing import List, Tuple

from ..corpus.types import Corpus, CorpusEntry
from ..dsp import DspParams
from ..errors import AnalysisError, InputError, TooFewRows
from ..workers import run_jobs
from .matrix import FeatureMatrix
from .vector import FeatureVector, analyze_clip

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Rejection:
    recording_id: str
    reason: str
    error: str

    def to_dict(self):
        return {"recording_id": self.recording_id, "reason": self.reason, "error": self.error}


def _analyze_entry(job: Tuple[CorpusEntry, DspParams]) -> FeatureVector:
    entry, params = job
    return analyze_clip(entry.clip(), params)


def extract_corpus(corpus: Corpus, params: DspParams = DspParams(),
                   jobs: int = 1) -> Tuple[FeatureMatrix, List[Rejection]]:
    """Feature matrix over the accepted recordings plus the rejection list.

    Analysis failures reject one recording; IO failures abort the batch.
    Raises TooFewRows when every recording is rejected.
    """
    entries = list(corpus)
    results = run_jobs(_analyze_entry, [(e, params) for e in entries], jobs)

    rows, rejected = [], []
    for entry, result in zip(entries, results):
        rid = entry.meta.recording_id
        if result["ok"]:
            rows.append((entry.meta, result["value"]))
            continue
        error = result["error"]
        if isinstance(error, InputError) or not isinstance(error, AnalysisError):
            raise error
        rejected.append(Rejection(rid, type(error).__name__, str(error)))
        log.warning("rejected %s: %s (%s)", rid, type(error).__name__, error)

    if not rows:
        raise TooFewRows(f"all {len(entries)} recording(s) were rejected")
    log.info("extracted %d of %d recordings", len(rows), len(entries))
    return FeatureMatrix.from_vectors(rows), rejected
