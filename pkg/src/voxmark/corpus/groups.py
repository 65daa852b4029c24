"""LSAS score to social-anxiety group."""
from ..errors import OutOfRange
from .types import LSAS_MAX, SAGroup

LSA_MAX_SCORE = 30
HSA_MIN_SCORE = 50


def assign_group(lsas_score: int) -> SAGroup:
    if isinstance(lsas_score, bool) or not 0 <= lsas_score <= LSAS_MAX:
        raise OutOfRange(f"lsas_score {lsas_score} outside [0, {LSAS_MAX}]")
    if lsas_score <= LSA_MAX_SCORE:
        return SAGroup.LSA
    if lsas_score >= HSA_MIN_SCORE:
        return SAGroup.HSA
    return SAGroup.EXCLUDED
