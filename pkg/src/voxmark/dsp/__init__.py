from .activity import Segmentation, activity_threshold_db, bridge_gaps, detect_activity
from .framing import frame_geometry, runs
from .intensity import DB_REFERENCE, IntensityTrack, amplitude_for_db, level_db, raw_level_db, track_intensity
from .params import DspParams
from .periods import PeriodSequence, extract_periods
from .pitch import PitchTrack, track_pitch

__all__ = [
    "DB_REFERENCE",
    "DspParams",
    "IntensityTrack",
    "PeriodSequence",
    "PitchTrack",
    "Segmentation",
    "activity_threshold_db",
    "amplitude_for_db",
    "bridge_gaps",
    "detect_activity",
    "extract_periods",
    "frame_geometry",
    "level_db",
    "raw_level_db",
    "runs",
    "track_intensity",
    "track_pitch",
]
