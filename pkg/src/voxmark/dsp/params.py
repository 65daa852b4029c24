"""Analysis parameters shared by the DSP stages."""
from dataclasses import dataclass


@dataclass(frozen=True)
class DspParams:
    pitch_floor_hz: float = 60.0
    pitch_ceil_hz: float = 500.0
    pitch_window_s: float = 0.04
    voicing_threshold: float = 0.45
    octave_cost: float = 0.01
    intensity_window_s: float = 0.032
    hop_s: float = 0.01
    vad_offset_db: float = 10.0
    vad_lead_s: float = 0.1
    vad_hangover_s: float = 0.08
    vad_range_db: float = 60.0
    voice_break_s: float = 0.06
