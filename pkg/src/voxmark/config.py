"""
Config Module - voxmark
-----------------------
Loads the packaged defaults from settings.toml, layers a user config file and
command-line overrides on top, and validates the result into a RunConfig.
"""
import dataclasses
import os
import sys
from dataclasses import dataclass, fields
from typing import Any, Dict, Mapping, Optional

import tomli as _tomli

from .dsp.params import DspParams
from .errors import ConfigError

CLASSIFIERS = ("tree", "knn", "logistic", "gp", "gboost", "mlp")


def _load_settings() -> dict:
    """Load packaged defaults from package resources or the file next to this module."""
    if sys.version_info >= (3, 9):
        from importlib.resources import files
        try:
            path = files("voxmark").joinpath("settings.toml")
            with path.open("rb") as f:
                return _tomli.load(f)
        except (FileNotFoundError, ModuleNotFoundError, _tomli.TOMLDecodeError):
            pass

    path = os.path.join(os.path.dirname(__file__), "settings.toml")
    with open(path, "rb") as f:
        return _tomli.load(f)


def read_config_file(path) -> dict:
    try:
        with open(path, "rb") as f:
            return _tomli.load(f)
    except FileNotFoundError as e:
        raise ConfigError(f"config file not found: {path}") from e
    except _tomli.TOMLDecodeError as e:
        raise ConfigError(f"config file {path}: {e}") from e


@dataclass(frozen=True)
class RunConfig:
    log_level: str
    manifest: str
    features: str
    out: str
    model: str
    seed: int
    jobs: int
    paper_fidelity: bool
    fold_mode: str
    folds: int
    stratified: bool
    outlier_mode: str
    outlier_k: float
    classifier: str
    feature_subset: str
    split_by_gender: bool
    per_gender: bool
    infer_gender: bool
    shimmer_percent: bool
    pitch_floor_hz: float
    pitch_ceil_hz: float
    pitch_window_s: float
    voicing_threshold: float
    octave_cost: float
    intensity_window_s: float
    hop_s: float
    vad_offset_db: float
    vad_lead_s: float
    vad_hangover_s: float
    vad_range_db: float
    voice_break_s: float
    knn_k: int
    tree_max_depth: int
    tree_min_leaf: int
    logistic_l2: float
    gp_length_scale: float
    gp_variance: float
    gp_max_rows: int
    gboost_rounds: int
    gboost_depth: int
    gboost_learning_rate: float
    mlp_hidden: int
    mlp_epochs: int
    mlp_learning_rate: float
    gender_l2: float
    synth_speakers: int
    synth_utterances: int
    synth_sample_rate: int
    synth_spread: float
    synth_group_shift_db: float
    synth_utterance_gap_db: float
    synth_refusal_only: bool

    def __post_init__(self):
        _validate(self)

    # ── Derived settings ──────────────────────────────────────────────────────
    @property
    def effective_fold_mode(self) -> str:
        if self.paper_fidelity:
            return "per_recording"
        return "per_speaker" if self.fold_mode == "speaker" else "per_recording"

    @property
    def norm_scope(self) -> str:
        return "all" if self.paper_fidelity else "train"

    @property
    def rank_scope(self) -> str:
        return "all" if self.paper_fidelity else "train"

    @property
    def effective_jobs(self) -> int:
        return self.jobs if self.jobs > 0 else (os.cpu_count() or 1)

    @property
    def classifiers(self):
        if self.classifier == "all":
            return CLASSIFIERS
        return tuple(name.strip() for name in self.classifier.split(","))

    @property
    def feature_names(self) -> Optional[tuple]:
        names = tuple(n.strip() for n in self.feature_subset.split(",") if n.strip())
        return names or None

    def dsp_params(self) -> DspParams:
        return DspParams(
            pitch_floor_hz=self.pitch_floor_hz,
            pitch_ceil_hz=self.pitch_ceil_hz,
            pitch_window_s=self.pitch_window_s,
            voicing_threshold=self.voicing_threshold,
            octave_cost=self.octave_cost,
            intensity_window_s=self.intensity_window_s,
            hop_s=self.hop_s,
            vad_offset_db=self.vad_offset_db,
            vad_lead_s=self.vad_lead_s,
            vad_hangover_s=self.vad_hangover_s,
            vad_range_db=self.vad_range_db,
            voice_break_s=self.voice_break_s,
        )

    def model_params(self, name: str) -> Dict[str, Any]:
        if name == "tree":
            return {"max_depth": self.tree_max_depth or None, "min_leaf": self.tree_min_leaf}
        if name == "knn":
            return {"k": self.knn_k}
        if name == "logistic":
            return {"l2": self.logistic_l2}
        if name == "gp":
            return {"length_scale": self.gp_length_scale, "variance": self.gp_variance,
                    "max_rows": self.gp_max_rows}
        if name == "gboost":
            return {"rounds": self.gboost_rounds, "depth": self.gboost_depth,
                    "learning_rate": self.gboost_learning_rate}
        if name == "mlp":
            return {"hidden": self.mlp_hidden, "epochs": self.mlp_epochs,
                    "learning_rate": self.mlp_learning_rate, "seed": self.seed}
        raise ConfigError(f"unknown classifier: {name}")

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


# ── Loading ───────────────────────────────────────────────────────────────────
def load_config(path=None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """Defaults < user file < overrides (None-valued overrides are ignored)."""
    values = dict(_load_settings())
    if path:
        values.update(_checked_keys(read_config_file(path), f"config file {path}"))
    if overrides:
        values.update(_checked_keys(
            {k: v for k, v in overrides.items() if v is not None}, "overrides"))
    return build_config(values)


def build_config(values: Mapping[str, Any]) -> RunConfig:
    kwargs = {}
    for field in fields(RunConfig):
        if field.name not in values:
            raise ConfigError(f"missing config key: {field.name}")
        kwargs[field.name] = _coerce(field.name, field.type, values[field.name])
    return RunConfig(**kwargs)


def _checked_keys(values: Mapping[str, Any], source: str) -> dict:
    known = {f.name for f in fields(RunConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"{source}: unknown key(s) {', '.join(unknown)}")
    return dict(values)


def _coerce(name, type_name, value):
    kind = type_name if isinstance(type_name, str) else type_name.__name__
    if kind == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{name} must be true or false, got {value!r}")
        return value
    if kind == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name} must be an integer, got {value!r}")
        return value
    if kind == "float":
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name} must be a number, got {value!r}")
        return float(value)
    if not isinstance(value, str):
        raise ConfigError(f"{name} must be a string, got {value!r}")
    return value


def _validate(cfg: RunConfig):
    def check(ok, message):
        if not ok:
            raise ConfigError(message)

    check(cfg.fold_mode in ("speaker", "recording"), "fold_mode must be speaker or recording")
    check(cfg.outlier_mode in ("clip", "exclude_value"), "outlier_mode must be clip or exclude_value")
    check(cfg.folds >= 2, "folds must be at least 2")
    check(cfg.jobs >= 0, "jobs must be >= 0")
    check(cfg.outlier_k > 0, "outlier_k must be positive")
    for name in cfg.classifiers:
        check(name in CLASSIFIERS, f"unknown classifier: {name}")
    check(0 < cfg.pitch_floor_hz < cfg.pitch_ceil_hz, "pitch floor must be below ceiling")
    check(0 < cfg.voicing_threshold < 1, "voicing_threshold must lie in (0, 1)")
    check(0 < cfg.hop_s <= min(cfg.pitch_window_s, cfg.intensity_window_s),
          "hop_s must be positive and no longer than the analysis windows")
    check(cfg.vad_range_db > 2 * cfg.vad_offset_db > 0, "vad_range_db must exceed 2 * vad_offset_db")
    check(cfg.knn_k >= 1, "knn_k must be >= 1")
    check(cfg.tree_max_depth >= 0 and cfg.tree_min_leaf >= 1, "invalid tree settings")
    check(cfg.logistic_l2 >= 0 and cfg.gender_l2 >= 0, "l2 penalties must be >= 0")
    check(cfg.gp_length_scale > 0 and cfg.gp_variance > 0 and cfg.gp_max_rows > 0,
          "invalid GP settings")
    check(cfg.gboost_rounds >= 0 and cfg.gboost_depth >= 1 and cfg.gboost_learning_rate > 0,
          "invalid gboost settings")
    check(cfg.mlp_hidden >= 1 and cfg.mlp_epochs >= 0 and cfg.mlp_learning_rate > 0,
          "invalid mlp settings")
    check(cfg.synth_speakers >= 1 and cfg.synth_utterances >= 1 and cfg.synth_sample_rate > 0,
          "invalid synth settings")
    check(cfg.synth_spread >= 0, "synth_spread must be >= 0")
