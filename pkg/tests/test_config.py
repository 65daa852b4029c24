import pytest

from voxmark.config import CLASSIFIERS, build_config, load_config
from voxmark.errors import ConfigError


def write(tmp_path, text):
    path = tmp_path / "voxmark.toml"
    path.write_text(text)
    return path


def test_packaged_defaults():
    cfg = load_config()
    assert cfg.folds == 10
    assert cfg.seed == 0
    assert cfg.outlier_k == 3.0
    assert cfg.effective_fold_mode == "per_speaker"
    assert (cfg.norm_scope, cfg.rank_scope) == ("train", "train")
    assert cfg.classifiers == ("gp",)
    assert cfg.feature_names is None
    assert cfg.dsp_params().pitch_floor_hz == 60.0


def test_file_then_overrides(tmp_path):
    path = write(tmp_path, 'seed = 7\nfolds = 5\nclassifier = "knn"\n')
    cfg = load_config(path, {"folds": 4, "classifier": None})
    assert cfg.seed == 7
    assert cfg.folds == 4
    assert cfg.classifier == "knn"


def test_unknown_key_in_file(tmp_path):
    with pytest.raises(ConfigError, match="colour"):
        load_config(write(tmp_path, "colour = 1\n"))


def test_unknown_override():
    with pytest.raises(ConfigError):
        load_config(overrides={"n_folds": 3})


def test_missing_and_broken_files(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.toml")
    with pytest.raises(ConfigError):
        load_config(write(tmp_path, "seed = \n"))


@pytest.mark.parametrize("key, value", [
    ("folds", 1),
    ("folds", "ten"),
    ("fold_mode", "session"),
    ("outlier_mode", "drop"),
    ("stratified", 1),
    ("outlier_k", 0),
    ("classifier", "svm"),
    ("pitch_floor_hz", 600.0),
    ("voicing_threshold", 1.0),
    ("hop_s", 0.1),
    ("jobs", -1),
])
def test_invalid_values(key, value):
    with pytest.raises(ConfigError):
        load_config(overrides={key: value})


def test_integers_are_accepted_as_floats():
    assert load_config(overrides={"outlier_k": 2}).outlier_k == 2.0


def test_paper_fidelity_switches_scopes_and_folds():
    cfg = load_config(overrides={"paper_fidelity": True})
    assert cfg.effective_fold_mode == "per_recording"
    assert (cfg.norm_scope, cfg.rank_scope) == ("all", "all")


def test_recording_folds():
    assert load_config(overrides={"fold_mode": "recording"}).effective_fold_mode == "per_recording"


def test_classifier_lists():
    assert load_config(overrides={"classifier": "all"}).classifiers == CLASSIFIERS
    assert load_config(overrides={"classifier": "knn, tree"}).classifiers == ("knn", "tree")


def test_feature_subset():
    cfg = load_config(overrides={"feature_subset": "jitter, shimmer ,"})
    assert cfg.feature_names == ("jitter", "shimmer")


def test_model_params():
    cfg = load_config(overrides={"seed": 5})
    assert cfg.model_params("tree")["max_depth"] is None
    assert cfg.model_params("mlp")["seed"] == 5
    with pytest.raises(ConfigError):
        cfg.model_params("svm")


def test_jobs_zero_means_all_cores():
    assert load_config(overrides={"jobs": 0}).effective_jobs >= 1
    assert load_config(overrides={"jobs": 3}).effective_jobs == 3


def test_build_config_needs_every_key():
    values = load_config().to_dict()
    del values["seed"]
    with pytest.raises(ConfigError, match="seed"):
        build_config(values)
