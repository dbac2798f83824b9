"""Python access to the cofree core: geometry, gate, estimator and pipeline."""

import json

from ._core import (
    PROPRIO_DIM,
    SCENE_DIM,
    ConfigError,
    DimensionError,
    Error,
    Estimator,
    FormatError,
    JointLimitError,
    RunConfig,
    RuntimeFailure,
    capsule_distance,
    distance_fallback,
    expected_calibration_error,
    gate_step,
    gen_data,
    risk_weight,
    roc_tune,
    segment_distance,
    soft_scale,
    train_estimator,
)
from . import _core


def default_config():
    return json.loads(RunConfig().to_json())


def make_config(overrides=None, base_dir="."):
    """Config from the defaults with nested dict overrides applied."""
    cfg = default_config()

    def merge(dst, src):
        for k, v in src.items():
            if isinstance(v, dict) and isinstance(dst.get(k), dict):
                merge(dst[k], v)
            else:
                dst[k] = v

    merge(cfg, overrides or {})
    return RunConfig.from_json(json.dumps(cfg), base_dir)


def run_episode(config, mode, task, seed):
    return json.loads(_core.run_episode(config, mode, task, seed))


def evaluate(config, mode, log_dir=""):
    return json.loads(_core.evaluate(config, mode, log_dir))
