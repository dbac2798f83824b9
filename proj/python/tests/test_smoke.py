import math

import numpy as np
import pytest

import cofree


def test_segment_and_capsule_distance():
    d = cofree.segment_distance([0, 0], [1, 0], [0.5, 1], [0.5, 2])
    assert d == pytest.approx(1.0)
    assert cofree.segment_distance([0, 0], [1, 1], [0, 1], [1, 0]) == 0.0
    c = cofree.capsule_distance([0, 0], [1, 0], 0.1, [0.5, 1], [0.5, 2], 0.2)
    assert c == pytest.approx(0.7)
    assert cofree.capsule_distance([0, 0], [1, 0], 0.1, [0.5, 1], [0.5, 2], 0.2, 0.05) == pytest.approx(0.6)


def test_gate_trace():
    state = ("RUN", 0, 0)
    got = []
    for r in [0.2, 0.8, 0.5, 0.3, 0.3, 0.3]:
        mode, safe, sat, decision = cofree.gate_step(r, *state, tau_up=0.7, tau_down=0.4, K=3)
        state = (mode, safe, sat)
        got.append(decision)
    assert got == ["EXECUTE", "BLOCK", "BLOCK", "BLOCK", "BLOCK", "EXECUTE"]
    with pytest.raises(cofree.ConfigError):
        cofree.gate_step(0.1, tau_up=0.3, tau_down=0.6)


def test_scalar_helpers():
    assert cofree.soft_scale(0.35, 0.7) == pytest.approx(0.5)
    assert cofree.distance_fallback(0.01, 0.02) == pytest.approx(0.5)
    assert cofree.risk_weight(0.2, 5.0) == pytest.approx(math.exp(-1.0))


def test_roc_and_ece():
    rng = np.random.default_rng(0)
    scores = np.concatenate([rng.uniform(0.0, 0.4, 200), rng.uniform(0.6, 1.0, 200)])
    labels = [0] * 200 + [1] * 200
    roc = cofree.roc_tune(scores.tolist(), labels)
    assert roc["auc"] == 1.0
    assert roc["tau_down"] == pytest.approx(0.5 * roc["tau_up"])
    assert cofree.expected_calibration_error([0.9] * 10, [0] * 10) == pytest.approx(0.9)


def test_estimator_predict_and_checkpoint(tmp_path):
    est = cofree.Estimator.initialize(3)
    assert 0 < est.num_parameters < 20000
    proprio = np.zeros(cofree.PROPRIO_DIM)
    z = np.zeros(cofree.SCENE_DIM)
    plan = np.full((5, 4), 0.01)
    out = est.predict(proprio, z, plan)
    assert 0.0 < out["r_hat"] < 1.0
    path = str(tmp_path / "est.json")
    est.save(path)
    again = cofree.Estimator.load(path)
    assert again.predict(proprio, z, plan) == out
    with pytest.raises(cofree.DimensionError):
        est.predict(np.zeros(3), z, plan)
    with pytest.raises(cofree.FormatError):
        (tmp_path / "bad.json").write_text("{}")
        cofree.Estimator.load(str(tmp_path / "bad.json"))


def test_config_strict():
    cfg = cofree.make_config({"seed": 5, "eval": {"episodes_per_task": 2}})
    assert cfg.seed == 5
    assert cofree.default_config()["eval"]["episodes_per_task"] != 2
    with pytest.raises(cofree.ConfigError):
        cofree.make_config({"world": {"bogus": 1}})


def test_ungated_episode_and_evaluate():
    cfg = cofree.make_config({"eval": {"episodes_per_task": 2}})
    log = cofree.run_episode(cfg, "ungated", "parallel_place", 1)
    assert log["success"]
    report = cofree.evaluate(cfg, "ungated")
    rows = {t["task"]: t for t in report["tasks"]}
    assert rows["parallel_place"]["success_rate"] == 1.0
    assert rows["crossing_transfer"]["collision_rate"] > 0.0
    with pytest.raises(cofree.ConfigError):
        cofree.evaluate(cfg, "gated")
