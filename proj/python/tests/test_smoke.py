import math

import pytest

import edgerl


def test_default_curve():
    assert edgerl.map_score(416) == pytest.approx(86.197632, rel=1e-12)
    assert edgerl.MapCurve().raw(64) == pytest.approx(-5.671552, rel=1e-12)
    assert edgerl.map_score(64) == 0.0
    with pytest.raises(ValueError):
        edgerl.map_score(500)


def test_fit_recovers_curve():
    base = edgerl.MapCurve()
    curve, rms = edgerl.fit_curve([(p, base.raw(p)) for p in (64, 128, 200, 300, 416)])
    assert rms < 1e-8
    for got, want in zip(curve.coeffs, base.coeffs):
        assert got == pytest.approx(want, abs=1e-6)
    with pytest.raises(edgerl.FitError):
        edgerl.fit_curve([(64, 1.0), (100, 2.0), (200, 3.0)])


def test_link_budget():
    assert edgerl.data_size(416, 24) == 4_153_344
    assert edgerl.rate(1.0, 1e7) == pytest.approx(1e7)
    assert edgerl.rate(3.0, 1e7) == pytest.approx(2e7)
    assert edgerl.latency(240_000, 1e6) == pytest.approx(0.24)
    assert edgerl.path_gain(10.0, 1e-3, 3.0) == pytest.approx(1e-6)
    assert edgerl.path_gain(0.2, 1e-3, 3.0) == pytest.approx(1e-3)
    s = edgerl.sinr(0, [0, 0], [1e-6, 1e-6], [1.0, 1.0], 1, 1e-6)
    assert s == pytest.approx(0.5)


def test_environment_episode():
    cfg = edgerl.ScenarioConfig.from_name("35", seed=4)
    assert cfg.n_mmbs == 3 and cfg.n_iov == 5
    env = edgerl.UplinkEnv(cfg)
    obs = env.reset()
    assert len(obs) == env.observation_size
    steps = 0
    while not env.episode_done():
        out = env.step([edgerl.IDLE] * cfg.n_iov, [64.0] * cfg.n_iov)
        assert out["reward_alloc"] == pytest.approx(-cfg.weight_f)
        steps += 1
    assert steps == cfg.episode_len
    with pytest.raises(RuntimeError):
        env.step([edgerl.IDLE] * cfg.n_iov, [64.0] * cfg.n_iov)
    env.reset()
    with pytest.raises(ValueError):
        env.step([0] * (cfg.n_iov + 1), [64.0] * cfg.n_iov)


def test_scenario_names_are_checked():
    with pytest.raises(ValueError):
        edgerl.ScenarioConfig.from_name("99")


def test_gae_and_objectives():
    adv = edgerl.gae([1.0, 1.0], [0.0, 0.0, 0.0], 0.5, 1.0)
    assert adv == pytest.approx([1.5, 1.0])
    obj = edgerl.ppo_actor_objective([math.log(1.5)], [0.0], [1.0], 0.2)
    assert obj == pytest.approx(1.2)


def test_mlp_round_trip():
    net = edgerl.Mlp.initialized([2, 3, 1], seed=1)
    assert net.parameter_count == 13
    net.params = [0.0] * 13
    assert net.forward([1.0, -1.0]) == [0.0]


def test_short_training_run(tmp_path):
    r = edgerl.run("33", "happo", seed=1, steps=600, eval_every=300, eval_len=30, out_dir=str(tmp_path))
    assert r["algorithm"] == "happo"
    assert len(r["evaluations"]) >= 1
    assert math.isfinite(r["eval_reward_alloc"])
    rows = edgerl.aggregate_directory(str(tmp_path))
    assert any(row["algorithm"] == "happo" for row in rows)
