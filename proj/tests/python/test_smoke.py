import math

import numpy as np
import pytest

import siltlab


def test_walk_and_local_times():
    path = siltlab.simulate_walk(3, 200, seed=4)
    assert path.shape == (201, 3)
    assert np.all(np.abs(np.diff(path, axis=0)).sum(axis=1) == 1)
    counts = siltlab.local_times(path)
    summary = siltlab.summarize(path)
    assert sum(counts.values()) == 201
    assert summary["silt"] == sum(c * c for c in counts.values())
    assert summary["range"] == len(counts)
    assert summary["jensen_ok"]


def test_decompose():
    path = siltlab.simulate_walk(3, 256, seed=1)
    r = siltlab.decompose(path, 8.0)
    assert r["identity_residual"] == 0
    assert r["legall_pass"] and r["inclusion_pass"]


def test_oracles_agree():
    dist = siltlab.enumerate_paths(1, 10)
    assert dist["mean_silt"] == pytest.approx(siltlab.expected_silt(1, 10), rel=1e-12)
    assert dist["mean_range"] == pytest.approx(siltlab.expected_range(1, 10), rel=1e-12)
    p = siltlab.return_probabilities(1, 4)
    assert p[4] == pytest.approx(3 / 8)
    assert siltlab.survival_prob(1, 7, 1.0, "sup") == 2.0 ** -3
    e = siltlab.principal_eigen(2, 3.0, "sup")
    assert e["eigenvalue"] == pytest.approx(math.cos(math.pi / 8), rel=1e-10)


def test_tails_and_sampler():
    t = siltlab.mc_tail_silt(3, 128, 3.0, 2000, seed=2)
    assert 0.0 <= t["p_hat"] <= 1.0
    assert t["samples"] == 2000
    r = siltlab.mc_tail_range(3, 128, 3.0, 2000, seed=2, workers=2)
    assert r["implication_violations"] == 0
    s = siltlab.ConfinedSampler(1, 4, 1.0, "sup")
    assert s.survival() == pytest.approx(0.25)
    assert np.abs(s.sample(seed=3)).max() <= 1


def test_fit_and_zeta():
    pts = [(n, 2 * n ** (1 / 3)) for n in (64, 512, 4096)]
    assert siltlab.fit_exponent(pts)["exponent"] == pytest.approx(1 / 3, abs=1e-9)
    assert siltlab.zeta_exponent(1, 0.6) == ("I", pytest.approx(0.2))
    assert siltlab.zeta_exponent(2, 1.2) == ("IV_out_of_scope", None)


def test_scenery():
    v = siltlab.scenery_value(5, [1, 2, 3])
    assert v == siltlab.scenery_value(5, [1, 2, 3])
    path = np.array([[0], [1], [0]])
    expect = 2 * siltlab.scenery_value(5, [0]) + siltlab.scenery_value(5, [1])
    assert siltlab.rwrs_sum(path, 5) == pytest.approx(expect)


def test_run_and_errors():
    rec = siltlab.run("zeta", {"alpha": "2", "beta": "0.8"})
    assert rec[0]["region"] == "III"
    assert rec[0]["zeta"] == pytest.approx(0.44)
    with pytest.raises(ValueError):
        siltlab.run("zeta", {"gamma": "1"})
    with pytest.raises(ValueError):
        siltlab.simulate_walk(0, 10)
