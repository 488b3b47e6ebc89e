import math

import numpy as np
import pytest

import lwquad


def test_hover_flatness():
    params = lwquad.AeroParams()
    out = lwquad.flatness_transform(params, lwquad.sample(lwquad.TrajectoryDef.hover(), 1.0))
    assert out.singular_case == lwquad.SingularCase.ZeroVelocity
    assert np.allclose(out.attitude, np.eye(3))
    assert out.thrust == pytest.approx(-params.mass * 9.81)


def test_circle_sample_speed():
    s = lwquad.sample(lwquad.TrajectoryDef.circle(), 20.0)
    assert np.linalg.norm(s.v) == pytest.approx(10.0)
    out = lwquad.flatness_transform(lwquad.AeroParams(), s)
    assert out.singular_case == lwquad.SingularCase.None_
    assert np.allclose(out.attitude.T @ out.attitude, np.eye(3), atol=1e-12)
    assert out.thrust < 0


def test_rmse():
    ref = [np.zeros(3), np.zeros(3)]
    act = [np.array([1.0, 0, 0]), np.array([0, 2.0, 0])]
    assert lwquad.rmse(ref, act) == pytest.approx(math.sqrt(2.5))


def test_simulate_hover():
    r = lwquad.simulate("trajectory.kind = hover\nsim.duration = 2\n")
    assert not r["diverged"]
    assert r["rmse"] < 1e-6
    assert len(r["t"]) == 501


def test_simulate_condition_and_errors():
    r = lwquad.simulate("sim.duration = 3\n", condition="pd-df")
    assert r["rmse"] > 0
    with pytest.raises(lwquad.ConfigError):
        lwquad.simulate("plant.bogus = 1\n")
    with pytest.raises(lwquad.ConfigError):
        lwquad.simulate("", condition="pid")


def test_compare_order():
    cells = lwquad.compare("sim.duration = 3\n")
    assert list(cells) == ["pid-dfaf", "pd-dfaf", "pid-df", "pd-df", "no-rate-ff"]
