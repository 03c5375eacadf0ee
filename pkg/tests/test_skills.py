import math

import numpy as np
import pytest

from skillteach.dynamics import PendulumParams, rollout
from skillteach.skills import get_skill, reference_trajectory, skill_ids


def test_skill_ids():
    assert set(skill_ids()) == {"s1", "s2"}


def test_get_skill_s1():
    spec = get_skill("s1")
    assert spec.w_star == (9.81, 0.0)
    assert spec.x0 == pytest.approx((math.pi / 2, 0.0))
    assert spec.duration == 3.0


def test_get_skill_s2_critical_damping():
    spec = get_skill("s2")
    assert spec.w_star.stiffness == 9.81
    # d = 2 sqrt(2 g / L)
    assert spec.w_star.damping == pytest.approx(2 * math.sqrt(2 * 9.81), rel=1e-12)
    assert spec.w_star.damping == pytest.approx(8.859, abs=5e-4)


def test_get_skill_case_insensitive_and_unknown():
    assert get_skill("S1") is get_skill("s1")
    with pytest.raises(ValueError):
        get_skill("s3")


def test_s1_reference_first_torque():
    traj = reference_trajectory(get_skill("s1"))
    assert traj.torques[0] == -9.81


def test_s1_reference_oscillates_back():
    traj = reference_trajectory(get_skill("s1"))
    # undamped swing returns to the release angle within 3 s
    assert np.max(traj.angles[1:]) > math.pi / 2 - 0.02


def test_s1_reference_energy_conserved():
    traj = reference_trajectory(get_skill("s1"))
    e = 0.5 * traj.velocities ** 2 - 2 * 9.81 * np.cos(traj.angles)
    scale = 2 * 9.81
    assert np.max(np.abs(e - e[0])) / scale < 1e-3


def test_s2_reference_no_overshoot_and_settles():
    traj = reference_trajectory(get_skill("s2"))
    assert np.min(traj.angles) > -0.01
    assert abs(traj.angles[-1]) < 0.05


def test_s2_energy_nonincreasing():
    spec = get_skill("s2")
    traj = reference_trajectory(spec)
    scale = 9.81 + spec.w_star.stiffness
    e = 0.5 * traj.velocities ** 2 - scale * np.cos(traj.angles)
    assert np.max(np.diff(e)) <= 1e-6


def test_reference_cache_transparent():
    spec = get_skill("s1")
    p = PendulumParams()
    cached = reference_trajectory(spec, p)
    again = reference_trajectory(spec, p)
    assert cached is again
    fresh = rollout(spec.w_star, spec.x0, spec.duration, p)
    assert np.array_equal(cached.states, fresh.states)
    assert np.array_equal(cached.torques, fresh.torques)
