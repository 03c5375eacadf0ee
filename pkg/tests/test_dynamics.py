import io
import math

import numpy as np
import pytest

from skillteach.dynamics import (
    DivergenceError,
    PendulumParams,
    State,
    Trajectory,
    applied_torque,
    energy,
    rollout,
    step,
    write_csv,
)

W_S1 = (9.81, 0.0)
X0 = State(math.pi / 2, 0.0)


def test_applied_torque_examples():
    assert applied_torque(W_S1, X0) == -9.81
    assert applied_torque((0.0, 0.0), (0.3, -2.0)) == 0.0
    # sin 0 = 0, so only the damping term acts
    assert applied_torque((9.81, 2.0), (0.0, 1.0)) == -2.0


def test_step_hand_example():
    # v' = 0 + 1e-4 * (-9.81*sin(pi/2) + (-9.81)/1) = -0.001962
    nxt = step(X0, -9.81)
    assert nxt.velocity == pytest.approx(-0.001962, abs=1e-15)
    assert nxt.angle - math.pi / 2 == pytest.approx(-1.962e-7, abs=1e-15)


def test_step_fixed_point_and_free_drift():
    assert step(State(0.0, 0.0), 0.0) == State(0.0, 0.0)
    nxt = step(State(0.0, 1.0), 0.0)
    assert nxt.velocity == 1.0
    assert nxt.angle == pytest.approx(1e-4)


def test_step_consistency_order():
    # one full step vs two half steps should differ at O(dt^2)
    x = State(0.3, 0.2)
    tau = -2.5

    def gap(dt):
        full = step(x, tau, PendulumParams(dt=dt))
        half_p = PendulumParams(dt=dt / 2)
        halves = step(step(x, tau, half_p), tau, half_p)
        return math.hypot(full.angle - halves.angle, full.velocity - halves.velocity)

    order = math.log2(gap(1e-3) / gap(5e-4))
    assert order >= 1.9


def test_params_validation():
    with pytest.raises(ValueError):
        PendulumParams(mass=0.0)
    with pytest.raises(ValueError):
        PendulumParams(length=-1.0)
    with pytest.raises(ValueError):
        PendulumParams(dt=0.0)
    with pytest.raises(ValueError):
        PendulumParams(dt=0.1)


def test_rollout_first_millisecond_velocity():
    traj = rollout(W_S1, X0, 3.0)
    assert traj.states[10, 1] == pytest.approx(-0.019620, abs=1e-5)


def test_rollout_angle_at_100ms():
    traj = rollout(W_S1, X0, 3.0)
    assert traj.states[1000, 0] == pytest.approx(1.4717, abs=2e-3)


def test_rollout_zero_controller_at_rest_stays_put():
    traj = rollout((0.0, 0.0), State(0.0, 0.0), 0.5)
    assert np.all(traj.states == 0.0)
    assert np.all(traj.torques == 0.0)


def test_rollout_shapes_and_times():
    traj = rollout(W_S1, X0, 0.01)
    assert len(traj.states) == 101
    assert len(traj.torques) == 100
    assert traj.duration == pytest.approx(0.01)
    assert traj.times()[-1] == pytest.approx(0.01)
    assert traj.state(0) == X0


def test_rollout_determinism_bit_identical():
    a = rollout(W_S1, X0, 1.0)
    b = rollout(W_S1, X0, 1.0)
    assert np.array_equal(a.states, b.states)
    assert np.array_equal(a.torques, b.torques)


def test_rollout_matches_single_steps():
    traj = rollout(W_S1, X0, 0.002)
    x = X0
    for s in range(len(traj.torques)):
        tau = applied_torque(W_S1, x)
        assert traj.torques[s] == tau
        x = step(x, tau)
        assert traj.states[s + 1, 0] == x.angle
        assert traj.states[s + 1, 1] == x.velocity


def test_undamped_energy_drift_bounded():
    # E(0) is exactly zero from (pi/2, 0), so normalise by the energy scale
    # g/L + k/(m L^2) instead of |E(0)|
    traj = rollout(W_S1, X0, 3.0)
    p = PendulumParams()
    scale = p.gravity / p.length + W_S1[0] / (p.mass * p.length ** 2)
    e = 0.5 * traj.velocities ** 2 - scale * np.cos(traj.angles)
    assert abs(e[0]) < 1e-12
    assert np.max(np.abs(e - e[0])) / scale < 1e-3


def test_damped_energy_nonincreasing():
    w = (9.81, 4.0)
    traj = rollout(w, X0, 3.0)
    p = PendulumParams()
    scale = p.gravity / p.length + w[0] / (p.mass * p.length ** 2)
    e = 0.5 * traj.velocities ** 2 - scale * np.cos(traj.angles)
    assert np.max(np.diff(e)) <= 1e-6


def test_energy_helper_matches_manual():
    x = State(0.4, 1.3)
    w = (9.81, 0.0)
    expected = 0.5 * 1.3 ** 2 - (9.81 + 9.81) * math.cos(0.4)
    assert energy(x, w) == pytest.approx(expected, rel=1e-15)


def test_divergence_error_names_step():
    # positive velocity feedback pumps energy without bound
    with pytest.raises(DivergenceError) as exc_info:
        rollout((0.0, -20.0), X0, 3.0)
    err = exc_info.value
    assert err.step > 0
    assert f"step {err.step}" in str(err)


def test_rollout_rejects_bad_duration():
    with pytest.raises(ValueError):
        rollout(W_S1, X0, 0.0)


def test_trajectory_validates_lengths():
    with pytest.raises(ValueError):
        Trajectory(1e-4, np.zeros((5, 2)), np.zeros(3))


def test_write_csv_rows_and_values():
    traj = rollout(W_S1, X0, 0.01)
    buf = io.StringIO()
    rows = write_csv(traj, buf, stride=10)
    lines = buf.getvalue().strip().split("\n")
    assert lines[0] == "t,angle,velocity,torque"
    assert rows == 10
    assert len(lines) == 11
    first = lines[1].split(",")
    assert float(first[0]) == 0.0
    assert float(first[1]) == pytest.approx(math.pi / 2)
    assert float(first[3]) == -9.81


def test_write_csv_rejects_bad_stride():
    traj = rollout(W_S1, X0, 0.001)
    with pytest.raises(ValueError):
        write_csv(traj, io.StringIO(), stride=0)
