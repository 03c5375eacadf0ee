"""Torque-controlled pendulum and fixed-step closed-loop simulation.

Model: a point mass on a rigid massless rod, with the angle q measured from
the downward vertical,

    m L^2 qdd = -m g L sin(q) + tau.

The controllers studied here are linear in the features (sin q, qd): a
parameter pair w = (stiffness, damping) commands the action
u = stiffness * sin(q) + damping * qd, and the plant receives tau = -u, so
the action acts as negative feedback.

Integration is semi-implicit Euler (velocity updated first, position advanced
with the new velocity). The scheme is symplectic for the undamped closed
loop, which keeps energy drift bounded over multi-second horizons.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import IO, NamedTuple, Sequence

import numpy as np

# rad/s; beyond this a rollout is declared divergent
VELOCITY_LIMIT = 1e6


class State(NamedTuple):
    """Pendulum state: angle from the downward vertical (rad), velocity (rad/s)."""

    angle: float
    velocity: float


@dataclass(frozen=True)
class PendulumParams:
    """Physical constants and integrator step size."""

    mass: float = 1.0      # kg
    length: float = 1.0    # m
    gravity: float = 9.81  # m/s^2
    dt: float = 1e-4       # s

    def __post_init__(self) -> None:
        if self.mass <= 0 or self.length <= 0 or self.gravity <= 0:
            raise ValueError("mass, length and gravity must all be positive")
        if not 0.0 < self.dt <= 1e-2:
            raise ValueError(f"dt must lie in (0, 1e-2], got {self.dt!r}")


class DivergenceError(RuntimeError):
    """A rollout left the numerically sane region (runaway controller)."""

    def __init__(self, step: int, velocity: float):
        super().__init__(
            f"rollout diverged at step {step}: velocity = {velocity!r} rad/s "
            f"(limit {VELOCITY_LIMIT:g})"
        )
        self.step = step
        self.velocity = velocity


@dataclass(frozen=True)
class Trajectory:
    """A closed-loop rollout sampled at fixed dt.

    states has shape (S + 1, 2) with columns (angle, velocity); torques has
    shape (S,), entry s being the torque applied over the transition from
    state s to state s + 1.
    """

    dt: float
    states: np.ndarray
    torques: np.ndarray

    def __post_init__(self) -> None:
        if len(self.torques) != len(self.states) - 1:
            raise ValueError(
                f"need one torque per transition: {len(self.states)} states "
                f"but {len(self.torques)} torques"
            )

    @property
    def angles(self) -> np.ndarray:
        return self.states[:, 0]

    @property
    def velocities(self) -> np.ndarray:
        return self.states[:, 1]

    @property
    def duration(self) -> float:
        return self.dt * (len(self.states) - 1)

    def times(self) -> np.ndarray:
        return np.arange(len(self.states)) * self.dt

    def state(self, s: int) -> State:
        q, v = self.states[s]
        return State(float(q), float(v))


def applied_torque(w: Sequence[float], x: Sequence[float]) -> float:
    """Torque the controller w = (stiffness, damping) applies in state x.

    Negative-feedback convention: tau = -(stiffness * sin(q) + damping * v).
    """
    return -(w[0] * math.sin(x[0]) + w[1] * x[1])


def step(x: Sequence[float], torque: float, p: PendulumParams = PendulumParams()) -> State:
    """Advance one integrator step of size p.dt under a constant torque."""
    v = x[1] + p.dt * (
        -(p.gravity / p.length) * math.sin(x[0])
        + torque / (p.mass * p.length * p.length)
    )
    q = x[0] + p.dt * v
    return State(q, v)


def rollout(
    w: Sequence[float],
    x0: Sequence[float],
    duration: float,
    p: PendulumParams = PendulumParams(),
) -> Trajectory:
    """Simulate the closed loop under controller w for the given duration.

    Steps S = round(duration / p.dt) times from x0, recording all S + 1
    states and the S applied torques. Raises DivergenceError as soon as the
    velocity leaves [-VELOCITY_LIMIT, VELOCITY_LIMIT] or the state stops
    being finite.
    """
    if duration <= 0:
        raise ValueError(f"duration must be positive, got {duration!r}")
    n_steps = round(duration / p.dt)
    states = np.empty((n_steps + 1, 2))
    torques = np.empty(n_steps)
    x = State(float(x0[0]), float(x0[1]))
    states[0] = x
    for s in range(n_steps):
        tau = applied_torque(w, x)
        x = step(x, tau, p)
        if not (math.isfinite(x.angle) and abs(x.velocity) <= VELOCITY_LIMIT):
            raise DivergenceError(s + 1, x.velocity)
        torques[s] = tau
        states[s + 1] = x
    return Trajectory(p.dt, states, torques)


def energy(x: Sequence[float], w: Sequence[float], p: PendulumParams = PendulumParams()) -> float:
    """Closed-loop energy 0.5 v^2 - (g/L + stiffness/(m L^2)) cos q.

    For a pure-stiffness controller this quantity is conserved by the exact
    dynamics; the damping term only ever removes energy.
    """
    return 0.5 * x[1] * x[1] - (
        p.gravity / p.length + w[0] / (p.mass * p.length * p.length)
    ) * math.cos(x[0])


def write_csv(traj: Trajectory, out: IO[str], stride: int = 10) -> int:
    """Write t,angle,velocity,torque rows, one per control step, at a stride.

    Rows cover steps 0, stride, 2*stride, ... up to the last step that has an
    applied torque. Returns the number of data rows written.
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    out.write("t,angle,velocity,torque\n")
    rows = 0
    for s in range(0, len(traj.torques), stride):
        t = s * traj.dt
        q, v = traj.states[s]
        out.write(f"{t:.9g},{q:.9g},{v:.9g},{traj.torques[s]:.9g}\n")
        rows += 1
    return rows
