"""Metrics comparing a learnt controller against the target.

Two views of learning error: behavioural (mean state-space distance between
the learnt and target closed-loop trajectories) and parametric (Euclidean
distance between weight vectors).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import DivergenceError, PendulumParams, Trajectory, rollout


@dataclass(frozen=True)
class EvalResult:
    """rmse is +inf (and diverged is set) when the learnt rollout blew up."""

    rmse: float
    l2: float
    diverged: bool = False


def rmse(traj: Trajectory, ref: Trajectory) -> float:
    """Mean over logged states of the Euclidean state distance.

    Both trajectories must share dt and length. Averages over all S + 1
    logged states.
    """
    if traj.dt != ref.dt:
        raise ValueError(f"dt mismatch: {traj.dt!r} vs {ref.dt!r}")
    if len(traj.states) != len(ref.states):
        raise ValueError(
            f"length mismatch: {len(traj.states)} vs {len(ref.states)} states"
        )
    diff = traj.states - ref.states
    return float(np.mean(np.sqrt(np.sum(diff * diff, axis=1))))


def l2_error(w: Sequence[float], w_star: Sequence[float]) -> float:
    """Parameter-space distance ||w - w*||."""
    return math.hypot(w[0] - w_star[0], w[1] - w_star[1])


def evaluate_learner(
    w: Sequence[float],
    w_star: Sequence[float],
    x0: Sequence[float],
    duration: float,
    p: PendulumParams = PendulumParams(),
) -> EvalResult:
    """Roll out both w and w* from x0 and report rmse plus parameter error.

    A diverged learnt rollout yields rmse = +inf with the diverged flag set;
    a diverged target rollout is a caller error and propagates.
    """
    ref = rollout(w_star, x0, duration, p)
    try:
        traj = rollout(w, x0, duration, p)
    except DivergenceError:
        return EvalResult(math.inf, l2_error(w, w_star), diverged=True)
    return EvalResult(rmse(traj, ref), l2_error(w, w_star))
