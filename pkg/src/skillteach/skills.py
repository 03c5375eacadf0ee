"""Registry of the two target skills and their reference behaviour.

S1: undamped oscillation, w* = (g/L, 0). Released from rest at angle pi/2
the pendulum swings forever; the closed loop conserves
E = 0.5 v^2 - 2 (g/L) cos q.

S2: fast swing to the bottom without overshoot. The damping is set to
critically damp the linearised closed loop qdd = -(2g/L) q - d qd, i.e.
d = 2 sqrt(2 g / L) (about 8.859 for the defaults), keeping the stiffness of
S1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .dynamics import PendulumParams, State, Trajectory, rollout
from .learner import SkillParams

_DEFAULTS = PendulumParams()


@dataclass(frozen=True)
class SkillSpec:
    id: str
    w_star: SkillParams
    description: str
    x0: State = State(math.pi / 2, 0.0)
    duration: float = 3.0

    def __post_init__(self) -> None:
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration!r}")


_REGISTRY = {
    "s1": SkillSpec(
        id="s1",
        w_star=SkillParams(_DEFAULTS.gravity / _DEFAULTS.length, 0.0),
        description="undamped oscillation about the pivot",
    ),
    "s2": SkillSpec(
        id="s2",
        w_star=SkillParams(
            _DEFAULTS.gravity / _DEFAULTS.length,
            2.0 * math.sqrt(2.0 * _DEFAULTS.gravity / _DEFAULTS.length),
        ),
        description="rapid swing to rest without overshoot",
    ),
}


def skill_ids() -> tuple[str, ...]:
    return tuple(_REGISTRY)


def get_skill(skill_id: str) -> SkillSpec:
    """Look up a skill by id (case-insensitive: 's1', 'S1', ...)."""
    try:
        return _REGISTRY[skill_id.lower()]
    except KeyError:
        raise ValueError(
            f"unknown skill id {skill_id!r}; known: {', '.join(_REGISTRY)}"
        ) from None


@lru_cache(maxsize=None)
def _cached_reference(spec: SkillSpec, p: PendulumParams) -> Trajectory:
    return rollout(spec.w_star, spec.x0, spec.duration, p)


def reference_trajectory(
    spec: SkillSpec, p: PendulumParams = PendulumParams()
) -> Trajectory:
    """Target rollout for a skill; cached per (spec, params), treat as read-only."""
    return _cached_reference(spec, p)
