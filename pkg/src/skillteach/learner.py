"""Linear-in-parameters skill model and its ridge-regression learner.

A skill is u = w^T phi(x) with phi(x) = (sin q, qd) and w = (stiffness,
damping). Training data is a pair of states with demonstrated actions; the
learner minimises

    sum_i 0.5 * (w^T phi(x_i) - u_i)^2 + 0.5 * lam * ||w||^2,

whose closed form is w = (Phi Phi^T + lam I)^{-1} Phi u, where column i of
Phi is phi(x_i). The parameter dimension is fixed at 2, so every solve is a
closed-form 2x2 Cramer elimination rather than a general decomposition:
exactness and determinism matter more than generality here.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .dynamics import State

# below this |det Phi| the exact solve refuses to invert
SINGULAR_DET = 1e-12


class FeatureVector(NamedTuple):
    """Features of a state: f1 = sin(angle) (so |f1| <= 1), f2 = velocity."""

    f1: float
    f2: float


class SkillParams(NamedTuple):
    """Controller weights: torque per unit feature."""

    stiffness: float
    damping: float


class SingularFeatureMatrixError(ValueError):
    """The demonstration states are (near) collinear in feature space."""

    def __init__(self, det: float):
        super().__init__(
            f"feature matrix is numerically singular: |det| = {abs(det):.3e} "
            f"< {SINGULAR_DET:g}"
        )
        self.det = det


def feature_map(x: Sequence[float]) -> FeatureVector:
    """phi(x) = (sin angle, velocity)."""
    return FeatureVector(math.sin(x[0]), x[1])


def inverse_feature_map(f: Sequence[float]) -> State:
    """State whose features are f, on the principal asin branch.

    Only defined for |f1| <= 1; the returned angle lies in [-pi/2, pi/2].
    """
    if not abs(f[0]) <= 1.0:
        raise ValueError(f"f1 must satisfy |f1| <= 1, got {f[0]!r}")
    return State(math.asin(f[0]), f[1])


def build_feature_matrix(states: Sequence[Sequence[float]]) -> np.ndarray:
    """2x2 feature matrix whose column i is phi(states[i])."""
    if len(states) != 2:
        raise ValueError(f"exactly 2 demonstration states required, got {len(states)}")
    f_a = feature_map(states[0])
    f_b = feature_map(states[1])
    return np.array([[f_a.f1, f_b.f1], [f_a.f2, f_b.f2]])


def ridge_fit(phi: np.ndarray, u: Sequence[float], lam: float) -> SkillParams:
    """Ridge solution w = (Phi Phi^T + lam I)^{-1} Phi u.

    Never errors for lam > 0. For lam = 0 a singular Phi raises
    SingularFeatureMatrixError, exactly as exact_fit would.
    """
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam!r}")
    p00, p01 = float(phi[0, 0]), float(phi[0, 1])
    p10, p11 = float(phi[1, 0]), float(phi[1, 1])
    if lam == 0.0:
        det_phi = p00 * p11 - p01 * p10
        if abs(det_phi) < SINGULAR_DET:
            raise SingularFeatureMatrixError(det_phi)
    # normal equations A w = rhs with A = Phi Phi^T + lam I
    a11 = p00 * p00 + p01 * p01 + lam
    a12 = p00 * p10 + p01 * p11
    a22 = p10 * p10 + p11 * p11 + lam
    rhs0 = p00 * u[0] + p01 * u[1]
    rhs1 = p10 * u[0] + p11 * u[1]
    det = a11 * a22 - a12 * a12
    return SkillParams(
        (rhs0 * a22 - a12 * rhs1) / det,
        (a11 * rhs1 - a12 * rhs0) / det,
    )


def exact_fit(phi: np.ndarray, u: Sequence[float]) -> SkillParams:
    """Interpolating solution of Phi^T w = u (both demonstrations fit exactly)."""
    p00, p01 = float(phi[0, 0]), float(phi[0, 1])
    p10, p11 = float(phi[1, 0]), float(phi[1, 1])
    det = p00 * p11 - p01 * p10
    if abs(det) < SINGULAR_DET:
        raise SingularFeatureMatrixError(det)
    # Cramer on the transposed system: rows of Phi^T are the feature vectors
    w0 = (u[0] * p11 - p10 * u[1]) / det
    w1 = (p00 * u[1] - u[0] * p01) / det
    return SkillParams(w0, w1)


def predict(w: Sequence[float], x: Sequence[float]) -> float:
    """Action the skill model w produces in state x: w^T phi(x)."""
    f = feature_map(x)
    return w[0] * f.f1 + w[1] * f.f2


def loss(w: Sequence[float], phi: np.ndarray, u: Sequence[float], lam: float) -> float:
    """Ridge training loss of w on the demonstration set (phi, u)."""
    r0 = (w[0] * phi[0, 0] + w[1] * phi[1, 0]) - u[0]
    r1 = (w[0] * phi[0, 1] + w[1] * phi[1, 1]) - u[1]
    return 0.5 * (r0 * r0 + r1 * r1) + 0.5 * lam * (w[0] * w[0] + w[1] * w[1])
