"""Optimal demonstration construction and teaching-risk analysis.

The teacher picks two demonstration states; the learner sees their feature
matrix Phi plus noisy actions u = Phi^T w* + eps, eps ~ N(0, sigma^2 I).
With the feature vectors normalised (||phi|| <= 1), every demonstration pair
is equivalent, up to rotation, to the one-parameter family

    Phi(omega) = [[1, cos omega], [0, sin omega]],

where omega is the angle between the two feature vectors. Quality of a pair
is judged by the teaching risk Gamma = E[(w_hat - w*)^T (w_hat - w*)], which
decomposes over the eigenvalues b_i of Phi Phi^T into a noise-variance term
sigma^2 sum_i b_i / (b_i + lam)^2 and a ridge-bias term
lam^2 w*^T (Phi Phi^T + lam I)^{-2} w*. Risk is minimised at omega = pi/2,
i.e. where |det Phi| peaks, which motivates the 0..100 quality score
s = 100 |det Phi| surfaced to human teachers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .dynamics import State
from .learner import (
    SkillParams,
    build_feature_matrix,
    inverse_feature_map,
    predict,
    ridge_fit,
)

HALF_PI = math.pi / 2


@dataclass(frozen=True)
class NoiseModel:
    """Gaussian action noise; sigma is a standard deviation in N*m."""

    sigma: float

    def __post_init__(self) -> None:
        if self.sigma < 0:
            raise ValueError(f"sigma must be >= 0, got {self.sigma!r}")


@dataclass(frozen=True)
class DemoSet:
    """Two demonstration states and their (possibly noisy) actions."""

    states: tuple[State, State]
    actions: tuple[float, float]

    def __post_init__(self) -> None:
        if len(self.states) != 2 or len(self.actions) != 2:
            raise ValueError("a demonstration set holds exactly 2 state/action pairs")


@dataclass(frozen=True)
class RiskBreakdown:
    variance_term: float
    bias_term: float
    total: float


def _check_omega(omega: float) -> None:
    if not 0.0 < omega <= HALF_PI:
        raise ValueError(f"omega must lie in (0, pi/2], got {omega!r}")


def canonical_phi(omega: float) -> np.ndarray:
    """Feature matrix with columns (1, 0) and (cos omega, sin omega)."""
    _check_omega(omega)
    return np.array([[1.0, math.cos(omega)], [0.0, math.sin(omega)]])


def det_phi(phi: np.ndarray) -> float:
    """Determinant of a 2x2 feature matrix."""
    return float(phi[0, 0]) * float(phi[1, 1]) - float(phi[0, 1]) * float(phi[1, 0])


def teaching_score(demos: DemoSet) -> float:
    """Quality score s = 100 |det Phi| of a demonstration pair, clamped to [0, 100].

    Depends only on the demonstrated states. The clamp guards against
    user-supplied states with ||phi(x)|| > 1, which interactive layers reject
    anyway.
    """
    s = 100.0 * abs(det_phi(build_feature_matrix(demos.states)))
    return min(100.0, max(0.0, s))


def gram_eigenvalues(omega: float) -> tuple[float, float]:
    """Eigenvalues (b1 >= b2) of Phi Phi^T for the canonical family.

    b = 1 +- sqrt(1 - sin^2 omega); they satisfy b1 + b2 = 2 and
    b1 * b2 = sin^2 omega.
    """
    _check_omega(omega)
    s = math.sin(omega)
    # radicand clamped: floating noise can push 1 - s^2 a hair below zero
    c = math.sqrt(max(0.0, 1.0 - s * s))
    return 1.0 + c, 1.0 - c


def risk_variance(omega: float, sigma: float, lam: float) -> float:
    """Noise-variance part of the teaching risk, sigma^2 sum_i b_i/(b_i + lam)^2."""
    if sigma < 0 or lam < 0:
        raise ValueError("sigma and lam must be >= 0")
    b1, b2 = gram_eigenvalues(omega)
    return sigma * sigma * (b1 / ((b1 + lam) ** 2) + b2 / ((b2 + lam) ** 2))


def risk_full(
    phi: np.ndarray, w_star: Sequence[float], sigma: float, lam: float
) -> RiskBreakdown:
    """Exact teaching risk of an arbitrary 2x2 feature matrix.

    variance_term = sigma^2 sum_i b_i / (b_i + lam)^2 over the eigenvalues
    b_i of Phi Phi^T; bias_term = lam^2 w*^T (Phi Phi^T + lam I)^{-2} w*.
    """
    if sigma < 0 or lam < 0:
        raise ValueError("sigma and lam must be >= 0")
    p00, p01 = float(phi[0, 0]), float(phi[0, 1])
    p10, p11 = float(phi[1, 0]), float(phi[1, 1])
    g11 = p00 * p00 + p01 * p01
    g12 = p00 * p10 + p01 * p11
    g22 = p10 * p10 + p11 * p11
    mid = 0.5 * (g11 + g22)
    rad = math.sqrt(max(0.0, (0.5 * (g11 - g22)) ** 2 + g12 * g12))
    b1, b2 = mid + rad, mid - rad
    variance = sigma * sigma * (b1 / ((b1 + lam) ** 2) + b2 / ((b2 + lam) ** 2))
    if lam == 0.0:
        bias = 0.0
    else:
        # z = (G + lam I)^{-1} w*, then bias = lam^2 ||z||^2
        a11, a12, a22 = g11 + lam, g12, g22 + lam
        det = a11 * a22 - a12 * a12
        z0 = (w_star[0] * a22 - a12 * w_star[1]) / det
        z1 = (a11 * w_star[1] - a12 * w_star[0]) / det
        bias = lam * lam * (z0 * z0 + z1 * z1)
    return RiskBreakdown(variance, bias, variance + bias)


def risk_derivative(omega: float, sigma: float, lam: float) -> float:
    """Closed-form d(risk_variance)/d(omega) for the canonical family.

    Written with the identity
    (sqrt(1-s^2) - lam - 1)^3 (sqrt(1-s^2) + lam + 1)^3 = -(s^2 + 2 lam + lam^2)^3
    (s = sin omega) applied to the denominator, which avoids the cancellation
    the sqrt form suffers near omega = pi/2. Zero exactly at omega = pi/2;
    negative on (0, pi/2) for small lam, i.e. risk falls toward pi/2.
    """
    if sigma < 0 or lam < 0:
        raise ValueError("sigma and lam must be >= 0")
    _check_omega(omega)
    s = math.sin(omega)
    c = math.cos(omega)
    s2 = s * s
    num = 4.0 * sigma * sigma * c * s * (
        (2.0 * lam + 1.0) * s2 - 2.0 * lam ** 3 - 3.0 * lam ** 2 - 2.0 * lam
    )
    den = -((s2 + 2.0 * lam + lam * lam) ** 3)
    return num / den


def noisy_action(
    w_star: Sequence[float],
    x: Sequence[float],
    noise: NoiseModel,
    rng: np.random.Generator,
) -> float:
    """Demonstrated action: the target skill's action plus N(0, sigma^2) noise."""
    return predict(w_star, x) + float(rng.normal(0.0, noise.sigma))


def generate_demo_pair(
    omega: float,
    w_star: Sequence[float],
    noise: NoiseModel,
    rng: np.random.Generator,
) -> DemoSet:
    """Canonical demonstration pair at feature angle omega with noisy actions.

    The first state maps to feature vector (1, 0); the second to
    (cos omega, sin omega). teaching_score of the result is 100 sin(omega).
    """
    _check_omega(omega)
    x1 = inverse_feature_map((1.0, 0.0))
    x2 = inverse_feature_map((math.cos(omega), math.sin(omega)))
    u1 = noisy_action(w_star, x1, noise, rng)
    u2 = noisy_action(w_star, x2, noise, rng)
    return DemoSet(states=(x1, x2), actions=(u1, u2))


def optimal_omega(grid: Sequence[float], sigma: float, lam: float) -> float:
    """Grid element minimising risk_variance (ties go to the first minimiser)."""
    if len(grid) == 0:
        raise ValueError("omega grid must be non-empty")
    return min(grid, key=lambda om: risk_variance(om, sigma, lam))


def monte_carlo_risk(
    omega: float,
    w_star: Sequence[float],
    sigma: float,
    lam: float,
    trials: int,
    rng: np.random.Generator,
) -> float:
    """Empirical mean of ||w_hat - w*||^2 over noisy ridge fits.

    Runs the actual learner (ridge_fit) on freshly drawn noisy action pairs;
    this is the sampling estimate the analytic risk formulas are validated
    against.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    phi = canonical_phi(omega)
    u_clean = (
        w_star[0] * phi[0, 0] + w_star[1] * phi[1, 0],
        w_star[0] * phi[0, 1] + w_star[1] * phi[1, 1],
    )
    eps = rng.normal(0.0, sigma, size=(trials, 2))
    total = 0.0
    for t in range(trials):
        w = ridge_fit(phi, (u_clean[0] + eps[t, 0], u_clean[1] + eps[t, 1]), lam)
        e0 = w.stiffness - w_star[0]
        e1 = w.damping - w_star[1]
        total += e0 * e0 + e1 * e1
    return total / trials
