import math

import numpy as np
import pytest

from skillteach.learner import (
    SingularFeatureMatrixError,
    SkillParams,
    build_feature_matrix,
    exact_fit,
    feature_map,
    inverse_feature_map,
    loss,
    predict,
    ridge_fit,
)
from skillteach.machine_teaching import canonical_phi


def test_feature_map_examples():
    assert feature_map((math.pi / 2, 0.0)) == pytest.approx((1.0, 0.0))
    assert feature_map((math.pi / 6, 0.5)) == pytest.approx((0.5, 0.5))
    assert feature_map((0.0, 1.0)) == (0.0, 1.0)


def test_inverse_feature_map_examples():
    assert inverse_feature_map((1.0, 0.0)) == pytest.approx((math.pi / 2, 0.0))
    assert inverse_feature_map((0.5, 0.8660254)) == pytest.approx(
        (math.pi / 6, 0.8660254)
    )
    with pytest.raises(ValueError):
        inverse_feature_map((1.2, 0.0))


def test_feature_round_trip():
    rng = np.random.default_rng(11)
    for _ in range(200):
        f = (rng.uniform(-1, 1), rng.uniform(-3, 3))
        back = feature_map(inverse_feature_map(f))
        assert back.f1 == pytest.approx(f[0], abs=1e-12)
        assert back.f2 == f[1]
    for _ in range(200):
        x = (rng.uniform(-math.pi / 2, math.pi / 2), rng.uniform(-3, 3))
        back = inverse_feature_map(feature_map(x))
        assert back.angle == pytest.approx(x[0], abs=1e-12)
        assert back.velocity == x[1]


def test_build_feature_matrix_examples():
    np.testing.assert_allclose(
        build_feature_matrix([(math.pi / 2, 0.0), (0.0, 1.0)]), np.eye(2), atol=1e-15
    )
    degenerate = build_feature_matrix([(math.pi / 2, 0.0), (math.pi / 2, 0.0)])
    np.testing.assert_allclose(degenerate, [[1.0, 1.0], [0.0, 0.0]], atol=1e-15)
    om = 0.7
    states = [(math.pi / 2, 0.0), inverse_feature_map((math.cos(om), math.sin(om)))]
    np.testing.assert_allclose(
        build_feature_matrix(states), canonical_phi(om), atol=1e-15
    )
    with pytest.raises(ValueError):
        build_feature_matrix([(0.0, 0.0)])


def test_ridge_fit_identity_examples():
    assert ridge_fit(np.eye(2), (2.0, 3.0), 0.0) == pytest.approx((2.0, 3.0))
    # (I + I)^{-1} u halves each component
    assert ridge_fit(np.eye(2), (2.0, 3.0), 1.0) == pytest.approx((1.0, 1.5))


def test_ridge_fit_near_exact_at_small_lambda():
    w = ridge_fit(canonical_phi(math.pi / 2), (9.81, 0.0), 1e-6)
    assert w.stiffness == pytest.approx(9.81, abs=1e-4)
    assert w.damping == pytest.approx(0.0, abs=1e-4)


def test_ridge_fit_rejects_negative_lambda():
    with pytest.raises(ValueError):
        ridge_fit(np.eye(2), (1.0, 1.0), -1e-9)


def test_ridge_fit_singular_only_at_zero_lambda():
    phi = np.array([[1.0, 1.0], [0.0, 0.0]])
    with pytest.raises(SingularFeatureMatrixError):
        ridge_fit(phi, (1.0, 1.0), 0.0)
    # any positive ridge regularises the same matrix
    w = ridge_fit(phi, (1.0, 1.0), 1e-6)
    assert all(map(math.isfinite, w))


def test_normal_equation_residual():
    rng = np.random.default_rng(5)
    for _ in range(300):
        phi = rng.uniform(-1, 1, size=(2, 2))
        u = rng.uniform(-10, 10, size=2)
        lam = rng.choice([0.0, 1e-6, 1e-2])
        if lam == 0.0 and abs(np.linalg.det(phi)) < 0.05:
            continue
        w = np.array(ridge_fit(phi, u, lam))
        residual = (phi @ phi.T + lam * np.eye(2)) @ w - phi @ u
        assert np.linalg.norm(residual) < 1e-10


def test_exact_fit_examples():
    assert exact_fit(np.eye(2), (9.81, 0.0)) == (9.81, 0.0)
    # hand elimination: w1 = 9.81, then 0.5*9.81 + 0.8660254*w2 = 4.905 => w2 = 0
    w = exact_fit(np.array([[1.0, 0.5], [0.0, 0.8660254]]), (9.81, 4.905))
    assert w.stiffness == pytest.approx(9.81, rel=1e-12)
    assert w.damping == pytest.approx(0.0, abs=1e-12)


def test_exact_fit_interpolates():
    rng = np.random.default_rng(17)
    for _ in range(100):
        phi = rng.uniform(-1, 1, size=(2, 2))
        if abs(np.linalg.det(phi)) < 0.1:
            continue
        u = rng.uniform(-5, 5, size=2)
        w = np.array(exact_fit(phi, u))
        np.testing.assert_allclose(phi.T @ w, u, atol=1e-10)


def test_exact_fit_singularity():
    with pytest.raises(SingularFeatureMatrixError):
        exact_fit(np.array([[1.0, 2.0], [2.0, 4.0]]), (1.0, 1.0))


def test_ridge_converges_to_exact_fit():
    # shrinkage gap obeys ||w_lam - w_0|| <= lam ||w_0|| / b_min exactly
    rng = np.random.default_rng(23)
    for _ in range(50):
        phi = rng.uniform(-1, 1, size=(2, 2))
        if abs(np.linalg.det(phi)) < 0.1:
            continue
        u = rng.uniform(-5, 5, size=2)
        w_exact = np.array(exact_fit(phi, u))
        b_min = float(np.linalg.eigvalsh(phi @ phi.T)[0])
        gaps = []
        for lam in (1e-3, 1e-6, 1e-9):
            gap = np.linalg.norm(np.array(ridge_fit(phi, u, lam)) - w_exact)
            gaps.append(gap)
            bound = lam * np.linalg.norm(w_exact) / b_min
            assert gap <= bound * (1 + 1e-9) + 1e-12
        assert gaps[0] >= gaps[1] >= gaps[2]


def test_predict_examples():
    assert predict((9.81, 0.0), (math.pi / 2, 0.0)) == 9.81
    assert predict((0.0, 0.0), (0.7, -1.3)) == 0.0
    assert predict((1.0, 1.0), (math.pi / 6, 0.5)) == pytest.approx(1.0)


def test_predict_linear_in_w():
    rng = np.random.default_rng(3)
    for _ in range(100):
        w1 = rng.uniform(-5, 5, size=2)
        w2 = rng.uniform(-5, 5, size=2)
        a, b = rng.uniform(-2, 2, size=2)
        x = (rng.uniform(-math.pi, math.pi), rng.uniform(-3, 3))
        combined = predict(a * w1 + b * w2, x)
        assert combined == pytest.approx(
            a * predict(w1, x) + b * predict(w2, x), abs=1e-12
        )


def test_loss_examples():
    phi = np.eye(2)
    # w reproduces u exactly, no regulariser
    assert loss((2.0, 3.0), phi, (2.0, 3.0), 0.0) == 0.0
    assert loss((0.0, 0.0), phi, (1.0, 1.0), 0.0) == 1.0


def _numeric_loss_grad(w, phi, u, lam, h=1e-6):
    grads = []
    for i in range(2):
        wp = list(w)
        wm = list(w)
        wp[i] += h
        wm[i] -= h
        grads.append((loss(wp, phi, u, lam) - loss(wm, phi, u, lam)) / (2 * h))
    return np.array(grads)


def test_loss_gradient_vanishes_at_ridge_solution():
    rng = np.random.default_rng(29)
    for _ in range(100):
        phi = rng.uniform(-1, 1, size=(2, 2))
        u = rng.uniform(-10, 10, size=2)
        lam = float(rng.choice([0.0, 1e-6, 1e-2]))
        if lam == 0.0 and abs(np.linalg.det(phi)) < 0.05:
            continue
        w = ridge_fit(phi, u, lam)
        grad = _numeric_loss_grad(w, phi, u, lam)
        assert np.linalg.norm(grad) < 1e-6 * (1.0 + np.linalg.norm(u))


def test_skillparams_fields():
    w = SkillParams(9.81, 0.5)
    assert w.stiffness == 9.81
    assert w.damping == 0.5
    assert tuple(w) == (9.81, 0.5)
