"""Teaching-quality analysis and learning-from-demonstration experiments.

The package models a two-parameter motor skill (torque control of a
pendulum from the features (sin q, qd)), a ridge learner trained from two
demonstrated states, analytic and Monte-Carlo teaching risk, an optimality
index for demonstration pairs, sweep experiments over demonstration quality,
and an interactive six-phase teaching study served over HTTP.
"""

from .dynamics import (
    DivergenceError,
    PendulumParams,
    State,
    Trajectory,
    applied_torque,
    energy,
    rollout,
    step,
)
from .evaluation import EvalResult, evaluate_learner, l2_error, rmse
from .experiments import (
    GroupStats,
    PhaseMetrics,
    StudyRecord,
    SweepConfig,
    SweepRow,
    TTestResult,
    analyze_study,
    outlier_filter,
    phase_delta,
    run_sweep,
    two_sample_t_test,
    write_sweep_csv,
)
from .learner import (
    FeatureVector,
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
from .machine_teaching import (
    DemoSet,
    NoiseModel,
    RiskBreakdown,
    canonical_phi,
    det_phi,
    generate_demo_pair,
    gram_eigenvalues,
    monte_carlo_risk,
    noisy_action,
    optimal_omega,
    risk_derivative,
    risk_full,
    risk_variance,
    teaching_score,
)
from .session_service import (
    InvalidPointsError,
    PhaseSpec,
    ProtocolError,
    Session,
    SessionStore,
    UnknownSessionError,
    create_app,
    phase_spec,
    replay_log,
    study_record,
)
from .skills import SkillSpec, get_skill, reference_trajectory, skill_ids

__version__ = "0.1.0"

__all__ = [
    "DivergenceError",
    "PendulumParams",
    "State",
    "Trajectory",
    "applied_torque",
    "energy",
    "rollout",
    "step",
    "EvalResult",
    "evaluate_learner",
    "l2_error",
    "rmse",
    "GroupStats",
    "PhaseMetrics",
    "StudyRecord",
    "SweepConfig",
    "SweepRow",
    "TTestResult",
    "analyze_study",
    "outlier_filter",
    "phase_delta",
    "run_sweep",
    "two_sample_t_test",
    "write_sweep_csv",
    "FeatureVector",
    "SingularFeatureMatrixError",
    "SkillParams",
    "build_feature_matrix",
    "exact_fit",
    "feature_map",
    "inverse_feature_map",
    "loss",
    "predict",
    "ridge_fit",
    "DemoSet",
    "NoiseModel",
    "RiskBreakdown",
    "canonical_phi",
    "det_phi",
    "generate_demo_pair",
    "gram_eigenvalues",
    "monte_carlo_risk",
    "noisy_action",
    "optimal_omega",
    "risk_derivative",
    "risk_full",
    "risk_variance",
    "teaching_score",
    "InvalidPointsError",
    "PhaseSpec",
    "ProtocolError",
    "Session",
    "SessionStore",
    "UnknownSessionError",
    "create_app",
    "phase_spec",
    "replay_log",
    "study_record",
    "SkillSpec",
    "get_skill",
    "reference_trajectory",
    "skill_ids",
    "__version__",
]
