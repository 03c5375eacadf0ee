"""Parameter sweeps and the study statistics pipeline.

run_sweep measures teaching quality across the (omega, sigma) grid: for each
cell it repeatedly generates a canonical demonstration pair, fits the ridge
learner, and scores the learnt controller against the target with behavioural
(rmse) and parametric (l2) error, reporting per-cell means and sample
standard deviations.

The statistics half ingests per-participant study records (six phases each)
and compares target-group improvement deltas against control-group deltas
with a pooled two-sample t-test after a single-pass 3-sd outlier removal.
"""

from __future__ import annotations

import json
import math
import statistics
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np
from scipy.stats import t as student_t

from .dynamics import PendulumParams, State, VELOCITY_LIMIT, rollout
from .evaluation import l2_error
from .learner import build_feature_matrix, ridge_fit
from .machine_teaching import NoiseModel, generate_demo_pair
from .skills import get_skill

# keeps sweep files finite when a learnt controller destabilises the plant
RMSE_CAP = 1e12

DEFAULT_OMEGAS = tuple(k * math.pi / 36 for k in range(1, 19))
DEFAULT_SIGMAS = (0.05, 0.1, 0.15)

SWEEP_HEADER = "skill,omega,sigma,trials,rmse_mean,rmse_sd,l2_mean,l2_sd"

PHASE_PAIRS = ((1, 3), (1, 5), (2, 6))
COMPARED_METRICS = ("det_phi", "rmse")


@dataclass(frozen=True)
class SweepConfig:
    skill: str = "s1"
    omegas: tuple[float, ...] = DEFAULT_OMEGAS
    sigmas: tuple[float, ...] = DEFAULT_SIGMAS
    trials: int = 1000
    lam: float = 1e-6
    seed: int = 0
    duration: float = 3.0
    x0: State = State(math.pi / 2, 0.0)

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.omegas:
            raise ValueError("omega grid must be non-empty")
        for om in self.omegas:
            if not 0.0 < om <= math.pi / 2:
                raise ValueError(f"omega grid must lie in (0, pi/2], got {om!r}")
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam!r}")


@dataclass(frozen=True)
class SweepRow:
    skill: str
    omega: float
    sigma: float
    trials: int
    rmse_mean: float
    rmse_sd: float
    l2_mean: float
    l2_sd: float


@dataclass(frozen=True)
class PhaseMetrics:
    index: int
    skill: str
    det_phi: float
    score: float
    rmse: float
    l2: float


@dataclass(frozen=True)
class StudyRecord:
    participant: str
    group: str
    phases: tuple[PhaseMetrics, ...]

    def phase(self, index: int) -> PhaseMetrics:
        for ph in self.phases:
            if ph.index == index:
                return ph
        raise ValueError(
            f"participant {self.participant!r} has no phase {index} recorded"
        )

    @property
    def complete(self) -> bool:
        return len(self.phases) == 6


@dataclass(frozen=True)
class GroupStats:
    n: int
    mean: float
    sd: float


@dataclass(frozen=True)
class TTestResult:
    t: float
    df: int
    p: float


def _batch_rmse(
    ws: np.ndarray,
    ref_states: np.ndarray,
    x0: State,
    p: PendulumParams,
) -> np.ndarray:
    """Closed-loop rmse against ref_states for many controllers at once.

    Vectorised mirror of rollout + evaluation.rmse over the rows of ws.
    Trials whose velocity leaves the divergence guard are frozen and reported
    at RMSE_CAP; finite results are capped at RMSE_CAP as well.
    """
    n = len(ws)
    n_steps = len(ref_states) - 1
    k = ws[:, 0].copy()
    d = ws[:, 1].copy()
    q = np.full(n, float(x0[0]))
    v = np.full(n, float(x0[1]))
    acc = np.zeros(n)
    dead = np.zeros(n, dtype=bool)
    g_over_l = p.gravity / p.length
    ml2 = p.mass * p.length * p.length
    dt = p.dt
    ref_q = ref_states[:, 0]
    ref_v = ref_states[:, 1]
    for s in range(n_steps):
        sq = np.sin(q)
        tau = -(k * sq + d * v)
        v += dt * (-g_over_l * sq + tau / ml2)
        q += dt * v
        with np.errstate(invalid="ignore"):
            bad = ~(np.abs(v) <= VELOCITY_LIMIT) | ~np.isfinite(q)
        newly = bad & ~dead
        if newly.any():
            dead |= newly
            # freeze runaway trials so later steps stay overflow-free
            q[newly] = 0.0
            v[newly] = 0.0
            k[newly] = 0.0
            d[newly] = 0.0
        dq = q - ref_q[s + 1]
        dv = v - ref_v[s + 1]
        acc += np.sqrt(dq * dq + dv * dv) * ~dead
    out = np.minimum(acc / (n_steps + 1), RMSE_CAP)
    out[dead] = RMSE_CAP
    return out


def run_sweep(cfg: SweepConfig) -> list[SweepRow]:
    """Monte-Carlo sweep over the (sigma, omega) grid.

    Per trial: generate_demo_pair -> ridge_fit -> rollout scored against the
    target reference. Deterministic for a fixed seed; each trial draws from
    its own RNG stream keyed by (seed, sigma index, omega index, trial), so
    results do not depend on execution order. Rows come out sorted by
    (sigma, omega) in grid order.
    """
    skill = get_skill(cfg.skill)
    p = PendulumParams()
    ref = rollout(skill.w_star, cfg.x0, cfg.duration, p)
    rows: list[SweepRow] = []
    for si, sigma in enumerate(cfg.sigmas):
        noise = NoiseModel(sigma)
        for wi, omega in enumerate(cfg.omegas):
            ws = np.empty((cfg.trials, 2))
            for t in range(cfg.trials):
                rng = np.random.default_rng(
                    np.random.SeedSequence((cfg.seed, si, wi, t))
                )
                demo = generate_demo_pair(omega, skill.w_star, noise, rng)
                phi = build_feature_matrix(demo.states)
                ws[t] = ridge_fit(phi, demo.actions, cfg.lam)
            rmse_vals = _batch_rmse(ws, ref.states, cfg.x0, p)
            l2_vals = np.hypot(
                ws[:, 0] - skill.w_star.stiffness, ws[:, 1] - skill.w_star.damping
            )
            rows.append(
                SweepRow(
                    skill=skill.id,
                    omega=omega,
                    sigma=sigma,
                    trials=cfg.trials,
                    rmse_mean=float(rmse_vals.mean()),
                    rmse_sd=float(rmse_vals.std(ddof=1)) if cfg.trials > 1 else 0.0,
                    l2_mean=float(l2_vals.mean()),
                    l2_sd=float(l2_vals.std(ddof=1)) if cfg.trials > 1 else 0.0,
                )
            )
    return rows


def write_sweep_csv(rows: Sequence[SweepRow], out: IO[str]) -> None:
    """Write sweep rows with the fixed header at 9 significant digits."""
    out.write(SWEEP_HEADER + "\n")
    for r in rows:
        out.write(
            f"{r.skill},{r.omega:.9g},{r.sigma:.9g},{r.trials},"
            f"{r.rmse_mean:.9g},{r.rmse_sd:.9g},{r.l2_mean:.9g},{r.l2_sd:.9g}\n"
        )


def outlier_filter(values: Sequence[float]) -> list[float]:
    """Drop values farther than 3 sample standard deviations from the mean.

    Single pass: mean and sd are computed once on the full input and the
    filter is not re-applied to the survivors.
    """
    vals = [float(v) for v in values]
    if len(vals) < 2:
        raise ValueError(f"need at least 2 values, got {len(vals)}")
    mean = statistics.fmean(vals)
    sd = statistics.stdev(vals)
    return [v for v in vals if abs(v - mean) <= 3.0 * sd]


def two_sample_t_test(a: Sequence[float], b: Sequence[float]) -> TTestResult:
    """Student's pooled-variance two-sample t-test, two-tailed.

    df = n_a + n_b - 2. Degenerate zero-variance inputs give t = 0, p = 1
    when the means agree and |t| = inf, p = 0 otherwise.
    """
    if len(a) < 2 or len(b) < 2:
        raise ValueError("each sample needs at least 2 values")
    na, nb = len(a), len(b)
    mean_a = statistics.fmean(a)
    mean_b = statistics.fmean(b)
    df = na + nb - 2
    pooled_var = (
        (na - 1) * statistics.variance(a) + (nb - 1) * statistics.variance(b)
    ) / df
    se = math.sqrt(pooled_var * (1.0 / na + 1.0 / nb))
    if se == 0.0:
        if mean_a == mean_b:
            return TTestResult(0.0, df, 1.0)
        return TTestResult(math.copysign(math.inf, mean_a - mean_b), df, 0.0)
    t = (mean_a - mean_b) / se
    p = 2.0 * float(student_t.sf(abs(t), df))
    return TTestResult(t, df, p)


def phase_delta(
    records: Sequence[StudyRecord], phase_a: int, phase_b: int, metric: str
) -> list[float]:
    """Per-participant change metric(phase_b) - metric(phase_a)."""
    if metric not in ("det_phi", "score", "rmse", "l2"):
        raise ValueError(f"unknown metric {metric!r}")
    return [
        getattr(r.phase(phase_b), metric) - getattr(r.phase(phase_a), metric)
        for r in records
    ]


def _group_stats(values: Sequence[float]) -> GroupStats:
    return GroupStats(
        n=len(values),
        mean=statistics.fmean(values),
        sd=statistics.stdev(values) if len(values) > 1 else 0.0,
    )


def analyze_study(records: Sequence[StudyRecord]) -> dict:
    """Compare target-group against control-group phase deltas.

    For each phase pair (P1,P3), (P1,P5), (P2,P6) and metric (det_phi, rmse):
    per-group deltas -> single-pass outlier filter -> group stats -> pooled
    t-test. Returns a JSON-ready report dict.
    """
    complete = [r for r in records if r.complete]
    target = [r for r in complete if r.group == "target"]
    control = [r for r in complete if r.group == "control"]
    if len(target) < 2 or len(control) < 2:
        raise ValueError(
            "need at least 2 complete records per group, got "
            f"{len(target)} target / {len(control)} control"
        )
    comparisons = []
    for pa, pb in PHASE_PAIRS:
        for metric in COMPARED_METRICS:
            deltas_t = outlier_filter(phase_delta(target, pa, pb, metric))
            deltas_c = outlier_filter(phase_delta(control, pa, pb, metric))
            if len(deltas_t) < 2 or len(deltas_c) < 2:
                raise ValueError(
                    f"too few values left after outlier removal for P{pa}->P{pb} {metric}"
                )
            stats_t = _group_stats(deltas_t)
            stats_c = _group_stats(deltas_c)
            test = two_sample_t_test(deltas_t, deltas_c)
            comparisons.append(
                {
                    "phases": [pa, pb],
                    "metric": metric,
                    "target": {"n": stats_t.n, "mean": stats_t.mean, "sd": stats_t.sd},
                    "control": {"n": stats_c.n, "mean": stats_c.mean, "sd": stats_c.sd},
                    "t": test.t,
                    "df": test.df,
                    "p": test.p,
                }
            )
    return {
        "records": {"target": len(target), "control": len(control)},
        "comparisons": comparisons,
    }


def write_report_json(report: dict, out: IO[str]) -> None:
    json.dump(report, out, indent=2)
    out.write("\n")
