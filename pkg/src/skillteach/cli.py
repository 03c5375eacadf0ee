"""Command-line front door.

Subcommands: sweep, risk, score, rollout, serve, analyze, demo-gen.
Every stochastic subcommand takes --seed and is bit-reproducible. Exit codes:
0 success, 1 runtime failure, 2 usage error. --out - writes to stdout.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import math
import sys
from typing import IO, Iterator, Sequence

import numpy as np

from .dynamics import PendulumParams, rollout, write_csv
from .experiments import (
    DEFAULT_OMEGAS,
    DEFAULT_SIGMAS,
    SweepConfig,
    analyze_study,
    run_sweep,
    write_report_json,
    write_sweep_csv,
)
from .learner import build_feature_matrix, ridge_fit
from .machine_teaching import (
    DemoSet,
    NoiseModel,
    generate_demo_pair,
    risk_derivative,
    risk_variance,
    teaching_score,
)
from .session_service import SessionStore, create_app, replay_log, study_record
from .skills import get_skill


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated float list: {text!r}")


@contextlib.contextmanager
def _open_out(path: str) -> Iterator[IO[str]]:
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skillteach",
        description="Demonstration-quality analysis and teaching experiments "
        "for the torque-controlled pendulum.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="Monte-Carlo sweep over (omega, sigma)")
    p_sweep.add_argument("--skill", choices=("s1", "s2"), required=True)
    p_sweep.add_argument("--omegas", type=_float_list, default=DEFAULT_OMEGAS,
                         help="comma-separated grid in (0, pi/2]")
    p_sweep.add_argument("--sigmas", type=_float_list, default=DEFAULT_SIGMAS)
    p_sweep.add_argument("--trials", type=_positive_int, default=1000)
    p_sweep.add_argument("--lam", type=float, default=1e-6)
    p_sweep.add_argument("--seed", type=int, default=0)
    p_sweep.add_argument("--duration", type=float, default=3.0)
    p_sweep.add_argument("--out", default="-")

    p_risk = sub.add_parser("risk", help="analytic risk and its derivative on a grid")
    p_risk.add_argument("--sigma", type=float, default=0.1)
    p_risk.add_argument("--lam", type=float, default=1e-6)
    p_risk.add_argument("--omegas", type=_float_list, default=DEFAULT_OMEGAS)
    p_risk.add_argument("--out", default="-")

    p_score = sub.add_parser("score", help="teaching-quality score of two states")
    p_score.add_argument("coords", type=float, nargs=4, metavar="COORD",
                         help="q1 v1 q2 v2, two (angle, velocity) states")

    p_roll = sub.add_parser("rollout", help="simulate a controller, write CSV")
    p_roll.add_argument("--skill", choices=("s1", "s2"), default="s1")
    source = p_roll.add_mutually_exclusive_group(required=True)
    source.add_argument("--optimal", action="store_true",
                        help="roll out the target controller itself")
    source.add_argument("--omega", type=float,
                        help="teach at this feature angle, roll out the learnt controller")
    p_roll.add_argument("--sigma", type=float, default=0.1)
    p_roll.add_argument("--lam", type=float, default=1e-6)
    p_roll.add_argument("--seed", type=int, default=0)
    p_roll.add_argument("--duration", type=float, default=3.0)
    p_roll.add_argument("--stride", type=_positive_int, default=10)
    p_roll.add_argument("--out", default="-")

    p_serve = sub.add_parser("serve", help="run the teaching-session HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.add_argument("--log", default="session_log.jsonl",
                         help="JSONL event log path")
    p_serve.add_argument("--seed", type=int, default=0)
    p_serve.add_argument("--sigma", type=float, default=0.1)
    p_serve.add_argument("--lam", type=float, default=1e-6)
    p_serve.add_argument("--expose-report", action="store_true",
                         help="enable the experimenter report endpoint")
    p_serve.add_argument("--static", default=None,
                         help="directory with a built frontend to serve at /")

    p_an = sub.add_parser("analyze", help="statistics report from a session event log")
    p_an.add_argument("--log", required=True)
    p_an.add_argument("--out", default="-")

    p_demo = sub.add_parser("demo-gen", help="emit one canonical demonstration pair")
    p_demo.add_argument("--omega", type=float, default=math.pi / 2)
    p_demo.add_argument("--skill", choices=("s1", "s2"), default="s1")
    p_demo.add_argument("--sigma", type=float, default=0.0)
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--out", default="-")

    return parser


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = SweepConfig(
        skill=args.skill,
        omegas=tuple(args.omegas),
        sigmas=tuple(args.sigmas),
        trials=args.trials,
        lam=args.lam,
        seed=args.seed,
        duration=args.duration,
    )
    rows = run_sweep(cfg)
    with _open_out(args.out) as fh:
        write_sweep_csv(rows, fh)
    return 0


def cmd_risk(args: argparse.Namespace) -> int:
    omegas = sorted(args.omegas)
    with _open_out(args.out) as fh:
        fh.write("omega,risk,derivative\n")
        for om in omegas:
            risk = risk_variance(om, args.sigma, args.lam)
            deriv = risk_derivative(om, args.sigma, args.lam)
            fh.write(f"{om:.9g},{risk:.9g},{deriv:.9g}\n")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    q1, v1, q2, v2 = args.coords
    demo = DemoSet(states=((q1, v1), (q2, v2)), actions=(0.0, 0.0))  # type: ignore[arg-type]
    print(teaching_score(demo))
    return 0


def cmd_rollout(args: argparse.Namespace) -> int:
    skill = get_skill(args.skill)
    if args.optimal:
        w = skill.w_star
    else:
        rng = np.random.default_rng(np.random.SeedSequence((args.seed,)))
        demo = generate_demo_pair(args.omega, skill.w_star, NoiseModel(args.sigma), rng)
        w = ridge_fit(build_feature_matrix(demo.states), demo.actions, args.lam)
    traj = rollout(w, skill.x0, args.duration, PendulumParams())
    with _open_out(args.out) as fh:
        write_csv(traj, fh, stride=args.stride)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import socket

    import uvicorn

    store = SessionStore(seed=args.seed, sigma=args.sigma, lam=args.lam,
                         log_path=args.log)
    app = create_app(store, expose_report=args.expose_report, static_dir=args.static)
    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((args.host, args.port))
    host, port = sock.getsockname()[:2]
    print(f"listening on http://{host}:{port}", flush=True)
    config = uvicorn.Config(app, log_level="warning")
    server = uvicorn.Server(config)
    try:
        server.run(sockets=[sock])
    finally:
        store.close()
    return 0


def cmd_analyze(args: argparse.Namespace) -> int:
    with open(args.log) as fh:
        sessions = replay_log(fh)
    if not sessions:
        raise ValueError(f"event log {args.log!r} contains no sessions")
    records = [study_record(s) for s in sessions.values()]
    report = analyze_study(records)
    with _open_out(args.out) as fh:
        write_report_json(report, fh)
    return 0


def cmd_demo_gen(args: argparse.Namespace) -> int:
    skill = get_skill(args.skill)
    rng = np.random.default_rng(np.random.SeedSequence((args.seed,)))
    demo = generate_demo_pair(args.omega, skill.w_star, NoiseModel(args.sigma), rng)
    payload = {
        "skill": skill.id,
        "omega": args.omega,
        "sigma": args.sigma,
        "states": [list(map(float, s)) for s in demo.states],
        "actions": list(demo.actions),
        "score": teaching_score(demo),
    }
    with _open_out(args.out) as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    return 0


_HANDLERS = {
    "sweep": cmd_sweep,
    "risk": cmd_risk,
    "score": cmd_score,
    "rollout": cmd_rollout,
    "serve": cmd_serve,
    "analyze": cmd_analyze,
    "demo-gen": cmd_demo_gen,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return _HANDLERS[args.command](args)
    except KeyboardInterrupt:
        return 1
    except Exception as exc:  # runtime failure, distinct from usage errors
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
