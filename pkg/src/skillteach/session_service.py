"""Interactive teaching-study engine and its HTTP interface.

A session walks one participant through six phases, alternating the two
target skills: P1=S1, P2=S2, P3=S1, P4=S2, P5=S1, P6=S2. Participants in the
target group see a 0..100 quality score while choosing their demonstration in
P3; everyone else teaches unguided. Previews are unlimited and carry no state
change; each phase accepts exactly one commit, whose actions get sigma = 0.1
Gaussian noise before the ridge learner is fit and the learnt controller is
scored against the skill reference.

Every lifecycle event (created / preview / commit) is appended to a JSON-lines
log; replay_log rebuilds the full session state from that log alone.
"""

import json
import math
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import IO, Iterable, Sequence

import numpy as np

from .dynamics import PendulumParams
from .evaluation import evaluate_learner
from .experiments import RMSE_CAP, PhaseMetrics, StudyRecord
from .learner import build_feature_matrix, predict, ridge_fit
from .machine_teaching import DemoSet, NoiseModel, det_phi, noisy_action, teaching_score
from .skills import get_skill

GROUPS = ("target", "control")

# skill per phase, P1..P6
PHASE_SKILLS = ("s1", "s2", "s1", "s2", "s1", "s2")

GUIDED_PHASE = 3

Point = tuple[float, float]


class UnknownSessionError(LookupError):
    pass


class ProtocolError(RuntimeError):
    """Commit/preview attempted on a completed session, or a seventh commit."""


class InvalidPointsError(ValueError):
    def __init__(self, errors: Sequence[str]):
        super().__init__("; ".join(errors))
        self.errors = list(errors)


@dataclass(frozen=True)
class PhaseSpec:
    index: int
    skill: str
    guided: bool


@dataclass(frozen=True)
class PhaseResult:
    index: int
    skill: str
    points: tuple[Point, Point]
    actions: tuple[float, float]
    det_phi: float
    score: float
    rmse: float
    l2: float


@dataclass
class Session:
    id: str
    group: str
    committed: list[PhaseResult] = field(default_factory=list)

    @property
    def status(self) -> str:
        return "complete" if len(self.committed) == len(PHASE_SKILLS) else "active"

    @property
    def phase_index(self) -> int:
        # 1-based; stays at 6 once the protocol is complete
        return min(len(self.committed) + 1, len(PHASE_SKILLS))

    def current_phase(self) -> PhaseSpec | None:
        if self.status == "complete":
            return None
        return phase_spec(self.phase_index, self.group)


def phase_spec(index: int, group: str) -> PhaseSpec:
    if not 1 <= index <= len(PHASE_SKILLS):
        raise ValueError(f"phase index must be 1..{len(PHASE_SKILLS)}, got {index}")
    guided = index == GUIDED_PHASE and group == "target"
    return PhaseSpec(index=index, skill=PHASE_SKILLS[index - 1], guided=guided)


def validate_points(points: Sequence[Sequence[float]]) -> list[str]:
    """Per-point violation messages; empty when the pair is acceptable.

    Each state must keep its feature vector inside the unit ball:
    sin^2(angle) + velocity^2 <= 1.
    """
    errors = []
    if len(points) != 2:
        return [f"exactly 2 points required, got {len(points)}"]
    for i, pt in enumerate(points):
        q, v = float(pt[0]), float(pt[1])
        if not (math.isfinite(q) and math.isfinite(v)):
            errors.append(f"point {i + 1}: coordinates must be finite")
            continue
        norm_sq = math.sin(q) ** 2 + v * v
        if norm_sq > 1.0:
            errors.append(
                f"point {i + 1}: feature norm^2 = {norm_sq:.4f} exceeds 1 "
                "(sin^2(angle) + velocity^2 must stay <= 1)"
            )
    return errors


def _noiseless_demo(points: Sequence[Point], w_star) -> DemoSet:
    states = (tuple(points[0]), tuple(points[1]))
    return DemoSet(
        states=states,  # type: ignore[arg-type]
        actions=(predict(w_star, points[0]), predict(w_star, points[1])),
    )


def study_record(session: Session) -> StudyRecord:
    """Per-phase metrics of a session, in phase order (partial is fine)."""
    return StudyRecord(
        participant=session.id,
        group=session.group,
        phases=tuple(
            PhaseMetrics(
                index=r.index,
                skill=r.skill,
                det_phi=r.det_phi,
                score=r.score,
                rmse=r.rmse,
                l2=r.l2,
            )
            for r in session.committed
        ),
    )


class SessionStore:
    """In-memory session registry with an append-only JSONL event log.

    All mutations are serialised behind one lock; the log is flushed per
    line, so a crash loses at most the event being written. sigma and lam
    apply to committed demonstrations (sigma = 0 makes commits noiseless,
    which tests use).
    """

    def __init__(
        self,
        seed: int = 0,
        sigma: float = 0.1,
        lam: float = 1e-6,
        log_path: str | None = None,
        params: PendulumParams = PendulumParams(),
    ):
        self.sigma = sigma
        self.lam = lam
        self.params = params
        self._sessions: dict[str, Session] = {}
        self._rngs: dict[str, np.random.Generator] = {}
        self._root_seed = np.random.SeedSequence(seed)
        self._lock = threading.RLock()
        self._log: IO[str] | None = open(log_path, "a") if log_path else None

    # -- helpers ---------------------------------------------------------

    def _append_event(self, session_id: str, event: str, payload: dict) -> None:
        if self._log is None:
            return
        line = json.dumps(
            {"ts": time.time(), "session": session_id, "event": event, "payload": payload}
        )
        self._log.write(line + "\n")
        self._log.flush()

    def _get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSessionError(f"unknown session {session_id!r}") from None

    def close(self) -> None:
        if self._log is not None:
            self._log.close()
            self._log = None

    # -- lifecycle -------------------------------------------------------

    def create_session(self, group: str) -> Session:
        if group not in GROUPS:
            raise ValueError(f"group must be one of {GROUPS}, got {group!r}")
        with self._lock:
            session = Session(id=uuid.uuid4().hex, group=group)
            self._sessions[session.id] = session
            self._rngs[session.id] = np.random.default_rng(self._root_seed.spawn(1)[0])
            self._append_event(session.id, "created", {"group": group})
            return session

    def get_session(self, session_id: str) -> Session:
        with self._lock:
            return self._get(session_id)

    def sessions(self) -> list[Session]:
        with self._lock:
            return list(self._sessions.values())

    def preview(self, session_id: str, points: Sequence[Sequence[float]]) -> dict:
        """Validate a candidate pair; score it iff the current phase is guided."""
        with self._lock:
            session = self._get(session_id)
            phase = session.current_phase()
            if phase is None:
                raise ProtocolError(f"session {session_id!r} is already complete")
            errors = validate_points(points)
            result: dict = {"valid": not errors}
            if errors:
                result["errors"] = errors
            elif phase.guided:
                w_star = get_skill(phase.skill).w_star
                result["score"] = teaching_score(_noiseless_demo(points, w_star))
            self._append_event(
                session_id,
                "preview",
                {
                    "phase": phase.index,
                    "points": [list(map(float, pt)) for pt in points],
                    "valid": result["valid"],
                    "score": result.get("score"),
                },
            )
            return result

    def commit(
        self,
        session_id: str,
        points: Sequence[Sequence[float]],
        rng: np.random.Generator | None = None,
    ) -> dict:
        """Teach the current phase's skill with one committed pair.

        Actions are the target skill's responses plus N(0, sigma^2) noise;
        the ridge fit of those demonstrations is rolled out against the skill
        reference. Returns the recorded phase result plus the next phase spec
        (None once the protocol is complete).
        """
        with self._lock:
            session = self._get(session_id)
            phase = session.current_phase()
            if phase is None:
                raise ProtocolError(
                    f"session {session_id!r} already has all "
                    f"{len(PHASE_SKILLS)} commits"
                )
            errors = validate_points(points)
            if errors:
                raise InvalidPointsError(errors)
            if rng is None:
                rng = self._rngs[session_id]
            skill = get_skill(phase.skill)
            noise = NoiseModel(self.sigma)
            pts: tuple[Point, Point] = (
                (float(points[0][0]), float(points[0][1])),
                (float(points[1][0]), float(points[1][1])),
            )
            actions = (
                noisy_action(skill.w_star, pts[0], noise, rng),
                noisy_action(skill.w_star, pts[1], noise, rng),
            )
            phi = build_feature_matrix(pts)
            det = det_phi(phi)
            score = teaching_score(_noiseless_demo(pts, skill.w_star))
            w_hat = ridge_fit(phi, actions, self.lam)
            ev = evaluate_learner(
                w_hat, skill.w_star, skill.x0, skill.duration, self.params
            )
            result = PhaseResult(
                index=phase.index,
                skill=skill.id,
                points=pts,
                actions=(float(actions[0]), float(actions[1])),
                det_phi=float(det),
                score=float(score),
                rmse=float(min(ev.rmse, RMSE_CAP)),
                l2=float(ev.l2),
            )
            session.committed.append(result)
            next_phase = session.current_phase()
            self._append_event(
                session_id,
                "commit",
                {
                    "phase": result.index,
                    "skill": result.skill,
                    "points": [list(pt) for pt in result.points],
                    "actions": list(result.actions),
                    "det_phi": result.det_phi,
                    "score": result.score,
                    "rmse": result.rmse,
                    "l2": result.l2,
                },
            )
            return {
                "phase_result": result,
                "next_phase": next_phase,
                "done": session.status == "complete",
            }

    def report(self, session_id: str) -> StudyRecord:
        with self._lock:
            return study_record(self._get(session_id))


def replay_log(lines: Iterable[str]) -> dict[str, Session]:
    """Rebuild sessions from a JSONL event stream, keyed by session id.

    Raises ValueError naming the 1-based line number on any malformed line.
    """
    sessions: dict[str, Session] = {}
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        try:
            event = json.loads(raw)
            kind = event["event"]
            sid = event["session"]
            payload = event["payload"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValueError(f"malformed event on line {lineno}: {exc}") from exc
        if kind == "created":
            if sid in sessions:
                raise ValueError(f"malformed event on line {lineno}: duplicate session {sid!r}")
            sessions[sid] = Session(id=sid, group=payload["group"])
        elif kind == "preview":
            if sid not in sessions:
                raise ValueError(f"malformed event on line {lineno}: unknown session {sid!r}")
        elif kind == "commit":
            if sid not in sessions:
                raise ValueError(f"malformed event on line {lineno}: unknown session {sid!r}")
            try:
                result = PhaseResult(
                    index=int(payload["phase"]),
                    skill=payload["skill"],
                    points=(
                        (float(payload["points"][0][0]), float(payload["points"][0][1])),
                        (float(payload["points"][1][0]), float(payload["points"][1][1])),
                    ),
                    actions=(float(payload["actions"][0]), float(payload["actions"][1])),
                    det_phi=float(payload["det_phi"]),
                    score=float(payload["score"]),
                    rmse=float(payload["rmse"]),
                    l2=float(payload["l2"]),
                )
            except (KeyError, IndexError, TypeError) as exc:
                raise ValueError(f"malformed event on line {lineno}: {exc}") from exc
            sessions[sid].committed.append(result)
        else:
            raise ValueError(f"malformed event on line {lineno}: unknown event {kind!r}")
    return sessions


# -- HTTP layer ----------------------------------------------------------


def create_app(
    store: SessionStore | None = None,
    *,
    expose_report: bool = False,
    static_dir: str | None = None,
):
    """FastAPI application over a SessionStore.

    The report endpoint is for experimenters and only registered when
    expose_report is set. static_dir, when given, serves a built frontend at
    the web root (API routes keep priority).
    """
    from fastapi import Body, FastAPI, HTTPException, Query
    from fastapi.middleware.cors import CORSMiddleware
    from pydantic import BaseModel, Field

    from .dynamics import Trajectory
    from .skills import reference_trajectory, skill_ids

    if store is None:
        store = SessionStore()

    class PointIn(BaseModel):
        angle: float
        velocity: float

    class PointsIn(BaseModel):
        points: list[PointIn] = Field(min_length=2, max_length=2)

        def as_pairs(self) -> list[tuple[float, float]]:
            return [(p.angle, p.velocity) for p in self.points]

    class CreateIn(BaseModel):
        group: str

    app = FastAPI(title="skillteach session service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    def phase_json(phase: PhaseSpec | None) -> dict | None:
        if phase is None:
            return None
        return {"index": phase.index, "skill": phase.skill, "guided": phase.guided}

    @app.post("/api/sessions")
    def create_session(body: CreateIn = Body()):
        try:
            session = store.create_session(body.group)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return {"id": session.id, "phase": phase_json(session.current_phase())}

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        try:
            session = store.get_session(session_id)
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        return {
            "id": session.id,
            "status": session.status,
            "committed": len(session.committed),
            "phase": phase_json(session.current_phase()),
        }

    @app.post("/api/sessions/{session_id}/preview")
    def preview(session_id: str, body: PointsIn = Body()):
        try:
            return store.preview(session_id, body.as_pairs())
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ProtocolError as exc:
            raise HTTPException(status_code=409, detail=str(exc))

    @app.post("/api/sessions/{session_id}/commit")
    def commit(session_id: str, body: PointsIn = Body()):
        try:
            outcome = store.commit(session_id, body.as_pairs())
        except UnknownSessionError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ProtocolError as exc:
            raise HTTPException(status_code=409, detail=str(exc))
        except InvalidPointsError as exc:
            raise HTTPException(status_code=400, detail={"errors": exc.errors})
        return {
            "phase_complete": True,
            "next_phase": phase_json(outcome["next_phase"]),
            "done": outcome["done"],
        }

    if expose_report:

        @app.get("/api/sessions/{session_id}/report")
        def report(session_id: str):
            try:
                record = store.report(session_id)
            except UnknownSessionError as exc:
                raise HTTPException(status_code=404, detail=str(exc))
            return {
                "participant": record.participant,
                "group": record.group,
                "phases": [
                    {
                        "index": ph.index,
                        "skill": ph.skill,
                        "det_phi": ph.det_phi,
                        "score": ph.score,
                        "rmse": ph.rmse,
                        "l2": ph.l2,
                    }
                    for ph in record.phases
                ],
            }

    @app.get("/api/skills/{skill_id}/reference")
    def reference(skill_id: str, stride: int = Query(default=200, ge=1)):
        if skill_id.lower() not in skill_ids():
            raise HTTPException(status_code=404, detail=f"unknown skill {skill_id!r}")
        spec = get_skill(skill_id)
        traj: Trajectory = reference_trajectory(spec, store.params)
        samples = [
            {
                "t": s * traj.dt,
                "angle": float(traj.states[s, 0]),
                "velocity": float(traj.states[s, 1]),
            }
            for s in range(0, len(traj.states), stride)
        ]
        return {
            "skill": spec.id,
            "dt": traj.dt,
            "stride": stride,
            "samples": samples,
        }

    if static_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    return app
