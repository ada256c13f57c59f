"""HTTP API for the workbench UI, plus static asset serving.

Sessions live in memory and are persisted as session documents after every
mutation (one file per session). Concurrency is optimistic: every mutating
request carries the revision it was based on and gets the new one back; a
stale revision is rejected with 409 so a second browser tab can only lose the
race, never silently clobber. Every non-2xx response body is an ApiError.
"""

from __future__ import annotations

import os
from pathlib import Path
from typing import Dict, List, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field
from starlette.exceptions import HTTPException as StarletteHTTPException

from . import dot, risk, sessionio
from .errors import (CloudgateError, MalformedIdError, ModelError, NotFoundError,
                     SessionError, StaleRevisionError)
from .model import GoalPattern, MigrationType, Origin, OriginKind
from .procedure import IntroducedSpec, Session
from .repository import (GoalEntry, ObstacleEntry, Repository, StudyEntry,
                         TacticEntry, default_dataset_path, get_entry,
                         load_repository, query_obstacles, query_tactics)
from .risk import Consequence, Likelihood, RiskLevel

DEFAULT_PORT = 7340

_THRESHOLDS = {"high": RiskLevel.HIGH, "extreme": RiskLevel.EXTREME,
               "very-extreme": RiskLevel.VERY_EXTREME}


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str,
                 location: Optional[str] = None):
        self.status = status
        self.code = code
        self.message = message
        self.location = location
        super().__init__(message)

    def body(self) -> Dict:
        return {"status": self.status, "code": self.code,
                "message": self.message, "location": self.location}


def _entry_payload(entry) -> Dict:
    if isinstance(entry, GoalEntry):
        return {"kind": "goal", "id": entry.id, "name": entry.name,
                "definition": entry.definition,
                "source_studies": list(entry.source_studies)}
    if isinstance(entry, ObstacleEntry):
        return {"kind": "obstacle", "id": entry.id, "name": entry.name,
                "definition": entry.definition,
                "impacted_goals": list(entry.impacted_goals),
                "migration_types": list(entry.migration_types),
                "source_studies": list(entry.source_studies),
                "data_quality_notes": list(entry.data_quality_notes)}
    if isinstance(entry, TacticEntry):
        return {"kind": "tactic", "id": entry.id, "name": entry.name,
                "definition": entry.definition,
                "related_obstacles": list(entry.related_obstacles),
                "universal": entry.universal, "category": entry.category,
                "source_studies": list(entry.source_studies),
                "data_quality_notes": list(entry.data_quality_notes)}
    assert isinstance(entry, StudyEntry)
    return {"kind": "study", "id": entry.id, "citation": entry.citation,
            "year": entry.year}


def _suggestion_payload(s) -> Dict:
    return {"kind": s.kind, "repo_id": s.repo_id,
            "matched_goals": s.matched_goals, "study_count": s.study_count,
            "universal": s.universal, "rationale": s.rationale}


class SessionStore:
    """In-memory sessions backed by one document file each."""

    def __init__(self, repository: Repository, directory: Optional[str]):
        self.repository = repository
        self.directory = Path(directory) if directory else None
        self.sessions: Dict[str, Session] = {}
        self.load_warnings: Dict[str, List[str]] = {}
        if self.directory is not None:
            self.directory.mkdir(parents=True, exist_ok=True)
            for path in sorted(self.directory.glob("*.session.json")):
                session, warnings = sessionio.read_session(str(path), repository)
                self.sessions[session.session_id] = session
                if warnings:
                    self.load_warnings[session.session_id] = warnings

    def get(self, session_id: str) -> Session:
        session = self.sessions.get(session_id)
        if session is None:
            raise ApiError(404, "session_not_found",
                           f"no session with id {session_id}")
        return session

    def persist(self, session: Session) -> None:
        if self.directory is not None:
            path = self.directory / f"{session.session_id}.session.json"
            sessionio.write_session(session, str(path))

    def add(self, session: Session) -> None:
        self.sessions[session.session_id] = session
        self.persist(session)

    def delete(self, session_id: str) -> None:
        self.get(session_id)
        del self.sessions[session_id]
        if self.directory is not None:
            path = self.directory / f"{session_id}.session.json"
            if path.exists():
                path.unlink()


# ------------------------------------------------------------- request bodies

class OriginBody(BaseModel):
    kind: str  # "evidential" | "domain"
    repo_ref: Optional[str] = None

    def to_origin(self) -> Origin:
        try:
            kind = OriginKind(self.kind)
        except ValueError:
            raise ApiError(400, "invalid_origin",
                           f"unknown origin kind {self.kind!r}")
        return Origin(kind, self.repo_ref)


class CreateSessionBody(BaseModel):
    name: str
    migration_type: str
    session_id: Optional[str] = None


class AddGoalBody(BaseModel):
    revision: int
    descriptor: str
    pattern: str = "Achieve"
    repo_ref: Optional[str] = None
    parent: Optional[str] = None


class AttachObstacleBody(BaseModel):
    revision: int
    target: str
    origin: OriginBody
    name: Optional[str] = None


class AttachTacticBody(BaseModel):
    revision: int
    node: str
    tactic: str
    note: str = ""


class AssessBody(BaseModel):
    revision: int
    node: str
    likelihood: str
    consequence: str
    note: str = ""
    override: Optional[str] = None


class ReassessBody(BaseModel):
    revision: int
    node: str
    tactic_node: str
    likelihood: str
    consequence: str
    note: str = ""


class ReassessmentEffect(BaseModel):
    likelihood: str
    consequence: str
    note: str = ""


class IntroducedBody(BaseModel):
    origin: OriginBody
    name: Optional[str] = None
    target: Optional[str] = None


class EffectsBody(BaseModel):
    reassessment: Optional[ReassessmentEffect] = None
    introduced: List[IntroducedBody] = Field(default_factory=list)


class ApplyTacticBody(BaseModel):
    revision: int
    node: str
    tactic: str
    note: str = ""
    effects: EffectsBody = Field(default_factory=EffectsBody)


def _likelihood(token: str) -> Likelihood:
    try:
        return Likelihood(token)
    except ValueError:
        raise ApiError(400, "invalid_likelihood",
                       f"unknown likelihood {token!r}")


def _consequence(token: str) -> Consequence:
    try:
        return Consequence(token)
    except ValueError:
        raise ApiError(400, "invalid_consequence",
                       f"unknown consequence {token!r}")


def _risk_level(token: Optional[str]) -> Optional[RiskLevel]:
    if token is None:
        return None
    try:
        return RiskLevel(token)
    except ValueError:
        raise ApiError(400, "invalid_risk_level",
                       f"unknown risk level {token!r}")


def _migration_type(token: str) -> MigrationType:
    try:
        return MigrationType(token)
    except ValueError:
        raise ApiError(400, "invalid_migration_type",
                       f"unknown migration type {token!r}")


def _pattern(token: str) -> GoalPattern:
    try:
        return GoalPattern(token)
    except ValueError:
        raise ApiError(400, "invalid_goal_pattern",
                       f"unknown goal pattern {token!r}")


def _check_revision(session: Session, revision: int) -> None:
    if revision != session.revision:
        raise StaleRevisionError(session.revision, revision)


def _session_summary(session: Session) -> Dict:
    return {"session_id": session.session_id, "name": session.name,
            "migration_type": session.model.migration_type.value,
            "revision": session.revision,
            "repository_version": session.repository_version}


def create_app(dataset: Optional[str] = None,
               sessions_dir: Optional[str] = None,
               ui_dir: Optional[str] = None) -> FastAPI:
    repository = load_repository(dataset or default_dataset_path())
    store = SessionStore(repository, sessions_dir)
    app = FastAPI(title="cloudgate", docs_url=None, redoc_url=None)
    app.state.repository = repository
    app.state.store = store

    @app.exception_handler(ApiError)
    async def _api_error(request: Request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.body())

    @app.exception_handler(StaleRevisionError)
    async def _stale(request: Request, exc: StaleRevisionError):
        return JSONResponse(status_code=409, content={
            "status": 409, "code": "stale_revision", "message": str(exc),
            "location": None})

    @app.exception_handler(RequestValidationError)
    async def _validation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={
            "status": 400, "code": "validation_error", "message": str(exc),
            "location": None})

    @app.exception_handler(StarletteHTTPException)
    async def _http_error(request: Request, exc: StarletteHTTPException):
        return JSONResponse(status_code=exc.status_code, content={
            "status": exc.status_code, "code": "http_error",
            "message": str(exc.detail), "location": None})

    @app.exception_handler(CloudgateError)
    async def _engine_error(request: Request, exc: CloudgateError):
        status, code = 400, "invalid_operation"
        if isinstance(exc, (NotFoundError, MalformedIdError)):
            status, code = 404, "entry_not_found"
        return JSONResponse(status_code=status, content={
            "status": status, "code": code, "message": str(exc),
            "location": None})

    # ----------------------------------------------------------- repository

    @app.get("/api/repo/goals")
    def repo_goals():
        return [_entry_payload(g) for g in repository.goals]

    @app.get("/api/repo/obstacles")
    def repo_obstacles(goal: Optional[str] = None,
                       migration_type: Optional[str] = None,
                       text: Optional[str] = None):
        entries = query_obstacles(repository, goal=goal,
                                  migration_type=migration_type, text=text)
        return [_entry_payload(o) for o in entries]

    @app.get("/api/repo/tactics")
    def repo_tactics(obstacle: Optional[str] = None,
                     category: Optional[str] = None,
                     universal: bool = True):
        entries = query_tactics(repository, obstacle=obstacle,
                                category=category, include_universal=universal)
        return [_entry_payload(t) for t in entries]

    @app.get("/api/repo/entries/{ident}")
    def repo_entry(ident: str):
        return _entry_payload(get_entry(repository, ident))

    @app.get("/api/risk-matrix")
    def risk_matrix():
        likelihoods = [l.value for l in Likelihood]
        consequences = [c.value for c in Consequence]
        grid = [[risk.risk_of(l, c).value for c in Consequence]
                for l in Likelihood]
        return {"likelihoods": likelihoods, "consequences": consequences,
                "grid": grid}

    @app.get("/api/dataset/version")
    def dataset_version():
        return {"version": repository.version}

    # ------------------------------------------------------------- sessions

    @app.post("/api/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        if body.session_id and body.session_id in store.sessions:
            raise ApiError(409, "session_exists",
                           f"session {body.session_id} already exists")
        session = Session(body.name, _migration_type(body.migration_type),
                          repository, session_id=body.session_id)
        store.add(session)
        return _session_summary(session)

    @app.get("/api/sessions")
    def list_sessions():
        return [_session_summary(s) for s in store.sessions.values()]

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str):
        return sessionio.session_to_document(store.get(session_id))

    @app.delete("/api/sessions/{session_id}")
    def delete_session(session_id: str):
        store.delete(session_id)
        return {"deleted": session_id}

    # ------------------------------------------------------------ mutations

    @app.post("/api/sessions/{session_id}/goals")
    def add_goal(session_id: str, body: AddGoalBody):
        session = store.get(session_id)
        _check_revision(session, body.revision)
        node_id = session.add_goal(_pattern(body.pattern), body.descriptor,
                                   body.repo_ref, body.parent)
        store.persist(session)
        return {"revision": session.revision, "created": [node_id]}

    @app.post("/api/sessions/{session_id}/obstacles")
    def attach_obstacle(session_id: str, body: AttachObstacleBody):
        session = store.get(session_id)
        _check_revision(session, body.revision)
        node_id = session.attach_obstacle(body.target, body.origin.to_origin(),
                                          body.name)
        store.persist(session)
        return {"revision": session.revision, "created": [node_id]}

    @app.post("/api/sessions/{session_id}/tactics")
    def attach_tactic(session_id: str, body: AttachTacticBody):
        session = store.get(session_id)
        _check_revision(session, body.revision)
        node_id = session.attach_tactic(body.node, body.tactic, body.note)
        store.persist(session)
        return {"revision": session.revision, "created": [node_id]}

    @app.post("/api/sessions/{session_id}/assess")
    def assess(session_id: str, body: AssessBody):
        session = store.get(session_id)
        _check_revision(session, body.revision)
        assessment = session.assess(
            body.node, _likelihood(body.likelihood),
            _consequence(body.consequence), body.note,
            _risk_level(body.override))
        store.persist(session)
        return {"revision": session.revision,
                "computed": assessment.computed.value,
                "effective": assessment.effective.value}

    @app.post("/api/sessions/{session_id}/reassess")
    def reassess(session_id: str, body: ReassessBody):
        session = store.get(session_id)
        _check_revision(session, body.revision)
        assessment = session.reassess_after_tactic(
            body.node, body.tactic_node, _likelihood(body.likelihood),
            _consequence(body.consequence), body.note)
        store.persist(session)
        return {"revision": session.revision,
                "computed": assessment.computed.value,
                "effective": assessment.effective.value,
                "history_length": len(assessment.history)}

    @app.post("/api/sessions/{session_id}/apply-tactic")
    def apply_tactic(session_id: str, body: ApplyTacticBody):
        session = store.get(session_id)
        _check_revision(session, body.revision)
        reassessment = None
        if body.effects.reassessment is not None:
            r = body.effects.reassessment
            reassessment = (_likelihood(r.likelihood),
                            _consequence(r.consequence), r.note)
        introduced = [
            IntroducedSpec(origin=i.origin.to_origin(), name=i.name,
                           target=i.target)
            for i in body.effects.introduced
        ]
        created = session.apply_tactic(body.node, body.tactic, body.note,
                                       reassessment, introduced)
        store.persist(session)
        return {"revision": session.revision, "created": created}

    # --------------------------------------------------------------- views

    @app.get("/api/sessions/{session_id}/suggestions/obstacles")
    def suggest_obstacles(session_id: str):
        session = store.get(session_id)
        try:
            suggestions = session.suggest_obstacles()
        except SessionError as exc:
            raise ApiError(400, "no_linked_goals", str(exc))
        return [_suggestion_payload(s) for s in suggestions]

    @app.get("/api/sessions/{session_id}/suggestions/tactics")
    def suggest_tactics(session_id: str, node: str):
        session = store.get(session_id)
        return [_suggestion_payload(s) for s in session.suggest_tactics(node)]

    @app.get("/api/sessions/{session_id}/check")
    def check(session_id: str, threshold: str = "high"):
        session = store.get(session_id)
        if threshold not in _THRESHOLDS:
            raise ApiError(400, "invalid_threshold",
                           f"unknown threshold {threshold!r}; expected one of "
                           + ", ".join(sorted(_THRESHOLDS)))
        report = risk.coverage_check(session.model, _THRESHOLDS[threshold])
        return {
            "threshold": report.threshold.value,
            "verdicts": [
                {"node": v.node_id, "name": v.name, "verdict": v.verdict,
                 "reason": v.reason,
                 "effective_risk": v.effective_risk.value
                 if v.effective_risk else None}
                for v in report.verdicts
            ],
            "violations": list(report.violations),
            "ok": report.ok,
        }

    @app.get("/api/sessions/{session_id}/export/dot")
    def export_dot(session_id: str, show_risk: bool = False,
                   show_ids: bool = False):
        session = store.get(session_id)
        text = dot.export_dot(session.model, show_risk=show_risk,
                              show_ids=show_ids)
        return PlainTextResponse(text, media_type="text/vnd.graphviz")

    @app.get("/api/sessions/{session_id}/audit")
    def audit(session_id: str):
        session = store.get(session_id)
        return [
            {"step": e.step, "action": e.action, "subject": list(e.subject),
             "timestamp": e.timestamp, "revision": e.revision, "note": e.note,
             "details": e.details}
            for e in session.audit
        ]

    # ------------------------------------------------------------ UI assets

    assets = ui_dir or os.environ.get("CLOUDGATE_UI_DIR")
    if assets is None:
        packaged = Path(__file__).parent / "webui"
        assets = str(packaged) if packaged.is_dir() else None
    if assets is not None and Path(assets).is_dir():
        app.mount("/", StaticFiles(directory=assets, html=True), name="ui")

    return app


def serve(port: int = DEFAULT_PORT, dataset: Optional[str] = None,
          sessions_dir: Optional[str] = None,
          ui_dir: Optional[str] = None) -> None:
    """Run the HTTP service; refuses to start when the dataset fails to load."""
    import uvicorn

    app = create_app(dataset=dataset, sessions_dir=sessions_dir, ui_dir=ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=port, log_level="warning")
