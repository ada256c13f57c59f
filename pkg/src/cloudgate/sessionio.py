"""Session persistence: one JSON document per session, written after each mutation.

The document embeds the whole model as a nested node tree (edges are implied
by nesting plus explicit references), the append-only audit log, and the
repository version the session is pinned to. Reading is strict: the format
version must match and unknown fields are rejected, so a document written by
a future revision of the tool never half-loads.
"""

from __future__ import annotations

import json
from typing import Dict, List, Optional, Tuple

from .errors import SessionDocumentError
from .model import (GoalModel, GoalNode, GoalPattern, MigrationType, ObstacleNode,
                    Origin, OriginKind, TacticNode)
from .procedure import AuditEntry, Session
from .repository import Repository
from .risk import (Consequence, HistoryEntry, Likelihood, RiskAssessment,
                   RiskLevel, risk_of)

FORMAT_VERSION = 1

_TOP_KEYS = {"format_version", "session_id", "name", "migration_type",
             "repository_version", "revision", "model", "audit"}
_GOAL_KEYS = {"id", "pattern", "descriptor", "repo_ref", "children", "obstacles"}
_OBSTACLE_KEYS = {"id", "name", "origin", "assessment", "children", "tactics",
                  "introduced_by"}
_TACTIC_KEYS = {"id", "repo_ref", "note", "introduced"}
_ASSESSMENT_KEYS = {"likelihood", "consequence", "override", "note", "history"}
_HISTORY_KEYS = {"likelihood", "consequence", "override", "note", "tactic_node"}
_AUDIT_KEYS = {"step", "action", "subject", "timestamp", "revision", "note",
               "details"}


def _assessment_doc(a: RiskAssessment) -> Dict:
    return {
        "likelihood": a.likelihood.value,
        "consequence": a.consequence.value,
        "override": a.override.value if a.override else None,
        "note": a.note,
        "history": [
            {"likelihood": h.likelihood.value, "consequence": h.consequence.value,
             "override": h.override.value if h.override else None,
             "note": h.note, "tactic_node": h.tactic_node}
            for h in a.history
        ],
    }


def _tactic_doc(model: GoalModel, node_id: str) -> Dict:
    node = model.tactic_nodes[node_id]
    return {"id": node.node_id, "repo_ref": node.repo_ref, "note": node.note,
            "introduced": list(node.introduced)}


def _obstacle_doc(model: GoalModel, node_id: str) -> Dict:
    node = model.obstacle_nodes[node_id]
    return {
        "id": node.node_id,
        "name": node.name,
        "origin": {"kind": node.origin.kind.value,
                   "repo_ref": node.origin.repo_ref},
        "assessment": (_assessment_doc(node.assessment)
                       if node.assessment else None),
        "children": [_obstacle_doc(model, c) for c in node.children],
        "tactics": [_tactic_doc(model, t) for t in node.resolutions],
        "introduced_by": node.introduced_by,
    }


def _goal_doc(model: GoalModel, node_id: str) -> Dict:
    node = model.goal_nodes[node_id]
    return {
        "id": node.node_id,
        "pattern": node.pattern.value,
        "descriptor": node.descriptor,
        "repo_ref": node.repo_ref,
        "children": [_goal_doc(model, c) for c in node.children],
        "obstacles": [_obstacle_doc(model, o) for o in node.obstacles],
    }


def session_to_document(session: Session) -> Dict:
    return {
        "format_version": FORMAT_VERSION,
        "session_id": session.session_id,
        "name": session.name,
        "migration_type": session.model.migration_type.value,
        "repository_version": session.repository_version,
        "revision": session.revision,
        "model": {"goals": [_goal_doc(session.model, g)
                            for g in session.model.root_goals]},
        "audit": [
            {"step": e.step, "action": e.action, "subject": list(e.subject),
             "timestamp": e.timestamp, "revision": e.revision, "note": e.note,
             "details": e.details}
            for e in session.audit
        ],
    }


def _check_keys(doc: Dict, allowed: set, where: str) -> None:
    unknown = set(doc) - allowed
    if unknown:
        raise SessionDocumentError(
            f"{where}: unknown field(s) {sorted(unknown)}")


def _need(doc: Dict, key: str, where: str):
    if key not in doc:
        raise SessionDocumentError(f"{where}: missing field '{key}'")
    return doc[key]


def _parse_assessment(doc: Dict, where: str) -> RiskAssessment:
    _check_keys(doc, _ASSESSMENT_KEYS, where)
    try:
        likelihood = Likelihood(_need(doc, "likelihood", where))
        consequence = Consequence(_need(doc, "consequence", where))
        override = RiskLevel(doc["override"]) if doc.get("override") else None
    except ValueError as exc:
        raise SessionDocumentError(f"{where}: {exc}") from exc
    history = []
    for i, h in enumerate(doc.get("history", [])):
        hw = f"{where}.history[{i}]"
        _check_keys(h, _HISTORY_KEYS, hw)
        try:
            hl = Likelihood(_need(h, "likelihood", hw))
            hc = Consequence(_need(h, "consequence", hw))
            ho = RiskLevel(h["override"]) if h.get("override") else None
        except ValueError as exc:
            raise SessionDocumentError(f"{hw}: {exc}") from exc
        history.append(HistoryEntry(
            likelihood=hl, consequence=hc, computed=risk_of(hl, hc),
            override=ho, note=h.get("note", ""),
            tactic_node=h.get("tactic_node")))
    note = doc.get("note", "")
    if override is not None and not note.strip():
        raise SessionDocumentError(f"{where}: override requires a note")
    return RiskAssessment(
        likelihood=likelihood, consequence=consequence,
        computed=risk_of(likelihood, consequence), note=note,
        override=override, history=tuple(history))


def _load_tactic(model: GoalModel, doc: Dict, obstacle_id: str, where: str) -> str:
    _check_keys(doc, _TACTIC_KEYS, where)
    node_id = _need(doc, "id", where)
    if node_id in model.tactic_nodes:
        raise SessionDocumentError(f"{where}: duplicate tactic node id {node_id}")
    model.tactic_nodes[node_id] = TacticNode(
        node_id=node_id, repo_ref=_need(doc, "repo_ref", where),
        obstacle=obstacle_id, note=doc.get("note", ""),
        introduced=list(doc.get("introduced", [])))
    return node_id


def _load_obstacle(model: GoalModel, doc: Dict, parent: Tuple[str, str],
                   where: str) -> str:
    _check_keys(doc, _OBSTACLE_KEYS, where)
    node_id = _need(doc, "id", where)
    if node_id in model.obstacle_nodes:
        raise SessionDocumentError(f"{where}: duplicate obstacle node id {node_id}")
    origin_doc = _need(doc, "origin", where)
    try:
        origin = Origin(OriginKind(_need(origin_doc, "kind", f"{where}.origin")),
                        origin_doc.get("repo_ref"))
    except ValueError as exc:
        raise SessionDocumentError(f"{where}.origin: {exc}") from exc
    node = ObstacleNode(node_id=node_id, name=_need(doc, "name", where),
                        origin=origin, parent=parent,
                        introduced_by=doc.get("introduced_by"))
    if doc.get("assessment") is not None:
        node.assessment = _parse_assessment(doc["assessment"],
                                            f"{where}.assessment")
    model.obstacle_nodes[node_id] = node
    for i, child in enumerate(doc.get("children", [])):
        cid = _load_obstacle(model, child, ("obstacle", node_id),
                             f"{where}.children[{i}]")
        node.children.append(cid)
    for i, tactic in enumerate(doc.get("tactics", [])):
        tid = _load_tactic(model, tactic, node_id, f"{where}.tactics[{i}]")
        node.resolutions.append(tid)
    return node_id


def _load_goal(model: GoalModel, doc: Dict, parent: Optional[str],
               where: str) -> str:
    _check_keys(doc, _GOAL_KEYS, where)
    node_id = _need(doc, "id", where)
    if node_id in model.goal_nodes:
        raise SessionDocumentError(f"{where}: duplicate goal node id {node_id}")
    try:
        pattern = GoalPattern(_need(doc, "pattern", where))
    except ValueError as exc:
        raise SessionDocumentError(f"{where}: {exc}") from exc
    node = GoalNode(node_id=node_id, pattern=pattern,
                    descriptor=_need(doc, "descriptor", where),
                    repo_ref=doc.get("repo_ref"), parent=parent)
    model.goal_nodes[node_id] = node
    for i, child in enumerate(doc.get("children", [])):
        cid = _load_goal(model, child, node_id, f"{where}.children[{i}]")
        node.children.append(cid)
    for i, obstacle in enumerate(doc.get("obstacles", [])):
        oid = _load_obstacle(model, obstacle, ("goal", node_id),
                             f"{where}.obstacles[{i}]")
        node.obstacles.append(oid)
    return node_id


def _restore_sequences(model: GoalModel) -> None:
    def max_seq(ids, prefix):
        best = 0
        for node_id in ids:
            if node_id.startswith(prefix) and node_id[len(prefix):].isdigit():
                best = max(best, int(node_id[len(prefix):]))
        return best

    model._goal_seq = max_seq(model.goal_nodes, "g")
    model._tactic_seq = max_seq(model.tactic_nodes, "t")


def session_from_document(doc: Dict, repository: Repository
                          ) -> Tuple[Session, List[str]]:
    """Rebuild a session from its document; returns load warnings.

    A repository version mismatch degrades to a warning as long as every
    catalogue reference in the model still resolves.
    """
    if not isinstance(doc, dict):
        raise SessionDocumentError("session document must be a JSON object")
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise SessionDocumentError(
            f"unsupported format_version {version!r}, expected {FORMAT_VERSION}")
    _check_keys(doc, _TOP_KEYS, "document")
    for key in ("session_id", "name", "migration_type", "repository_version",
                "revision", "model", "audit"):
        _need(doc, key, "document")
    if not isinstance(doc["revision"], int):
        raise SessionDocumentError("document: 'revision' must be an integer")

    warnings: List[str] = []
    if doc["repository_version"] != repository.version:
        warnings.append(
            f"session was recorded against dataset version "
            f"{doc['repository_version']!r} but {repository.version!r} is "
            "loaded; proceeding because all references resolve")

    try:
        migration_type = MigrationType(doc["migration_type"])
    except ValueError as exc:
        raise SessionDocumentError(f"document: {exc}") from exc

    session = Session(doc["name"], migration_type, repository,
                      session_id=doc["session_id"])
    model = session.model
    model_doc = doc["model"]
    if not isinstance(model_doc, dict) or set(model_doc) - {"goals"}:
        raise SessionDocumentError("document: 'model' must be {'goals': [...]}")
    for i, goal in enumerate(model_doc.get("goals", [])):
        gid = _load_goal(model, goal, None, f"model.goals[{i}]")
        model.root_goals.append(gid)
    _restore_sequences(model)

    violations = model.validate_structure()
    if violations:
        raise SessionDocumentError(
            "session document model is invalid: " + "; ".join(violations))

    audit: List[AuditEntry] = []
    for i, e in enumerate(doc["audit"]):
        where = f"audit[{i}]"
        _check_keys(e, _AUDIT_KEYS, where)
        audit.append(AuditEntry(
            step=str(_need(e, "step", where)),
            action=_need(e, "action", where),
            subject=tuple(e.get("subject", [])),
            timestamp=_need(e, "timestamp", where),
            revision=int(_need(e, "revision", where)),
            note=e.get("note", ""),
            details=e.get("details", {})))
    session.audit = audit
    session.revision = doc["revision"]
    session.repository_version = doc["repository_version"]
    return session, warnings


def write_session(session: Session, path: str) -> None:
    doc = session_to_document(session)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, ensure_ascii=False)
        fh.write("\n")


def read_session(path: str, repository: Repository) -> Tuple[Session, List[str]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SessionDocumentError(f"cannot read session {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SessionDocumentError(f"{path} is not valid JSON: {exc}") from exc
    return session_from_document(doc, repository)
