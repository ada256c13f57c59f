"""Session engine for the identify-assess-resolve procedure.

A session wraps one goal model, pins the repository version it was built
against, and keeps an append-only audit log in which every entry is a
replayable command. Mutations are atomic: a failing operation leaves the
session untouched (revision, model, and audit included), which is what lets
the HTTP layer hand out optimistic-concurrency guarantees per session.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from . import risk
from .errors import ModelError, SessionError
from .model import GoalModel, GoalPattern, MigrationType, Origin, OriginKind, new_model
from .repository import Repository, numeric_id
from .risk import Consequence, Likelihood, RiskLevel

STEP_GOALS = "1"
STEP_IDENTIFY = "2.1"
STEP_ASSESS = "2.2"
STEP_RESOLVE = "2.3"


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat()


@dataclass(frozen=True)
class AuditEntry:
    step: str
    action: str
    subject: Tuple[str, ...]
    timestamp: str
    revision: int
    note: str = ""
    details: Dict = field(default_factory=dict)


@dataclass(frozen=True)
class Suggestion:
    kind: str  # "obstacle" | "tactic"
    repo_id: str
    matched_goals: int
    study_count: int
    universal: bool
    rationale: str


@dataclass(frozen=True)
class IntroducedSpec:
    """Attachment spec for an obstacle raised by applying a tactic.

    ``target`` defaults to the obstacle the tactic resolves, matching the
    refinement loop where a tackled obstacle splits into new sub-obstacles.
    """

    origin: Origin
    name: Optional[str] = None
    target: Optional[str] = None


@dataclass(frozen=True)
class StepStatus:
    goals: int
    unobstructed_goals: int
    unassessed_obstacles: int
    uncovered_obstacles: int
    last_step: Optional[str]


class Session:
    def __init__(self, name: str, migration_type: MigrationType,
                 repository: Repository, session_id: Optional[str] = None,
                 clock: Optional[Callable[[], str]] = None):
        if not isinstance(migration_type, MigrationType):
            raise SessionError(f"invalid migration type {migration_type!r}")
        self.session_id = session_id or uuid.uuid4().hex
        self.clock = clock or _utc_now
        self.repository = repository
        self.repository_version = repository.version
        self.model = new_model(name, migration_type, repository)
        self.audit: List[AuditEntry] = []
        self.revision = 0
        self._log(STEP_GOALS, "session_started", (), "session started",
                  {"name": name, "migration_type": migration_type.value})

    @property
    def name(self) -> str:
        return self.model.name

    def _log(self, step: str, action: str, subject: Sequence[str],
             note: str = "", details: Optional[Dict] = None) -> None:
        self.audit.append(AuditEntry(
            step=step, action=action, subject=tuple(subject),
            timestamp=self.clock(), revision=self.revision, note=note,
            details=details or {}))

    def _mutate(self, fn, entries_fn):
        """Run ``fn`` on a model clone; commit model, revision, audit on success."""
        work = self.model.clone()
        result = fn(work)
        self.model = work
        self.revision += 1
        for step, action, subject, note, details in entries_fn(result):
            self._log(step, action, subject, note, details)
        return result

    # ------------------------------------------------------------- step 1

    def add_goal(self, pattern: GoalPattern, descriptor: str,
                 repo_ref: Optional[str] = None,
                 parent: Optional[str] = None) -> str:
        details = {"pattern": pattern.value, "descriptor": descriptor,
                   "repo_ref": repo_ref, "parent": parent}
        return self._mutate(
            lambda m: m.add_goal(pattern, descriptor, repo_ref, parent),
            lambda nid: [(STEP_GOALS, "add_goal", (nid,),
                          f"goal {pattern.value} [{descriptor}]", details)])

    # ----------------------------------------------------------- step 2.1

    def attach_obstacle(self, target: str, origin: Origin,
                        name: Optional[str] = None) -> str:
        details = {"target": target, "origin": origin.kind.value,
                   "repo_ref": origin.repo_ref, "name": name}
        return self._mutate(
            lambda m: m.attach_obstacle(target, origin, name),
            lambda nid: [(STEP_IDENTIFY, "attach_obstacle", (nid,),
                          "obstacle identified", details)])

    def rename_obstacle(self, node_id: str, name: str) -> None:
        details = {"node": node_id, "name": name}
        self._mutate(
            lambda m: m.rename_obstacle(node_id, name),
            lambda _: [(STEP_IDENTIFY, "rename_obstacle", (node_id,),
                        f"renamed to {name}", details)])

    def remove_subtree(self, node_id: str) -> int:
        if node_id in self.model.goal_nodes:
            step = STEP_GOALS
        elif node_id in self.model.tactic_nodes:
            step = STEP_RESOLVE
        else:
            step = STEP_IDENTIFY
        details = {"node": node_id}
        return self._mutate(
            lambda m: m.remove_subtree(node_id),
            lambda count: [(step, "remove_subtree", (node_id,),
                            f"removed {count} nodes", details)])

    # ----------------------------------------------------------- step 2.2

    def assess(self, node_id: str, likelihood: Likelihood,
               consequence: Consequence, note: str = "",
               override: Optional[RiskLevel] = None) -> risk.RiskAssessment:
        details = {"node": node_id, "likelihood": likelihood.value,
                   "consequence": consequence.value, "note": note,
                   "override": override.value if override else None}
        return self._mutate(
            lambda m: risk.assess(m, node_id, likelihood, consequence, note,
                                  override),
            lambda a: [(STEP_ASSESS, "assess", (node_id,),
                        f"risk {a.effective.value}", details)])

    def reassess_after_tactic(self, node_id: str, tactic_node_id: str,
                              likelihood: Likelihood, consequence: Consequence,
                              note: str = "") -> risk.RiskAssessment:
        details = {"node": node_id, "tactic_node": tactic_node_id,
                   "likelihood": likelihood.value,
                   "consequence": consequence.value, "note": note}
        return self._mutate(
            lambda m: risk.reassess_after_tactic(m, node_id, tactic_node_id,
                                                 likelihood, consequence, note),
            lambda a: [(STEP_ASSESS, "reassess_after_tactic", (node_id,),
                        f"risk {a.effective.value} after {tactic_node_id}",
                        details)])

    # ----------------------------------------------------------- step 2.3

    def attach_tactic(self, node_id: str, tactic_id: str, note: str = "") -> str:
        details = {"node": node_id, "tactic": tactic_id, "note": note}
        return self._mutate(
            lambda m: m.attach_tactic(node_id, tactic_id, note),
            lambda tid: [(STEP_RESOLVE, "attach_tactic", (tid,),
                          f"{tactic_id} on {node_id}", details)])

    def apply_tactic(self, node_id: str, tactic_id: str, note: str = "",
                     reassessment: Optional[Tuple[Likelihood, Consequence, str]] = None,
                     introduced: Sequence[IntroducedSpec] = ()) -> List[str]:
        """Attach a tactic with its consequences, all-or-nothing.

        Optionally re-rates the obstacle (the prior assessment is kept in
        history, tagged with the new tactic node) and attaches the obstacles
        the tactic raises, re-entering step 2.1 for each of them.
        """
        def run(m: GoalModel):
            tactic_node = m.attach_tactic(node_id, tactic_id, note)
            new_assessment = None
            if reassessment is not None:
                lik, cons, why = reassessment
                new_assessment = risk.reassess_after_tactic(
                    m, node_id, tactic_node, lik, cons, why)
            created = [tactic_node]
            for spec in introduced:
                target = spec.target or node_id
                obstacle_node = m.attach_obstacle(target, spec.origin, spec.name)
                m.obstacle_nodes[obstacle_node].introduced_by = tactic_node
                m.tactic_nodes[tactic_node].introduced.append(obstacle_node)
                created.append(obstacle_node)
            return created, new_assessment

        def entries(result):
            created, new_assessment = result
            tactic_node = created[0]
            out = [(STEP_RESOLVE, "attach_tactic", (tactic_node,),
                    f"{tactic_id} on {node_id}",
                    {"node": node_id, "tactic": tactic_id, "note": note})]
            if reassessment is not None:
                lik, cons, why = reassessment
                out.append((STEP_ASSESS, "reassess_after_tactic", (node_id,),
                            f"risk {new_assessment.effective.value} after "
                            f"{tactic_node}",
                            {"node": node_id, "tactic_node": tactic_node,
                             "likelihood": lik.value, "consequence": cons.value,
                             "note": why}))
            for spec, obstacle_node in zip(introduced, created[1:]):
                out.append((STEP_IDENTIFY, "attach_obstacle", (obstacle_node,),
                            f"introduced by {tactic_node}",
                            {"target": spec.target or node_id,
                             "origin": spec.origin.kind.value,
                             "repo_ref": spec.origin.repo_ref,
                             "name": spec.name,
                             "introduced_by": tactic_node}))
            return out

        created, _ = self._mutate(run, entries)
        return created

    # ------------------------------------------------------------- queries

    def _matching_goals(self, impacted: Sequence[str]) -> List[str]:
        return [gid for gid, g in self.model.goal_nodes.items()
                if g.repo_ref in impacted]

    def _subtree_evidential(self, goal_id: str) -> set:
        found = set()

        def walk_obstacle(oid: str):
            node = self.model.obstacle_nodes[oid]
            if node.origin.kind is OriginKind.EVIDENTIAL:
                found.add(node.origin.repo_ref)
            for child in node.children:
                walk_obstacle(child)

        def walk_goal(gid: str):
            goal = self.model.goal_nodes[gid]
            for oid in goal.obstacles:
                walk_obstacle(oid)
            for child in goal.children:
                walk_goal(child)

        walk_goal(goal_id)
        return found

    def suggest_obstacles(self) -> List[Suggestion]:
        """Repository obstacles worth shortlisting for the current model.

        A candidate must impact a repository-linked model goal, apply to the
        session's migration type, and not already be instantiated under any
        matching goal. Ranked by matched goals, then evidence weight, then id.
        """
        linked = {g.repo_ref for g in self.model.goal_nodes.values() if g.repo_ref}
        if not linked:
            raise SessionError(
                "no repository-linked goals in the model; add goals with a "
                "repository reference (G1-G10) before asking for suggestions")
        mtype = self.model.migration_type.value
        out = []
        for entry in self.repository.obstacles:
            matched_refs = sorted(set(entry.impacted_goals) & linked,
                                  key=numeric_id)
            if not matched_refs:
                continue
            if mtype not in entry.migration_types:
                continue
            matching_goal_nodes = self._matching_goals(entry.impacted_goals)
            already = set()
            for gid in matching_goal_nodes:
                already |= self._subtree_evidential(gid)
            if entry.id in already:
                continue
            goal_names = ", ".join(
                self.model.goal_nodes[g].name for g in matching_goal_nodes)
            out.append(Suggestion(
                kind="obstacle", repo_id=entry.id,
                matched_goals=len(matched_refs),
                study_count=len(entry.source_studies),
                universal=False,
                rationale=(f"impacts {', '.join(matched_refs)} ({goal_names}) "
                           f"under migration type {mtype}")))
        out.sort(key=lambda s: (-s.matched_goals, -s.study_count,
                                numeric_id(s.repo_id)))
        return out

    def suggest_tactics(self, node_id: str) -> List[Suggestion]:
        """Resolution tactics for one obstacle node: specific first, then universal.

        Domain obstacles inherit the catalogue relations of their nearest
        repository ancestor. A novel obstacle with no repository ancestor gets
        the universal tactics only, with the rationale saying so.
        """
        node = self.model.obstacle_node(node_id)
        origin_ref = self.model.repo_origin(node_id)
        attached = {self.model.tactic_nodes[t].repo_ref for t in node.resolutions}
        specific, universal = [], []
        for entry in self.repository.tactics:
            if entry.id in attached:
                continue
            related = origin_ref is not None and origin_ref in entry.related_obstacles
            if related:
                specific.append(Suggestion(
                    kind="tactic", repo_id=entry.id, matched_goals=0,
                    study_count=len(entry.source_studies), universal=False,
                    rationale=f"catalogued for {origin_ref}"))
            elif entry.universal:
                universal.append(Suggestion(
                    kind="tactic", repo_id=entry.id, matched_goals=0,
                    study_count=len(entry.source_studies), universal=True,
                    rationale=("applicable to all obstacles"
                               if origin_ref is not None else
                               "novel obstacle with no repository ancestor; "
                               "universal tactics only")))
        key = lambda s: (-s.study_count, numeric_id(s.repo_id))
        return sorted(specific, key=key) + sorted(universal, key=key)

    def step_status(self, threshold: RiskLevel = RiskLevel.HIGH) -> StepStatus:
        report = risk.coverage_check(self.model, threshold)
        return StepStatus(
            goals=len(self.model.goal_nodes),
            unobstructed_goals=sum(
                1 for g in self.model.goal_nodes.values() if not g.obstacles),
            unassessed_obstacles=len(report.unassessed),
            uncovered_obstacles=len(report.uncovered),
            last_step=self.audit[-1].step if self.audit else None)


def start_session(name: str, migration_type: MigrationType,
                  repository: Repository, session_id: Optional[str] = None,
                  clock: Optional[Callable[[], str]] = None) -> Session:
    return Session(name, migration_type, repository, session_id, clock)


def replay_audit(entries: Sequence[AuditEntry], repository: Repository,
                 session_id: Optional[str] = None) -> Session:
    """Rebuild a session from its audit log; the log is a command journal.

    The replayed session carries the original entries verbatim and a model
    equivalent to the one the log was recorded from.
    """
    if not entries or entries[0].action != "session_started":
        raise SessionError("audit log must start with a session_started entry")
    first = entries[0].details
    session = Session(first["name"], MigrationType(first["migration_type"]),
                      repository, session_id=session_id)
    model = session.model
    for entry in entries[1:]:
        d = entry.details
        action = entry.action
        if action == "add_goal":
            model.add_goal(GoalPattern(d["pattern"]), d["descriptor"],
                           d.get("repo_ref"), d.get("parent"))
        elif action == "attach_obstacle":
            origin = (Origin.evidential(d["repo_ref"])
                      if d["origin"] == OriginKind.EVIDENTIAL.value
                      else Origin.domain(d.get("repo_ref")))
            node_id = model.attach_obstacle(d["target"], origin, d.get("name"))
            tactic_node = d.get("introduced_by")
            if tactic_node:
                model.obstacle_nodes[node_id].introduced_by = tactic_node
                model.tactic_nodes[tactic_node].introduced.append(node_id)
        elif action == "rename_obstacle":
            model.rename_obstacle(d["node"], d["name"])
        elif action == "remove_subtree":
            model.remove_subtree(d["node"])
        elif action == "assess":
            risk.assess(model, d["node"], Likelihood(d["likelihood"]),
                        Consequence(d["consequence"]), d.get("note", ""),
                        RiskLevel(d["override"]) if d.get("override") else None)
        elif action == "reassess_after_tactic":
            risk.reassess_after_tactic(
                model, d["node"], d["tactic_node"], Likelihood(d["likelihood"]),
                Consequence(d["consequence"]), d.get("note", ""))
        elif action == "attach_tactic":
            model.attach_tactic(d["node"], d["tactic"], d.get("note", ""))
        else:
            raise SessionError(f"audit log contains unknown action {action!r}")
    session.audit = list(entries)
    session.revision = entries[-1].revision
    return session
