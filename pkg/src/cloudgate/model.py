"""Typed goal-obstacle graph: goal, obstacle, and tactic nodes plus validation.

Nodes form a forest rooted in goals, with AND-decomposition between goals,
obstruction edges from obstacles to the goal they threaten, refinement edges
between obstacles, and resolution edges from obstacles to tactics. The graph
is always acyclic after public operations; validate_structure re-checks every
invariant so externally loaded or hand-mutated models can be vetted too.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from .errors import ModelError
from .repository import Repository
from .risk import RiskAssessment


class MigrationType(enum.Enum):
    """The five ways a legacy system can be made cloud-enabled.

    I  - business logic layer on cloud infrastructure, data kept on premises
    II - components replaced by ready-made cloud services
    III - database moved into a cloud data store
    IV - database converted to a cloud database solution
    V  - whole system stack encapsulated in virtual machines
    """

    I = "I"
    II = "II"
    III = "III"
    IV = "IV"
    V = "V"


class GoalPattern(enum.Enum):
    ACHIEVE = "Achieve"
    MAINTAIN = "Maintain"
    AVOID = "Avoid"


class OriginKind(enum.Enum):
    EVIDENTIAL = "evidential"
    DOMAIN = "domain"


@dataclass(frozen=True)
class Origin:
    """Where an obstacle node came from.

    Evidential nodes instantiate a repository obstacle directly; domain nodes
    are scenario-specific, optionally refining a repository obstacle (their
    ancestor). The repository link never changes after creation.
    """

    kind: OriginKind
    repo_ref: Optional[str] = None  # evidential O-id, or domain ancestor O-id

    @staticmethod
    def evidential(oid: str) -> "Origin":
        return Origin(OriginKind.EVIDENTIAL, oid)

    @staticmethod
    def domain(ancestor: Optional[str] = None) -> "Origin":
        return Origin(OriginKind.DOMAIN, ancestor)


@dataclass
class GoalNode:
    node_id: str
    pattern: GoalPattern
    descriptor: str
    repo_ref: Optional[str] = None
    parent: Optional[str] = None
    children: List[str] = field(default_factory=list)   # AND-decomposition
    obstacles: List[str] = field(default_factory=list)  # direct obstructions

    @property
    def name(self) -> str:
        return f"{self.pattern.value} [{self.descriptor}]"


@dataclass
class ObstacleNode:
    node_id: str
    name: str
    origin: Origin
    parent: Tuple[str, str]  # ("goal"|"obstacle", node id)
    children: List[str] = field(default_factory=list)    # refinement
    resolutions: List[str] = field(default_factory=list)
    assessment: Optional[RiskAssessment] = None
    introduced_by: Optional[str] = None  # tactic node that raised this obstacle


@dataclass
class TacticNode:
    node_id: str
    repo_ref: str
    obstacle: str
    note: str = ""
    introduced: List[str] = field(default_factory=list)


_EVIDENTIAL_ID_RE = re.compile(r"^O[0-9]+$")


class GoalModel:
    """Single-writer model value; reads may run concurrently between mutations."""

    def __init__(self, name: str, migration_type: MigrationType,
                 repository: Optional[Repository] = None):
        if not name:
            raise ModelError("model name must be non-empty")
        self.name = name
        self.migration_type = migration_type
        self.repository = repository
        self.goal_nodes: Dict[str, GoalNode] = {}
        self.obstacle_nodes: Dict[str, ObstacleNode] = {}
        self.tactic_nodes: Dict[str, TacticNode] = {}
        self.root_goals: List[str] = []
        self._goal_seq = 0
        self._tactic_seq = 0

    # ---------------------------------------------------------------- lookup

    def goal_node(self, node_id: str) -> GoalNode:
        node = self.goal_nodes.get(node_id)
        if node is None:
            raise ModelError(f"unknown goal node {node_id}")
        return node

    def obstacle_node(self, node_id: str) -> ObstacleNode:
        node = self.obstacle_nodes.get(node_id)
        if node is None:
            raise ModelError(f"unknown obstacle node {node_id}")
        return node

    def tactic_node(self, node_id: str) -> TacticNode:
        node = self.tactic_nodes.get(node_id)
        if node is None:
            raise ModelError(f"unknown tactic node {node_id}")
        return node

    def node_count(self) -> int:
        return len(self.goal_nodes) + len(self.obstacle_nodes) + len(self.tactic_nodes)

    def _all_ids(self):
        yield from self.goal_nodes
        yield from self.obstacle_nodes
        yield from self.tactic_nodes

    def repo_origin(self, node_id: str) -> Optional[str]:
        """Nearest repository O-id on the node's origin chain, if any."""
        node = self.obstacle_node(node_id)
        while True:
            if node.origin.repo_ref is not None:
                return node.origin.repo_ref
            kind, parent_id = node.parent
            if kind != "obstacle":
                return None
            node = self.obstacle_nodes[parent_id]

    # ------------------------------------------------------------- mutation

    def add_goal(self, pattern: GoalPattern, descriptor: str,
                 repo_ref: Optional[str] = None,
                 parent: Optional[str] = None) -> str:
        descriptor = descriptor.strip()
        if not descriptor:
            raise ModelError("goal descriptor must be non-empty")
        if repo_ref is not None and self.repository is not None \
                and self.repository.goal(repo_ref) is None:
            raise ModelError(f"unknown repository goal {repo_ref}")
        parent_node = None
        if parent is not None:
            if parent not in self.goal_nodes:
                if parent in self.obstacle_nodes or parent in self.tactic_nodes:
                    raise ModelError(f"parent {parent} is not a goal node")
                raise ModelError(f"unknown goal node {parent}")
            parent_node = self.goal_nodes[parent]
        self._goal_seq += 1
        node_id = f"g{self._goal_seq}"
        node = GoalNode(node_id=node_id, pattern=pattern, descriptor=descriptor,
                        repo_ref=repo_ref, parent=parent)
        self.goal_nodes[node_id] = node
        if parent_node is not None:
            parent_node.children.append(node_id)
        else:
            self.root_goals.append(node_id)
        return node_id

    def _evidential_node_id(self, oid: str) -> str:
        if oid not in self.obstacle_nodes:
            return oid
        n = 2
        while f"{oid}.{n}" in self.obstacle_nodes:
            n += 1
        return f"{oid}.{n}"

    def _domain_node_id(self, parent: Optional[ObstacleNode]) -> str:
        if parent is None:
            # novel obstacle directly under a goal
            ordinals = [int(m.group(1)) for m in
                        (re.match(r"^N([0-9]+)$", i) for i in self.obstacle_nodes)
                        if m]
            return f"N{max(ordinals, default=0) + 1}"
        prefix = parent.node_id + "_"
        ordinals = [0]
        for child_id in parent.children:
            if child_id.startswith(prefix):
                tail = child_id[len(prefix):]
                if tail.isdigit():
                    ordinals.append(int(tail))
        return f"{prefix}{max(ordinals) + 1}"

    def attach_obstacle(self, target: str, origin: Origin,
                        name: Optional[str] = None) -> str:
        """Attach an obstacle obstructing a goal or refining another obstacle."""
        if target in self.goal_nodes:
            target_kind = "goal"
            target_goal: Optional[GoalNode] = self.goal_nodes[target]
            target_obstacle: Optional[ObstacleNode] = None
        elif target in self.obstacle_nodes:
            target_kind = "obstacle"
            target_goal = None
            target_obstacle = self.obstacle_nodes[target]
        else:
            raise ModelError(f"unknown target node {target}")
        if name is not None and not name.strip():
            raise ModelError("obstacle name must be non-blank")

        if origin.kind is OriginKind.EVIDENTIAL:
            oid = origin.repo_ref
            if oid is None or not _EVIDENTIAL_ID_RE.match(oid):
                raise ModelError(f"evidential origin needs an O-id, got {oid!r}")
            entry = self.repository.obstacle(oid) if self.repository else None
            if self.repository is not None and entry is None:
                raise ModelError(f"unknown repository obstacle {oid}")
            siblings = target_goal.obstacles if target_goal else target_obstacle.children
            for sibling in siblings:
                existing = self.obstacle_nodes[sibling]
                if existing.origin.kind is OriginKind.EVIDENTIAL \
                        and existing.origin.repo_ref == oid:
                    raise ModelError(
                        f"obstacle {oid} is already attached to {target}")
            node_id = self._evidential_node_id(oid)
            node_name = name or (entry.name if entry else oid)
        else:
            if not name:
                raise ModelError("a domain obstacle needs a name")
            ancestor = origin.repo_ref
            if ancestor is not None:
                if target_obstacle is None:
                    raise ModelError(
                        "a domain ancestor requires an obstacle target")
                chain = self.repo_origin(target_obstacle.node_id)
                if chain != ancestor:
                    raise ModelError(
                        f"ancestor {ancestor} is not on the origin chain of {target}")
            elif target_obstacle is not None:
                # refinement inherits the nearest repository ancestor
                origin = Origin.domain(self.repo_origin(target_obstacle.node_id))
            node_id = self._domain_node_id(target_obstacle)
            node_name = name

        node = ObstacleNode(node_id=node_id, name=node_name, origin=origin,
                            parent=(target_kind, target))
        self.obstacle_nodes[node_id] = node
        if target_goal is not None:
            target_goal.obstacles.append(node_id)
        else:
            target_obstacle.children.append(node_id)
        return node_id

    def attach_tactic(self, obstacle_id: str, repo_ref: str, note: str = "") -> str:
        node = self.obstacle_node(obstacle_id)
        if self.repository is not None and self.repository.tactic(repo_ref) is None:
            raise ModelError(f"unknown repository tactic {repo_ref}")
        if repo_ref == "T41" and not note.strip():
            raise ModelError("accepting an obstacle as-is (T41) requires a "
                             "non-empty rationale note")
        self._tactic_seq += 1
        node_id = f"t{self._tactic_seq}"
        tactic = TacticNode(node_id=node_id, repo_ref=repo_ref,
                            obstacle=obstacle_id, note=note)
        self.tactic_nodes[node_id] = tactic
        node.resolutions.append(node_id)
        return node_id

    def rename_obstacle(self, node_id: str, name: str) -> None:
        """Change the display name; the origin repository link is immutable."""
        if not name or not name.strip():
            raise ModelError("obstacle name must be non-blank")
        self.obstacle_node(node_id).name = name

    def _owned(self, node_id: str, into: set) -> None:
        if node_id in into:
            return
        into.add(node_id)
        if node_id in self.goal_nodes:
            node = self.goal_nodes[node_id]
            for child in node.children:
                self._owned(child, into)
            for obstacle in node.obstacles:
                self._owned(obstacle, into)
        elif node_id in self.obstacle_nodes:
            node = self.obstacle_nodes[node_id]
            for child in node.children:
                self._owned(child, into)
            for tactic in node.resolutions:
                self._owned(tactic, into)
        elif node_id in self.tactic_nodes:
            node = self.tactic_nodes[node_id]
            for introduced in node.introduced:
                self._owned(introduced, into)

    def remove_subtree(self, node_id: str) -> int:
        """Remove a node with everything it transitively owns; returns the count."""
        if node_id not in self.goal_nodes and node_id not in self.obstacle_nodes \
                and node_id not in self.tactic_nodes:
            raise ModelError(f"unknown node {node_id}")
        doomed: set = set()
        self._owned(node_id, doomed)

        for gid in list(self.goal_nodes):
            if gid in doomed:
                del self.goal_nodes[gid]
        for oid in list(self.obstacle_nodes):
            if oid in doomed:
                del self.obstacle_nodes[oid]
        for tid in list(self.tactic_nodes):
            if tid in doomed:
                del self.tactic_nodes[tid]

        self.root_goals = [g for g in self.root_goals if g not in doomed]
        for node in self.goal_nodes.values():
            node.children = [c for c in node.children if c not in doomed]
            node.obstacles = [o for o in node.obstacles if o not in doomed]
        for node in self.obstacle_nodes.values():
            node.children = [c for c in node.children if c not in doomed]
            node.resolutions = [t for t in node.resolutions if t not in doomed]
            if node.introduced_by in doomed:
                node.introduced_by = None
        for node in self.tactic_nodes.values():
            node.introduced = [o for o in node.introduced if o not in doomed]
        return len(doomed)

    # ------------------------------------------------------------ validation

    def validate_structure(self) -> List[str]:
        """Every violated invariant, as one message each; empty means valid."""
        violations: List[str] = []

        seen = set()
        for node_id in self._all_ids():
            if node_id in seen:
                violations.append(f"duplicate node id {node_id}")
            seen.add(node_id)

        for node in self.goal_nodes.values():
            if not node.descriptor:
                violations.append(f"goal {node.node_id}: empty descriptor")
            if node.repo_ref and self.repository is not None \
                    and self.repository.goal(node.repo_ref) is None:
                violations.append(
                    f"goal {node.node_id}: unknown repository goal {node.repo_ref}")
            for child in node.children:
                if child not in self.goal_nodes:
                    violations.append(
                        f"goal {node.node_id}: decomposition child {child} "
                        "is not a goal node")
            for obstacle in node.obstacles:
                if obstacle not in self.obstacle_nodes:
                    violations.append(
                        f"goal {node.node_id}: obstruction {obstacle} "
                        "is not an obstacle node")

        for node in self.obstacle_nodes.values():
            kind, parent_id = node.parent
            if kind == "goal":
                if parent_id not in self.goal_nodes:
                    violations.append(
                        f"obstacle {node.node_id}: obstructed goal {parent_id} missing")
                elif node.node_id not in self.goal_nodes[parent_id].obstacles:
                    violations.append(
                        f"obstacle {node.node_id}: not listed by goal {parent_id}")
            elif kind == "obstacle":
                if parent_id not in self.obstacle_nodes:
                    violations.append(
                        f"obstacle {node.node_id}: refined parent {parent_id} missing")
                elif node.node_id not in self.obstacle_nodes[parent_id].children:
                    violations.append(
                        f"obstacle {node.node_id}: not listed by parent {parent_id}")
            else:
                violations.append(
                    f"obstacle {node.node_id}: invalid parent kind {kind!r}")
            if node.origin.kind is OriginKind.EVIDENTIAL:
                if node.origin.repo_ref is None:
                    violations.append(
                        f"obstacle {node.node_id}: evidential node without O-id")
                elif self.repository is not None \
                        and self.repository.obstacle(node.origin.repo_ref) is None:
                    violations.append(
                        f"obstacle {node.node_id}: unknown repository obstacle "
                        f"{node.origin.repo_ref}")
            for child in node.children:
                if child not in self.obstacle_nodes:
                    violations.append(
                        f"obstacle {node.node_id}: refinement child {child} "
                        "is not an obstacle node")
            for tactic in node.resolutions:
                if tactic not in self.tactic_nodes:
                    violations.append(
                        f"obstacle {node.node_id}: resolution {tactic} "
                        "is not a tactic node")
            if node.assessment is not None and node.assessment.override is not None \
                    and not node.assessment.note.strip():
                violations.append(
                    f"obstacle {node.node_id}: risk override without a note")

        attachments: Dict[str, List[str]] = {t: [] for t in self.tactic_nodes}
        for node in self.obstacle_nodes.values():
            for tactic in node.resolutions:
                if tactic in attachments:
                    attachments[tactic].append(node.node_id)
        for tactic in self.tactic_nodes.values():
            owners = attachments[tactic.node_id]
            if len(owners) != 1 or tactic.obstacle not in owners:
                violations.append(
                    f"tactic {tactic.node_id}: attached to {len(owners)} obstacles, "
                    "expected exactly one")
            if self.repository is not None \
                    and self.repository.tactic(tactic.repo_ref) is None:
                violations.append(
                    f"tactic {tactic.node_id}: unknown repository tactic "
                    f"{tactic.repo_ref}")
            if tactic.repo_ref == "T41" and not tactic.note.strip():
                violations.append(
                    f"tactic {tactic.node_id}: accept-as-is (T41) without a note")
            for introduced in tactic.introduced:
                if introduced not in self.obstacle_nodes:
                    violations.append(
                        f"tactic {tactic.node_id}: introduced obstacle {introduced} "
                        "missing")

        violations.extend(self._find_cycles())
        violations.extend(self._check_reachability())
        return violations

    def _edges(self):
        """Each relationship once: decomposition and refinement point down,
        obstruction points from the obstacle at the goal, resolution at the
        tactic. Valid models are acyclic under this orientation."""
        for node in self.goal_nodes.values():
            for child in node.children:
                yield node.node_id, child
        for node in self.obstacle_nodes.values():
            kind, parent_id = node.parent
            if kind == "goal":
                yield node.node_id, parent_id
            for child in node.children:
                yield node.node_id, child
            for tactic in node.resolutions:
                yield node.node_id, tactic

    def _find_cycles(self) -> List[str]:
        graph: Dict[str, List[str]] = {}
        for src, dst in self._edges():
            graph.setdefault(src, []).append(dst)
            graph.setdefault(dst, [])
        WHITE, GREY, BLACK = 0, 1, 2
        colour = {n: WHITE for n in graph}
        violations = []

        def visit(n: str, trail: List[str]):
            colour[n] = GREY
            trail.append(n)
            for m in graph[n]:
                if colour.get(m, WHITE) == GREY:
                    start = trail.index(m)
                    cycle = " -> ".join(trail[start:] + [m])
                    violations.append(f"cycle detected: {cycle}")
                elif colour.get(m, WHITE) == WHITE:
                    visit(m, trail)
            trail.pop()
            colour[n] = BLACK

        for n in list(graph):
            if colour[n] == WHITE:
                visit(n, [])
        return violations

    def _check_reachability(self) -> List[str]:
        violations = []
        for node in self.obstacle_nodes.values():
            seen = set()
            current = node
            while True:
                if current.node_id in seen:
                    break  # cycle, reported elsewhere
                seen.add(current.node_id)
                kind, parent_id = current.parent
                if kind == "goal":
                    if parent_id not in self.goal_nodes:
                        violations.append(
                            f"obstacle {node.node_id}: obstruction path ends at "
                            f"missing goal {parent_id}")
                    break
                if parent_id not in self.obstacle_nodes:
                    violations.append(
                        f"obstacle {node.node_id}: obstruction path broken at "
                        f"{parent_id}")
                    break
                current = self.obstacle_nodes[parent_id]
        return violations

    # ---------------------------------------------------------------- values

    def clone(self) -> "GoalModel":
        """Deep structural copy sharing the immutable repository."""
        other = GoalModel(self.name, self.migration_type, self.repository)
        other._goal_seq = self._goal_seq
        other._tactic_seq = self._tactic_seq
        other.root_goals = list(self.root_goals)
        for node_id, node in self.goal_nodes.items():
            other.goal_nodes[node_id] = GoalNode(
                node_id=node.node_id, pattern=node.pattern,
                descriptor=node.descriptor, repo_ref=node.repo_ref,
                parent=node.parent, children=list(node.children),
                obstacles=list(node.obstacles))
        for node_id, node in self.obstacle_nodes.items():
            other.obstacle_nodes[node_id] = ObstacleNode(
                node_id=node.node_id, name=node.name, origin=node.origin,
                parent=node.parent, children=list(node.children),
                resolutions=list(node.resolutions), assessment=node.assessment,
                introduced_by=node.introduced_by)
        for node_id, node in self.tactic_nodes.items():
            other.tactic_nodes[node_id] = TacticNode(
                node_id=node.node_id, repo_ref=node.repo_ref,
                obstacle=node.obstacle, note=node.note,
                introduced=list(node.introduced))
        return other

    def _goal_shape(self, node: GoalNode, ids: bool, notes: bool):
        return (
            node.node_id if ids else None,
            node.pattern, node.descriptor, node.repo_ref,
            tuple(self._goal_shape(self.goal_nodes[c], ids, notes)
                  for c in node.children),
            tuple(self._obstacle_shape(self.obstacle_nodes[o], ids, notes)
                  for o in node.obstacles),
        )

    def _obstacle_shape(self, node: ObstacleNode, ids: bool, notes: bool):
        assessment = None
        if node.assessment is not None:
            a = node.assessment
            assessment = (a.likelihood, a.consequence, a.override,
                          a.note if notes else None,
                          a.history if notes else None)
        return (
            node.node_id if ids else None,
            node.name, node.origin.kind, node.origin.repo_ref, assessment,
            tuple(self._obstacle_shape(self.obstacle_nodes[c], ids, notes)
                  for c in node.children),
            tuple(self._tactic_shape(self.tactic_nodes[t], ids)
                  for t in node.resolutions),
        )

    def _tactic_shape(self, node: TacticNode, ids: bool):
        return (
            node.node_id if ids else None,
            node.repo_ref, node.note,
            tuple(sorted(node.introduced)) if ids else len(node.introduced),
        )

    def shape(self, include_ids: bool = True, include_assessment_notes: bool = True):
        """Hashable structural value used for equivalence comparisons."""
        return (
            self.name, self.migration_type,
            tuple(self._goal_shape(self.goal_nodes[g], include_ids,
                                   include_assessment_notes)
                  for g in self.root_goals),
        )

    def equivalent(self, other: "GoalModel", include_ids: bool = True,
                   include_assessment_notes: bool = True) -> bool:
        """Structural equality: same nodes, edges, assessments, notes.

        ``include_ids=False`` compares shape only, for flows (like the text
        round-trip after removals) where derived node ids may be renumbered.
        ``include_assessment_notes=False`` ignores assessment provenance and
        history, which the model text format does not carry.
        """
        return self.shape(include_ids, include_assessment_notes) == \
            other.shape(include_ids, include_assessment_notes)


def new_model(name: str, migration_type: MigrationType,
              repository: Optional[Repository] = None) -> GoalModel:
    """Empty model; the migration type is fixed for the model's lifetime."""
    return GoalModel(name, migration_type, repository)
