"""Qualitative risk engine: the 5x5 analysis matrix, assessments, coverage.

Risk is a qualitative lookup of (likelihood, consequence) in a fixed matrix,
not an arithmetic product. Architects who disagree with a computed level
record an override with a mandatory note; the computed value is kept.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Tuple

from .errors import ModelError


class Likelihood(enum.Enum):
    RARE = "rare"
    UNLIKELY = "unlikely"
    POSSIBLE = "possible"
    LIKELY = "likely"
    ALMOST_CERTAIN = "almost-certain"

    def __lt__(self, other: "Likelihood") -> bool:
        return _LIKELIHOOD_ORDER[self] < _LIKELIHOOD_ORDER[other]


class Consequence(enum.Enum):
    INSIGNIFICANT = "insignificant"
    MINOR = "minor"
    MODERATE = "moderate"
    MAJOR = "major"
    CATASTROPHIC = "catastrophic"

    def __lt__(self, other: "Consequence") -> bool:
        return _CONSEQUENCE_ORDER[self] < _CONSEQUENCE_ORDER[other]


class RiskLevel(enum.Enum):
    LOW = "L"
    MODERATE = "M"
    HIGH = "H"
    EXTREME = "E"
    VERY_EXTREME = "V"

    def __lt__(self, other: "RiskLevel") -> bool:
        return _LEVEL_ORDER[self] < _LEVEL_ORDER[other]

    def __le__(self, other: "RiskLevel") -> bool:
        return _LEVEL_ORDER[self] <= _LEVEL_ORDER[other]

    def __gt__(self, other: "RiskLevel") -> bool:
        return _LEVEL_ORDER[self] > _LEVEL_ORDER[other]

    def __ge__(self, other: "RiskLevel") -> bool:
        return _LEVEL_ORDER[self] >= _LEVEL_ORDER[other]


_LIKELIHOOD_ORDER = {l: i for i, l in enumerate(Likelihood)}
_CONSEQUENCE_ORDER = {c: i for i, c in enumerate(Consequence)}
_LEVEL_ORDER = {r: i for i, r in enumerate(RiskLevel)}

_L = RiskLevel.LOW
_M = RiskLevel.MODERATE
_H = RiskLevel.HIGH
_E = RiskLevel.EXTREME
_V = RiskLevel.VERY_EXTREME

# Rows by likelihood, columns by consequence severity
# (insignificant, minor, moderate, major, catastrophic).
RISK_MATRIX: Dict[Likelihood, Tuple[RiskLevel, ...]] = {
    Likelihood.ALMOST_CERTAIN: (_H, _H, _E, _E, _V),
    Likelihood.LIKELY:         (_M, _H, _H, _E, _V),
    Likelihood.POSSIBLE:       (_L, _M, _H, _E, _E),
    Likelihood.UNLIKELY:       (_L, _L, _M, _H, _E),
    Likelihood.RARE:           (_L, _L, _M, _H, _H),
}


def risk_of(likelihood: Likelihood, consequence: Consequence) -> RiskLevel:
    """Exact matrix lookup; total over the 5x5 grid."""
    return RISK_MATRIX[likelihood][_CONSEQUENCE_ORDER[consequence]]


@dataclass(frozen=True)
class HistoryEntry:
    """A superseded assessment, tagged with the tactic that motivated it (if any)."""
    likelihood: Likelihood
    consequence: Consequence
    computed: RiskLevel
    override: Optional[RiskLevel]
    note: str
    tactic_node: Optional[str]


@dataclass(frozen=True)
class RiskAssessment:
    likelihood: Likelihood
    consequence: Consequence
    computed: RiskLevel
    note: str = ""
    override: Optional[RiskLevel] = None
    history: Tuple[HistoryEntry, ...] = ()

    @property
    def effective(self) -> RiskLevel:
        return self.override if self.override is not None else self.computed


def make_assessment(
    likelihood: Likelihood,
    consequence: Consequence,
    note: str = "",
    override: Optional[RiskLevel] = None,
) -> RiskAssessment:
    if override is not None and not note.strip():
        raise ModelError("a risk override requires a non-empty note")
    return RiskAssessment(
        likelihood=likelihood,
        consequence=consequence,
        computed=risk_of(likelihood, consequence),
        note=note,
        override=override,
    )


def assess(model, node_id: str, likelihood: Likelihood, consequence: Consequence,
           note: str = "", override: Optional[RiskLevel] = None) -> RiskAssessment:
    """Store an assessment on an obstacle node, pushing any prior one into history."""
    node = model.obstacle_node(node_id)
    fresh = make_assessment(likelihood, consequence, note, override)
    prior = node.assessment
    if prior is not None:
        entry = HistoryEntry(
            likelihood=prior.likelihood,
            consequence=prior.consequence,
            computed=prior.computed,
            override=prior.override,
            note=prior.note,
            tactic_node=None,
        )
        fresh = replace(fresh, history=prior.history + (entry,))
    node.assessment = fresh
    return fresh


def reassess_after_tactic(model, node_id: str, tactic_node_id: str,
                          likelihood: Likelihood, consequence: Consequence,
                          note: str = "") -> RiskAssessment:
    """Re-rate an obstacle after a tactic was applied to it.

    The superseded assessment goes into history tagged with the tactic node,
    so the audit of "why did this risk drop" stays reconstructable.
    """
    node = model.obstacle_node(node_id)
    tactic = model.tactic_node(tactic_node_id)
    if tactic_node_id not in node.resolutions:
        raise ModelError(
            f"tactic node {tactic_node_id} does not resolve obstacle node {node_id}")
    if node.assessment is None:
        raise ModelError(f"obstacle node {node_id} has no prior assessment to revise")
    prior = node.assessment
    entry = HistoryEntry(
        likelihood=prior.likelihood,
        consequence=prior.consequence,
        computed=prior.computed,
        override=prior.override,
        note=prior.note,
        tactic_node=tactic.node_id,
    )
    fresh = make_assessment(likelihood, consequence, note)
    fresh = replace(fresh, history=prior.history + (entry,))
    node.assessment = fresh
    return fresh


COVERED = "covered"
UNCOVERED = "uncovered"
UNASSESSED = "unassessed"


@dataclass(frozen=True)
class ObstacleVerdict:
    node_id: str
    name: str
    verdict: str
    reason: str
    effective_risk: Optional[RiskLevel] = None


@dataclass(frozen=True)
class CheckReport:
    threshold: RiskLevel
    verdicts: Tuple[ObstacleVerdict, ...]
    violations: Tuple[str, ...]

    @property
    def uncovered(self) -> List[ObstacleVerdict]:
        return [v for v in self.verdicts if v.verdict == UNCOVERED]

    @property
    def unassessed(self) -> List[ObstacleVerdict]:
        return [v for v in self.verdicts if v.verdict == UNASSESSED]

    @property
    def ok(self) -> bool:
        return not self.uncovered and not self.unassessed and not self.violations


def _tactic_counts(model, node) -> bool:
    """True when the node carries at least one tactic that counts as handling it.

    An accept-as-is tactic counts only with its mandatory rationale note.
    """
    for tid in node.resolutions:
        tactic = model.tactic_nodes[tid]
        if tactic.repo_ref == "T41" and not tactic.note.strip():
            continue
        return True
    return False


def coverage_check(model, threshold: RiskLevel = RiskLevel.HIGH) -> CheckReport:
    """One verdict per obstacle node: is every serious obstacle tackled?

    A node is covered when its effective risk sits below the threshold, when a
    tactic is attached, or when it has refinement children that are all covered
    (rating happens at the leaves the architect chose to assess). Unassessed
    leaves are reported as such, never silently covered. Structural violations
    of the model are embedded in the report.
    """
    covered: Dict[str, bool] = {}
    visiting = set()

    def is_covered(node_id: str) -> bool:
        if node_id in covered:
            return covered[node_id]
        if node_id in visiting:
            # refinement cycle; reported separately as a structural violation
            return False
        visiting.add(node_id)
        node = model.obstacle_nodes[node_id]
        ok = False
        if node.assessment is not None and node.assessment.effective < threshold:
            ok = True
        elif _tactic_counts(model, node):
            ok = True
        elif node.children and all(is_covered(c) for c in node.children):
            ok = True
        visiting.discard(node_id)
        covered[node_id] = ok
        return ok

    verdicts = []
    for node_id, node in model.obstacle_nodes.items():
        effective = node.assessment.effective if node.assessment else None
        if is_covered(node_id):
            if node.assessment is not None and node.assessment.effective < threshold:
                reason = f"risk {node.assessment.effective.value} below threshold"
            elif _tactic_counts(model, node):
                reason = "resolution tactic attached"
            else:
                reason = "all refinement children covered"
            verdicts.append(ObstacleVerdict(node_id, node.name, COVERED, reason, effective))
        elif node.assessment is None and not node.children:
            verdicts.append(ObstacleVerdict(
                node_id, node.name, UNASSESSED,
                "leaf obstacle has no risk assessment", None))
        elif node.assessment is None:
            verdicts.append(ObstacleVerdict(
                node_id, node.name, UNCOVERED,
                "refinement children not all covered", None))
        else:
            verdicts.append(ObstacleVerdict(
                node_id, node.name, UNCOVERED,
                f"risk {node.assessment.effective.value} at or above threshold "
                "with no resolution", effective))

    violations = tuple(model.validate_structure())
    return CheckReport(threshold=threshold, verdicts=tuple(verdicts),
                       violations=violations)
