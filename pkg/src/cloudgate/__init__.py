"""cloudgate: evidence-backed goal-obstacle analysis for cloud migrations.

The package bundles a literature-derived catalogue of migration goals,
obstacles, and resolution tactics, a typed goal-obstacle graph, a qualitative
risk matrix, and a session engine that drives the identify-assess-resolve
cycle from a CLI, an HTTP API, and a browser workbench.
"""

from .errors import (CloudgateError, DatasetError, MalformedIdError, ModelError,
                     NotFoundError, ParseError, SessionDocumentError,
                     SessionError, StaleRevisionError)
from .model import (GoalModel, GoalPattern, MigrationType, Origin, OriginKind,
                    new_model)
from .procedure import (AuditEntry, IntroducedSpec, Session, StepStatus,
                        Suggestion, replay_audit, start_session)
from .repository import (GoalEntry, IntegrityReport, ObstacleEntry, Repository,
                         StudyEntry, TacticEntry, get_entry, integrity_check,
                         load_repository, query_obstacles, query_tactics)
from .risk import (CheckReport, Consequence, Likelihood, RiskAssessment,
                   RiskLevel, assess, coverage_check, reassess_after_tactic,
                   risk_of)

__version__ = "0.1.0"

__all__ = [
    "AuditEntry", "CheckReport", "CloudgateError", "Consequence",
    "DatasetError", "GoalEntry", "GoalModel", "GoalPattern", "IntegrityReport",
    "IntroducedSpec", "Likelihood", "MalformedIdError", "MigrationType",
    "ModelError", "NotFoundError", "ObstacleEntry", "Origin", "OriginKind",
    "ParseError", "Repository", "RiskAssessment", "RiskLevel", "Session",
    "SessionDocumentError", "SessionError", "StaleRevisionError", "StepStatus",
    "StudyEntry", "Suggestion", "TacticEntry", "assess", "coverage_check",
    "get_entry", "integrity_check", "load_repository", "new_model",
    "query_obstacles", "query_tactics", "reassess_after_tactic",
    "replay_audit", "risk_of", "start_session",
]
