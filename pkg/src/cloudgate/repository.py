"""Evidential knowledge repository: goals, obstacles, resolution tactics, studies.

The repository is a read-only catalogue loaded from a JSON dataset. The bundled
dataset transcribes the published catalogues (10 goals, 67 obstacles, 45 tactics,
112 studies) with cross-links between them; transcription caveats travel with the
affected entries as ``data_quality_notes`` and surface as integrity warnings.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import DatasetError, MalformedIdError, NotFoundError

MIGRATION_TYPES = ("I", "II", "III", "IV", "V")

TACTIC_CATEGORIES = (
    "GoalServiceMigrationSubstitution",
    "ObstaclePrevention",
    "ObstacleReduction",
    "GoalWeakening",
    "GoalRestoration",
    "GoalMitigation",
    "DoNothing",
)

EXPECTED_COUNTS = {"goals": 10, "obstacles": 67, "tactics": 45, "studies": 112}

_ID_RE = re.compile(r"^[GOTS][1-9][0-9]*$")

ENV_DATASET = "CLOUDGATE_DATASET"


def numeric_id(ident: str) -> int:
    """Numeric part of a catalogue id, for ordering (O9 before O10)."""
    return int(ident[1:])


@dataclass(frozen=True)
class GoalEntry:
    id: str
    name: str
    definition: str
    source_studies: Tuple[str, ...]


@dataclass(frozen=True)
class ObstacleEntry:
    id: str
    name: str
    definition: str
    impacted_goals: Tuple[str, ...]
    migration_types: Tuple[str, ...]
    source_studies: Tuple[str, ...]
    data_quality_notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class TacticEntry:
    id: str
    name: str
    definition: str
    related_obstacles: Tuple[str, ...]
    universal: bool
    category: str
    source_studies: Tuple[str, ...]
    data_quality_notes: Tuple[str, ...] = ()


@dataclass(frozen=True)
class StudyEntry:
    id: str
    citation: str
    year: int


Entry = Union[GoalEntry, ObstacleEntry, TacticEntry, StudyEntry]


@dataclass(frozen=True)
class IntegrityReport:
    errors: Tuple[str, ...]
    warnings: Tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


@dataclass(frozen=True)
class Repository:
    """Immutable, fully cross-linked catalogue; safe to share between readers."""

    version: str
    goals: Tuple[GoalEntry, ...]
    obstacles: Tuple[ObstacleEntry, ...]
    tactics: Tuple[TacticEntry, ...]
    studies: Tuple[StudyEntry, ...]
    _index: Dict[str, Entry] = field(repr=False, compare=False, default_factory=dict)

    def __post_init__(self):
        index: Dict[str, Entry] = {}
        for entry in (*self.goals, *self.obstacles, *self.tactics, *self.studies):
            index[entry.id] = entry
        object.__setattr__(self, "_index", index)

    def entry(self, ident: str) -> Optional[Entry]:
        return self._index.get(ident)

    def goal(self, ident: str) -> Optional[GoalEntry]:
        e = self._index.get(ident)
        return e if isinstance(e, GoalEntry) else None

    def obstacle(self, ident: str) -> Optional[ObstacleEntry]:
        e = self._index.get(ident)
        return e if isinstance(e, ObstacleEntry) else None

    def tactic(self, ident: str) -> Optional[TacticEntry]:
        e = self._index.get(ident)
        return e if isinstance(e, TacticEntry) else None

    def universal_tactics(self) -> List[TacticEntry]:
        return [t for t in self.tactics if t.universal]


def bundled_dataset_path() -> str:
    """Path of the dataset shipped inside the package."""
    return str(resources.files("cloudgate").joinpath("data/repository_v1.json"))


def default_dataset_path() -> str:
    """Bundled dataset unless overridden through the environment."""
    return os.environ.get(ENV_DATASET) or bundled_dataset_path()


def _require(record: dict, name: str, kind: type, where: str):
    if name not in record:
        raise DatasetError(f"{where}: missing field '{name}'")
    value = record[name]
    if not isinstance(value, kind):
        raise DatasetError(f"{where}: field '{name}' must be {kind.__name__}")
    return value


def _id_list(record: dict, name: str, where: str) -> Tuple[str, ...]:
    raw = record.get(name, [])
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise DatasetError(f"{where}: field '{name}' must be a list of id strings")
    return tuple(raw)


def _notes(record: dict, where: str) -> Tuple[str, ...]:
    raw = record.get("data_quality_notes", [])
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise DatasetError(f"{where}: field 'data_quality_notes' must be a list of strings")
    return tuple(raw)


def load_repository(source: Optional[str] = None) -> Repository:
    """Load and validate a dataset file; ``None`` means the default dataset.

    Raises DatasetError when the file is unreadable, a record violates the
    schema (the message names the record and field), a cross-reference dangles,
    or the catalogue counts are off.
    """
    path = source or default_dataset_path()
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise DatasetError(f"cannot read dataset {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DatasetError(f"dataset {path} is not valid JSON: {exc}") from exc

    if not isinstance(raw, dict):
        raise DatasetError("dataset root must be a JSON object")
    version = _require(raw, "version", str, "dataset")
    for section in ("goals", "obstacles", "tactics", "studies"):
        if not isinstance(raw.get(section), list):
            raise DatasetError(f"dataset: missing or non-list section '{section}'")

    goals = []
    for record in raw["goals"]:
        where = f"goal {record.get('id', '<no id>')}"
        goals.append(GoalEntry(
            id=_require(record, "id", str, where),
            name=_require(record, "name", str, where),
            definition=_require(record, "definition", str, where),
            source_studies=_id_list(record, "source_studies", where),
        ))
    obstacles = []
    for record in raw["obstacles"]:
        where = f"obstacle {record.get('id', '<no id>')}"
        obstacles.append(ObstacleEntry(
            id=_require(record, "id", str, where),
            name=_require(record, "name", str, where),
            definition=_require(record, "definition", str, where),
            impacted_goals=_id_list(record, "impacted_goals", where),
            migration_types=_id_list(record, "migration_types", where),
            source_studies=_id_list(record, "source_studies", where),
            data_quality_notes=_notes(record, where),
        ))
    tactics = []
    for record in raw["tactics"]:
        where = f"tactic {record.get('id', '<no id>')}"
        tactics.append(TacticEntry(
            id=_require(record, "id", str, where),
            name=_require(record, "name", str, where),
            definition=_require(record, "definition", str, where),
            related_obstacles=_id_list(record, "related_obstacles", where),
            universal=_require(record, "universal", bool, where),
            category=_require(record, "category", str, where),
            source_studies=_id_list(record, "source_studies", where),
            data_quality_notes=_notes(record, where),
        ))
    studies = []
    for record in raw["studies"]:
        where = f"study {record.get('id', '<no id>')}"
        studies.append(StudyEntry(
            id=_require(record, "id", str, where),
            citation=_require(record, "citation", str, where),
            year=_require(record, "year", int, where),
        ))

    repo = Repository(
        version=version,
        goals=tuple(goals),
        obstacles=tuple(obstacles),
        tactics=tuple(tactics),
        studies=tuple(studies),
    )
    report = integrity_check(repo)
    if report.errors:
        raise DatasetError("dataset failed validation: " + "; ".join(report.errors))
    return repo


def get_entry(repo: Repository, ident: str) -> Entry:
    """Exact, case-sensitive lookup of a catalogue entry by its canonical id."""
    if not isinstance(ident, str) or not _ID_RE.match(ident):
        raise MalformedIdError(f"malformed catalogue id: {ident!r}")
    entry = repo.entry(ident)
    if entry is None:
        raise NotFoundError(f"no catalogue entry with id {ident}")
    return entry


def query_obstacles(
    repo: Repository,
    goal: Optional[str] = None,
    migration_type: Optional[str] = None,
    text: Optional[str] = None,
) -> List[ObstacleEntry]:
    """Obstacles satisfying every supplied filter clause.

    Ordering: number of source studies descending, then numeric id ascending.
    """
    if goal is not None and repo.goal(goal) is None:
        raise NotFoundError(f"unknown goal id {goal}")
    if migration_type is not None and migration_type not in MIGRATION_TYPES:
        raise NotFoundError(f"unknown migration type {migration_type!r}")
    needle = text.lower() if text is not None else None
    hits = []
    for entry in repo.obstacles:
        if goal is not None and goal not in entry.impacted_goals:
            continue
        if migration_type is not None and migration_type not in entry.migration_types:
            continue
        if needle is not None and needle not in entry.name.lower() \
                and needle not in entry.definition.lower():
            continue
        hits.append(entry)
    hits.sort(key=lambda e: (-len(e.source_studies), numeric_id(e.id)))
    return hits


def query_tactics(
    repo: Repository,
    obstacle: Optional[str] = None,
    category: Optional[str] = None,
    include_universal: bool = True,
) -> List[TacticEntry]:
    """Tactics matching the filter.

    With an obstacle filter, returns tactics whose relations contain it plus,
    iff ``include_universal``, the catalogue-wide universal tactics (their
    ``universal`` flag distinguishes them). Ordering as in query_obstacles.
    """
    if obstacle is not None and repo.obstacle(obstacle) is None:
        raise NotFoundError(f"unknown obstacle id {obstacle}")
    if category is not None and category not in TACTIC_CATEGORIES:
        raise NotFoundError(f"unknown tactic category {category!r}")
    hits = []
    for entry in repo.tactics:
        if obstacle is not None:
            related = obstacle in entry.related_obstacles
            via_universal = entry.universal and include_universal
            if not related and not via_universal:
                continue
        if category is not None and entry.category != category:
            continue
        hits.append(entry)
    hits.sort(key=lambda e: (-len(e.source_studies), numeric_id(e.id)))
    return hits


def _check_ids(prefix: str, count: int, entries: Sequence[Entry],
               errors: List[str]) -> None:
    expected = {f"{prefix}{i}" for i in range(1, count + 1)}
    seen = set()
    for entry in entries:
        if entry.id in seen:
            errors.append(f"duplicate id {entry.id}")
        seen.add(entry.id)
        if entry.id not in expected:
            errors.append(f"id {entry.id} outside the catalogue range {prefix}1-{prefix}{count}")
    missing = expected - seen
    for ident in sorted(missing, key=numeric_id):
        errors.append(f"missing catalogue entry {ident}")


def integrity_check(repo: Repository) -> IntegrityReport:
    """Validate every catalogue invariant; reports instead of raising.

    An empty error list means the repository is sound. Warnings carry the
    transcription caveats recorded in data_quality_notes.
    """
    errors: List[str] = []
    warnings: List[str] = []

    for section, expected in EXPECTED_COUNTS.items():
        actual = len(getattr(repo, section))
        if actual != expected:
            errors.append(f"count mismatch: {expected} {section} expected, found {actual}")

    _check_ids("G", 10, repo.goals, errors)
    _check_ids("O", 67, repo.obstacles, errors)
    _check_ids("T", 45, repo.tactics, errors)
    _check_ids("S", 112, repo.studies, errors)

    goal_ids = {g.id for g in repo.goals}
    obstacle_ids = {o.id for o in repo.obstacles}
    study_ids = {s.id for s in repo.studies}

    names = set()
    for g in repo.goals:
        if g.name in names:
            errors.append(f"goal {g.id}: duplicate goal name {g.name!r}")
        names.add(g.name)
        for s in g.source_studies:
            if s not in study_ids:
                errors.append(f"goal {g.id}: dangling study reference {s}")

    for o in repo.obstacles:
        if not o.impacted_goals:
            errors.append(f"obstacle {o.id}: impacted_goals is empty")
        if not o.migration_types:
            errors.append(f"obstacle {o.id}: migration_types is empty")
        for g in o.impacted_goals:
            if g not in goal_ids:
                errors.append(f"obstacle {o.id}: dangling goal reference {g}")
        for t in o.migration_types:
            if t not in MIGRATION_TYPES:
                errors.append(f"obstacle {o.id}: unknown migration type {t!r}")
        for s in o.source_studies:
            if s not in study_ids:
                errors.append(f"obstacle {o.id}: dangling study reference {s}")
        for note in o.data_quality_notes:
            warnings.append(f"{o.id}: {note}")

    for t in repo.tactics:
        if t.category not in TACTIC_CATEGORIES:
            errors.append(f"tactic {t.id}: unknown category {t.category!r}")
        for o in t.related_obstacles:
            if o not in obstacle_ids:
                errors.append(f"tactic {t.id}: dangling obstacle reference {o}")
        for s in t.source_studies:
            if s not in study_ids:
                errors.append(f"tactic {t.id}: dangling study reference {s}")
        for note in t.data_quality_notes:
            warnings.append(f"{t.id}: {note}")

    for s in repo.studies:
        if not 2006 <= s.year <= 2017:
            errors.append(f"study {s.id}: year {s.year} outside 2006-2017")

    return IntegrityReport(errors=tuple(errors), warnings=tuple(warnings))
