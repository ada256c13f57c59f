"""Command-line interface.

Exit codes are part of the contract: 0 success, 1 check failures present
(uncovered or unassessed obstacles, structural violations), 2 usage or parse
errors, 3 I/O or dataset errors. Diagnostics go to stderr; ``--format json``
puts exactly one JSON document on stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from . import dot, dsl, risk
from .errors import (CloudgateError, DatasetError, MalformedIdError, ModelError,
                     NotFoundError, ParseError, SessionError)
from .model import GoalModel
from .procedure import Session
from .repository import (GoalEntry, ObstacleEntry, Repository, StudyEntry,
                         TacticEntry, default_dataset_path, get_entry,
                         integrity_check, load_repository, query_obstacles,
                         query_tactics)
from .risk import Consequence, Likelihood, RiskLevel, risk_of

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_DATASET = 3

_THRESHOLDS = {"high": RiskLevel.HIGH, "extreme": RiskLevel.EXTREME,
               "very-extreme": RiskLevel.VERY_EXTREME}

_LIKELIHOODS = {l.value: l for l in Likelihood}
_CONSEQUENCES = {c.value: c for c in Consequence}
_LEVELS = {r.value: r for r in RiskLevel}


def _table(headers: List[str], rows: List[List[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    fmt = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [fmt.format(*headers), fmt.format(*["-" * w for w in widths])]
    lines.extend(fmt.format(*row) for row in rows)
    return "\n".join(lines)


def _load_repo() -> Repository:
    return load_repository(default_dataset_path())


def _load_model(path: str, repo: Repository) -> GoalModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise DatasetError(f"cannot read model file {path}: {exc}") from exc
    return dsl.parse_model_text(text, repo)


def _ephemeral_session(model: GoalModel, repo: Repository) -> Session:
    session = Session(model.name, model.migration_type, repo)
    session.model = model
    return session


def _parse_likelihood(token: str) -> Likelihood:
    normalized = token.lower().replace("_", "-")
    if normalized not in _LIKELIHOODS:
        raise SessionError(
            f"unknown likelihood {token!r}; expected one of "
            + ", ".join(_LIKELIHOODS))
    return _LIKELIHOODS[normalized]


def _parse_consequence(token: str) -> Consequence:
    normalized = token.lower()
    if normalized not in _CONSEQUENCES:
        raise SessionError(
            f"unknown consequence {token!r}; expected one of "
            + ", ".join(_CONSEQUENCES))
    return _CONSEQUENCES[normalized]


# ----------------------------------------------------------------- repo

def _cmd_repo_list(args) -> int:
    repo = _load_repo()
    if args.kind == "goals":
        entries = list(repo.goals)
        if args.text:
            needle = args.text.lower()
            entries = [g for g in entries if needle in g.name.lower()
                       or needle in g.definition.lower()]
        rows = [[g.id, g.name, str(len(g.source_studies))] for g in entries]
        headers = ["ID", "NAME", "STUDIES"]
        payload = [{"id": g.id, "name": g.name,
                    "source_studies": list(g.source_studies)} for g in entries]
    elif args.kind == "obstacles":
        entries = query_obstacles(repo, goal=args.goal,
                                  migration_type=args.migration_type,
                                  text=args.text)
        rows = [[o.id, o.name, ",".join(o.impacted_goals),
                 ",".join(o.migration_types), str(len(o.source_studies))]
                for o in entries]
        headers = ["ID", "NAME", "GOALS", "TYPES", "STUDIES"]
        payload = [{"id": o.id, "name": o.name,
                    "impacted_goals": list(o.impacted_goals),
                    "migration_types": list(o.migration_types),
                    "source_studies": list(o.source_studies)} for o in entries]
    else:
        entries = query_tactics(repo, obstacle=args.obstacle,
                                category=args.category,
                                include_universal=not args.no_universal)
        if args.text:
            needle = args.text.lower()
            entries = [t for t in entries if needle in t.name.lower()
                       or needle in t.definition.lower()]
        rows = [[t.id, t.name, t.category, "yes" if t.universal else "no",
                 ",".join(t.related_obstacles) or "-",
                 str(len(t.source_studies))] for t in entries]
        headers = ["ID", "NAME", "CATEGORY", "UNIVERSAL", "RELATED", "STUDIES"]
        payload = [{"id": t.id, "name": t.name, "category": t.category,
                    "universal": t.universal,
                    "related_obstacles": list(t.related_obstacles),
                    "source_studies": list(t.source_studies)} for t in entries]
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(_table(headers, rows))
    return EXIT_OK


def _cmd_repo_show(args) -> int:
    repo = _load_repo()
    entry = get_entry(repo, args.id)
    print(f"{entry.id}  {getattr(entry, 'name', '')}".rstrip())
    if isinstance(entry, StudyEntry):
        print(f"  citation: {entry.citation}")
        print(f"  year: {entry.year}")
        return EXIT_OK
    print(f"  definition: {entry.definition}")
    if isinstance(entry, GoalEntry):
        print(f"  studies: {', '.join(entry.source_studies)}")
    elif isinstance(entry, ObstacleEntry):
        print(f"  impacted goals: {', '.join(entry.impacted_goals)}")
        print(f"  migration types: {', '.join(entry.migration_types)}")
        print(f"  studies: {', '.join(entry.source_studies)}")
        for note in entry.data_quality_notes:
            print(f"  note: {note}")
    elif isinstance(entry, TacticEntry):
        print(f"  category: {entry.category}")
        print(f"  universal: {'yes' if entry.universal else 'no'}")
        related = ", ".join(entry.related_obstacles) or "-"
        print(f"  related obstacles: {related}")
        print(f"  studies: {', '.join(entry.source_studies)}")
        for note in entry.data_quality_notes:
            print(f"  note: {note}")
    return EXIT_OK


def _cmd_repo_verify(args) -> int:
    repo = _load_repo()
    report = integrity_check(repo)
    for warning in report.warnings:
        print(f"warning: {warning}")
    for error in report.errors:
        print(f"error: {error}", file=sys.stderr)
    counts = (f"{len(repo.goals)} goals, {len(repo.obstacles)} obstacles, "
              f"{len(repo.tactics)} tactics, {len(repo.studies)} studies")
    if report.errors:
        print(f"dataset {repo.version}: {counts}; "
              f"{len(report.errors)} error(s)", file=sys.stderr)
        return EXIT_CHECK_FAILED
    print(f"dataset {repo.version}: {counts}; integrity OK "
          f"({len(report.warnings)} warning(s))")
    return EXIT_OK


# ----------------------------------------------------------------- risk

def _cmd_risk(args) -> int:
    likelihood = _parse_likelihood(args.likelihood)
    consequence = _parse_consequence(args.consequence)
    print(risk_of(likelihood, consequence).value)
    return EXIT_OK


# ----------------------------------------------------------------- check

def _cmd_check(args) -> int:
    repo = _load_repo()
    model = _load_model(args.model, repo)
    threshold = _THRESHOLDS[args.threshold]
    report = risk.coverage_check(model, threshold)
    if args.format == "json":
        payload = {
            "threshold": threshold.value,
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
        print(json.dumps(payload, indent=2))
    else:
        rows = [[v.node_id, v.name,
                 v.effective_risk.value if v.effective_risk else "-",
                 v.verdict, v.reason] for v in report.verdicts]
        print(_table(["NODE", "NAME", "RISK", "VERDICT", "REASON"], rows))
        for violation in report.violations:
            print(f"violation: {violation}", file=sys.stderr)
        summary = (f"{len(report.verdicts)} obstacle(s): "
                   f"{len(report.uncovered)} uncovered, "
                   f"{len(report.unassessed)} unassessed, "
                   f"{len(report.violations)} violation(s)")
        print(summary)
    return EXIT_OK if report.ok else EXIT_CHECK_FAILED


# ----------------------------------------------------------------- assess

def _cmd_assess(args) -> int:
    repo = _load_repo()
    model = _load_model(args.model, repo)
    likelihood = _parse_likelihood(args.likelihood)
    consequence = _parse_consequence(args.consequence)
    override = None
    if args.override is not None:
        token = args.override.upper()
        if token not in _LEVELS:
            raise SessionError(f"unknown risk level {args.override!r}")
        override = _LEVELS[token]
        if not args.note:
            raise SessionError("--override requires --note")
    assessment = risk.assess(model, args.node, likelihood, consequence,
                             args.note or "", override)
    with open(args.model, "w", encoding="utf-8") as fh:
        fh.write(dsl.format_model_text(model))
    print(f"{args.node}: computed {assessment.computed.value}, "
          f"effective {assessment.effective.value}")
    return EXIT_OK


# ----------------------------------------------------------------- suggest

def _cmd_suggest(args) -> int:
    repo = _load_repo()
    model = _load_model(args.model, repo)
    session = _ephemeral_session(model, repo)
    if args.kind == "obstacles":
        suggestions = session.suggest_obstacles()
    else:
        if not args.node:
            raise SessionError("suggest tactics requires --node")
        suggestions = session.suggest_tactics(args.node)
    if args.format == "json":
        payload = [
            {"kind": s.kind, "repo_id": s.repo_id,
             "matched_goals": s.matched_goals, "study_count": s.study_count,
             "universal": s.universal, "rationale": s.rationale}
            for s in suggestions
        ]
        print(json.dumps(payload, indent=2))
    else:
        rows = [[s.repo_id, str(s.matched_goals), str(s.study_count),
                 "yes" if s.universal else "no", s.rationale]
                for s in suggestions]
        print(_table(["ID", "GOALS", "STUDIES", "UNIVERSAL", "RATIONALE"], rows))
    return EXIT_OK


# ----------------------------------------------------------------- fmt/export

def _cmd_fmt(args) -> int:
    repo = _load_repo()
    model = _load_model(args.file, repo)
    with open(args.file, "w", encoding="utf-8") as fh:
        fh.write(dsl.format_model_text(model))
    return EXIT_OK


def _cmd_export_dot(args) -> int:
    repo = _load_repo()
    model = _load_model(args.model, repo)
    text = dot.export_dot(model, show_risk=args.show_risk, show_ids=args.show_ids)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return EXIT_OK


# ----------------------------------------------------------------- serve

def _cmd_serve(args) -> int:
    from . import service
    service.serve(port=args.port, dataset=args.dataset,
                  sessions_dir=args.sessions_dir)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cloudgate",
        description="Goal-obstacle analysis workbench for cloud migration "
                    "decisions")
    sub = parser.add_subparsers(dest="command", required=True)

    repo = sub.add_parser("repo", help="query the knowledge repository")
    repo_sub = repo.add_subparsers(dest="repo_command", required=True)
    repo_list = repo_sub.add_parser("list", help="list catalogue entries")
    repo_list.add_argument("kind", choices=["goals", "obstacles", "tactics"])
    repo_list.add_argument("--goal", help="filter obstacles by impacted goal id")
    repo_list.add_argument("--migration-type", choices=["I", "II", "III", "IV", "V"])
    repo_list.add_argument("--obstacle", help="filter tactics by related obstacle")
    repo_list.add_argument("--category", help="filter tactics by category")
    repo_list.add_argument("--text", help="substring match on name/definition")
    repo_list.add_argument("--no-universal", action="store_true",
                           help="exclude universal tactics from obstacle filters")
    repo_list.add_argument("--format", choices=["table", "json"], default="table")
    repo_list.set_defaults(func=_cmd_repo_list)
    repo_show = repo_sub.add_parser("show", help="show one catalogue entry")
    repo_show.add_argument("id")
    repo_show.set_defaults(func=_cmd_repo_show)
    repo_verify = repo_sub.add_parser("verify", help="run the integrity check")
    repo_verify.set_defaults(func=_cmd_repo_verify)

    risk_cmd = sub.add_parser("risk", help="look up the risk matrix")
    risk_cmd.add_argument("likelihood")
    risk_cmd.add_argument("consequence")
    risk_cmd.set_defaults(func=_cmd_risk)

    check = sub.add_parser("check", help="coverage-check a model file")
    check.add_argument("--model", required=True)
    check.add_argument("--threshold", choices=sorted(_THRESHOLDS),
                       default="high")
    check.add_argument("--format", choices=["table", "json"], default="table")
    check.set_defaults(func=_cmd_check)

    assess = sub.add_parser("assess", help="rate an obstacle in a model file")
    assess.add_argument("--model", required=True)
    assess.add_argument("--node", required=True)
    assess.add_argument("--likelihood", required=True)
    assess.add_argument("--consequence", required=True)
    assess.add_argument("--override")
    assess.add_argument("--note")
    assess.set_defaults(func=_cmd_assess)

    suggest = sub.add_parser("suggest", help="repository suggestions for a model")
    suggest.add_argument("kind", choices=["obstacles", "tactics"])
    suggest.add_argument("--model", required=True)
    suggest.add_argument("--node", help="obstacle node id (tactic suggestions)")
    suggest.add_argument("--format", choices=["table", "json"], default="table")
    suggest.set_defaults(func=_cmd_suggest)

    fmt = sub.add_parser("fmt", help="rewrite a model file canonically")
    fmt.add_argument("file")
    fmt.set_defaults(func=_cmd_fmt)

    export = sub.add_parser("export", help="export a model")
    export_sub = export.add_subparsers(dest="export_command", required=True)
    export_dot_cmd = export_sub.add_parser("dot", help="Graphviz DOT output")
    export_dot_cmd.add_argument("--model", required=True)
    export_dot_cmd.add_argument("-o", "--output", required=True,
                                help="output file, or - for stdout")
    export_dot_cmd.add_argument("--show-risk", action="store_true")
    export_dot_cmd.add_argument("--show-ids", action="store_true")
    export_dot_cmd.set_defaults(func=_cmd_export_dot)

    serve = sub.add_parser("serve", help="run the workbench HTTP service")
    serve.add_argument("--port", type=int, default=7340)
    serve.add_argument("--dataset", default=None)
    serve.add_argument("--sessions-dir", default=None)
    serve.set_defaults(func=_cmd_serve)

    return parser


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 for --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (MalformedIdError, NotFoundError, ModelError, SessionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DatasetError as exc:
        print(f"dataset error: {exc}", file=sys.stderr)
        return EXIT_DATASET
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATASET
    except CloudgateError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
