"""Deterministic random model/session generators for the property suites."""

import random
import string
from typing import List, Optional, Tuple

from cloudgate import (GoalModel, GoalPattern, IntroducedSpec, MigrationType,
                       Origin, Session, new_model, start_session)
from cloudgate.risk import Consequence, Likelihood, RiskLevel, assess

_NASTY = ['"', "\\", "\n", "#", "{", "}", "(", ")", ",", "=", "  "]


def rand_text(rng: random.Random, lo: int = 1, hi: int = 24) -> str:
    chars = string.ascii_letters + string.digits + " .-_[]/"
    out = "".join(rng.choice(chars) for _ in range(rng.randint(lo, hi)))
    if rng.random() < 0.25:
        pos = rng.randrange(len(out) + 1)
        out = out[:pos] + rng.choice(_NASTY) + out[pos:]
    out = out.strip()
    return out or "x"


def _maybe_assess(rng: random.Random, model: GoalModel, node_id: str) -> None:
    likelihood = rng.choice(list(Likelihood))
    consequence = rng.choice(list(Consequence))
    if rng.random() < 0.2:
        assess(model, node_id, likelihood, consequence,
               rand_text(rng), rng.choice(list(RiskLevel)))
    else:
        assess(model, node_id, likelihood, consequence)


def random_model(rng: random.Random, repo, ops: int = 25,
                 allow_remove: bool = True) -> GoalModel:
    """A valid model built through a random sequence of public operations."""
    model = new_model(rand_text(rng), rng.choice(list(MigrationType)), repo)
    goals: List[str] = []
    obstacles: List[str] = []
    tactics: List[str] = []

    def add_goal():
        parent = rng.choice(goals) if goals and rng.random() < 0.5 else None
        repo_ref = (rng.choice(repo.goals).id if rng.random() < 0.6 else None)
        goals.append(model.add_goal(rng.choice(list(GoalPattern)),
                                    rand_text(rng), repo_ref, parent))

    def add_obstacle():
        if not goals:
            return
        to_obstacle = obstacles and rng.random() < 0.5
        target = rng.choice(obstacles) if to_obstacle else rng.choice(goals)
        if rng.random() < 0.6:
            entry = rng.choice(repo.obstacles)
            siblings = (model.obstacle_nodes[target].children if to_obstacle
                        else model.goal_nodes[target].obstacles)
            for sibling in siblings:
                node = model.obstacle_nodes[sibling]
                if node.origin.repo_ref == entry.id and \
                        node.origin.kind.value == "evidential":
                    return  # duplicate attachment is an error by contract
            name = rand_text(rng) if rng.random() < 0.3 else None
            obstacles.append(model.attach_obstacle(
                target, Origin.evidential(entry.id), name))
        else:
            obstacles.append(model.attach_obstacle(
                target, Origin.domain(), rand_text(rng)))
        if rng.random() < 0.5:
            _maybe_assess(rng, model, obstacles[-1])

    def add_tactic():
        if not obstacles:
            return
        entry = rng.choice(repo.tactics)
        note = rand_text(rng) if (entry.id == "T41" or rng.random() < 0.5) else ""
        tactics.append(model.attach_tactic(rng.choice(obstacles), entry.id, note))

    def rename():
        if obstacles:
            model.rename_obstacle(rng.choice(obstacles), rand_text(rng))

    def remove():
        pool = goals + obstacles + tactics
        if len(pool) < 4:
            return
        victim = rng.choice(pool)
        model.remove_subtree(victim)
        for bucket in (goals, obstacles, tactics):
            bucket[:] = [n for n in bucket
                         if n in model.goal_nodes or n in model.obstacle_nodes
                         or n in model.tactic_nodes]

    actions = [add_goal, add_goal, add_obstacle, add_obstacle, add_obstacle,
               add_tactic, rename]
    if allow_remove:
        actions.append(remove)
    add_goal()
    for _ in range(ops):
        rng.choice(actions)()
    return model


def random_session(rng: random.Random, repo, ops: int = 18) -> Session:
    """A valid session built through random procedure operations."""
    session = start_session(rand_text(rng), rng.choice(list(MigrationType)),
                            repo, session_id=f"rand{rng.randrange(10**9)}")
    goals: List[str] = []
    obstacles: List[str] = []

    def add_goal():
        parent = rng.choice(goals) if goals and rng.random() < 0.4 else None
        repo_ref = (rng.choice(repo.goals).id if rng.random() < 0.7 else None)
        goals.append(session.add_goal(rng.choice(list(GoalPattern)),
                                      rand_text(rng), repo_ref, parent))

    def add_obstacle():
        if not goals:
            return
        model = session.model
        to_obstacle = obstacles and rng.random() < 0.4
        target = rng.choice(obstacles) if to_obstacle else rng.choice(goals)
        if rng.random() < 0.7:
            entry = rng.choice(repo.obstacles)
            siblings = (model.obstacle_nodes[target].children if to_obstacle
                        else model.goal_nodes[target].obstacles)
            for sibling in siblings:
                node = model.obstacle_nodes[sibling]
                if node.origin.repo_ref == entry.id and \
                        node.origin.kind.value == "evidential":
                    return
            obstacles.append(session.attach_obstacle(
                target, Origin.evidential(entry.id)))
        else:
            obstacles.append(session.attach_obstacle(
                target, Origin.domain(), rand_text(rng)))

    def do_assess():
        if not obstacles:
            return
        node = rng.choice(obstacles)
        if rng.random() < 0.15:
            session.assess(node, rng.choice(list(Likelihood)),
                           rng.choice(list(Consequence)), rand_text(rng),
                           rng.choice(list(RiskLevel)))
        else:
            session.assess(node, rng.choice(list(Likelihood)),
                           rng.choice(list(Consequence)), rand_text(rng))

    def do_apply():
        if not obstacles:
            return
        node = rng.choice(obstacles)
        entry = rng.choice(repo.tactics)
        note = rand_text(rng)
        reassessment = None
        if session.model.obstacle_nodes[node].assessment is not None \
                and rng.random() < 0.5:
            reassessment = (rng.choice(list(Likelihood)),
                            rng.choice(list(Consequence)), rand_text(rng))
        introduced = []
        for _ in range(rng.randrange(3)):
            if rng.random() < 0.5:
                candidate = rng.choice(repo.obstacles)
                existing = {session.model.obstacle_nodes[c].origin.repo_ref
                            for c in session.model.obstacle_nodes[node].children}
                if candidate.id in existing:
                    continue
                existing_new = {spec.origin.repo_ref for spec in introduced
                                if spec.origin.kind.value == "evidential"}
                if candidate.id in existing_new:
                    continue
                introduced.append(IntroducedSpec(Origin.evidential(candidate.id)))
            else:
                introduced.append(IntroducedSpec(Origin.domain(),
                                                 rand_text(rng)))
        created = session.apply_tactic(node, entry.id, note, reassessment,
                                       introduced)
        obstacles.extend(created[1:])

    def do_rename():
        if obstacles:
            session.rename_obstacle(rng.choice(obstacles), rand_text(rng))

    actions = [add_goal, add_goal, add_obstacle, add_obstacle, add_obstacle,
               do_assess, do_assess, do_apply, do_rename]
    add_goal()
    for _ in range(ops):
        rng.choice(actions)()
    return session
