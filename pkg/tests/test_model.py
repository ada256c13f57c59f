import random

import pytest

from cloudgate import MigrationType, ModelError, Origin, new_model
from cloudgate.model import GoalPattern
from cloudgate.risk import Consequence as C, Likelihood as L, assess

from fixtures import build_cs1_model
from genmodel import random_model

ACHIEVE = GoalPattern.ACHIEVE


def test_new_model(repo):
    model = new_model("S3 move", MigrationType.V, repo)
    assert model.node_count() == 0
    assert model.migration_type is MigrationType.V
    assert new_model("x", MigrationType.IV, repo).migration_type is MigrationType.IV


def test_new_model_empty_name(repo):
    with pytest.raises(ModelError):
        new_model("", MigrationType.V, repo)


def test_add_goal_root_and_child(repo):
    model = new_model("m", MigrationType.V, repo)
    root = model.add_goal(ACHIEVE, "Improved performance", "G4")
    assert model.goal_nodes[root].name == "Achieve [Improved performance]"
    child = model.add_goal(ACHIEVE, "Reduced query processing time",
                           parent=root)
    assert model.goal_nodes[root].children == [child]
    assert model.root_goals == [root]


def test_add_goal_bad_parent(repo):
    model = new_model("m", MigrationType.V, repo)
    with pytest.raises(ModelError):
        model.add_goal(ACHIEVE, "x", parent="missing")
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    obstacle = model.attach_obstacle(goal, Origin.evidential("O1"))
    with pytest.raises(ModelError):
        model.add_goal(ACHIEVE, "x", parent=obstacle)


def test_add_goal_unknown_repo_ref(repo):
    model = new_model("m", MigrationType.V, repo)
    with pytest.raises(ModelError):
        model.add_goal(ACHIEVE, "x", "G11")


def test_attach_evidential_default_name(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    node = model.attach_obstacle(goal, Origin.evidential("O1"))
    assert node == "O1"
    assert model.obstacle_nodes[node].name == "Cloud outage"


def test_attach_domain_ordinal_paths(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    o1 = model.attach_obstacle(goal, Origin.evidential("O1"))
    model.attach_obstacle(o1, Origin.domain(), "Local network disruption")
    model.attach_obstacle(o1, Origin.domain(), "I/O issues of servers")
    o1_3 = model.attach_obstacle(o1, Origin.domain(), "S3 data centre outage")
    assert o1_3 == "O1_3"
    o1_3_1 = model.attach_obstacle(o1_3, Origin.domain(),
                                   "Local electrical storm")
    assert o1_3_1 == "O1_3_1"
    # refinement inherits the repository ancestor
    assert model.repo_origin(o1_3_1) == "O1"


def test_attach_novel_domain_ids(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability")
    n1 = model.attach_obstacle(goal, Origin.domain(), "bespoke failure")
    n2 = model.attach_obstacle(goal, Origin.domain(), "another failure")
    assert (n1, n2) == ("N1", "N2")
    assert model.repo_origin(n1) is None
    child = model.attach_obstacle(n1, Origin.domain(), "sub-failure")
    assert child == "N1_1"


def test_attach_duplicate_evidential_same_target(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    model.attach_obstacle(goal, Origin.evidential("O1"))
    with pytest.raises(ModelError):
        model.attach_obstacle(goal, Origin.evidential("O1"))


def test_same_obstacle_under_two_goals_gets_fresh_node(repo):
    model = new_model("m", MigrationType.V, repo)
    g1 = model.add_goal(ACHIEVE, "Improved availability", "G1")
    g2 = model.add_goal(ACHIEVE, "Improved performance", "G4")
    first = model.attach_obstacle(g1, Origin.evidential("O27"))
    second = model.attach_obstacle(g2, Origin.evidential("O27"))
    assert first == "O27" and second != first
    assert model.obstacle_nodes[second].origin.repo_ref == "O27"
    assert model.validate_structure() == []


def test_attach_obstacle_errors(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    with pytest.raises(ModelError):
        model.attach_obstacle("missing", Origin.evidential("O1"))
    with pytest.raises(ModelError):
        model.attach_obstacle(goal, Origin.evidential("O99"))
    with pytest.raises(ModelError):
        model.attach_obstacle(goal, Origin.domain())  # domain needs a name
    with pytest.raises(ModelError):
        # a domain ancestor needs an obstacle target
        model.attach_obstacle(goal, Origin.domain("O1"), "x")
    o1 = model.attach_obstacle(goal, Origin.evidential("O1"))
    with pytest.raises(ModelError):
        # ancestor must sit on the origin chain
        model.attach_obstacle(o1, Origin.domain("O2"), "x")
    ok = model.attach_obstacle(o1, Origin.domain("O1"), "explicit ancestor")
    assert ok == "O1_1"


def test_rename_keeps_origin(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved performance", "G4")
    node = model.attach_obstacle(goal, Origin.evidential("O27"))
    model.rename_obstacle(node, "Performance variability of Amazon S3")
    assert model.obstacle_nodes[node].name == \
        "Performance variability of Amazon S3"
    assert model.obstacle_nodes[node].origin.repo_ref == "O27"
    with pytest.raises(ModelError):
        model.rename_obstacle(node, "  ")


def test_attach_tactic_rules(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    node = model.attach_obstacle(goal, Origin.evidential("O3"))
    tactic = model.attach_tactic(node, "T23", "retry policy")
    assert model.obstacle_nodes[node].resolutions == [tactic]
    with pytest.raises(ModelError):
        model.attach_tactic(node, "T99", "x")
    with pytest.raises(ModelError):
        model.attach_tactic("missing", "T23", "x")
    with pytest.raises(ModelError):
        model.attach_tactic(node, "T41", "")


def test_remove_leaf_tactic(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    node = model.attach_obstacle(goal, Origin.evidential("O3"))
    tactic = model.attach_tactic(node, "T23", "retry")
    assert model.remove_subtree(tactic) == 1
    assert model.obstacle_nodes[node].resolutions == []
    assert model.validate_structure() == []


def test_remove_o1_subtree_count(repo):
    # O1 with three domain children, the third refined into two more: 6 nodes
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    o1 = model.attach_obstacle(goal, Origin.evidential("O1"))
    model.attach_obstacle(o1, Origin.domain(), "Local network disruption")
    model.attach_obstacle(o1, Origin.domain(), "I/O issues of servers")
    o1_3 = model.attach_obstacle(o1, Origin.domain(), "S3 data centre outage")
    model.attach_obstacle(o1_3, Origin.domain(), "Local electrical storm")
    model.attach_obstacle(o1_3, Origin.domain(), "S3 power outage")
    descendants = model.node_count() - 2  # goal + O1 itself
    assert descendants == 5
    assert model.remove_subtree(o1) == 6
    assert model.validate_structure() == []
    assert model.goal_nodes[goal].obstacles == []


def test_remove_unknown_node(repo):
    model = new_model("m", MigrationType.V, repo)
    with pytest.raises(ModelError):
        model.remove_subtree("nope")


def test_remove_covers_introduced_obstacles(repo):
    model = new_model("m", MigrationType.IV, repo)
    goal = model.add_goal(ACHIEVE, "Reduced cloud adoption cost", "G10")
    o48 = model.attach_obstacle(goal, Origin.evidential("O48"))
    tactic = model.attach_tactic(o48, "T3", "switch provider")
    o44 = model.attach_obstacle(o48, Origin.evidential("O44"))
    model.obstacle_nodes[o44].introduced_by = tactic
    model.tactic_nodes[tactic].introduced.append(o44)
    # removing the tactic also removes the obstacle it introduced
    assert model.remove_subtree(tactic) == 2
    assert o44 not in model.obstacle_nodes
    assert model.validate_structure() == []


def test_validate_detects_refinement_cycle(repo):
    model = build_cs1_model(repo)
    model.obstacle_nodes["O50"].children.append("O21")
    model.obstacle_nodes["O21"].children.append("O50")
    violations = model.validate_structure()
    assert any("cycle" in v for v in violations)


def test_validate_detects_detached_tactic(repo):
    model = build_cs1_model(repo, with_tactics=True)
    # detach a tactic from its obstacle by direct mutation
    tactic = next(iter(model.tactic_nodes))
    owner = model.tactic_nodes[tactic].obstacle
    model.obstacle_nodes[owner].resolutions.remove(tactic)
    violations = model.validate_structure()
    assert any(f"tactic {tactic}" in v and "exactly one" in v
               for v in violations)


def test_validate_detects_override_without_note(repo):
    model = build_cs1_model(repo)
    node = model.obstacle_nodes["O3"]
    node.assessment = node.assessment.__class__(
        likelihood=node.assessment.likelihood,
        consequence=node.assessment.consequence,
        computed=node.assessment.computed,
        note="", override=node.assessment.override,
        history=())
    violations = model.validate_structure()
    assert any("override without a note" in v for v in violations)


def test_clone_is_independent(repo):
    model = build_cs1_model(repo, with_tactics=True)
    copy = model.clone()
    assert model.equivalent(copy)
    copy.rename_obstacle("O51", "renamed")
    assert model.obstacle_nodes["O51"].name == "Tight dependencies"
    assert not model.equivalent(copy)


def test_acyclic_after_random_op_sequences(repo):
    rng = random.Random(7)
    for _ in range(60):
        model = random_model(rng, repo, ops=30)
        assert model.validate_structure() == []


def test_ordinal_ids_never_collide(repo):
    rng = random.Random(11)
    for _ in range(40):
        model = random_model(rng, repo, ops=40)
        ids = list(model.goal_nodes) + list(model.obstacle_nodes) \
            + list(model.tactic_nodes)
        assert len(ids) == len(set(ids))


def test_remove_then_validate_always_clean(repo):
    rng = random.Random(13)
    for _ in range(40):
        model = random_model(rng, repo, ops=25, allow_remove=False)
        nodes = list(model.goal_nodes) + list(model.obstacle_nodes) \
            + list(model.tactic_nodes)
        victim = rng.choice(nodes)
        model.remove_subtree(victim)
        assert model.validate_structure() == []


def test_assessment_survives_clone(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(ACHIEVE, "Improved availability", "G1")
    node = model.attach_obstacle(goal, Origin.evidential("O3"))
    assess(model, node, L.POSSIBLE, C.MINOR, "note")
    copy = model.clone()
    assert copy.obstacle_nodes[node].assessment is not None
    assert copy.obstacle_nodes[node].assessment.computed.value == "M"
