import pytest

from cloudgate import (MigrationType, ModelError, Origin, assess,
                       coverage_check, new_model, reassess_after_tactic,
                       risk_of)
from cloudgate.model import GoalPattern
from cloudgate.risk import (COVERED, UNASSESSED, UNCOVERED, Consequence as C,
                            Likelihood as L, RiskLevel as R, make_assessment)

from fixtures import build_cs1_model, build_cs2_session

# Full golden matrix: rows by likelihood, columns insignificant..catastrophic.
MATRIX_GOLDEN = [
    (L.ALMOST_CERTAIN, [R.HIGH, R.HIGH, R.EXTREME, R.EXTREME, R.VERY_EXTREME]),
    (L.LIKELY, [R.MODERATE, R.HIGH, R.HIGH, R.EXTREME, R.VERY_EXTREME]),
    (L.POSSIBLE, [R.LOW, R.MODERATE, R.HIGH, R.EXTREME, R.EXTREME]),
    (L.UNLIKELY, [R.LOW, R.LOW, R.MODERATE, R.HIGH, R.EXTREME]),
    (L.RARE, [R.LOW, R.LOW, R.MODERATE, R.HIGH, R.HIGH]),
]


def test_matrix_all_25_cells():
    for likelihood, row in MATRIX_GOLDEN:
        for consequence, expected in zip(C, row):
            assert risk_of(likelihood, consequence) is expected, \
                (likelihood, consequence)


@pytest.mark.parametrize("likelihood,consequence,expected", [
    (L.ALMOST_CERTAIN, C.MAJOR, R.EXTREME),
    (L.POSSIBLE, C.INSIGNIFICANT, R.LOW),
    (L.RARE, C.CATASTROPHIC, R.HIGH),
    (L.LIKELY, C.MODERATE, R.HIGH),
    (L.LIKELY, C.CATASTROPHIC, R.VERY_EXTREME),
])
def test_matrix_named_cells(likelihood, consequence, expected):
    assert risk_of(likelihood, consequence) is expected


def test_matrix_monotone_both_axes():
    likelihoods = list(L)
    consequences = list(C)
    for i, likelihood in enumerate(likelihoods[:-1]):
        for consequence in consequences:
            assert risk_of(likelihood, consequence) <= \
                risk_of(likelihoods[i + 1], consequence)
    for likelihood in likelihoods:
        for j, consequence in enumerate(consequences[:-1]):
            assert risk_of(likelihood, consequence) <= \
                risk_of(likelihood, consequences[j + 1])


def test_level_ordering():
    assert R.LOW < R.MODERATE < R.HIGH < R.EXTREME < R.VERY_EXTREME


def test_override_requires_note():
    with pytest.raises(ModelError):
        make_assessment(L.POSSIBLE, C.MINOR, "", R.LOW)
    with pytest.raises(ModelError):
        make_assessment(L.POSSIBLE, C.MINOR, "   ", R.LOW)


def test_override_never_changes_computed():
    a = make_assessment(L.POSSIBLE, C.MINOR, "table prints L", R.LOW)
    assert a.computed is R.MODERATE
    assert a.effective is R.LOW
    b = make_assessment(L.POSSIBLE, C.MINOR)
    assert b.effective is b.computed is R.MODERATE


def _one_obstacle_model(repo):
    model = new_model("m", MigrationType.V, repo)
    goal = model.add_goal(GoalPattern.ACHIEVE, "Improved availability", "G1")
    node = model.attach_obstacle(goal, Origin.evidential("O3"))
    return model, node


def test_assess_replaces_and_keeps_history(repo):
    model, node = _one_obstacle_model(repo)
    first = assess(model, node, L.ALMOST_CERTAIN, C.MAJOR, "initial")
    assert first.computed is R.EXTREME
    second = assess(model, node, L.POSSIBLE, C.MINOR, "revised")
    assert second.computed is R.MODERATE
    assert len(second.history) == 1
    assert second.history[0].likelihood is L.ALMOST_CERTAIN
    assert second.history[0].tactic_node is None


def test_reassess_after_tactic(repo):
    model, node = _one_obstacle_model(repo)
    assess(model, node, L.ALMOST_CERTAIN, C.MAJOR, "initial")
    tactic = model.attach_tactic(node, "T3", "switch provider")
    updated = reassess_after_tactic(model, node, tactic, L.POSSIBLE, C.MAJOR,
                                    "provider switch lowers likelihood")
    assert updated.computed is R.EXTREME  # (possible, major) stays extreme
    assert len(updated.history) == 1
    assert updated.history[0].tactic_node == tactic


def test_reassess_requires_prior_assessment(repo):
    model, node = _one_obstacle_model(repo)
    tactic = model.attach_tactic(node, "T3", "switch provider")
    with pytest.raises(ModelError):
        reassess_after_tactic(model, node, tactic, L.POSSIBLE, C.MAJOR, "x")


def test_reassess_requires_attached_tactic(repo):
    model, node = _one_obstacle_model(repo)
    goal2 = model.add_goal(GoalPattern.ACHIEVE, "Improved performance", "G4")
    other = model.attach_obstacle(goal2, Origin.evidential("O27"))
    assess(model, node, L.LIKELY, C.MAJOR, "initial")
    other_tactic = model.attach_tactic(other, "T26", "more VMs")
    with pytest.raises(ModelError):
        reassess_after_tactic(model, node, other_tactic, L.POSSIBLE, C.MAJOR,
                              "x")


def test_history_length_tracks_reassessments(repo):
    model, node = _one_obstacle_model(repo)
    assess(model, node, L.LIKELY, C.MAJOR, "initial")
    tactic = model.attach_tactic(node, "T18", "replicate")
    for i in range(3):
        updated = reassess_after_tactic(model, node, tactic, L.POSSIBLE,
                                        C.MINOR, f"round {i}")
    assert len(updated.history) == 3


def test_coverage_empty_model(repo):
    model = new_model("empty", MigrationType.I, repo)
    report = coverage_check(model)
    assert report.verdicts == ()
    assert report.violations == ()
    assert report.ok


def test_coverage_cs1_without_tactics(repo):
    model = build_cs1_model(repo, with_tactics=False)
    report = coverage_check(model, R.HIGH)
    uncovered = {v.node_id for v in report.uncovered}
    assert uncovered == {"O51", "O50", "O21"}
    o3 = next(v for v in report.verdicts if v.node_id == "O3")
    assert o3.verdict == COVERED  # effective L after the documented override
    assert not report.ok


def test_coverage_cs1_with_tactics(repo):
    model = build_cs1_model(repo, with_tactics=True)
    report = coverage_check(model, R.HIGH)
    assert report.ok
    assert {v.verdict for v in report.verdicts} == {COVERED}


def test_coverage_unassessed_leaf_never_silently_covered(repo):
    model, node = _one_obstacle_model(repo)
    report = coverage_check(model)
    verdict = report.verdicts[0]
    assert verdict.verdict == UNASSESSED
    assert not report.ok


def test_coverage_parent_via_children(repo):
    model = new_model("m", MigrationType.IV, repo)
    goal = model.add_goal(GoalPattern.ACHIEVE, "Reduced cloud adoption cost",
                          "G10")
    parent = model.attach_obstacle(goal, Origin.evidential("O48"))
    child_a = model.attach_obstacle(parent, Origin.evidential("O44"))
    child_b = model.attach_obstacle(parent, Origin.domain(), "local quirk")
    assess(model, child_a, L.LIKELY, C.MODERATE, "api mismatch")
    model.attach_tactic(child_a, "T6", "wrapper")
    assess(model, child_b, L.RARE, C.MINOR, "negligible")
    report = coverage_check(model, R.HIGH)
    verdicts = {v.node_id: v for v in report.verdicts}
    assert verdicts[parent].verdict == COVERED
    assert verdicts[parent].reason == "all refinement children covered"
    # one child losing coverage flips the parent
    model.tactic_nodes.clear()
    model.obstacle_nodes[child_a].resolutions.clear()
    report = coverage_check(model, R.HIGH)
    verdicts = {v.node_id: v for v in report.verdicts}
    assert verdicts[child_a].verdict == UNCOVERED
    assert verdicts[parent].verdict == UNCOVERED


def test_coverage_t41_counts_only_with_note(repo):
    model, node = _one_obstacle_model(repo)
    assess(model, node, L.ALMOST_CERTAIN, C.MAJOR, "serious")
    tactic = model.attach_tactic(node, "T41", "accepted: cost of mitigation "
                                              "exceeds the exposure")
    assert coverage_check(model).verdicts[0].verdict == COVERED
    # strip the note by direct mutation; the tactic stops counting
    model.tactic_nodes[tactic].note = ""
    assert coverage_check(model).verdicts[0].verdict == UNCOVERED


def test_coverage_embeds_structure_violations(repo):
    model, node = _one_obstacle_model(repo)
    model.obstacle_nodes[node].children.append(node)  # forced cycle
    report = coverage_check(model)
    assert any("cycle" in v for v in report.violations)
    assert not report.ok


def test_coverage_threshold_monotonicity(repo):
    cs2 = build_cs2_session(repo)
    models = [build_cs1_model(repo, False), build_cs1_model(repo, True),
              cs2.session.model]
    thresholds = list(R)
    for model in models:
        previous = None
        for threshold in thresholds:
            report = coverage_check(model, threshold)
            risky = {v.node_id for v in report.uncovered
                     if v.effective_risk is not None}
            if previous is not None:
                assert risky <= previous
            previous = risky
