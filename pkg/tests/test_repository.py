import dataclasses
import json
import random

import pytest

from cloudgate import (DatasetError, MalformedIdError, NotFoundError,
                       ObstacleEntry, TacticEntry, get_entry, integrity_check,
                       load_repository, query_obstacles, query_tactics)
from cloudgate.repository import numeric_id


def test_bundled_counts(repo):
    assert len(repo.goals) == 10
    assert len(repo.obstacles) == 67
    assert len(repo.tactics) == 45
    assert len(repo.studies) == 112


def test_bundled_integrity_clean(repo):
    report = integrity_check(repo)
    assert report.errors == ()
    assert report.ok


def test_t22_warning_present(repo):
    report = integrity_check(repo)
    assert any(w.startswith("T22:") for w in report.warnings)
    t22 = repo.tactic("T22")
    assert t22.related_obstacles == ()
    assert "T7" in " ".join(t22.data_quality_notes)


def test_get_entry_o1(repo):
    entry = get_entry(repo, "O1")
    assert entry.name == "Cloud outage"
    assert entry.definition.startswith("A cloud service may suffer from outages")


def test_get_entry_t41(repo):
    entry = get_entry(repo, "T41")
    assert entry.name == "Do nothing"
    assert entry.definition == "Leave obstacle unresolved."
    assert entry.category == "DoNothing"
    assert entry.universal is True


def test_get_entry_not_found(repo):
    with pytest.raises(NotFoundError):
        get_entry(repo, "G11")


@pytest.mark.parametrize("bad", ["o1", "X3", "O", "1", "", "O 1", "G01"])
def test_get_entry_malformed(repo, bad):
    with pytest.raises(MalformedIdError):
        get_entry(repo, bad)


def test_query_obstacles_goal_g6(repo):
    ids = {o.id for o in query_obstacles(repo, goal="G6")}
    assert {"O19", "O20", "O21", "O22", "O23"} <= ids


def test_query_obstacles_migration_type_o5(repo):
    assert "O5" in {o.id for o in query_obstacles(repo, migration_type="II")}
    assert "O5" not in {o.id for o in query_obstacles(repo, migration_type="I")}


def test_query_obstacles_empty_intersection(repo):
    assert query_obstacles(repo, goal="G6", text="zzz-no-match") == []


def test_query_obstacles_text_matches_name_and_definition(repo):
    by_name = {o.id for o in query_obstacles(repo, text="vendor lock-in")}
    assert "O17" in by_name
    by_def = {o.id for o in query_obstacles(repo, text="forfeit")}
    assert "O30" in by_def


def test_query_obstacles_unknown_filters(repo):
    with pytest.raises(NotFoundError):
        query_obstacles(repo, goal="G99")
    with pytest.raises(NotFoundError):
        query_obstacles(repo, migration_type="VI")


def test_query_obstacles_ordering(repo):
    hits = query_obstacles(repo, goal="G3")
    keys = [(-len(o.source_studies), numeric_id(o.id)) for o in hits]
    assert keys == sorted(keys)


def test_query_tactics_o21_specific(repo):
    ids = [t.id for t in query_tactics(repo, obstacle="O21",
                                       include_universal=False)]
    assert set(ids) == {"T5", "T6", "T12"}


def test_query_tactics_o3_specific(repo):
    ids = {t.id for t in query_tactics(repo, obstacle="O3",
                                       include_universal=False)}
    assert ids == {"T18", "T23"}


def test_query_tactics_goal_mitigation(repo):
    ids = {t.id for t in query_tactics(repo, category="GoalMitigation")}
    assert ids == {"T38", "T39", "T40"}


def test_query_tactics_universal_flagging(repo):
    hits = query_tactics(repo, obstacle="O21", include_universal=True)
    universal = {t.id for t in hits if t.universal}
    assert universal == {"T1", "T2", "T3", "T36", "T37", "T38", "T41"}
    specific = {t.id for t in hits if not t.universal}
    assert specific == {"T5", "T6", "T12"}


def test_query_tactics_unknown_filters(repo):
    with pytest.raises(NotFoundError):
        query_tactics(repo, obstacle="O99")
    with pytest.raises(NotFoundError):
        query_tactics(repo, category="NotACategory")


def test_category_partition(repo):
    universal = {t.id for t in repo.tactics if t.universal}
    assert universal == {"T1", "T2", "T3", "T36", "T37", "T38", "T41"}
    do_nothing = {t.id for t in repo.tactics if t.category == "DoNothing"}
    assert do_nothing == {"T41"}


def test_integrity_detects_duplicate_id(repo):
    broken = dataclasses.replace(
        repo, obstacles=repo.obstacles[:-1] + (repo.obstacles[0],))
    report = integrity_check(broken)
    assert any("duplicate id O1" in e for e in report.errors)


def test_integrity_detects_dangling_goal(repo):
    bad = dataclasses.replace(repo.obstacles[0],
                              impacted_goals=("G0",))
    broken = dataclasses.replace(repo, obstacles=(bad,) + repo.obstacles[1:])
    report = integrity_check(broken)
    assert any("dangling goal reference G0" in e for e in report.errors)


def test_integrity_detects_count_mismatch(repo):
    broken = dataclasses.replace(repo, obstacles=repo.obstacles[:-1])
    report = integrity_check(broken)
    assert any("count mismatch" in e and "67" in e for e in report.errors)


def _dataset_dict():
    from cloudgate.repository import bundled_dataset_path
    with open(bundled_dataset_path(), "r", encoding="utf-8") as fh:
        return json.load(fh)


def test_load_rejects_dangling_reference(tmp_path):
    data = _dataset_dict()
    data["tactics"][8]["related_obstacles"] = ["O99"]
    target = tmp_path / "broken.json"
    target.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(DatasetError) as err:
        load_repository(str(target))
    assert "T9" in str(err.value) and "O99" in str(err.value)


def test_load_rejects_count_mismatch(tmp_path):
    data = _dataset_dict()
    data["obstacles"] = data["obstacles"][:-1]
    target = tmp_path / "short.json"
    target.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(DatasetError) as err:
        load_repository(str(target))
    assert "count mismatch" in str(err.value)


def test_load_rejects_schema_violation(tmp_path):
    data = _dataset_dict()
    del data["tactics"][0]["category"]
    target = tmp_path / "schema.json"
    target.write_text(json.dumps(data), encoding="utf-8")
    with pytest.raises(DatasetError) as err:
        load_repository(str(target))
    assert "tactic T1" in str(err.value) and "category" in str(err.value)


def test_load_missing_file():
    with pytest.raises(DatasetError):
        load_repository("/nonexistent/dataset.json")


def _brute_force_obstacles(repo, goal, migration_type, text):
    hits = []
    for o in repo.obstacles:
        if goal and goal not in o.impacted_goals:
            continue
        if migration_type and migration_type not in o.migration_types:
            continue
        if text and text.lower() not in o.name.lower() \
                and text.lower() not in o.definition.lower():
            continue
        hits.append(o.id)
    return hits


def test_query_soundness_against_brute_force(repo):
    rng = random.Random(20170425)
    goal_ids = [g.id for g in repo.goals] + [None] * 3
    types = ["I", "II", "III", "IV", "V", None, None]
    words = ["cloud", "data", "cost", "tenant", "latency", "zzz", None, None]
    for _ in range(300):
        goal = rng.choice(goal_ids)
        mtype = rng.choice(types)
        text = rng.choice(words)
        got = [o.id for o in query_obstacles(repo, goal=goal,
                                             migration_type=mtype, text=text)]
        assert set(got) == set(_brute_force_obstacles(repo, goal, mtype, text))
        again = [o.id for o in query_obstacles(repo, goal=goal,
                                               migration_type=mtype, text=text)]
        assert got == again  # determinism
