import random

import pytest
from hypothesis import given, strategies as st

from bac.errors import ArtifactParseError, UnresolvedReference
from bac.report import DIFFERENT_NUMBER_OF_TASK_SEQUENCES, DIFFERENT_SPECIFICATION_STRATEGIES, Status, K
from bac.ontology import default_catalog
from bac.story import load_story, parse_story
from bac.taskcheck import (
    EnrichedTaskScenario,
    ScenarioTask,
    assess_task_scenarios,
    dump_enriched_scenario,
    find_positions,
    load_task_scenario,
    parse_enriched_scenario,
    parse_raw_scenario,
    parse_task_model,
    preformat,
)

from oracles import random_task_instance, task_positions_oracle

MODEL = """<taskmodel>
  <task id="a" name="Go to Home"/>
  <task id="b" name="Set Name" optional="true"/>
  <object id="o1" name="name field"/>
</taskmodel>"""


def scenario(*names, name="s"):
    return EnrichedTaskScenario(name, tuple(ScenarioTask(n) for n in names))


def story(*steps, scenarios=1):
    body = "".join(f"\nScenario: sc{i}\n" + "\n".join(steps) + "\n" for i in range(scenarios))
    return parse_story("T\n" + body)


def test_preformat_resolves_names_values_and_objects():
    raw = parse_raw_scenario('<scenario name="x"><taskref id="a"/><taskref id="b" objectid="o1" value="Ada"/></scenario>')
    enriched = preformat(raw, parse_task_model(MODEL))
    assert enriched.tasks == (ScenarioTask("Go to Home", False, None, None, "a"),
                              ScenarioTask("Set Name", True, "Ada", "name field", "b"))


def test_preformat_unknown_task_id():
    raw = parse_raw_scenario('<scenario name="x"><taskref id="zz"/></scenario>')
    with pytest.raises(UnresolvedReference):
        preformat(raw, parse_task_model(MODEL))


def test_preformat_empty_scenario():
    raw = parse_raw_scenario('<scenario name="x"/>')
    assert preformat(raw, parse_task_model(MODEL)).tasks == ()


@pytest.mark.parametrize("source", ["<scenario", "<other/>", '<scenario><taskref/></scenario>'])
def test_raw_scenario_errors(source):
    with pytest.raises(ArtifactParseError):
        parse_raw_scenario(source)


def test_model_duplicate_id():
    with pytest.raises(ArtifactParseError):
        parse_task_model('<m><task id="a" name="x"/><task id="a" name="y"/></m>')


def test_enriched_round_trip():
    s = EnrichedTaskScenario("x", (ScenarioTask("Go to Home", False, None, None, "a"),
                                   ScenarioTask("Set Name", True, "Sam, Déc 1", "field", "b")))
    assert parse_enriched_scenario(dump_enriched_scenario(s)).tasks == s.tasks


def test_load_raw_scenario_with_model_attribute(flight_dir):
    s = load_task_scenario(flight_dir / "search.scen")
    assert s.tasks[0].name == "Go to Book Flights"
    assert s.tasks[7].value == "Sam, Déc 1, 2018"


def test_load_enriched_file(tmp_path):
    path = tmp_path / "x.scen"
    path.write_text(dump_enriched_scenario(scenario("Go to Home")), encoding="utf-8")
    assert load_task_scenario(path).task_names == ["Go to Home"]


def test_raw_without_model(tmp_path):
    path = tmp_path / "x.scen"
    path.write_text('<scenario name="x"><taskref id="a"/></scenario>')
    with pytest.raises(ArtifactParseError):
        load_task_scenario(path)


def test_find_positions_is_case_insensitive():
    assert find_positions(scenario("Go to home", "x", "GO TO HOME"), "Go to Home") == [1, 3]


def test_consistent_step(catalog):
    result = assess_task_scenarios(story('Given I go to "Home"'), [scenario("Go to Home")], catalog).results[0]
    assert result.status is Status.PASSED
    assert result.evidence == "Expected: 1 Actual: 1"


def test_two_search_strings_need_one_scenario(catalog):
    st_ = story('When I inform "A" and choose "B" in the field "F"')
    split = [scenario("Inform A", "x"), scenario("y", "Choose B")]
    assert assess_task_scenarios(st_, split, catalog).results[0].status is Status.FAILED
    joined = [scenario("Inform A", "Choose B")]
    assert assess_task_scenarios(st_, joined, catalog).results[0].status is Status.PASSED


def test_unrecognized_step_does_not_advance(catalog):
    results = assess_task_scenarios(story('When I fly away', 'Given I go to "Home"'),
                                    [scenario("Go to Home")], catalog).results
    assert [r.status for r in results] == [Status.UNRECOGNIZED, Status.PASSED]


def test_log_has_a_row_per_search_string_and_scenario(catalog):
    st_ = story('Given I go to "Home"', 'When I inform "A" and choose "B" in the field "F"')
    scenarios = [scenario("Go to Home", name="a"), scenario(name="b"), scenario("Inform A", name="c")]
    log = assess_task_scenarios(st_, scenarios, catalog).log
    assert len(log) == 3 * 3
    assert [r.expected_position for r in log[::3]] == [1, 2, 3]
    assert log[1].not_found


def test_skip_task_names(catalog):
    st_ = story('Given I go to "Home"', 'When I click on "Go"')
    scenarios = [scenario("Go to Home", "Provide data", "Click on Go")]
    assert assess_task_scenarios(st_, scenarios, catalog).results[1].status is Status.FAILED
    skipped = assess_task_scenarios(st_, scenarios, catalog, skip_task_names=["provide data"])
    assert skipped.results[1].status is Status.PASSED


def test_diagnostics(catalog):
    st_ = story('Given I go to "Home"', scenarios=2)
    diags = assess_task_scenarios(st_, [scenario("Go to Home", "extra")], catalog).diagnostics
    assert [d.kind for d in diags] == [DIFFERENT_NUMBER_OF_TASK_SEQUENCES,
                                       DIFFERENT_SPECIFICATION_STRATEGIES, DIFFERENT_SPECIFICATION_STRATEGIES]
    assert assess_task_scenarios(story('Given I go to "Home"'), [scenario("Go to Home")], catalog).diagnostics == []


def test_flight_fixture_column(catalog, flight_dir):
    results = assess_task_scenarios(load_story(flight_dir / "search.story"),
                                    [load_task_scenario(flight_dir / "search.scen")], catalog).results
    cells = [r.evidence for r in results]
    assert cells == [
        "Expected: 1 Actual: 1", "Expected: 2/3 Actual: 0", "Expected: 4/5 Actual: 0",
        "Expected: 6 Actual: 8", "Expected: 7 Actual: 9", "Expected: 8 Actual: 0",
        "Expected: 9 Actual: 10", "Expected: 10 Actual: 11", "Expected: 11 Actual: 12",
        "Expected: 12 Actual: 0", "Expected: 13 Actual: 14", "Expected: 14 Actual: 0",
        "Expected: 15 Actual: 0", "Expected: 16 Actual: 17", "Expected: 17 Actual: 0",
    ]
    assert results[1].classification is K.DIFFERENT_TASK_NAME
    assert results[3].classification is K.WRONG_POSITION
    assert results[5].classification is K.TASK_NOT_EXTRACTED
    assert results[9].classification is K.SPEC_MODEL_CONFLICT


# properties

@given(st.integers(0, 2**32 - 1))
def test_positions_match_oracle(seed):
    instance = random_task_instance(random.Random(seed))
    assessment = assess_task_scenarios(parse_story(instance.story_text), instance.scenarios, default_catalog())
    rows, verdicts = task_positions_oracle(instance.step_tasks, instance.scenarios)
    assert [(r.searched, r.expected_position, r.scenario, r.positions) for r in assessment.log] == rows
    assert [r.status is Status.PASSED for r in assessment.results] == verdicts


@given(st.integers(0, 2**32 - 1))
def test_positions_are_in_range(seed):
    instance = random_task_instance(random.Random(seed))
    log = assess_task_scenarios(parse_story(instance.story_text), instance.scenarios, default_catalog()).log
    lengths = {s.name: len(s.tasks) for s in instance.scenarios}
    for row in log:
        assert all(1 <= p <= lengths[row.scenario] for p in row.positions)


@given(st.integers(0, 2**32 - 1), st.randoms())
def test_verdicts_ignore_scenario_order(seed, shuffler):
    instance = random_task_instance(random.Random(seed))
    st_ = parse_story(instance.story_text)
    before = [r.status for r in assess_task_scenarios(st_, instance.scenarios, default_catalog()).results]
    shuffled = list(instance.scenarios)
    shuffler.shuffle(shuffled)
    after = [r.status for r in assess_task_scenarios(st_, shuffled, default_catalog()).results]
    assert before == after


@given(st.integers(0, 2**32 - 1))
def test_expected_positions_are_consecutive(seed):
    instance = random_task_instance(random.Random(seed))
    assessment = assess_task_scenarios(parse_story(instance.story_text), instance.scenarios, default_catalog())
    expected = [e for r in assessment.results for e in r.details["expected"]]
    assert expected == list(range(1, len(expected) + 1))
