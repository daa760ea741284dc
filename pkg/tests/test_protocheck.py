import logging
import random

import pytest
from hypothesis import given, strategies as st

from bac.errors import ArtifactParseError, ConfigError, MappingGap
from bac.ontology import default_catalog, parse_catalog
from bac.protocheck import (
    Mode,
    Prototype,
    PrototypeControl,
    assess_prototype,
    check_mapping,
    count_matching_elements,
    decode_text,
    load_mapping,
    load_prototype,
    parse_mapping,
    parse_prototype,
    supported_types,
)
from bac.report import K, Status
from bac.story import load_story, parse_story

from oracles import LABEL, count_oracle, random_prototype, random_supported

B = "com.balsamiq.mockups::"
TEXT_INPUT = {B + "TextInput"}


def mockup(*controls: str) -> str:
    return f'<mockup><controls>{"".join(controls)}</controls></mockup>'


def control(cid, ctype, text=None, group=-1):
    props = f"<controlProperties><text>{text}</text></controlProperties>" if text is not None else ""
    return f'<control controlID="{cid}" controlTypeID="{B}{ctype}" isInGroup="{group}">{props}</control>'


def test_parse_controls_and_groups():
    proto = parse_prototype(mockup(control(1, "Label", "Full%20Name", 9), control(2, "TextInput", group=9)))
    assert proto.controls == (PrototypeControl("1", B + "Label", "Full Name", "9"),
                              PrototypeControl("2", B + "TextInput", None, "9"))


def test_parse_nested_group_children(flight_dir):
    proto = load_prototype(flight_dir / "search.bmml")
    grouped = [c for c in proto.controls if c.group_id == "4"]
    assert [c.text for c in grouped] == ["Departure Date", "dd/mm/yyyy"]
    assert proto.mockup_name == "search"


@pytest.mark.parametrize("source", [
    "<mockup>",
    mockup('<control controlTypeID="x"/>'),
    mockup(control(1, "Label"), control(1, "Button")),
])
def test_parse_errors(source):
    with pytest.raises(ArtifactParseError):
        parse_prototype(source)


def test_decode_text(caplog):
    assert decode_text("Caf%C3%A9") == "Café"
    with caplog.at_level(logging.WARNING):
        assert decode_text("100%") == "100%"
    assert caplog.records
    assert decode_text("%E9t%E9") == "%E9t%E9"


def test_count_ungrouped_match():
    proto = Prototype((PrototypeControl("1", B + "TextInput", "Name"),))
    assert count_matching_elements("name", TEXT_INPUT, proto) == 1


def test_count_labelled_group_once():
    proto = Prototype((PrototypeControl("1", LABEL, "Name", "g"), PrototypeControl("2", B + "TextInput", None, "g"),
                       PrototypeControl("3", B + "TextInput", None, "g")))
    assert count_matching_elements("Name", TEXT_INPUT, proto) == 1


def test_count_label_outside_group_is_not_enough():
    proto = Prototype((PrototypeControl("1", LABEL, "Name"), PrototypeControl("2", B + "TextInput")))
    assert count_matching_elements("Name", TEXT_INPUT, proto) == 0


def test_count_wildcard():
    proto = Prototype((PrototypeControl("1", B + "Paragraph", "Name"),))
    assert count_matching_elements("Name", {"*"}, proto) == 1


def test_mapping_parse_and_gap():
    mapping = parse_mapping("# c\nButton = a, b\n")
    assert mapping.types_for("button") == {"a", "b"}
    with pytest.raises(MappingGap):
        mapping.types_for("Grid")
    with pytest.raises(ConfigError):
        parse_mapping("Button\n")
    with pytest.raises(ConfigError):
        parse_mapping("# nothing\n")


def test_bundled_mapping_covers_catalog(catalog):
    assert check_mapping(catalog, load_mapping()) == []


def test_check_mapping_reports_missing(catalog):
    assert "Button" in check_mapping(catalog, parse_mapping("Text = x\n"))


def test_supported_types_raises_mapping_gap(catalog):
    with pytest.raises(MappingGap):
        supported_types("clickOn", catalog, parse_mapping("Text = x\n"))


def test_skipped_without_prototype_element(catalog):
    st_ = parse_story('T\n\nScenario: s\nWhen I select from dataset "users"\n')
    result = assess_prototype(st_, Prototype(()), catalog, load_mapping())[0]
    assert result.status is Status.SKIPPED


def test_page_from_mockup_name(catalog):
    st_ = parse_story('T\n\nScenario: s\nGiven I go to "Flight Search"\n')
    proto = Prototype((), "", "flight search")
    assert assess_prototype(st_, proto, catalog, load_mapping())[0].status is Status.PASSED


def test_fail_fast_stops_scenario(catalog):
    st_ = parse_story('T\n\nScenario: s\nWhen I click on "A"\nWhen I click on "B"\n\nScenario: t\nWhen I click on "B"\n')
    proto = Prototype((PrototypeControl("1", B + "Button", "B"),))
    results = assess_prototype(st_, proto, catalog, load_mapping())
    assert [r.status for r in results] == [Status.FAILED, Status.NOT_PERFORMED, Status.PASSED]
    cont = assess_prototype(st_, proto, catalog, load_mapping(), Mode.CONTINUE)
    assert [r.status for r in cont] == [Status.FAILED, Status.PASSED, Status.PASSED]


def test_flight_prototype_column(catalog, flight_dir):
    results = assess_prototype(load_story(flight_dir / "search.story"), load_prototype(flight_dir / "search.bmml"),
                               catalog, load_mapping(), Mode.CONTINUE)
    counts = [r.details.get("count") for r in results]
    assert counts == [0, 1, 1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 3, 1, None]
    assert [r.classification for r in results if r.status is Status.FAILED] == [
        K.INEXISTENT_ELEMENT, K.LABEL_ELEMENT_GROUP_SPLIT, K.LABEL_ELEMENT_GROUP_SPLIT, K.INEXISTENT_ELEMENT,
        K.EXPECTED_ACTUAL_CONFLICT, K.EXPECTED_ACTUAL_CONFLICT, K.INEXISTENT_ELEMENT, K.AMBIGUOUS_ELEMENT,
        K.UNTRACEABLE_INTERACTION,
    ]


def test_custom_catalog_mapping_gap_names_element():
    catalog = parse_catalog({"behavior": [{
        "id": "poke", "category": "Common", "steps": ['I poke "<x>"'], "tasks": ["Poke <x>"],
        "keywords": ["When"], "target": "x", "elements": [["Knob", "Knob", "-"]]}]})
    with pytest.raises(MappingGap, match="Knob"):
        supported_types("poke", catalog, load_mapping())


# properties

@given(st.integers(0, 2**32 - 1))
def test_count_matches_oracle(seed):
    rng = random.Random(seed)
    proto, supported = random_prototype(rng), random_supported(rng)
    assert count_matching_elements("Name", supported, proto) == count_oracle("Name", supported, proto)


@given(st.integers(0, 2**32 - 1))
def test_count_invariant_under_id_renaming(seed):
    rng = random.Random(seed)
    proto, supported = random_prototype(rng), random_supported(rng)
    renamed = Prototype(tuple(
        PrototypeControl(f"x{c.control_id}", c.control_type, c.text, c.group_id and f"G{c.group_id}")
        for c in proto.controls))
    assert count_matching_elements("Name", supported, renamed) == count_matching_elements("Name", supported, proto)


@given(st.integers(0, 2**32 - 1))
def test_count_ignores_text_case(seed):
    rng = random.Random(seed)
    proto, supported = random_prototype(rng), random_supported(rng)
    upper = Prototype(tuple(PrototypeControl(c.control_id, c.control_type, c.text and c.text.upper(), c.group_id)
                            for c in proto.controls))
    assert count_matching_elements("name", supported, upper) == count_matching_elements("NAME", supported, proto)


@given(st.integers(0, 2**32 - 1))
def test_verdict_trichotomy(seed):
    rng = random.Random(seed)
    proto = random_prototype(rng)
    st_ = parse_story('T\n\nScenario: s\nWhen I set "v" in the field "Name"\n')
    result = assess_prototype(st_, proto, default_catalog(), load_mapping())[0]
    count = result.details["count"]
    assert (result.status is Status.PASSED) == (count == 1)
    if count >= 2:
        assert result.classification is K.AMBIGUOUS_ELEMENT
    if count == 0:
        assert result.classification is not K.AMBIGUOUS_ELEMENT
