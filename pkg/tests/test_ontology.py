from collections import Counter

import pytest
from hypothesis import given, strategies as st

from bac.errors import AmbiguousMatch, CatalogError, UnknownBehavior
from bac.ontology import (
    Category,
    Platform,
    StepBinding,
    derive_task_names,
    load_catalog,
    match_step,
    parse_catalog,
    supported_elements,
)
from bac.story import Keyword, Step, parse_story


def step(text, keyword=Keyword.WHEN):
    return parse_story(f"T\n\nScenario: s\n{keyword.value} {text}\n").scenarios[0].steps[0]


def test_category_tally(catalog):
    counts = Counter(e.category for e in catalog)
    assert counts == {
        Category.CHECKBOX_RADIO: 4, Category.COMMON: 31, Category.DATA_GENERATION: 2,
        Category.DATA_PROVIDER: 8, Category.DEBUG: 1, Category.DIALOG: 4,
        Category.MOUSE_CONTROL: 1, Category.TABLE: 11,
    }


def test_unchecked_entry(catalog):
    assert supported_elements("theFieldIsUnchecked", Platform.ABSTRACT, catalog) == ["Checkbox", "Radio Button"]


def test_tree_row_has_no_prototype_element(catalog):
    assert supported_elements("clickOnTheRowOfTheTree", Platform.PROTOTYPE, catalog) == []


@pytest.mark.parametrize("behavior, platform, expected", [
    ("setInTheField", Platform.PROTOTYPE, ["ComboBox", "TextInput", "SearchBox", "Calendar", "DateChooser"]),
    ("clickOn", Platform.FINAL_GUI, ["Menu", "MenuItem", "Button", "Link"]),
    ("selectFromDataSet", Platform.PROTOTYPE, []),
])
def test_supported_elements(catalog, behavior, platform, expected):
    assert supported_elements(behavior, platform, catalog) == expected


def test_supported_elements_unknown(catalog):
    with pytest.raises(UnknownBehavior):
        supported_elements("flyToTheMoon", Platform.PROTOTYPE, catalog)


def test_supported_elements_are_transcribed_column_values(catalog):
    for entry in catalog:
        for platform, attr in ((Platform.ABSTRACT, "abstract"), (Platform.PROTOTYPE, "prototype"),
                               (Platform.FINAL_GUI, "final_gui")):
            column = {getattr(t, attr) for t in entry.elements}
            assert set(supported_elements(entry.id, platform, catalog)) <= column


def test_match_select(catalog):
    binding = match_step(step('I select "Direct Flights Only"'), catalog)
    assert binding.behavior_id == "select"
    assert binding.bindings == {"option": "Direct Flights Only"}


def test_set_the_date_does_not_match(catalog):
    assert match_step(step('I set the date "12/20/2017" in the field "Return"'), catalog) is None


def test_match_type_and_choose(catalog):
    binding = match_step(step('I type "New York" and choose "NYC - New York, NY" in the field "From"'), catalog)
    assert binding.behavior_id == "typeAndChooseInTheField"
    assert binding.bindings == {"value1": "New York", "value2": "NYC - New York, NY", "fieldname": "From"}


def test_keyword_filter(catalog):
    # willBeDisplayed only accepts Then
    assert match_step(step('"Welcome" will be displayed', Keyword.WHEN), catalog) is None
    assert match_step(step('"Welcome" will be displayed', Keyword.THEN), catalog).behavior_id == "willBeDisplayed"


def test_literals_are_case_and_space_insensitive(catalog):
    binding = match_step(step('I  SELECT   "x"'), catalog)
    assert binding.behavior_id == "select"


def test_aliases(catalog):
    assert match_step(step('I submit "Search"'), catalog).behavior_id == "clickOn"
    binding = match_step(step('will be displayed "2. Sélectionner"', Keyword.THEN), catalog)
    assert binding.behavior_id == "willBeDisplayed"
    assert binding.bindings == {"content": "2. Sélectionner"}


@pytest.mark.parametrize("behavior, bindings, expected", [
    ("select", {"option": "Direct Flights Only"}, ["Select Direct Flights Only"]),
    ("goTo", {"address": "Book Flights"}, ["Go to Book Flights"]),
    ("informAndChooseInTheField",
     {"value1": "Toulouse", "value2": "Toulouse, Blagnac (TLS)", "fieldname": "Departure"},
     ["Inform Toulouse", "Choose Toulouse, Blagnac (TLS)"]),
])
def test_derive_task_names(catalog, behavior, bindings, expected):
    binding = StepBinding(behavior, bindings, catalog[behavior].step_templates[0])
    assert derive_task_names(binding, catalog) == expected


def test_recognize_task(catalog):
    assert "goTo" in catalog.recognize_task("Go to Book Flights")
    assert "chooseReferringTo" in catalog.recognize_task("Choose Economy")
    assert catalog.recognize_task("Adjust Timeframe") == set()


def test_no_ambiguity_on_shipped_catalog(catalog):
    for entry in catalog:
        for template in entry.step_templates:
            text = template.render({p: "x" for p in template.placeholders})
            for keyword in (Keyword.GIVEN, Keyword.WHEN, Keyword.THEN):
                match_step(Step(keyword, keyword, text, ()), catalog)  # raises on ambiguity


_value = st.text(alphabet=st.characters(blacklist_characters='"“”„‟″\n\r', blacklist_categories=("Cs",)),
                 max_size=12)


@given(st.data())
def test_template_bijection(catalog, data):
    entry = data.draw(st.sampled_from(list(catalog)))
    template = data.draw(st.sampled_from(entry.step_templates))
    values = {p: data.draw(_value) for p in template.placeholders}
    keyword = data.draw(st.sampled_from(sorted(entry.allowed_keywords, key=lambda k: k.value)))
    text = template.render(values)
    binding = match_step(Step(keyword, keyword, text, ()), catalog)
    assert binding is not None and binding.behavior_id == entry.id
    assert binding.bindings == values


BASE = {
    "id": "x", "category": "Common", "steps": ['I go to "<address>"'], "tasks": ["Go to <address>"],
    "keywords": ["Given"],
}


@pytest.mark.parametrize("change", [
    {"category": "Nope"},
    {"steps": ['I go to "<address']},
    {"steps": []},
    {"tasks": []},
    {"tasks": ["a", "b", "c"]},
    {"tasks": ["Go to <page>"]},
    {"keywords": ["And"]},
    {"keywords": ["Sometimes"]},
    {"target": "page"},
])
def test_catalog_errors(change):
    with pytest.raises(CatalogError):
        parse_catalog({"behavior": [{**BASE, **change}]})


def test_duplicate_id():
    with pytest.raises(CatalogError, match="duplicate"):
        parse_catalog({"behavior": [BASE, BASE]})


def test_empty_catalog_file(tmp_path):
    path = tmp_path / "empty.toml"
    path.write_text("")
    with pytest.raises(CatalogError, match="empty"):
        load_catalog(path)


def test_alias_must_bind_task_placeholders():
    with pytest.raises(CatalogError):
        parse_catalog({"behavior": [BASE], "alias": [{"behavior": "x", "step": "I go home"}]})


def test_ambiguous_catalog_raises():
    other = {**BASE, "id": "y"}
    catalog = parse_catalog({"behavior": [BASE, other]})
    with pytest.raises(AmbiguousMatch):
        match_step(step('I go to "A"', Keyword.GIVEN), catalog)
