# Run a story against static HTML screens through a page map.

# The page map names screens and the elements on them. The runner reads
# the HTML, infers each element's kind and keeps form state per scenario.

from pathlib import Path

from bac.guicheck import assess_final_gui, load_dataset, load_page_map
from bac.ontology import default_catalog
from bac.protocheck import Mode
from bac.report import emit_console_log
from bac.story import load_story, parse_story

APP = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "app"

page_map = load_page_map(APP / "app.toml")
print(sorted(page_map.screens))

# The tour exercises forms, tables, a tree and a dialog.

story = load_story(APP / "tour.story")
results = assess_final_gui(story, page_map, default_catalog(), datasets=load_dataset(APP / "data.toml"))
print(sum(r.status.value == "Passed" for r in results), "of", len(results), "steps consistent")

# A broken story. FailFast stops each scenario at its first failure.

broken = parse_story("""Broken

Scenario: too long
Given I go to "Home"
When I set "far too long for it" in the field "Name"
Then "Done" is displayed
""")
print(emit_console_log(assess_final_gui(broken, page_map, default_catalog())))

# Continue mode runs the remaining steps anyway.

print(emit_console_log(assess_final_gui(broken, page_map, default_catalog(), mode=Mode.CONTINUE)))
