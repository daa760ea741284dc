# Which steps of a story does the behavior catalog understand?

# The catalog is a vocabulary of UI behaviors. Each entry pairs step
# templates with the task names and element kinds it expects.

from pathlib import Path

from bac.cli import lint
from bac.ontology import Platform, default_catalog, match_step, supported_elements
from bac.story import load_story

FIXTURES = Path(__file__).resolve().parent.parent / "tests" / "fixtures"

catalog = default_catalog()
print(len(catalog), "behaviors in the bundled catalog")

# Parse a story and bind its first step to a behavior.

story = load_story(FIXTURES / "flight" / "search.story")
step = story.scenarios[0].steps[0]
binding = match_step(step, catalog)
print(step.line, "->", binding.behavior_id, binding.bindings)

# A behavior knows which elements can carry it on each platform.

for platform in Platform:
    print(platform.value, supported_elements("setInTheField", platform, catalog))

# Lint reports every step that no template matches.

tickets = load_story(FIXTURES / "lint" / "return_tickets.story")
for entry in lint([tickets], catalog):
    if not entry.ok:
        print(f"line {entry.line}: {entry.step}")
