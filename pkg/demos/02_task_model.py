# Do the task scenarios extracted from a task model follow the story?

# Each step expands into one or more task names. A step is consistent
# when some scenario has those tasks at the expected positions.

from pathlib import Path

from bac.ontology import default_catalog
from bac.report import emit_console_log
from bac.story import load_story
from bac.taskcheck import assess_task_scenarios, load_task_scenario

FLIGHT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "flight"

story = load_story(FLIGHT / "search.story")
scenario = load_task_scenario(FLIGHT / "search.scen")
print(len(scenario.tasks), "tasks in", scenario.name)

assessment = assess_task_scenarios(story, [scenario], default_catalog())

# The log has one row per searched task and scenario.

print(emit_console_log(assessment.log[:4]))

# The step verdicts carry expected and actual positions.

print(emit_console_log(assessment.results))

# A system task that the story never mentions shifts every position after it.
# Ignoring it brings the later steps back in line.

skipped = assess_task_scenarios(story, [scenario], default_catalog(),
                                skip_task_names=["Provide List of Airports"])
before = sum(r.status.value == "Passed" for r in assessment.results)
after = sum(r.status.value == "Passed" for r in skipped.results)
print(f"consistent steps: {before} -> {after}")
