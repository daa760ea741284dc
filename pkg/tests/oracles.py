"""Brute-force reference implementations and random instance generators.

The oracles share no code with the package beyond plain data classes, so a
bug in the checkers cannot hide behind the same bug here.
"""

import random
from dataclasses import dataclass

from bac.protocheck import Prototype, PrototypeControl
from bac.taskcheck import EnrichedTaskScenario, ScenarioTask

# step text -> task names, written out by hand from the behavior table
TASK_SHAPES = [
    ('I go to "{a}"', ["Go to {a}"]),
    ('I choose "{a}"', ["Choose {a}"]),
    ('I select "{a}"', ["Select {a}"]),
    ('I set "{b}" in the field "{a}"', ["Set {a}"]),
    ('I click on "{a}"', ["Click on {a}"]),
    ('I inform "{a}" and choose "{b}" in the field "{c}"', ["Inform {a}", "Choose {b}"]),
    ('I type "{a}" and choose "{b}" in the field "{c}"', ["Inform {a}", "Choose {b}"]),
    ('I set in the field "{a}" and trigger the event "{b}"', ["Set {a}", "Trigger {b}"]),
    ('I reset the value of the field "{a}"', ["Reset the value of the field {a}"]),
]
WORDS = ["Paris", "Rome", "Oslo", "Lima", "Kyiv", "Date", "Class", "Search"]


@dataclass
class TaskInstance:
    story_text: str
    step_tasks: list[list[str]]
    scenarios: list[EnrichedTaskScenario]


def random_task_instance(rng: random.Random) -> TaskInstance:
    """One BDD scenario of up to 6 steps and up to 5 extracted scenarios of up to 8 tasks."""
    lines, step_tasks = [], []
    for _ in range(rng.randint(1, 6)):
        template, tasks = rng.choice(TASK_SHAPES)
        values = {k: rng.choice(WORDS) for k in "abc"}
        lines.append("When " + template.format(**values))
        step_tasks.append([t.format(**values) for t in tasks])
    pool = [t for tasks in step_tasks for t in tasks] + [f"Noise {w}" for w in WORDS[:3]]
    scenarios = []
    for i in range(rng.randint(1, 5)):
        n = rng.randint(0, 8)
        tasks = tuple(ScenarioTask(rng.choice(pool)) for _ in range(n))
        scenarios.append(EnrichedTaskScenario(f"s{i}", tasks))
    story = "Random\n\nScenario: generated\n" + "\n".join(lines) + "\n"
    return TaskInstance(story, step_tasks, scenarios)


def task_positions_oracle(step_tasks, scenarios):
    """Rows (searched, expected position, scenario name, positions) and per-step verdicts."""
    rows, verdicts = [], []
    expected = 0
    for tasks in step_tasks:
        wanted = []
        for name in tasks:
            expected += 1
            wanted.append((name, expected))
            for s in scenarios:
                positions = []
                for index in range(len(s.tasks)):
                    if s.tasks[index].name.casefold() == name.casefold():
                        positions.append(index + 1)
                rows.append((name, expected, s.name, tuple(positions)))
        ok = False
        for s in scenarios:
            if all(pos <= len(s.tasks) and s.tasks[pos - 1].name.casefold() == name.casefold()
                   for name, pos in wanted):
                ok = True
        verdicts.append(ok)
    return rows, verdicts


LABEL = "com.balsamiq.mockups::Label"
CONTROL_TYPES = [LABEL, "com.balsamiq.mockups::TextInput", "com.balsamiq.mockups::ComboBox",
                 "com.balsamiq.mockups::Button", "com.balsamiq.mockups::Paragraph",
                 "com.balsamiq.mockups::SearchBox"]
TEXTS = ["Name", "name", "City", "Nome", None]


def random_prototype(rng: random.Random) -> Prototype:
    """Up to 12 controls spread over up to 4 groups (or none)."""
    groups = [None] + [f"g{i}" for i in range(rng.randint(0, 4))]
    controls = tuple(
        PrototypeControl(str(i), rng.choice(CONTROL_TYPES), rng.choice(TEXTS), rng.choice(groups))
        for i in range(rng.randint(0, 12)))
    return Prototype(controls)


def random_supported(rng: random.Random) -> set[str]:
    if rng.random() < 0.1:
        return {"*"}
    return set(rng.sample(CONTROL_TYPES[1:], rng.randint(1, 3)))


def count_oracle(field_name: str, supported: set[str], proto: Prototype) -> int:
    """Enumerate controls one by one and decide whether each stands for *field_name*."""
    def fits(control_type):
        return "*" in supported or control_type in supported

    total = 0
    for c in proto.controls:
        if c.text is None or c.text.casefold() != field_name.casefold():
            continue
        if fits(c.control_type):
            total += 1
        elif c.control_type == LABEL and c.group_id is not None:
            partners = [o for o in proto.controls
                        if o.group_id == c.group_id and o.control_id != c.control_id and fits(o.control_type)]
            if partners:
                total += 1
    return total
