"""Check BDD steps against scenarios extracted from a task model.

Each matched step expands to one or two task names (its search strings). A
step is consistent when some extracted scenario holds every search string at
the position the step occupies in the BDD scenario, counting the task
expansions of all earlier matched steps.

File formats::

    <!-- reference model (.hmst) -->
    <taskmodel name="...">
      <task id="t1" name="Go to Book Flights" type="interactive" optional="false">
        <task .../>
      </task>
      <object id="o1" name="Departure Airport"/>
    </taskmodel>

    <!-- raw extracted scenario (.scen) -->
    <scenario name="..." model="model.hmst">
      <taskref id="t1" objectid="o1" value="..."/>
    </scenario>

    <!-- preformatted scenario (.enriched.scen) -->
    <scenario name="..." enriched="true">
      <task position="1" id="t1" name="..." optional="false" value="..." object="..."/>
    </scenario>
"""

from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from bac._text import fold, near_name, normalize
from bac.errors import ArtifactParseError, UnresolvedReference
from bac.ontology import OntologyCatalog, derive_task_names, match_step
from bac.report import (
    DIFFERENT_NUMBER_OF_TASK_SEQUENCES,
    DIFFERENT_SPECIFICATION_STRATEGIES,
    Artifact,
    ScenarioDiagnostic,
    Signal,
    Status,
    StepResult,
)
from bac.story import Story

_TRUE = {"true", "yes", "1"}


@dataclass(frozen=True)
class ModelTask:
    id: str
    name: str
    optional: bool = False
    task_type: str = ""


@dataclass(frozen=True)
class TaskModelRef:
    tasks: dict[str, ModelTask]
    objects: dict[str, str] = field(default_factory=dict)
    source_path: str = ""


@dataclass(frozen=True)
class RawEntry:
    task_id: str
    object_id: str | None = None
    object_value: str | None = None


@dataclass(frozen=True)
class RawScenario:
    name: str
    entries: tuple[RawEntry, ...]
    model: str | None = None
    source_path: str = ""


@dataclass(frozen=True)
class ScenarioTask:
    name: str
    optional: bool = False
    value: str | None = None
    object_name: str | None = None
    task_id: str = ""


@dataclass(frozen=True)
class EnrichedTaskScenario:
    name: str
    tasks: tuple[ScenarioTask, ...]
    source_path: str = ""

    @property
    def task_names(self) -> list[str]:
        return [t.name for t in self.tasks]


@dataclass(frozen=True)
class LogRow:
    """One (search string, extracted scenario) pair of the match log."""

    story: str
    bdd_scenario: str
    step_text: str
    line_number: int
    searched: str
    expected_position: int
    scenario: str
    positions: tuple[int, ...]
    values: tuple[str | None, ...]
    optional: tuple[bool, ...]

    @property
    def not_found(self) -> bool:
        return not self.positions


@dataclass
class TaskAssessment:
    log: list[LogRow]
    results: list[StepResult]
    diagnostics: list[ScenarioDiagnostic]


def _parse_xml(source: str | bytes, path: str) -> ET.Element:
    try:
        return ET.fromstring(source)
    except ET.ParseError as exc:
        raise ArtifactParseError(f"{path or '<string>'}: malformed XML: {exc}") from exc


def _required(el: ET.Element, attr: str, path: str) -> str:
    value = el.get(attr)
    if value is None or not value.strip():
        raise ArtifactParseError(f"{path or '<string>'}: <{el.tag}> without '{attr}'")
    return value


def parse_task_model(source: str | bytes, path: str = "") -> TaskModelRef:
    root = _parse_xml(source, path)
    tasks: dict[str, ModelTask] = {}
    for el in root.iter("task"):
        tid = _required(el, "id", path)
        if tid in tasks:
            raise ArtifactParseError(f"{path}: duplicate task id {tid!r}")
        name = normalize(_required(el, "name", path))
        tasks[tid] = ModelTask(tid, name, el.get("optional", "false").lower() in _TRUE, el.get("type", ""))
    objects = {_required(el, "id", path): _required(el, "name", path) for el in root.iter("object")}
    return TaskModelRef(tasks, objects, path)


def load_task_model(path: str | Path) -> TaskModelRef:
    return parse_task_model(Path(path).read_bytes(), str(path))


def parse_raw_scenario(source: str | bytes, path: str = "") -> RawScenario:
    root = _parse_xml(source, path)
    if root.tag != "scenario":
        raise ArtifactParseError(f"{path}: expected <scenario> root, found <{root.tag}>")
    entries = tuple(
        RawEntry(_required(el, "id", path), el.get("objectid"), el.get("value"))
        for el in root.iter("taskref")
    )
    return RawScenario(root.get("name", Path(path).stem), entries, root.get("model"), path)


def preformat(raw: RawScenario, model: TaskModelRef) -> EnrichedTaskScenario:
    """Resolve task ids to names, optionality, values and object names."""
    tasks = []
    for entry in raw.entries:
        task = model.tasks.get(entry.task_id)
        if task is None:
            raise UnresolvedReference(entry.task_id, raw.name)
        obj = model.objects.get(entry.object_id) if entry.object_id else None
        tasks.append(ScenarioTask(task.name, task.optional, entry.object_value, obj, task.id))
    return EnrichedTaskScenario(raw.name, tuple(tasks), raw.source_path)


def parse_enriched_scenario(source: str | bytes, path: str = "") -> EnrichedTaskScenario:
    root = _parse_xml(source, path)
    tasks = []
    for el in root.iter("task"):
        tasks.append(ScenarioTask(
            normalize(_required(el, "name", path)),
            el.get("optional", "false").lower() in _TRUE,
            el.get("value"),
            el.get("object"),
            el.get("id", ""),
        ))
    return EnrichedTaskScenario(root.get("name", Path(path).stem), tuple(tasks), path)


def dump_enriched_scenario(scenario: EnrichedTaskScenario) -> str:
    root = ET.Element("scenario", {"name": scenario.name, "enriched": "true"})
    for pos, task in enumerate(scenario.tasks, 1):
        attrs = {"position": str(pos), "id": task.task_id, "name": task.name,
                 "optional": "true" if task.optional else "false"}
        if task.value is not None:
            attrs["value"] = task.value
        if task.object_name is not None:
            attrs["object"] = task.object_name
        ET.SubElement(root, "task", attrs)
    ET.indent(root)
    return ET.tostring(root, encoding="unicode") + "\n"


def load_task_scenario(path: str | Path, model: TaskModelRef | None = None) -> EnrichedTaskScenario:
    """Load a preformatted scenario, or preformat a raw one against *model*.

    When *model* is None, a raw scenario's ``model`` attribute names the
    reference model file relative to the scenario.
    """
    path = Path(path)
    data = path.read_bytes()
    root = _parse_xml(data, str(path))
    if root.get("enriched", "").lower() in _TRUE:
        return parse_enriched_scenario(data, str(path))
    raw = parse_raw_scenario(data, str(path))
    if model is None:
        if not raw.model:
            raise ArtifactParseError(f"{path}: raw scenario needs a task model (model attribute or --models)")
        model = load_task_model(path.parent / raw.model)
    return preformat(raw, model)


def find_positions(scenario: EnrichedTaskScenario, searched: str) -> list[int]:
    key = fold(searched)
    return [i for i, task in enumerate(scenario.tasks, 1) if fold(task.name) == key]


def _filtered(scenario: EnrichedTaskScenario, skip: set[str]) -> EnrichedTaskScenario:
    if not skip:
        return scenario
    kept = tuple(t for t in scenario.tasks if fold(t.name) not in skip)
    return EnrichedTaskScenario(scenario.name, kept, scenario.source_path)


def _tokens(text: str) -> set[str]:
    return set(fold(text).replace(",", " ").split())


def _mentions(task_name: str, arg: str) -> bool:
    arg_tokens = _tokens(arg)
    return bool(arg_tokens) and arg_tokens <= _tokens(task_name)


def _failure_signal(searched: str, expected: int, behavior_id: str, args: Sequence[str],
                    scenarios: Sequence[EnrichedTaskScenario], catalog: OntologyCatalog) -> Signal:
    all_names = [t.name for s in scenarios for t in s.tasks]
    if any(fold(n) == fold(searched) for n in all_names):
        return Signal.WRONG_POSITION
    if any(near_name(n, searched) for n in all_names):
        return Signal.NEAR_TASK_NAME
    mentioning = [n for n in all_names if any(_mentions(n, a) for a in args)]
    recognized = [catalog.recognize_task(n) for n in mentioning]
    if any(behavior_id in r for r in recognized):
        return Signal.NEAR_TASK_NAME
    if any(r for r in recognized):
        return Signal.OTHER_BEHAVIOR_TASK
    if mentioning:
        return Signal.UNKNOWN_TASK
    at_expected = [s.tasks[expected - 1].name for s in scenarios if len(s.tasks) >= expected]
    if any(not catalog.recognize_task(n) for n in at_expected):
        return Signal.UNKNOWN_TASK_AT_POSITION
    return Signal.TASK_ABSENT


def _cell(values: Sequence[int]) -> str:
    return "/".join(str(v) for v in values) if any(values) else "0"


def assess_task_scenarios(story: Story, scenarios: Sequence[EnrichedTaskScenario],
                          catalog: OntologyCatalog, skip_task_names: Iterable[str] = (),
                          artifact_path: str = "") -> TaskAssessment:
    """Match every step of *story* against every extracted scenario."""
    skip = {fold(n) for n in skip_task_names}
    scenarios = [_filtered(s, skip) for s in scenarios]
    log: list[LogRow] = []
    results: list[StepResult] = []
    diagnostics: list[ScenarioDiagnostic] = []

    if scenarios and len(scenarios) != len(story.scenarios):
        diagnostics.append(ScenarioDiagnostic(
            story.title, "", DIFFERENT_NUMBER_OF_TASK_SEQUENCES,
            f"{len(story.scenarios)} BDD scenario(s) but {len(scenarios)} extracted task scenario(s)"))

    for bdd in story.scenarios:
        running = 0
        for step in bdd.steps:
            base = dict(story_title=story.title, scenario_title=bdd.title, step_text=step.line,
                        artifact=Artifact.TASK_MODEL, line_number=step.line_number,
                        artifact_path=artifact_path)
            binding = match_step(step, catalog)
            if binding is None:
                results.append(StepResult(status=Status.UNRECOGNIZED,
                                          evidence="no behavior in the catalog matches this step", **base))
                continue
            names = derive_task_names(binding, catalog)
            expected = [running + 1 + i for i in range(len(names))]
            running += len(names)

            found: list[list[list[int]]] = []  # [search string][scenario] -> positions
            for name, exp in zip(names, expected):
                per_scenario = []
                for s in scenarios:
                    positions = find_positions(s, name)
                    per_scenario.append(positions)
                    log.append(LogRow(
                        story.title, bdd.title, step.line, step.line_number, name, exp, s.name,
                        tuple(positions),
                        tuple(s.tasks[p - 1].value for p in positions),
                        tuple(s.tasks[p - 1].optional for p in positions)))
                found.append(per_scenario)

            hits = [j for j in range(len(scenarios))
                    if all(exp in found[i][j] for i, exp in enumerate(expected))]
            actual = []
            for i, exp in enumerate(expected):
                all_pos = sorted({p for positions in found[i] for p in positions})
                actual.append(exp if exp in all_pos else (all_pos[0] if all_pos else 0))
            details = {"behavior": binding.behavior_id, "searched": names,
                       "expected": expected, "actual": actual}
            evidence = f"Expected: {_cell(expected)} Actual: {_cell(actual)}"
            if hits:
                details["scenario"] = scenarios[hits[0]].name
                results.append(StepResult(status=Status.PASSED, evidence=evidence, details=details, **base))
                continue
            failing = next((i for i, exp in enumerate(expected)
                            if not any(exp in positions for positions in found[i])), 0)
            signal = _failure_signal(names[failing], expected[failing], binding.behavior_id,
                                     list(binding.bindings.values()), scenarios, catalog)
            details["failedSearch"] = names[failing]
            results.append(StepResult.failure(signal=signal, evidence=evidence, details=details, **base))

        if scenarios and running and all(len(s.tasks) != running for s in scenarios):
            diagnostics.append(ScenarioDiagnostic(
                story.title, bdd.title, DIFFERENT_SPECIFICATION_STRATEGIES,
                f"steps expand to {running} task(s); extracted scenarios hold "
                + ", ".join(str(len(s.tasks)) for s in scenarios)))
    return TaskAssessment(log, results, diagnostics)
