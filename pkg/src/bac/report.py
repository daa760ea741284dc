"""Step results, inconsistency classification, console and JSON reporting."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Protocol, Sequence


class Artifact(str, Enum):
    TASK_MODEL = "TaskModel"
    PROTOTYPE = "Prototype"
    FINAL_GUI = "FinalGui"


class Status(str, Enum):
    PASSED = "Passed"
    FAILED = "Failed"
    PENDING = "Pending"
    NOT_PERFORMED = "NotPerformed"
    SKIPPED = "Skipped"
    UNRECOGNIZED = "Unrecognized"


class InconsistencyKind(str, Enum):
    # task model
    DIFFERENT_TASK_NAME = "DifferentTaskName"
    TASK_NOT_EXTRACTED = "TaskNotExtracted"
    WRONG_POSITION = "WrongPosition"
    UNPAIRED_BEHAVIOR = "UnpairedBehavior"
    EQUIVALENT_BEHAVIOR_MISSING = "EquivalentBehaviorMissing"
    SPEC_MODEL_CONFLICT = "SpecModelConflict"
    # prototype
    EXPECTED_ACTUAL_CONFLICT = "ExpectedActualConflict"
    LABEL_ELEMENT_GROUP_SPLIT = "LabelElementGroupSplit"
    INEXISTENT_ELEMENT = "InexistentElement"
    SEMANTICALLY_INCOMPATIBLE_ELEMENT = "SemanticallyIncompatibleElement"
    AMBIGUOUS_ELEMENT = "AmbiguousElement"
    UNTRACEABLE_INTERACTION = "UntraceableInteraction"
    # final GUI (InexistentElement is shared with the prototype column)
    MESSAGE_NOT_IDENTIFIED = "MessageNotIdentified"
    ELEMENT_OR_VALUE_NOT_FOUND = "ElementOrValueNotFound"
    VALUE_DOES_NOT_FIT = "ValueDoesNotFit"
    FIELD_ALREADY_FILLED = "FieldAlreadyFilled"
    ELEMENT_NOT_IDENTIFIED = "ElementNotIdentified"


K = InconsistencyKind

KINDS_BY_ARTIFACT: dict[Artifact, frozenset[InconsistencyKind]] = {
    Artifact.TASK_MODEL: frozenset({
        K.DIFFERENT_TASK_NAME, K.TASK_NOT_EXTRACTED, K.WRONG_POSITION,
        K.UNPAIRED_BEHAVIOR, K.EQUIVALENT_BEHAVIOR_MISSING, K.SPEC_MODEL_CONFLICT}),
    Artifact.PROTOTYPE: frozenset({
        K.EXPECTED_ACTUAL_CONFLICT, K.LABEL_ELEMENT_GROUP_SPLIT, K.INEXISTENT_ELEMENT,
        K.SEMANTICALLY_INCOMPATIBLE_ELEMENT, K.AMBIGUOUS_ELEMENT, K.UNTRACEABLE_INTERACTION}),
    Artifact.FINAL_GUI: frozenset({
        K.MESSAGE_NOT_IDENTIFIED, K.ELEMENT_OR_VALUE_NOT_FOUND, K.INEXISTENT_ELEMENT,
        K.VALUE_DOES_NOT_FIT, K.FIELD_ALREADY_FILLED, K.ELEMENT_NOT_IDENTIFIED}),
}


class Signal(str, Enum):
    """Failure signals raised by the checkers; classify() maps them to kinds."""

    # task model
    WRONG_POSITION = "wrong-position"
    NEAR_TASK_NAME = "near-task-name"
    OTHER_BEHAVIOR_TASK = "other-behavior-task"
    UNKNOWN_TASK = "unknown-task"
    UNKNOWN_TASK_AT_POSITION = "unknown-task-at-position"
    TASK_ABSENT = "task-absent"
    # prototype
    STATE_TRANSITION = "state-transition"
    MANY_ELEMENTS = "many-elements"
    LABEL_GROUP_SPLIT = "label-group-split"
    TYPE_REJECTED = "type-rejected"
    NEAR_ELEMENT_NAME = "near-element-name"
    NO_ELEMENT = "no-element"
    # final GUI
    ELEMENT_NOT_MAPPED = "element-not-mapped"
    VALUE_NOT_FOUND = "value-not-found"
    SCREEN_MISMATCH = "screen-mismatch"
    STATE_MISMATCH = "state-mismatch"
    LOCATOR_NO_MATCH = "locator-no-match"
    KIND_MISMATCH = "kind-mismatch"
    LOCATOR_MANY_MATCHES = "locator-many-matches"
    VALUE_TOO_LONG = "value-too-long"
    FIELD_NOT_EMPTY = "field-not-empty"
    MESSAGE_CHECK_FAILED = "message-check-failed"


_CLASSIFICATION: dict[tuple[Artifact, Signal], InconsistencyKind] = {
    (Artifact.TASK_MODEL, Signal.WRONG_POSITION): K.WRONG_POSITION,
    (Artifact.TASK_MODEL, Signal.NEAR_TASK_NAME): K.DIFFERENT_TASK_NAME,
    (Artifact.TASK_MODEL, Signal.OTHER_BEHAVIOR_TASK): K.UNPAIRED_BEHAVIOR,
    (Artifact.TASK_MODEL, Signal.UNKNOWN_TASK): K.SPEC_MODEL_CONFLICT,
    (Artifact.TASK_MODEL, Signal.UNKNOWN_TASK_AT_POSITION): K.EQUIVALENT_BEHAVIOR_MISSING,
    (Artifact.TASK_MODEL, Signal.TASK_ABSENT): K.TASK_NOT_EXTRACTED,
    (Artifact.PROTOTYPE, Signal.STATE_TRANSITION): K.UNTRACEABLE_INTERACTION,
    (Artifact.PROTOTYPE, Signal.MANY_ELEMENTS): K.AMBIGUOUS_ELEMENT,
    (Artifact.PROTOTYPE, Signal.LABEL_GROUP_SPLIT): K.LABEL_ELEMENT_GROUP_SPLIT,
    (Artifact.PROTOTYPE, Signal.TYPE_REJECTED): K.SEMANTICALLY_INCOMPATIBLE_ELEMENT,
    (Artifact.PROTOTYPE, Signal.NEAR_ELEMENT_NAME): K.EXPECTED_ACTUAL_CONFLICT,
    (Artifact.PROTOTYPE, Signal.NO_ELEMENT): K.INEXISTENT_ELEMENT,
    (Artifact.FINAL_GUI, Signal.ELEMENT_NOT_MAPPED): K.ELEMENT_OR_VALUE_NOT_FOUND,
    (Artifact.FINAL_GUI, Signal.VALUE_NOT_FOUND): K.ELEMENT_OR_VALUE_NOT_FOUND,
    (Artifact.FINAL_GUI, Signal.SCREEN_MISMATCH): K.ELEMENT_OR_VALUE_NOT_FOUND,
    (Artifact.FINAL_GUI, Signal.STATE_MISMATCH): K.ELEMENT_OR_VALUE_NOT_FOUND,
    (Artifact.FINAL_GUI, Signal.LOCATOR_NO_MATCH): K.INEXISTENT_ELEMENT,
    (Artifact.FINAL_GUI, Signal.KIND_MISMATCH): K.INEXISTENT_ELEMENT,
    (Artifact.FINAL_GUI, Signal.LOCATOR_MANY_MATCHES): K.ELEMENT_NOT_IDENTIFIED,
    (Artifact.FINAL_GUI, Signal.VALUE_TOO_LONG): K.VALUE_DOES_NOT_FIT,
    (Artifact.FINAL_GUI, Signal.FIELD_NOT_EMPTY): K.FIELD_ALREADY_FILLED,
    (Artifact.FINAL_GUI, Signal.MESSAGE_CHECK_FAILED): K.MESSAGE_NOT_IDENTIFIED,
}

# signals without a table entry keep a category from their own artifact column
_FALLBACK = {
    Artifact.TASK_MODEL: K.TASK_NOT_EXTRACTED,
    Artifact.PROTOTYPE: K.EXPECTED_ACTUAL_CONFLICT,
    Artifact.FINAL_GUI: K.ELEMENT_OR_VALUE_NOT_FOUND,
}


def classify(artifact: Artifact | str, signal: Signal | str | None) -> InconsistencyKind:
    """Total, deterministic mapping from a failure signal to a category."""
    artifact = Artifact(artifact)
    try:
        signal = Signal(signal)
    except ValueError:
        return _FALLBACK[artifact]
    return _CLASSIFICATION.get((artifact, signal), _FALLBACK[artifact])


@dataclass
class StepResult:
    story_title: str
    scenario_title: str
    step_text: str
    artifact: Artifact
    status: Status
    evidence: str = ""
    classification: InconsistencyKind | None = None
    signal: str | None = None
    details: dict[str, Any] = field(default_factory=dict)
    line_number: int = 0
    artifact_path: str = ""

    def __post_init__(self) -> None:
        self.artifact = Artifact(self.artifact)
        self.status = Status(self.status)
        if self.classification is not None:
            self.classification = InconsistencyKind(self.classification)
        if (self.classification is not None) != (self.status is Status.FAILED):
            raise ValueError("classification must be present exactly when status is Failed")
        if self.classification is not None and self.classification not in KINDS_BY_ARTIFACT[self.artifact]:
            raise ValueError(f"{self.classification.value} is not a {self.artifact.value} category")

    @classmethod
    def failure(cls, story_title: str, scenario_title: str, step_text: str, artifact: Artifact,
                signal: Signal | str, evidence: str = "", **kwargs: Any) -> "StepResult":
        signal_value = signal.value if isinstance(signal, Signal) else str(signal)
        return cls(story_title, scenario_title, step_text, artifact, Status.FAILED, evidence,
                   classify(artifact, signal), signal_value, **kwargs)

    def to_dict(self) -> dict[str, Any]:
        return {
            "step": self.step_text,
            "line": self.line_number,
            "artifact": self.artifact.value,
            "artifactPath": self.artifact_path,
            "status": self.status.value,
            "classification": self.classification.value if self.classification else None,
            "signal": self.signal,
            "evidence": self.evidence,
            "details": self.details,
        }


@dataclass(frozen=True)
class ScenarioDiagnostic:
    """A finding about a whole scenario rather than a single step."""

    story_title: str
    scenario_title: str
    kind: str
    detail: str


DIFFERENT_NUMBER_OF_TASK_SEQUENCES = "DifferentNumberOfTaskSequences"
DIFFERENT_SPECIFICATION_STRATEGIES = "DifferentSpecificationStrategies"


class LogRowLike(Protocol):
    scenario: str
    searched: str
    positions: Sequence[int]
    values: Sequence[str | None]


TASK_NOT_FOUND = "Task not found!"
NO_VALUE = "No Value"

_COLORS = {
    Status.PASSED: "\x1b[32m",
    Status.FAILED: "\x1b[31m",
    Status.PENDING: "\x1b[33m",
    Status.NOT_PERFORMED: "\x1b[90m",
    Status.SKIPPED: "\x1b[90m",
    Status.UNRECOGNIZED: "\x1b[35m",
}


def format_log_row(row: LogRowLike) -> str:
    if not row.positions:
        return f"{row.scenario} | {row.searched} | {TASK_NOT_FOUND} | {NO_VALUE}"
    positions = ", ".join(str(p) for p in row.positions)
    values = ", ".join(v if v is not None else NO_VALUE for v in row.values)
    return f"{row.scenario} | {row.searched} | {positions} | {values}"


def format_result(result: StepResult, color: bool = False) -> str:
    label = result.status.value.upper()
    if color:
        label = f"{_COLORS[result.status]}{label}\x1b[0m"
    line = f"[{label}] {result.artifact.value} | {result.scenario_title} | {result.step_text}"
    if result.evidence:
        line += f" | {result.evidence}"
    if result.classification:
        line += f" ({result.classification.value})"
    return line


def emit_console_log(items: Iterable[StepResult | LogRowLike], color: bool = False) -> str:
    """One line per log row or step result; empty input gives empty text."""
    lines = []
    for item in items:
        if isinstance(item, StepResult):
            lines.append(format_result(item, color))
        else:
            lines.append(format_log_row(item))
    return "\n".join(lines) + ("\n" if lines else "")


_SUMMARY_KEYS = {
    Status.PASSED: "consistent",
    Status.FAILED: "inconsistent",
    Status.PENDING: "pending",
    Status.NOT_PERFORMED: "notPerformed",
    Status.SKIPPED: "skipped",
    Status.UNRECOGNIZED: "unrecognized",
}


def _counts(results: Iterable[StepResult]) -> dict[str, int]:
    counts = {"analyzed": 0, **{k: 0 for k in _SUMMARY_KEYS.values()}}
    for r in results:
        counts["analyzed"] += 1
        counts[_SUMMARY_KEYS[r.status]] += 1
    return counts


def summarize(results: Sequence[StepResult]) -> dict[str, Any]:
    summary: dict[str, Any] = _counts(results)
    artifacts = {}
    for artifact in Artifact:
        subset = [r for r in results if r.artifact is artifact]
        if subset:
            counts = _counts(subset)
            counts["total"] = counts.pop("analyzed")
            artifacts[artifact.value] = counts
    summary["artifacts"] = artifacts
    return summary


def exit_code(results: Iterable[StepResult]) -> int:
    bad = (Status.FAILED, Status.UNRECOGNIZED)
    return 1 if any(r.status in bad for r in results) else 0


def build_report(results: Sequence[StepResult],
                 diagnostics: Sequence[ScenarioDiagnostic] = ()) -> dict[str, Any]:
    stories: dict[str, dict[str, list[dict[str, Any]]]] = {}
    for r in results:
        stories.setdefault(r.story_title, {}).setdefault(r.scenario_title, []).append(r.to_dict())
    return {
        "summary": summarize(results),
        "stories": [
            {"title": title,
             "scenarios": [{"title": s, "steps": steps} for s, steps in scenarios.items()]}
            for title, scenarios in stories.items()
        ],
        "diagnostics": [
            {"story": d.story_title, "scenario": d.scenario_title, "kind": d.kind, "detail": d.detail}
            for d in diagnostics
        ],
    }


def dumps_report(results: Sequence[StepResult], diagnostics: Sequence[ScenarioDiagnostic] = ()) -> str:
    return json.dumps(build_report(results, diagnostics), indent=2, ensure_ascii=False, sort_keys=False) + "\n"


def emit_json_report(path: str | Path, results: Sequence[StepResult],
                     diagnostics: Sequence[ScenarioDiagnostic] = ()) -> None:
    Path(path).write_text(dumps_report(results, diagnostics), encoding="utf-8")


def parse_report(text: str) -> tuple[list[StepResult], list[ScenarioDiagnostic]]:
    data = json.loads(text)
    results = []
    for story in data.get("stories", []):
        for scenario in story["scenarios"]:
            for s in scenario["steps"]:
                results.append(StepResult(
                    story["title"], scenario["title"], s["step"], Artifact(s["artifact"]),
                    Status(s["status"]), s.get("evidence", ""),
                    InconsistencyKind(s["classification"]) if s.get("classification") else None,
                    s.get("signal"), s.get("details", {}), s.get("line", 0), s.get("artifactPath", "")))
    diagnostics = [ScenarioDiagnostic(d["story"], d["scenario"], d["kind"], d["detail"])
                   for d in data.get("diagnostics", [])]
    return results, diagnostics


def read_json_report(path: str | Path) -> tuple[list[StepResult], list[ScenarioDiagnostic]]:
    return parse_report(Path(path).read_text(encoding="utf-8"))
