"""Parser for BDD story files.

Grammar (line oriented, ``#`` starts a comment line)::

    <title>
    Narrative:
    As a <role>
    I want <feature>
    So that <benefit>

    Scenario: <title>
    Given ...
    And ...
    When ...
    Then ...

A comment of the form ``# @name`` directly above a step tags that step.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from bac._text import SMART_QUOTES, split_quoted
from bac.errors import StorySyntaxError


class Keyword(str, Enum):
    GIVEN = "Given"
    WHEN = "When"
    THEN = "Then"
    AND = "And"
    BUT = "But"

    @property
    def is_continuation(self) -> bool:
        return self in (Keyword.AND, Keyword.BUT)


@dataclass(frozen=True)
class Step:
    raw_keyword: Keyword
    resolved_keyword: Keyword
    text: str
    args: tuple[str, ...]
    line_number: int = field(default=0, compare=False)
    tags: tuple[str, ...] = ()

    @property
    def line(self) -> str:
        return f"{self.raw_keyword.value} {self.text}"


@dataclass(frozen=True)
class Scenario:
    title: str
    steps: tuple[Step, ...]
    line_number: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Narrative:
    role: str
    feature: str
    benefit: str


@dataclass(frozen=True)
class Story:
    title: str
    scenarios: tuple[Scenario, ...]
    narrative: Narrative | None = None
    source_path: str = field(default="", compare=False)


_STEP = re.compile(r"^(Given|When|Then|And|But)\s+(.*)$")
_SCENARIO = re.compile(r"^Scenario(?:\s+\d+)?\s*:\s*(.*)$", re.IGNORECASE)
_TITLE_PREFIX = re.compile(r"^(?:User\s+Story|Story|Title)\s*:\s*", re.IGNORECASE)
_NARRATIVE_LINES = (
    ("role", re.compile(r"^As\s+an?\s+(.*)$", re.IGNORECASE)),
    ("feature", re.compile(r"^I\s+want\s+(.*)$", re.IGNORECASE)),
    ("benefit", re.compile(r"^So\s+that\s+(.*)$", re.IGNORECASE)),
)
_TAG = re.compile(r"^#\s*@(\S+)\s*$")


def _strip_punct(text: str) -> str:
    return text.strip().rstrip(".,;:!").strip()


def parse_story(source: str, path: str = "") -> Story:
    """Parse story *source* text; *path* is only used in error messages."""
    source = source.translate(SMART_QUOTES)
    title: str | None = None
    narrative: dict[str, str] = {}
    scenarios: list[Scenario] = []
    cur_title: str | None = None
    cur_line = 0
    cur_steps: list[Step] = []
    pending_tags: list[str] = []

    def close_scenario() -> None:
        if cur_title is None:
            return
        if not cur_steps:
            raise StorySyntaxError(f"scenario {cur_title!r} has no steps", cur_line, path)
        scenarios.append(Scenario(cur_title, tuple(cur_steps), cur_line))

    for lineno, raw in enumerate(source.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            m = _TAG.match(line)
            if m:
                pending_tags.append(m.group(1))
            continue
        if title is None:
            if _STEP.match(line) or _SCENARIO.match(line):
                raise StorySyntaxError("story has no title line", lineno, path)
            title = _TITLE_PREFIX.sub("", line).strip()
            if not title:
                raise StorySyntaxError("empty story title", lineno, path)
            continue

        m = _SCENARIO.match(line)
        if m:
            close_scenario()
            cur_title = m.group(1).strip()
            if not cur_title:
                raise StorySyntaxError("scenario without a title", lineno, path)
            cur_line = lineno
            cur_steps = []
            pending_tags = []
            continue

        m = _STEP.match(line)
        if m:
            if cur_title is None:
                raise StorySyntaxError("step before any 'Scenario:' header", lineno, path)
            keyword = Keyword(m.group(1))
            text = m.group(2).strip()
            if keyword.is_continuation:
                if not cur_steps:
                    raise StorySyntaxError(
                        f"'{keyword.value}' step has no preceding step to continue", lineno, path)
                resolved = cur_steps[-1].resolved_keyword
            else:
                resolved = keyword
            try:
                _, args = split_quoted(text)
            except ValueError:
                raise StorySyntaxError("unterminated quote", lineno, path) from None
            cur_steps.append(Step(keyword, resolved, text, tuple(args), lineno, tuple(pending_tags)))
            pending_tags = []
            continue

        if cur_title is not None:
            raise StorySyntaxError(f"unrecognized line in scenario: {line!r}", lineno, path)
        if line.lower().rstrip(":") == "narrative":
            continue
        for name, pattern in _NARRATIVE_LINES:
            m = pattern.match(line)
            if m:
                narrative[name] = _strip_punct(m.group(1))
                break
        # anything else before the first scenario is free description text

    close_scenario()
    if title is None:
        raise StorySyntaxError("empty story", 0, path)
    if not scenarios:
        raise StorySyntaxError("story has no scenarios", 0, path)

    parsed_narrative = None
    if narrative:
        missing = [n for n, _ in _NARRATIVE_LINES if not narrative.get(n)]
        if missing:
            raise StorySyntaxError(f"incomplete narrative, missing {', '.join(missing)}", 0, path)
        parsed_narrative = Narrative(narrative["role"], narrative["feature"], narrative["benefit"])
    return Story(title, tuple(scenarios), parsed_narrative, path)


def load_story(path: str | Path) -> Story:
    path = Path(path)
    return parse_story(path.read_text(encoding="utf-8"), str(path))


def format_story(story: Story) -> str:
    """Render *story* in canonical form; ``parse_story`` of the result equals *story*."""
    out = [story.title]
    if story.narrative:
        n = story.narrative
        out += ["", "Narrative:", f"As a {n.role}", f"I want {n.feature}", f"So that {n.benefit}"]
    for scenario in story.scenarios:
        out += ["", f"Scenario: {scenario.title}"]
        for step in scenario.steps:
            out += [f"# @{tag}" for tag in step.tags]
            out.append(step.line)
    return "\n".join(out) + "\n"
