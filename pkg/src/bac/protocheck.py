"""Check BDD steps against wireframe prototype files (Balsamiq ``.bmml`` subset).

For each step the checker counts the controls that could carry the step's
target field: the control's decoded text must equal the field name and its
type must be one the catalog lists for the behavior. A Label inside a group
stands for the other members of that group. Exactly one match passes.
"""

from __future__ import annotations

import logging
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from urllib.parse import unquote

from bac._text import fold, near_name, normalize
from bac.errors import ArtifactParseError, ConfigError, MappingGap
from bac.ontology import OntologyCatalog, Platform, match_step, supported_elements
from bac.report import Artifact, Signal, Status, StepResult
from bac.story import Story

log = logging.getLogger(__name__)

WILDCARD = "*"
LABEL = "com.balsamiq.mockups::Label"
BROWSER_WINDOW = "com.balsamiq.mockups::BrowserWindow"

# behaviors whose target is the page itself rather than a control
_PAGE_BEHAVIORS = {"goTo", "goToWithTheParameters", "isDisplayed"}

_BAD_ESCAPE = re.compile(r"%(?![0-9A-Fa-f]{2})")


class Mode(str, Enum):
    FAIL_FAST = "FailFast"
    CONTINUE = "Continue"


@dataclass(frozen=True)
class PrototypeControl:
    control_id: str
    control_type: str
    text: str | None = None
    group_id: str | None = None


@dataclass(frozen=True)
class Prototype:
    controls: tuple[PrototypeControl, ...]
    source_path: str = ""
    mockup_name: str = ""


def decode_text(raw: str) -> str:
    """Percent-decode control text; invalid escapes stay verbatim."""
    if "%" not in raw:
        return raw
    if _BAD_ESCAPE.search(raw):
        log.warning("invalid percent escape left verbatim in %r", raw)
    try:
        return unquote(raw, errors="strict")
    except UnicodeDecodeError:
        log.warning("percent escapes in %r are not UTF-8; text kept verbatim", raw)
        return raw


def parse_prototype(source: str | bytes, path: str = "") -> Prototype:
    try:
        root = ET.fromstring(source)
    except ET.ParseError as exc:
        raise ArtifactParseError(f"{path or '<string>'}: malformed XML: {exc}") from exc
    controls = []
    seen: set[str] = set()
    for i, el in enumerate(root.iter("control")):
        where = f"{path or '<string>'}: control #{i + 1}"
        cid = el.get("controlID")
        ctype = el.get("controlTypeID")
        if not cid or not ctype:
            raise ArtifactParseError(f"{where}: missing controlID or controlTypeID")
        if cid in seen:
            raise ArtifactParseError(f"{where}: duplicate controlID {cid!r}")
        seen.add(cid)
        text_el = el.find("controlProperties/text")
        text = decode_text(text_el.text or "") if text_el is not None else None
        group = el.get("isInGroup")
        controls.append(PrototypeControl(cid, ctype, text, None if group in (None, "", "-1") else group))
    name = root.get("name") or (Path(path).stem if path else "")
    return Prototype(tuple(controls), path, name)


def load_prototype(path: str | Path) -> Prototype:
    return parse_prototype(Path(path).read_bytes(), str(path))


class ConcreteMapping:
    """Abstract interaction element -> set of prototype control type ids."""

    def __init__(self, entries: dict[str, frozenset[str]]):
        self._entries = {fold(k): v for k, v in entries.items()}

    def __contains__(self, abstract: object) -> bool:
        return isinstance(abstract, str) and fold(abstract) in self._entries

    def types_for(self, abstract: str) -> frozenset[str]:
        try:
            return self._entries[fold(abstract)]
        except KeyError:
            raise MappingGap(abstract) from None


def parse_mapping(text: str, path: str = "") -> ConcreteMapping:
    entries: dict[str, frozenset[str]] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, types = line.partition("=")
        values = frozenset(t.strip() for t in types.split(",") if t.strip())
        if not sep or not name.strip() or not values:
            raise ConfigError(f"{path or 'mapping'}:{lineno}: expected 'Element = type, ...'")
        entries[name.strip()] = values
    if not entries:
        raise ConfigError(f"{path or 'mapping'}: empty mapping")
    return ConcreteMapping(entries)


def load_mapping(path: str | Path | None = None) -> ConcreteMapping:
    """Load a mapping file; ``None`` loads the bundled default."""
    if path is None:
        from importlib import resources
        return parse_mapping(resources.files("bac").joinpath("data/balsamiq.mapping").read_text("utf-8"))
    try:
        return parse_mapping(Path(path).read_text(encoding="utf-8"), str(path))
    except OSError as exc:
        raise ConfigError(f"cannot read mapping {path}: {exc}") from exc


def supported_types(behavior_id: str, catalog: OntologyCatalog, mapping: ConcreteMapping) -> frozenset[str]:
    """Concrete control types for a behavior, via its abstract elements."""
    entry = catalog[behavior_id]
    types: set[str] = set()
    for triple in entry.elements:
        if triple.prototype is None:
            continue
        types |= mapping.types_for(triple.abstract)
    return frozenset(types)


def _type_ok(control_type: str, supported: frozenset[str] | set[str]) -> bool:
    return WILDCARD in supported or control_type in supported


def _text_is(control: PrototypeControl, name: str) -> bool:
    return control.text is not None and fold(control.text) == fold(name)


def count_matching_elements(field_name: str, supported: frozenset[str] | set[str], proto: Prototype) -> int:
    """Number of controls that can stand for *field_name*.

    Ungrouped controls count when text and type both fit. Inside a group, a
    Label with the field's text counts once when some other member of the
    group has a supported type, and a non-Label member counts on its own when
    text and type fit.
    """
    count = 0
    groups: dict[str, list[PrototypeControl]] = {}
    for c in proto.controls:
        if c.group_id is None:
            if _text_is(c, field_name) and _type_ok(c.control_type, supported):
                count += 1
        else:
            groups.setdefault(c.group_id, []).append(c)
    for members in groups.values():
        for c in members:
            if not _text_is(c, field_name):
                continue
            if c.control_type == LABEL and not _type_ok(LABEL, supported):
                if any(o is not c and _type_ok(o.control_type, supported) for o in members):
                    count += 1
            elif _type_ok(c.control_type, supported):
                count += 1
    return count


def count_supported(supported: frozenset[str] | set[str], proto: Prototype) -> int:
    return sum(1 for c in proto.controls if _type_ok(c.control_type, supported))


def count_page(page_name: str, proto: Prototype) -> int:
    windows = sum(1 for c in proto.controls if c.control_type == BROWSER_WINDOW and _text_is(c, page_name))
    if windows == 0 and proto.mockup_name and fold(proto.mockup_name) == fold(page_name):
        return 1
    return windows


def _zero_signal(field_name: str, supported: frozenset[str], proto: Prototype) -> Signal:
    groups: dict[str, list[PrototypeControl]] = {}
    for c in proto.controls:
        if c.group_id is not None:
            groups.setdefault(c.group_id, []).append(c)
    labelled_groups = {g for g, members in groups.items() if any(m.control_type == LABEL for m in members)}
    for c in proto.controls:
        if c.control_type == LABEL and _text_is(c, field_name):
            outside = [o for o in proto.controls
                       if _type_ok(o.control_type, supported) and o.control_type != LABEL
                       and (o.group_id is None or (o.group_id != c.group_id and o.group_id not in labelled_groups))]
            if outside:
                return Signal.LABEL_GROUP_SPLIT
    if any(_text_is(c, field_name) and c.control_type != LABEL for c in proto.controls):
        return Signal.TYPE_REJECTED
    if any(c.text and near_name(c.text, field_name) for c in proto.controls):
        return Signal.NEAR_ELEMENT_NAME
    return Signal.NO_ELEMENT


def assess_prototype(story: Story, proto: Prototype, catalog: OntologyCatalog, mapping: ConcreteMapping,
                     mode: Mode | str = Mode.FAIL_FAST) -> list[StepResult]:
    mode = Mode(mode)
    results: list[StepResult] = []
    for scenario in story.scenarios:
        stopped = False
        for step in scenario.steps:
            base = dict(story_title=story.title, scenario_title=scenario.title, step_text=step.line,
                        artifact=Artifact.PROTOTYPE, line_number=step.line_number,
                        artifact_path=proto.source_path)
            if stopped:
                results.append(StepResult(status=Status.NOT_PERFORMED, **base))
                continue
            result = _assess_step(step, proto, catalog, mapping, base)
            results.append(result)
            if result.status is Status.FAILED and mode is Mode.FAIL_FAST:
                stopped = True
    return results


def _assess_step(step, proto: Prototype, catalog: OntologyCatalog, mapping: ConcreteMapping,
                 base: dict) -> StepResult:
    binding = match_step(step, catalog)
    if binding is None:
        return StepResult(status=Status.UNRECOGNIZED, evidence="no behavior in the catalog matches this step", **base)
    entry = catalog[binding.behavior_id]
    details = {"behavior": entry.id}
    if entry.transition:
        return StepResult.failure(signal=Signal.STATE_TRANSITION, details=details,
                                  evidence="state transitions cannot be traced in a prototype", **base)
    if not supported_elements(entry.id, Platform.PROTOTYPE, catalog):
        return StepResult(status=Status.SKIPPED, evidence="behavior has no prototype element", details=details, **base)

    supported = supported_types(entry.id, catalog, mapping)
    name = binding.get(entry.target)
    if entry.id in _PAGE_BEHAVIORS:
        count = count_page(name, proto)
    elif name is None:
        count = count_supported(supported, proto)
    else:
        count = count_matching_elements(name, supported, proto)
    details.update({"field": name, "count": count, "supportedTypes": sorted(supported),
                    "snapshot": _snapshot(name, proto) if count != 1 else []})
    evidence = f"Expected: 1 Actual: {count}"
    if count == 1:
        return StepResult(status=Status.PASSED, evidence=evidence, details=details, **base)
    if count >= 2:
        signal = Signal.MANY_ELEMENTS
    elif name is None:
        signal = Signal.NO_ELEMENT
    elif entry.id in _PAGE_BEHAVIORS:
        pages = [c.text for c in proto.controls if c.control_type == BROWSER_WINDOW and c.text]
        pages.append(proto.mockup_name)
        signal = Signal.NEAR_ELEMENT_NAME if any(p and near_name(p, name) for p in pages) else Signal.NO_ELEMENT
    else:
        signal = _zero_signal(name, supported, proto)
    return StepResult.failure(signal=signal, evidence=evidence, details=details, **base)


def _snapshot(name: str | None, proto: Prototype) -> list[dict[str, str | None]]:
    """Controls worth showing next to a failure: those whose text is close to *name*."""
    if name is None:
        return []
    out = []
    for c in proto.controls:
        if c.text is not None and (fold(c.text) == fold(name) or near_name(c.text, name)):
            out.append({"id": c.control_id, "type": c.control_type, "text": normalize(c.text), "group": c.group_id})
    return out


def check_mapping(catalog: OntologyCatalog, mapping: ConcreteMapping) -> list[str]:
    """Abstract elements the catalog needs but the mapping lacks."""
    missing = []
    for entry in catalog:
        for triple in entry.elements:
            if triple.prototype is not None and triple.abstract not in mapping and triple.abstract not in missing:
                missing.append(triple.abstract)
    return missing

