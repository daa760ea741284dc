"""Catalog of interactive behaviors and the step/task vocabulary built on it.

The catalog maps each behavior to the step phrases that express it, the task
names it corresponds to in a task model, and the interaction elements that
support it on each platform.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterator, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from bac._text import SMART_QUOTES, fold, normalize, split_quoted
from bac.errors import AmbiguousMatch, CatalogError, UnknownBehavior
from bac.story import Keyword, Step


class Platform(str, Enum):
    ABSTRACT = "Abstract"
    PROTOTYPE = "Prototype"
    FINAL_GUI = "FinalGui"


class Category(str, Enum):
    CHECKBOX_RADIO = "CheckboxRadio"
    COMMON = "Common"
    DATA_GENERATION = "DataGeneration"
    DATA_PROVIDER = "DataProvider"
    DEBUG = "Debug"
    DIALOG = "Dialog"
    MOUSE_CONTROL = "MouseControl"
    TABLE = "Table"


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Placeholder:
    name: str


_PLACEHOLDER_ARG = re.compile(r"^<([A-Za-z][A-Za-z0-9_]*)>$")
_TASK_PLACEHOLDER = re.compile(r"<([^<>]+)>")


@dataclass(frozen=True)
class StepTemplate:
    """A step phrase such as ``I set "<value>" in the field "<fieldname>"``."""

    source: str
    tokens: tuple[Literal | Placeholder, ...]
    alias: bool = False

    @classmethod
    def parse(cls, source: str, alias: bool = False) -> "StepTemplate":
        source = normalize(source.translate(SMART_QUOTES))
        try:
            literals, args = split_quoted(source)
        except ValueError:
            raise CatalogError(f"malformed step template {source!r}: unbalanced quotes") from None
        tokens: list[Literal | Placeholder] = []
        seen: set[str] = set()
        for i, lit in enumerate(literals):
            if "<" in lit or ">" in lit:
                raise CatalogError(f"malformed step template {source!r}: placeholder outside quotes")
            if lit.strip():
                tokens.append(Literal(lit.strip()))
            if i < len(args):
                m = _PLACEHOLDER_ARG.match(args[i])
                if not m:
                    raise CatalogError(f"malformed step template {source!r}: bad placeholder {args[i]!r}")
                if m.group(1) in seen:
                    raise CatalogError(f"step template {source!r} repeats placeholder {m.group(1)!r}")
                seen.add(m.group(1))
                tokens.append(Placeholder(m.group(1)))
        if not tokens:
            raise CatalogError("empty step template")
        return cls(source, tuple(tokens), alias)

    @property
    def placeholders(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tokens if isinstance(t, Placeholder))

    @property
    def skeleton(self) -> tuple[str, ...]:
        literals, _ = split_quoted(self.source)
        return tuple(fold(lit) for lit in literals)

    def render(self, values: Mapping[str, str]) -> str:
        parts = []
        for tok in self.tokens:
            if isinstance(tok, Literal):
                parts.append(tok.text)
            else:
                parts.append(f'"{values[tok.name]}"')
        return " ".join(parts)


@dataclass(frozen=True)
class ElementTriple:
    abstract: str
    prototype: str | None
    final_gui: str | None


@dataclass(frozen=True)
class BehaviorEntry:
    id: str
    category: Category
    step_templates: tuple[StepTemplate, ...]
    task_templates: tuple[str, ...]
    allowed_keywords: frozenset[Keyword]
    elements: tuple[ElementTriple, ...]
    task_variants: tuple[str, ...] = ()
    target: str | None = None
    context: str | None = None
    transition: bool = False

    @property
    def placeholders(self) -> set[str]:
        return {p for t in self.step_templates for p in t.placeholders}


@dataclass(frozen=True)
class StepBinding:
    behavior_id: str
    bindings: Mapping[str, str]
    matched_template: StepTemplate = field(compare=False)

    def get(self, name: str | None) -> str | None:
        if name is None:
            return None
        return self.bindings.get(name)


def _task_regex(template: str) -> re.Pattern[str]:
    out = []
    pos = 0
    for m in _TASK_PLACEHOLDER.finditer(template):
        out.append(_literal_regex(template[pos:m.start()]))
        out.append("(.+)")
        pos = m.end()
    out.append(_literal_regex(template[pos:]))
    return re.compile("".join(out), re.IGNORECASE)


def _literal_regex(text: str) -> str:
    return r"\s+".join(re.escape(w) for w in text.split(" ")) if text else ""


class OntologyCatalog:
    """Immutable, indexed collection of behavior entries."""

    def __init__(self, entries: list[BehaviorEntry]):
        if not entries:
            raise CatalogError("empty catalog")
        self._entries: dict[str, BehaviorEntry] = {}
        for entry in entries:
            if entry.id in self._entries:
                raise CatalogError(f"duplicate behavior id {entry.id!r}")
            self._entries[entry.id] = entry
        self._by_skeleton: dict[tuple[str, ...], list[tuple[BehaviorEntry, StepTemplate]]] = {}
        for entry in entries:
            for template in entry.step_templates:
                self._by_skeleton.setdefault(template.skeleton, []).append((entry, template))
        self._task_patterns = [
            (entry.id, _task_regex(normalize(t)))
            for entry in entries
            for t in entry.task_templates + entry.task_variants
        ]

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[BehaviorEntry]:
        return iter(self._entries.values())

    def __contains__(self, behavior_id: object) -> bool:
        return behavior_id in self._entries

    def __getitem__(self, behavior_id: str) -> BehaviorEntry:
        try:
            return self._entries[behavior_id]
        except KeyError:
            raise UnknownBehavior(behavior_id) from None

    def candidates(self, text: str) -> list[StepBinding]:
        """All bindings whose template fits *text*, regardless of keyword."""
        text = text.translate(SMART_QUOTES)
        try:
            literals, args = split_quoted(text)
        except ValueError:
            return []
        key = tuple(fold(lit) for lit in literals)
        found = []
        for entry, template in self._by_skeleton.get(key, []):
            found.append(StepBinding(entry.id, dict(zip(template.placeholders, args)), template))
        return found

    def recognize_task(self, task_name: str) -> set[str]:
        """Behavior ids whose task template (or variant) produces *task_name*."""
        name = normalize(task_name)
        return {bid for bid, pattern in self._task_patterns if pattern.fullmatch(name)}


def _parse_elements(raw: list, where: str) -> tuple[ElementTriple, ...]:
    triples = []
    for item in raw:
        if not isinstance(item, list) or len(item) != 3:
            raise CatalogError(f"{where}: element must be [abstract, prototype, final GUI]")
        abstract, proto, final = (None if v in ("-", "") else str(v) for v in item)
        if not abstract:
            raise CatalogError(f"{where}: element without an abstract name")
        triples.append(ElementTriple(abstract, proto, final))
    return tuple(triples)


def _parse_entry(rec: dict) -> BehaviorEntry:
    bid = rec.get("id")
    if not bid:
        raise CatalogError("behavior record without id")
    try:
        category = Category(rec.get("category"))
    except ValueError:
        raise CatalogError(f"{bid}: unknown category {rec.get('category')!r}") from None
    templates = tuple(StepTemplate.parse(s) for s in rec.get("steps", []))
    if not templates:
        raise CatalogError(f"{bid}: no step template")
    tasks = tuple(normalize(t) for t in rec.get("tasks", []))
    if not 1 <= len(tasks) <= 2:
        raise CatalogError(f"{bid}: expected one or two task templates, got {len(tasks)}")
    variants = tuple(normalize(t) for t in rec.get("variants", []))
    try:
        keywords = frozenset(Keyword(k) for k in rec.get("keywords", []))
    except ValueError as exc:
        raise CatalogError(f"{bid}: {exc}") from None
    if not keywords or any(k.is_continuation for k in keywords):
        raise CatalogError(f"{bid}: keywords must be a non-empty subset of Given/When/Then")
    entry = BehaviorEntry(
        id=bid,
        category=category,
        step_templates=templates,
        task_templates=tasks,
        allowed_keywords=keywords,
        elements=_parse_elements(rec.get("elements", []), bid),
        task_variants=variants,
        target=rec.get("target"),
        context=rec.get("context"),
        transition=bool(rec.get("transition", False)),
    )
    known = entry.placeholders
    for t in tasks + variants:
        unknown = set(_TASK_PLACEHOLDER.findall(t)) - known
        if unknown:
            raise CatalogError(f"{bid}: task template {t!r} uses unknown placeholder(s) {sorted(unknown)}")
    for name in (entry.target, entry.context):
        if name is not None and name not in known:
            raise CatalogError(f"{bid}: target/context {name!r} is not a step placeholder")
    return entry


def parse_catalog(data: dict) -> OntologyCatalog:
    entries = [_parse_entry(rec) for rec in data.get("behavior", [])]
    by_id = {e.id: e for e in entries}
    for alias in data.get("alias", []):
        bid = alias.get("behavior")
        if bid not in by_id:
            raise CatalogError(f"alias refers to unknown behavior {bid!r}")
        entry = by_id[bid]
        template = StepTemplate.parse(alias.get("step", ""), alias=True)
        needed = {p for t in entry.task_templates for p in _TASK_PLACEHOLDER.findall(t)}
        if not needed <= set(template.placeholders) or not set(template.placeholders) <= entry.placeholders:
            raise CatalogError(f"alias {template.source!r} does not bind the placeholders of {bid}")
        by_id[bid] = BehaviorEntry(**{**entry.__dict__, "step_templates": entry.step_templates + (template,)})
    return OntologyCatalog([by_id[e.id] for e in entries])


def load_catalog(path: str | Path | None = None) -> OntologyCatalog:
    """Load a catalog file; ``None`` loads the bundled default catalog."""
    if path is None:
        return default_catalog()
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise CatalogError(f"cannot read catalog {path}: {exc}") from exc
    return _load_bytes(raw, str(path))


def _load_bytes(raw: bytes, where: str) -> OntologyCatalog:
    if not raw.strip():
        raise CatalogError("empty catalog")
    try:
        data = tomllib.loads(raw.decode("utf-8"))
    except (tomllib.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise CatalogError(f"{where}: {exc}") from exc
    return parse_catalog(data)


@lru_cache(maxsize=1)
def default_catalog() -> OntologyCatalog:
    raw = resources.files("bac").joinpath("data/catalog.toml").read_bytes()
    return _load_bytes(raw, "catalog.toml")


def match_step(step: Step, catalog: OntologyCatalog) -> StepBinding | None:
    """Bind *step* to the unique behavior whose phrase and keyword fit it.

    Returns None when nothing matches. Raises AmbiguousMatch when several
    behaviors match, which indicates a catalog defect.
    """
    hits = [b for b in catalog.candidates(step.text)
            if step.resolved_keyword in catalog[b.behavior_id].allowed_keywords]
    ids = sorted({b.behavior_id for b in hits})
    if len(ids) > 1:
        raise AmbiguousMatch(step.text, ids)
    return hits[0] if hits else None


def _fill(template: str, bindings: Mapping[str, str]) -> str | None:
    names = _TASK_PLACEHOLDER.findall(template)
    if any(n not in bindings for n in names):
        return None
    return normalize(_TASK_PLACEHOLDER.sub(lambda m: bindings[m.group(1)], template))


def derive_task_names(binding: StepBinding, catalog: OntologyCatalog) -> list[str]:
    entry = catalog[binding.behavior_id]
    names = []
    for template in entry.task_templates:
        name = _fill(template, binding.bindings)
        for variant in entry.task_variants:
            if name is not None:
                break
            name = _fill(variant, binding.bindings)
        names.append(name if name is not None else normalize(template))
    return names


def supported_elements(behavior_id: str, platform: Platform | str, catalog: OntologyCatalog) -> list[str]:
    entry = catalog[behavior_id]
    attr = {Platform.ABSTRACT: "abstract", Platform.PROTOTYPE: "prototype",
            Platform.FINAL_GUI: "final_gui"}[Platform(platform)]
    out: list[str] = []
    for triple in entry.elements:
        value = getattr(triple, attr)
        if value is not None and value not in out:
            out.append(value)
    return out
