"""Page map: binds the screen and element names used in steps to documents and locators.

TOML layout::

    [[screen]]
    name = "Flight Search"
    document = "flight_search.html"      # relative to the map file

    [[element]]
    name = "Round trip"
    screen = "Flight Search"
    locator_type = "id"                  # or "css"
    locator = "round-trip"
    kind = "Radio"                       # optional, overrides inference
    context = "Air France 7519"          # optional, for "referring to" steps
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from pathlib import Path

import soupsieve

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from bac._text import fold
from bac.errors import ConfigError

KINDS = frozenset({
    "TextField", "Radio", "CheckBox", "Select", "Button", "Link", "Calendar", "AutoComplete",
    "Grid", "Menu", "MenuItem", "Text", "Screen", "Dialog", "Tree", "Element",
})


class LocatorType(str, Enum):
    ID = "id"
    CSS = "css"


@dataclass(frozen=True)
class ElementMapEntry:
    name: str
    screen: str
    locator_type: LocatorType
    locator: str
    declared_kind: str | None = None
    context: str | None = None


@dataclass(frozen=True)
class PageMap:
    screens: dict[str, Path]
    elements: tuple[ElementMapEntry, ...]
    source_path: str = ""

    def screen(self, name: str) -> str | None:
        """Canonical screen name for *name* (case-insensitive), or None."""
        key = fold(name)
        return next((s for s in self.screens if fold(s) == key), None)

    def screen_for_document(self, path: Path) -> str | None:
        path = path.resolve()
        return next((s for s, doc in self.screens.items() if doc == path), None)

    def lookup(self, name: str, screen: str, context: str | None = None) -> ElementMapEntry | None:
        """Entry for element *name* on *screen*; *context* selects among same-named entries."""
        key = fold(name)
        candidates = [e for e in self.elements if fold(e.name) == key and e.screen == screen]
        if context is not None:
            ctx = fold(context)
            with_ctx = [e for e in candidates if e.context is not None and fold(e.context) == ctx]
            if with_ctx:
                return with_ctx[0]
        plain = [e for e in candidates if e.context is None]
        return plain[0] if plain else None

    def screens_with(self, name: str) -> list[str]:
        key = fold(name)
        return sorted({e.screen for e in self.elements if fold(e.name) == key})


def parse_page_map(data: dict, base_dir: Path, source: str = "") -> PageMap:
    where = source or "page map"
    raw_screens = data.get("screen", [])
    if not raw_screens:
        raise ConfigError(f"{where}: no screens")
    screens: dict[str, Path] = {}
    for rec in raw_screens:
        name, document = rec.get("name"), rec.get("document")
        if not name or not document:
            raise ConfigError(f"{where}: screen entries need 'name' and 'document'")
        if any(fold(s) == fold(name) for s in screens):
            raise ConfigError(f"{where}: duplicate screen {name!r}")
        path = (base_dir / document).resolve()
        if not path.is_file():
            raise ConfigError(f"{where}: document for screen {name!r} not found: {path}")
        screens[name] = path

    elements = []
    seen: set[tuple[str, str, str | None]] = set()
    for rec in data.get("element", []):
        name, screen, locator = rec.get("name"), rec.get("screen"), rec.get("locator")
        if not name or not screen or not locator:
            raise ConfigError(f"{where}: element entries need 'name', 'screen' and 'locator'")
        if screen not in screens:
            raise ConfigError(f"{where}: element {name!r} refers to unknown screen {screen!r}")
        try:
            locator_type = LocatorType(rec.get("locator_type", "css").lower())
        except ValueError:
            raise ConfigError(f"{where}: element {name!r} has unknown locator type {rec.get('locator_type')!r}") from None
        if locator_type is LocatorType.CSS:
            try:
                soupsieve.compile(locator)
            except soupsieve.SelectorSyntaxError as exc:
                raise ConfigError(f"{where}: element {name!r} has an invalid CSS locator: {exc}") from None
        kind = rec.get("kind")
        if kind is not None and kind not in KINDS:
            raise ConfigError(f"{where}: element {name!r} has unknown kind {kind!r}")
        context = rec.get("context")
        key = (fold(name), screen, fold(context) if context else None)
        if key in seen:
            raise ConfigError(f"{where}: duplicate element {name!r} on screen {screen!r}")
        seen.add(key)
        elements.append(ElementMapEntry(name, screen, locator_type, locator, kind, context))
    return PageMap(screens, tuple(elements), source)


def load_page_map(path: str | Path) -> PageMap:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read page map {path}: {exc}") from exc
    if not text.strip():
        raise ConfigError(f"{path}: no screens")
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_page_map(data, path.parent, str(path))
