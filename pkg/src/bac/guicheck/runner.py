"""Runner contract and the static-DOM runner that simulates a browser over local HTML."""

from __future__ import annotations

import logging
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any
from urllib.parse import urlsplit

from bs4 import BeautifulSoup, NavigableString, Tag

from bac._text import normalize
from bac.errors import ConfigError
from bac.guicheck.pagemap import ElementMapEntry, LocatorType, PageMap

log = logging.getLogger(__name__)

_TEXT_INPUTS = {"text", "search", "email", "tel", "url", "password", "number", ""}
_DATE_INPUTS = {"date", "time", "datetime-local", "month", "week"}
_BUTTON_INPUTS = {"submit", "button", "reset", "image"}
_TEXT_TAGS = {"p", "span", "div", "label", "h1", "h2", "h3", "h4", "h5", "h6", "li", "td", "th", "strong", "em"}
_HIDDEN_STYLE = re.compile(r"display\s*:\s*none|visibility\s*:\s*hidden", re.IGNORECASE)


class ValueTooLong(Exception):
    def __init__(self, maxlength: int, value: str):
        self.maxlength = maxlength
        super().__init__(f"value {value!r} exceeds maxlength {maxlength}")


def infer_kind(node: Tag) -> str:
    """Final-GUI element kind of an HTML node."""
    name = node.name
    role = (node.get("role") or "").lower()
    if role == "dialog" or name == "dialog":
        return "Dialog"
    if role == "tree":
        return "Tree"
    if role in ("menu", "menubar"):
        return "Menu"
    if role == "menuitem":
        return "MenuItem"
    if name == "input":
        itype = (node.get("type") or "text").lower()
        if itype == "radio":
            return "Radio"
        if itype == "checkbox":
            return "CheckBox"
        if itype in _BUTTON_INPUTS:
            return "Button"
        if itype in _DATE_INPUTS:
            return "Calendar"
        if itype in _TEXT_INPUTS:
            return "AutoComplete" if node.get("list") else "TextField"
        return "Element"
    if name == "textarea":
        return "TextField"
    if name == "select":
        return "Select"
    if name == "button":
        return "Button"
    if name == "a" and node.get("href") is not None:
        return "Link"
    if name == "table":
        return "Grid"
    if name in _TEXT_TAGS:
        return "Text"
    return "Element"


def node_ref(node: Tag) -> str:
    """Deterministic path of *node* within its document, e.g. ``html/body/form[1]/input[3]``."""
    parts = []
    while node is not None and node.name != "[document]":
        parent = node.parent
        if parent is None:
            parts.append(node.name)
            break
        same = [c for c in parent.find_all(node.name, recursive=False)]
        parts.append(f"{node.name}[{same.index(node) + 1}]" if len(same) > 1 else node.name)
        node = parent
    return "/".join(reversed(parts))


@dataclass
class DomState:
    """Simulated interaction state layered over immutable parsed documents."""

    current_screen: str | None = None
    document: BeautifulSoup | None = None
    field_values: dict[str, str] = field(default_factory=dict)
    checked: dict[str, bool] = field(default_factory=dict)
    selected: dict[str, str] = field(default_factory=dict)
    stored_variables: dict[str, str] = field(default_factory=dict)
    shown: set[str] = field(default_factory=set)
    hidden: set[str] = field(default_factory=set)
    events: list[tuple[str, str]] = field(default_factory=list)


class RunnerInterface(ABC):
    """What the assessment engine needs from a GUI driver.

    The static-DOM runner is the shipped implementation; a live-browser
    driver can implement the same contract.
    """

    state: DomState

    @abstractmethod
    def reset(self) -> None:
        """Start from a fresh state (no screen displayed)."""

    @abstractmethod
    def navigate(self, screen: str) -> None: ...

    @abstractmethod
    def locate(self, entry: ElementMapEntry) -> list[Any]: ...

    @abstractmethod
    def read(self, node: Any) -> str: ...

    @abstractmethod
    def write(self, node: Any, value: str) -> None: ...

    @abstractmethod
    def click(self, node: Any) -> str | None:
        """Click *node*; returns the screen navigated to, if any."""

    @abstractmethod
    def visible_text(self, within: Any = None) -> str: ...

    @abstractmethod
    def is_visible(self, node: Any) -> bool: ...

    @abstractmethod
    def is_enabled(self, node: Any) -> bool: ...

    @abstractmethod
    def kind_of(self, node: Any) -> str: ...

    @abstractmethod
    def describe(self, node: Any) -> str:
        """Short markup excerpt for reports."""

    @abstractmethod
    def options(self, node: Any) -> list[tuple[str, str]]: ...

    @abstractmethod
    def select_option(self, node: Any, text: str) -> None: ...

    @abstractmethod
    def is_checked(self, node: Any) -> bool: ...

    @abstractmethod
    def set_checked(self, node: Any, value: bool) -> None: ...

    @abstractmethod
    def hide(self, node: Any) -> None: ...

    @abstractmethod
    def find_text_node(self, within: Any, text: str) -> list[Any]: ...


class StaticDomRunner(RunnerInterface):
    """Runs steps against local HTML documents; no scripting, no network."""

    def __init__(self, page_map: PageMap):
        self.page_map = page_map
        self._documents: dict[str, BeautifulSoup] = {}
        self.state = DomState()

    def reset(self) -> None:
        self.state = DomState()

    def _document(self, screen: str) -> BeautifulSoup:
        if screen not in self._documents:
            path = self.page_map.screens[screen]
            try:
                self._documents[screen] = BeautifulSoup(path.read_text(encoding="utf-8"), "html.parser")
            except OSError as exc:
                raise ConfigError(f"cannot read document for screen {screen!r}: {exc}") from exc
        return self._documents[screen]

    def _ref(self, node: Tag) -> str:
        return f"{self.state.current_screen}:{node_ref(node)}"

    def navigate(self, screen: str) -> None:
        if screen not in self.page_map.screens:
            raise KeyError(screen)
        self.state.current_screen = screen
        self.state.document = self._document(screen)

    def locate(self, entry: ElementMapEntry) -> list[Tag]:
        doc = self.state.document
        if doc is None:
            return []
        if entry.locator_type is LocatorType.ID:
            return doc.find_all(id=entry.locator)
        return doc.select(entry.locator)

    def read(self, node: Tag) -> str:
        ref = self._ref(node)
        kind = infer_kind(node)
        if kind in ("Radio", "CheckBox"):
            return "checked" if self.is_checked(node) else ""
        if node.name == "select":
            if ref in self.state.selected:
                return self.state.selected[ref]
            options = node.find_all("option")
            chosen = next((o for o in options if o.has_attr("selected")), options[0] if options else None)
            return normalize(chosen.get_text()) if chosen else ""
        if node.name in ("input", "textarea"):
            if ref in self.state.field_values:
                return self.state.field_values[ref]
            return node.get("value", "") if node.name == "input" else node.get_text()
        return normalize(node.get_text(" "))

    def write(self, node: Tag, value: str) -> None:
        maxlength = node.get("maxlength")
        if maxlength is not None and maxlength.isdigit() and len(value) > int(maxlength):
            raise ValueTooLong(int(maxlength), value)
        self.state.field_values[self._ref(node)] = value

    def options(self, node: Tag) -> list[tuple[str, str]]:
        """(value, text) pairs offered by a select or a datalist-backed input."""
        if node.name == "select":
            opts = node.find_all("option")
        elif node.get("list") and self.state.document is not None:
            datalist = self.state.document.find(id=node.get("list"))
            opts = datalist.find_all("option") if datalist else []
        else:
            opts = []
        return [(o.get("value", normalize(o.get_text())), normalize(o.get_text()) or o.get("value", ""))
                for o in opts]

    def select_option(self, node: Tag, text: str) -> None:
        self.state.selected[self._ref(node)] = text

    def is_checked(self, node: Tag) -> bool:
        return self.state.checked.get(self._ref(node), node.has_attr("checked"))

    def set_checked(self, node: Tag, value: bool) -> None:
        if value and (node.get("type") or "").lower() == "radio" and node.get("name") and self.state.document:
            for other in self.state.document.find_all("input", attrs={"type": "radio", "name": node["name"]}):
                self.state.checked[self._ref(other)] = False
        self.state.checked[self._ref(node)] = value

    def click(self, node: Tag) -> str | None:
        kind = infer_kind(node)
        if kind == "Radio":
            self.set_checked(node, True)
        elif kind == "CheckBox":
            self.set_checked(node, not self.is_checked(node))
        for attr, bucket, other in (("data-show", self.state.shown, self.state.hidden),
                                    ("data-hide", self.state.hidden, self.state.shown)):
            target_id = node.get(attr)
            if target_id and self.state.document is not None:
                target = self.state.document.find(id=target_id)
                if target is not None:
                    ref = self._ref(target)
                    bucket.add(ref)
                    other.discard(ref)
        target = self._navigation_target(node)
        if target is not None:
            self.navigate(target)
        return target

    def _navigation_target(self, node: Tag) -> str | None:
        carrier = node if node.name in ("a", "button", "input") else node.find_parent(["a", "button"]) or node
        screen = carrier.get("data-screen") or node.get("data-screen")
        if screen:
            return self.page_map.screen(screen)
        href = None
        if carrier.name == "a":
            href = carrier.get("href")
        elif infer_kind(carrier) == "Button" and (carrier.get("type") or "submit").lower() == "submit":
            form = carrier.find_parent("form")
            href = form.get("action") if form is not None else None
        if not href:
            return None
        target_path = urlsplit(href).path
        if not target_path or "://" in href:
            return None
        current_doc = self.page_map.screens[self.state.current_screen]
        return self.page_map.screen_for_document(current_doc.parent / target_path)

    def hide(self, node: Tag) -> None:
        ref = self._ref(node)
        self.state.hidden.add(ref)
        self.state.shown.discard(ref)

    def _self_hidden(self, node: Tag) -> bool:
        ref = self._ref(node)
        if ref in self.state.hidden:
            return True
        if ref in self.state.shown:
            return False
        if node.has_attr("hidden") or _HIDDEN_STYLE.search(node.get("style", "")):
            return True
        if node.name == "dialog" and not node.has_attr("open"):
            return True
        return (node.get("type") or "").lower() == "hidden" and node.name == "input"

    def is_visible(self, node: Tag) -> bool:
        cur: Tag | None = node
        while cur is not None and cur.name != "[document]":
            if self._self_hidden(cur):
                return False
            cur = cur.parent
        return True

    def is_enabled(self, node: Tag) -> bool:
        if node.has_attr("disabled") or node.get("aria-disabled") == "true":
            return False
        return node.find_parent("fieldset", attrs={"disabled": True}) is None

    def kind_of(self, node: Tag) -> str:
        return infer_kind(node)

    def visible_text(self, within: Tag | None = None) -> str:
        root = within if within is not None else self.state.document
        if root is None:
            return ""
        if within is None:
            root = root.body or root
        pieces = []
        for s in root.find_all(string=True):
            if type(s) is not NavigableString:
                continue  # comments, doctype, cdata
            parent = s.parent
            if parent is None or parent.name in ("script", "style", "title", "head"):
                continue
            if self.is_visible(parent):
                pieces.append(str(s))
        return normalize(" ".join(pieces))

    def describe(self, node: Tag) -> str:
        markup = normalize(str(node))
        return markup if len(markup) <= 200 else markup[:197] + "..."

    def find_text_node(self, within: Tag, text: str) -> list[Tag]:
        """Innermost descendants of *within* whose normalized text equals *text*."""
        want = normalize(text).casefold()
        found = []
        for el in within.find_all(True):
            if normalize(el.get_text(" ")).casefold() == want:
                found.append(el)
        return [el for el in found if not any(child in found for child in el.find_all(True))]

    def document_path(self) -> Path | None:
        if self.state.current_screen is None:
            return None
        return self.page_map.screens[self.state.current_screen]
