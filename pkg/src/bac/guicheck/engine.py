"""Execute BDD steps against a final GUI through a runner."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from bac._text import fold, normalize
from bac.errors import ConfigError
from bac.guicheck.pagemap import ElementMapEntry, PageMap
from bac.guicheck.runner import RunnerInterface, StaticDomRunner, ValueTooLong
from bac.ontology import OntologyCatalog, Platform, StepBinding, match_step, supported_elements
from bac.protocheck import Mode
from bac.report import Artifact, Signal, Status, StepResult
from bac.story import Step, Story

log = logging.getLogger(__name__)

_WRITABLE = {"TextField", "AutoComplete", "Calendar"}


class StepFailure(Exception):
    def __init__(self, signal: Signal, message: str, **details: Any):
        self.signal = signal
        self.message = message
        self.details = details
        super().__init__(message)


class StepSkipped(Exception):
    pass


@dataclass
class ExecContext:
    """Per-scenario execution context; a fresh one is made for each scenario."""

    rng: random.Random
    datasets: Mapping[str, Mapping[str, str]] | None = None
    active_data: dict[str, str] = field(default_factory=dict)
    focus: Any = None


def load_dataset(path: str | Path) -> dict[str, dict[str, str]]:
    """Read a dataset file: one TOML table per dataset name, keys mapping to values."""
    try:
        data = tomllib.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot read dataset {path}: {exc}") from exc
    out = {}
    for name, table in data.items():
        if not isinstance(table, dict):
            raise ConfigError(f"{path}: dataset {name!r} must be a table of key = value pairs")
        out[name] = {str(k): str(v) for k, v in table.items()}
    return out


class Executor:
    """Dispatches one matched step to its behavior handler."""

    def __init__(self, runner: RunnerInterface, page_map: PageMap, catalog: OntologyCatalog, ctx: ExecContext):
        self.runner = runner
        self.page_map = page_map
        self.catalog = catalog
        self.ctx = ctx
        self.binding: StepBinding | None = None

    # lookup helpers

    @property
    def state(self):
        return self.runner.state

    def arg(self, name: str) -> str:
        assert self.binding is not None
        return self.binding.bindings[name]

    def screen_name(self, name: str) -> str:
        screen = self.page_map.screen(name)
        if screen is None:
            raise StepFailure(Signal.ELEMENT_NOT_MAPPED, f"Screen not found: {name}")
        return screen

    def element(self, name: str, context: str | None = None,
                supported: Iterable[str] | None = None) -> tuple[ElementMapEntry, Any, str]:
        """Resolve *name* on the current screen to exactly one node and its kind.

        *supported* overrides the kinds the behavior's catalog entry accepts.
        """
        screen = self.state.current_screen
        if screen is None:
            raise StepFailure(Signal.SCREEN_MISMATCH, "No screen is displayed")
        entry = self.page_map.lookup(name, screen, context)
        if entry is None:
            elsewhere = [s for s in self.page_map.screens_with(name) if s != screen]
            signal = Signal.SCREEN_MISMATCH if elsewhere else Signal.ELEMENT_NOT_MAPPED
            raise StepFailure(signal, f"Element not found in “{screen}”", element=name, mappedOn=elsewhere)
        nodes = self.runner.locate(entry)
        if not nodes:
            raise StepFailure(Signal.LOCATOR_NO_MATCH, "Inexistent element", element=name, locator=entry.locator)
        if len(nodes) > 1:
            raise StepFailure(Signal.LOCATOR_MANY_MATCHES, "Element not identified", element=name,
                              locator=entry.locator, nodes=[self.runner.describe(n) for n in nodes])
        node = nodes[0]
        inferred = self.runner.kind_of(node)
        kind = entry.declared_kind or inferred
        if entry.declared_kind and entry.declared_kind != inferred:
            log.warning("element %r declared as %s but looks like %s", name, entry.declared_kind, inferred)
        if supported is None:
            supported = supported_elements(self.binding.behavior_id, Platform.FINAL_GUI, self.catalog)
        supported = list(supported)
        if "Element" not in supported and kind not in supported:
            raise StepFailure(Signal.KIND_MISMATCH, f"{kind} does not support this behavior", element=name,
                              kind=kind, supported=supported, node=self.runner.describe(node))
        return entry, node, kind

    def target(self) -> tuple[ElementMapEntry, Any, str]:
        entry = self.catalog[self.binding.behavior_id]
        return self.element(self.binding.get(entry.target), self.binding.get(entry.context))

    # state changes

    def write(self, node: Any, kind: str, value: str) -> None:
        if not self.runner.is_enabled(node):
            raise StepFailure(Signal.STATE_MISMATCH, "Field is disabled", node=self.runner.describe(node))
        if kind == "Select":
            self.choose_option(node, value)
            return
        current = self.runner.read(node)
        if current.strip():
            raise StepFailure(Signal.FIELD_NOT_EMPTY, "Field already filled in", current=current)
        try:
            self.runner.write(node, value)
        except ValueTooLong as exc:
            raise StepFailure(Signal.VALUE_TOO_LONG, "Value does not fit the field",
                              value=value, maxlength=exc.maxlength) from None
        self.ctx.focus = node

    def choose_option(self, node: Any, value: str) -> None:
        for opt_value, text in self.runner.options(node):
            if fold(value) in (fold(opt_value), fold(text)):
                self.runner.select_option(node, text)
                return
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Value not found: {value}",
                          options=[t for _, t in self.runner.options(node)])

    def require_visible(self, node: Any) -> None:
        if not self.runner.is_visible(node):
            raise StepFailure(Signal.STATE_MISMATCH, "Element is not visible", node=self.runner.describe(node))

    def data_value(self, key: str) -> str:
        for source in (self.ctx.active_data, self.state.stored_variables):
            for k, v in source.items():
                if fold(k) == fold(key):
                    return v
        if self.ctx.datasets is None and not self.ctx.active_data:
            raise StepSkipped("no dataset supplied")
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"No data for {key}")

    # dispatch

    def run(self, binding: StepBinding) -> str:
        """Execute *binding*; returns evidence text or raises StepFailure/StepSkipped."""
        self.binding = binding
        handler = _HANDLERS[binding.behavior_id]
        return handler(self) or ""


# behavior handlers; each returns evidence text

def _go_to(ex: Executor) -> str:
    screen = ex.screen_name(ex.arg("address"))
    ex.runner.navigate(screen)
    return f"Actual: {screen}"


def _is_displayed(ex: Executor) -> str:
    screen = ex.screen_name(ex.arg("page"))
    current = ex.state.current_screen
    if current is None:
        ex.runner.navigate(screen)
    elif current != screen:
        raise StepFailure(Signal.SCREEN_MISMATCH, current, expected=screen)
    return f"Actual: {screen}"


def _set_value(ex: Executor) -> str:
    _, node, kind = ex.target()
    value = ex.arg("value")
    ex.write(node, kind, value)
    return f"Actual: {ex.binding.get(ex.catalog[ex.binding.behavior_id].target)} = {value}"


def _try_to_set(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.require_visible(node)
    if not ex.runner.is_enabled(node):
        raise StepFailure(Signal.STATE_MISMATCH, "Field is disabled")
    ex.ctx.focus = node
    return f"Actual: {entry.name}"


def _type_and_choose(ex: Executor) -> str:
    entry, node, kind = ex.target()
    typed, chosen = ex.arg("value1"), ex.arg("value2")
    ex.write(node, kind, typed)
    offered = ex.runner.options(node)
    match = next((t for v, t in offered if fold(chosen) in (fold(v), fold(t))), None)
    if match is None:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Value not found: {chosen}", options=[t for _, t in offered])
    try:
        ex.runner.write(node, match)
    except ValueTooLong as exc:
        raise StepFailure(Signal.VALUE_TOO_LONG, "Value does not fit the field",
                          value=match, maxlength=exc.maxlength) from None
    return f"Actual: {entry.name} = {match}"


def _leave_empty(ex: Executor) -> str:
    entry, node, _ = ex.target()
    if ex.runner.read(node).strip():
        raise StepFailure(Signal.FIELD_NOT_EMPTY, "Field already filled in", current=ex.runner.read(node))
    return f"Actual: {entry.name} is empty"


def _reset(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.runner.write(node, "")
    return f"Actual: {entry.name} reset"


def _click(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.require_visible(node)
    if not ex.runner.is_enabled(node):
        raise StepFailure(Signal.STATE_MISMATCH, "Element is disabled", node=ex.runner.describe(node))
    screen = ex.runner.click(node)
    return f"Actual: {entry.name}" + (f" -> {screen}" if screen else "")


def _hover(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.require_visible(node)
    return f"Actual: {entry.name}"


def _choose(ex: Executor) -> str:
    entry, node, kind = ex.target()
    ex.require_visible(node)
    if kind == "Radio" or kind == "CheckBox":
        ex.runner.set_checked(node, True)
    elif kind in ("Link", "Button"):
        ex.runner.click(node)
    return f"Actual: {entry.name}"


def _choose_by_index(ex: Executor) -> str:
    """Indexes are 0-based, as in WebDriver's select-by-index."""
    entry, node, _ = ex.target()
    offered = ex.runner.options(node)
    raw = ex.arg("index")
    if not raw.strip().isdigit() or int(raw) >= len(offered):
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"No option at index {raw}", options=[t for _, t in offered])
    text = offered[int(raw)][1]
    ex.runner.select_option(node, text)
    return f"Actual: {entry.name} = {text}"


def _choose_value(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.choose_option(node, ex.arg("value"))
    return f"Actual: {entry.name} = {ex.arg('value')}"


def _checked_is(expected: bool) -> Callable[[Executor], str]:
    def check(ex: Executor) -> str:
        entry, node, _ = ex.target()
        actual = ex.runner.is_checked(node)
        if actual != expected:
            raise StepFailure(Signal.STATE_MISMATCH, f"{entry.name} is {'checked' if actual else 'unchecked'}")
        return f"Actual: {entry.name} {'checked' if actual else 'unchecked'}"
    return check


def _assure_checked(value: bool) -> Callable[[Executor], str]:
    def force(ex: Executor) -> str:
        entry, node, _ = ex.target()
        ex.runner.set_checked(node, value)
        return f"Actual: {entry.name} {'checked' if value else 'unchecked'}"
    return force


def _message(expected_present: bool) -> Callable[[Executor], str]:
    def check(ex: Executor) -> str:
        content = normalize(ex.arg("content"))
        present = content in ex.runner.visible_text()
        if present != expected_present:
            raise StepFailure(Signal.MESSAGE_CHECK_FAILED, "Message not identified", expected=content,
                              screen=ex.state.current_screen, visibleText=ex.runner.visible_text()[:300])
        return "Actual: Proper Message"
    return check


def _field_value(expected_present: bool) -> Callable[[Executor], str]:
    def check(ex: Executor) -> str:
        entry, node, _ = ex.target()
        value = normalize(ex.arg("value"))
        shown = normalize(ex.runner.read(node))
        present = fold(value) == fold(shown) or (value and fold(value) in fold(shown))
        if bool(present) != expected_present:
            raise StepFailure(Signal.VALUE_NOT_FOUND, f"Field {entry.name} shows {shown!r}", expected=value)
        return f"Actual: {entry.name} = {shown}"
    return check


def _not_visible(ex: Executor) -> str:
    entry, node, _ = ex.target()
    if ex.runner.is_visible(node):
        raise StepFailure(Signal.STATE_MISMATCH, f"{entry.name} is visible")
    return f"Actual: {entry.name} hidden"


def _wait_ready(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.require_visible(node)
    if not ex.runner.is_enabled(node):
        raise StepFailure(Signal.STATE_MISMATCH, f"{entry.name} is disabled")
    return f"Actual: {entry.name} ready"


def _visible_and_disabled(ex: Executor) -> str:
    entry, node, _ = ex.target()
    ex.require_visible(node)
    if ex.runner.is_enabled(node):
        raise StepFailure(Signal.STATE_MISMATCH, f"{entry.name} is enabled")
    return f"Actual: {entry.name} visible and disabled"


def _trigger_event(ex: Executor) -> str:
    entry, node, _ = ex.target()
    event = ex.arg("event")
    ex.state.events.append((entry.name, event))
    return f"Actual: {entry.name}; event {event!r} recorded (no scripting)"


def _tree_row(ex: Executor) -> str:
    entry, node, _ = ex.target()
    rows = ex.runner.find_text_node(node, ex.arg("row"))
    if not rows:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Row not found: {ex.arg('row')}")
    if len(rows) > 1:
        raise StepFailure(Signal.LOCATOR_MANY_MATCHES, "Element not identified", row=ex.arg("row"))
    ex.runner.click(rows[0])
    return f"Actual: {entry.name} / {ex.arg('row')}"


def _random_number(with_prefix: bool) -> Callable[[Executor], str]:
    def fill(ex: Executor) -> str:
        entry, node, kind = ex.target()
        prefix = ex.arg("prefix") if with_prefix else ""
        value = f"{prefix}{ex.ctx.rng.randrange(10 ** 6)}"
        ex.write(node, kind, value)
        return f"Actual: {entry.name} = {value}"
    return fill


def _inform(ex: Executor) -> str:
    node = ex.ctx.focus
    if node is None:
        raise StepFailure(Signal.ELEMENT_NOT_MAPPED, "No field has focus")
    ex.write(node, ex.runner.kind_of(node), ex.arg("value"))
    return f"Actual: {ex.arg('value')}"


# the catalog lists Grid for the data-provider steps: the grid holds the data,
# while the named fields receive it, so the fields themselves must take input
_DATA_FIELDS = sorted(_WRITABLE | {"Select"})


def _inform_field(ex: Executor) -> str:
    name = ex.arg("fieldname")
    value = ex.data_value(name)
    _, node, kind = ex.element(name, supported=_DATA_FIELDS)
    ex.write(node, kind, value)
    return f"Actual: {name} = {value}"


def _inform_fields(ex: Executor) -> str:
    names = [n.strip() for n in ex.arg("fieldnames").split(",") if n.strip()]
    done = []
    for name in names:
        value = ex.data_value(name)
        _, node, kind = ex.element(name, supported=_DATA_FIELDS)
        ex.write(node, kind, value)
        done.append(f"{name} = {value}")
    return "Actual: " + "; ".join(done)


def _select_dataset(ex: Executor) -> str:
    name = ex.arg("dataset")
    if ex.ctx.datasets is None:
        raise StepSkipped("no dataset supplied")
    table = next((t for n, t in ex.ctx.datasets.items() if fold(n) == fold(name)), None)
    if table is None:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Dataset not found: {name}")
    ex.ctx.active_data = dict(table)
    return f"Actual: dataset {name} ({len(table)} keys)"


def _store(key_arg: str) -> Callable[[Executor], str]:
    def store(ex: Executor) -> str:
        ex.state.stored_variables[ex.arg(key_arg)] = ex.arg("value")
        return f"Actual: {ex.arg(key_arg)} = {ex.arg('value')}"
    return store


def _obtain(ex: Executor) -> str:
    entry, node, _ = ex.target()
    value = ex.runner.read(node)
    ex.state.stored_variables[entry.name] = value
    return f"Actual: {entry.name} = {value}"


def _print_variable(ex: Executor) -> str:
    name = ex.arg("variable")
    if name not in ex.state.stored_variables:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Variable not defined: {name}")
    value = ex.state.stored_variables[name]
    log.info("%s = %s", name, value)
    return f"Actual: {name} = {value}"


def _visible_dialog(ex: Executor) -> Any:
    if ex.state.current_screen is None:
        raise StepFailure(Signal.SCREEN_MISMATCH, "No screen is displayed")
    dialogs = [e for e in ex.page_map.elements
               if e.screen == ex.state.current_screen and e.declared_kind == "Dialog"]
    nodes = [n for e in dialogs for n in ex.runner.locate(e)]
    if not dialogs and ex.state.document is not None:
        nodes = [n for n in ex.state.document.find_all(True) if ex.runner.kind_of(n) == "Dialog"]
    nodes = [n for n in nodes if ex.runner.is_visible(n)]
    if not nodes:
        raise StepFailure(Signal.LOCATOR_NO_MATCH, "Inexistent element", element="dialog box")
    if len(nodes) > 1:
        raise StepFailure(Signal.LOCATOR_MANY_MATCHES, "Element not identified", element="dialog box")
    return nodes[0]


def _close_dialog(action: str) -> Callable[[Executor], str]:
    def close(ex: Executor) -> str:
        dialog = _visible_dialog(ex)
        ex.runner.hide(dialog)
        return f"Actual: dialog {action}"
    return close


def _dialog_input(ex: Executor) -> str:
    dialog = _visible_dialog(ex)
    field_node = dialog.find(["input", "textarea"])
    if field_node is None:
        raise StepFailure(Signal.LOCATOR_NO_MATCH, "Inexistent element", element="dialog input")
    ex.write(field_node, ex.runner.kind_of(field_node), ex.arg("value"))
    return f"Actual: {ex.arg('value')}"


def _dialog_message(ex: Executor) -> str:
    dialog = _visible_dialog(ex)
    message = normalize(ex.arg("message"))
    if message not in ex.runner.visible_text(dialog):
        raise StepFailure(Signal.MESSAGE_CHECK_FAILED, "Message not identified", expected=message)
    return "Actual: Proper Message"


# tables: a cell is addressed either by "row,column" (1-based) or by its text

def _rows(table: Any) -> list[list[Any]]:
    return [tr.find_all(["td", "th"]) for tr in table.find_all("tr")]


def _cell(ex: Executor, table: Any, ref: str) -> Any:
    parts = [p.strip() for p in ref.split(",")]
    rows = _rows(table)
    if len(parts) == 2 and all(p.isdigit() for p in parts):
        r, c = int(parts[0]), int(parts[1])
        if 1 <= r <= len(rows) and 1 <= c <= len(rows[r - 1]):
            return rows[r - 1][c - 1]
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"No cell {ref}")
    cells = [cell for row in rows for cell in row if fold(cell.get_text(" ")) == fold(ref)]
    if not cells:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Cell not found: {ref}")
    if len(cells) > 1:
        raise StepFailure(Signal.LOCATOR_MANY_MATCHES, "Element not identified", cell=ref)
    return cells[0]


def _column(ex: Executor, table: Any, header: str) -> list[Any]:
    rows = _rows(table)
    if not rows:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Column not found: {header}")
    idx = next((i for i, c in enumerate(rows[0]) if fold(c.get_text(" ")) == fold(header)), None)
    if idx is None:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Column not found: {header}")
    return [row[idx] for row in rows[1:] if idx < len(row)]


def _click_inside(ex: Executor, cell: Any) -> str | None:
    clickable = cell.find(["a", "button", "input"]) or cell
    return ex.runner.click(clickable)


def _table_row_click(ex: Executor) -> str:
    entry, table, _ = ex.target()
    row_text, element = ex.arg("row"), ex.arg("element")
    rows = [tr for tr in table.find_all("tr") if fold(ex.arg("row")) in fold(tr.get_text(" "))]
    if not rows:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Row not found: {row_text}")
    if len(rows) > 1:
        raise StepFailure(Signal.LOCATOR_MANY_MATCHES, "Element not identified", row=row_text)
    targets = ex.runner.find_text_node(rows[0], element)
    if not targets:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Element not found in row: {element}")
    _click_inside(ex, targets[0])
    return f"Actual: {entry.name} / {row_text} / {element}"


def _store_cell(ex: Executor) -> str:
    _, table, _ = ex.target()
    value = normalize(_cell(ex, table, ex.arg("cell")).get_text(" "))
    ex.state.stored_variables[ex.arg("place")] = value
    return f"Actual: {ex.arg('place')} = {value}"


def _store_column(ex: Executor) -> str:
    _, table, _ = ex.target()
    values = [normalize(c.get_text(" ")) for c in _column(ex, table, ex.arg("column"))]
    ex.state.stored_variables[ex.arg("place")] = ", ".join(values)
    return f"Actual: {ex.arg('place')} = {', '.join(values)}"


def _compare_stored(as_column: bool) -> Callable[[Executor], str]:
    def compare(ex: Executor) -> str:
        name, text = ex.arg("tabletext"), normalize(ex.arg("text"))
        if name not in ex.state.stored_variables:
            raise StepFailure(Signal.VALUE_NOT_FOUND, f"Nothing stored in {name}")
        stored = ex.state.stored_variables[name]
        ok = fold(text) in [fold(v) for v in stored.split(", ")] if as_column else fold(stored) == fold(text)
        if not ok:
            raise StepFailure(Signal.VALUE_NOT_FOUND, f"{name} holds {stored!r}", expected=text)
        return f"Actual: {stored}"
    return compare


def _click_cell(ex: Executor) -> str:
    entry, table, _ = ex.target()
    cell = _cell(ex, table, ex.arg("cell"))
    ex.ctx.focus = cell.find(["input", "textarea"]) or ex.ctx.focus
    _click_inside(ex, cell)
    return f"Actual: {entry.name} / {ex.arg('cell')}"


def _click_column(ex: Executor) -> str:
    entry, table, _ = ex.target()
    rows = _rows(table)
    header = next((c for c in (rows[0] if rows else []) if fold(c.get_text(" ")) == fold(ex.arg("column"))), None)
    if header is None:
        raise StepFailure(Signal.VALUE_NOT_FOUND, f"Column not found: {ex.arg('column')}")
    _click_inside(ex, header)
    return f"Actual: {entry.name} / {ex.arg('column')}"


def _choose_in_table(ex: Executor) -> str:
    entry, table, _ = ex.target()
    option = ex.arg("option")
    for control in table.find_all(["input", "select"]):
        kind = ex.runner.kind_of(control)
        if kind in ("Radio", "CheckBox") and fold(control.get("value", "")) == fold(option):
            ex.runner.set_checked(control, True)
            return f"Actual: {entry.name} / {option}"
        if kind == "Select" and any(fold(option) in (fold(v), fold(t)) for v, t in ex.runner.options(control)):
            ex.choose_option(control, option)
            return f"Actual: {entry.name} / {option}"
    raise StepFailure(Signal.VALUE_NOT_FOUND, f"Option not found: {option}")


def _type_in_table(ex: Executor) -> str:
    entry, table, _ = ex.target()
    node = ex.ctx.focus
    if node is None or not any(p is table for p in node.parents):
        node = next((i for i in table.find_all(["input", "textarea"])
                     if ex.runner.kind_of(i) in _WRITABLE and not ex.runner.read(i).strip()), None)
    if node is None:
        raise StepFailure(Signal.LOCATOR_NO_MATCH, "Inexistent element", element=f"{entry.name} input")
    ex.write(node, ex.runner.kind_of(node), ex.arg("text"))
    return f"Actual: {entry.name} = {ex.arg('text')}"


_HANDLERS: dict[str, Callable[[Executor], str]] = {
    "theFieldIsUnchecked": _checked_is(False),
    "theFieldIsChecked": _checked_is(True),
    "assureTheFieldIsUnchecked": _assure_checked(False),
    "assureTheFieldIsChecked": _assure_checked(True),
    "choose": _choose,
    "select": _choose,
    "chooseByIndexInTheField": _choose_by_index,
    "chooseReferringTo": _choose,
    "chooseTheOptionOfValueInTheField": _choose_value,
    "clickOn": _click,
    "clickOnReferringTo": _click,
    "doNotTypeAnyValueToTheField": _leave_empty,
    "resetTheValueOfTheField": _reset,
    "goTo": _go_to,
    "goToWithTheParameters": _go_to,
    "isDisplayed": _is_displayed,
    "setInTheField": _set_value,
    "tryToSetInTheField": _try_to_set,
    "setInTheFieldReferringTo": _set_value,
    "typeAndChooseInTheField": _type_and_choose,
    "informAndChooseInTheField": _type_and_choose,
    "willBeDisplayed": _message(True),
    "willNotBeDisplayed": _message(False),
    "willBeDisplayedInTheFieldTheValue": _field_value(True),
    "willNotBeDisplayedInTheFieldTheValue": _field_value(False),
    "willBeDisplayedTheValueInTheFieldReferringTo": _field_value(True),
    "willNotBeDisplayedTheValueInTheFieldReferringTo": _field_value(False),
    "isNotVisible": _not_visible,
    "valueReferringToIsNotVisible": _not_visible,
    "waitTheFieldBeVisibleClickableAndEnable": _wait_ready,
    "waitTheFieldReferringToBeVisibleClickableAndEnable": _wait_ready,
    "theElementIsVisibleAndDisable": _visible_and_disabled,
    "theElementReferringToIsVisibleAndDisable": _visible_and_disabled,
    "setInTheFieldAndTriggerTheEvent": _trigger_event,
    "clickOnTheRowOfTheTree": _tree_row,
    "informARandomNumberWithPrefixInTheField": _random_number(True),
    "informARandomNumberInTheField": _random_number(False),
    "inform": _inform,
    "informTheField": _inform_field,
    "informTheFields": _inform_fields,
    "selectFromDataSet": _select_dataset,
    "informTheValueOfTheField": _inform_field,
    "informKeyWithTheValue": _store("key"),
    "defineTheVariableWithTheValue": _store("variable"),
    "obtainTheValueFromTheField": _obtain,
    "printOnTheConsoleTheValueOfTheVariable": _print_variable,
    "confirmTheDialogBox": _close_dialog("confirmed"),
    "cancelTheDialogBox": _close_dialog("cancelled"),
    "informTheValueInTheDialogBox": _dialog_input,
    "willBeDisplayedInTheDialogBox": _dialog_message,
    "moveTheMouseOver": _hover,
    "clickOnTheRowOfTheTableReferringTo": _table_row_click,
    "storeTheCellOfTheTableIn": _store_cell,
    "storeTheColumnOfTheTableIn": _store_column,
    "compareTheTextOfTheTableCellWith": _compare_stored(False),
    "compareTheTextOfTheTableColumnWith": _compare_stored(True),
    "clickOnTheCellOfTheTable": _click_cell,
    "clickOnTheColumnOfTheTable": _click_column,
    "chooseTheOptionInTheCellOfTheTable": _choose_in_table,
    "chooseTheOptionInTheColumnOfTheTable": _choose_in_table,
    "typeTheTextInTheCellOfTheTable": _type_in_table,
    "typeTheTextInTheColumnOfTheTable": _type_in_table,
}


def execute_step(step: Step, binding: StepBinding, executor: Executor, base: dict[str, Any]) -> StepResult:
    """Run one matched step and turn the outcome into a StepResult."""
    state = executor.state
    try:
        evidence = executor.run(binding)
    except StepFailure as failure:
        details = {"behavior": binding.behavior_id, **failure.details, "screen": state.current_screen}
        return StepResult.failure(signal=failure.signal, evidence=f"Actual: {failure.message}",
                                  details=details, **base)
    except StepSkipped as skip:
        return StepResult(status=Status.SKIPPED, evidence=str(skip),
                          details={"behavior": binding.behavior_id}, **base)
    details = {"behavior": binding.behavior_id, "screen": state.current_screen}
    return StepResult(status=Status.PASSED, evidence=evidence, details=details, **base)


@dataclass(frozen=True)
class PendingMarkers:
    """Steps to leave unexecuted: ``("Scenario title", step_number)`` pairs and ``@tag`` names."""

    steps: frozenset[tuple[str, int]] = frozenset()
    tags: frozenset[str] = frozenset()

    @classmethod
    def parse(cls, markers: Iterable[str]) -> "PendingMarkers":
        steps, tags = set(), set()
        for marker in markers:
            marker = marker.strip()
            if marker.startswith("@"):
                tags.add(marker[1:])
                continue
            scenario, sep, number = marker.rpartition(":")
            if not sep or not scenario.strip() or not number.strip().isdigit() or int(number) < 1:
                raise ConfigError(f"bad pending marker {marker!r}; use 'Scenario title:N' or '@tag'")
            steps.add((fold(scenario), int(number)))
        return cls(frozenset(steps), frozenset(tags))

    def covers(self, scenario_title: str, scenario_index: int, step_number: int, step: Step) -> bool:
        if any(tag in self.tags for tag in step.tags):
            return True
        return ((fold(scenario_title), step_number) in self.steps
                or (str(scenario_index), step_number) in self.steps)


def assess_final_gui(story: Story, page_map: PageMap, catalog: OntologyCatalog,
                     runner: RunnerInterface | None = None, pending: PendingMarkers | Iterable[str] = (),
                     mode: Mode | str = Mode.FAIL_FAST, seed: int = 0,
                     datasets: Mapping[str, Mapping[str, str]] | None = None) -> list[StepResult]:
    """Run every scenario of *story* from a fresh state and collect step results."""
    mode = Mode(mode)
    if not isinstance(pending, PendingMarkers):
        pending = PendingMarkers.parse(pending)
    runner = runner or StaticDomRunner(page_map)
    results: list[StepResult] = []
    for index, scenario in enumerate(story.scenarios, 1):
        runner.reset()
        executor = Executor(runner, page_map, catalog, ExecContext(random.Random(seed), datasets))
        stopped = False
        for number, step in enumerate(scenario.steps, 1):
            base = dict(story_title=story.title, scenario_title=scenario.title, step_text=step.line,
                        artifact=Artifact.FINAL_GUI, line_number=step.line_number,
                        artifact_path=page_map.source_path)
            if stopped:
                results.append(StepResult(status=Status.NOT_PERFORMED, **base))
                continue
            if pending.covers(scenario.title, index, number, step):
                results.append(StepResult(status=Status.PENDING, evidence="marked pending", **base))
                continue
            binding = match_step(step, catalog)
            if binding is None:
                result = StepResult(status=Status.UNRECOGNIZED,
                                    evidence="no behavior in the catalog matches this step", **base)
            else:
                result = execute_step(step, binding, executor, base)
            results.append(result)
            if result.status in (Status.FAILED, Status.UNRECOGNIZED) and mode is Mode.FAIL_FAST:
                stopped = True
    return results


def scenario_verdict(results: Iterable[StepResult]) -> Status:
    """Overall status of one scenario's results, as shown per scenario in reports."""
    statuses = [r.status for r in results]
    for status in (Status.FAILED, Status.UNRECOGNIZED, Status.PENDING):
        if status in statuses:
            return status
    return Status.PASSED
