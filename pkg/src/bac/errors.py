"""Exception hierarchy. Every error carries enough context to print a useful message."""

from __future__ import annotations


class BacError(Exception):
    """Base class for all checker errors."""


class StorySyntaxError(BacError):
    def __init__(self, reason: str, line: int = 0, path: str = ""):
        self.reason = reason
        self.line = line
        self.path = path
        where = f"{path}:{line}" if path else f"line {line}"
        super().__init__(f"{where}: {reason}")


class CatalogError(BacError):
    pass


class AmbiguousMatch(BacError):
    def __init__(self, text: str, behavior_ids: list[str]):
        self.text = text
        self.behavior_ids = behavior_ids
        super().__init__(f"step {text!r} matches several behaviors: {', '.join(behavior_ids)}")


class UnknownBehavior(BacError, KeyError):
    def __str__(self) -> str:
        return f"unknown behavior {self.args[0]!r}"


class ArtifactParseError(BacError):
    """Malformed task model, scenario, or prototype file."""


class UnresolvedReference(BacError):
    def __init__(self, task_id: str, scenario: str = ""):
        self.task_id = task_id
        super().__init__(f"scenario {scenario!r} references unknown task id {task_id!r}")


class MappingGap(BacError):
    def __init__(self, abstract_element: str):
        self.abstract_element = abstract_element
        super().__init__(f"no concrete prototype mapping for abstract element {abstract_element!r}")


class ConfigError(BacError):
    pass
