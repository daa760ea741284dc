"""Consistency checks between BDD stories and the design artifacts of an interactive system.

Steps of a story are matched against a catalog of interactive behaviors, then
traced through extracted task-model scenarios, wireframe prototypes, and
final GUI documents.
"""

from bac.ontology import OntologyCatalog, default_catalog, derive_task_names, load_catalog, match_step
from bac.report import Artifact, InconsistencyKind, Status, StepResult
from bac.story import Keyword, Scenario, Step, Story, load_story, parse_story

__version__ = "0.1.0"

__all__ = [
    "Artifact", "InconsistencyKind", "Keyword", "OntologyCatalog", "Scenario", "Status", "Step",
    "StepResult", "Story", "default_catalog", "derive_task_names", "load_catalog", "load_story",
    "match_step", "parse_story",
]
