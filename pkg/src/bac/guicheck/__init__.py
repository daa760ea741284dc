"""Assessment of final GUIs rendered as static HTML documents."""

from bac.guicheck.engine import PendingMarkers, assess_final_gui, execute_step, load_dataset, scenario_verdict
from bac.guicheck.pagemap import ElementMapEntry, LocatorType, PageMap, load_page_map, parse_page_map
from bac.guicheck.runner import DomState, RunnerInterface, StaticDomRunner, infer_kind

__all__ = [
    "DomState", "ElementMapEntry", "LocatorType", "PageMap", "PendingMarkers", "RunnerInterface",
    "StaticDomRunner", "assess_final_gui", "execute_step", "infer_kind", "load_dataset",
    "load_page_map", "parse_page_map", "scenario_verdict",
]
