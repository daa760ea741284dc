# Does a wireframe offer exactly one element for each field a step touches?

from pathlib import Path

from bac.ontology import default_catalog
from bac.protocheck import (
    Mode,
    assess_prototype,
    count_matching_elements,
    load_mapping,
    load_prototype,
    supported_types,
)
from bac.report import emit_console_log
from bac.story import load_story

FLIGHT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "flight"

catalog = default_catalog()
mapping = load_mapping()
proto = load_prototype(FLIGHT / "search.bmml")
print(len(proto.controls), "controls in mockup", proto.mockup_name)

# Abstract element kinds map to concrete mockup control types.

types = supported_types("setInTheField", catalog, mapping)
print(sorted(t.split("::")[-1] for t in types))

# A label grouped with an input counts as one element for that field.

print("Departure:", count_matching_elements("Departure", types, proto))

# Continue mode assesses every step instead of stopping at the first failure.

results = assess_prototype(load_story(FLIGHT / "search.story"), proto, catalog, mapping, Mode.CONTINUE)
print(emit_console_log(results))
