# Summaries, JSON reports and exit codes.

import io
import tempfile
from contextlib import redirect_stdout
from pathlib import Path

from bac.cli import main
from bac.report import exit_code, read_json_report, summarize

FLIGHT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "flight"

# check-all runs the three checks in turn and writes one JSON report.
# Continue mode keeps going after a failed step.

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "report.json"
    console = io.StringIO()
    with redirect_stdout(console):
        code = main(["check-all", "--stories", str(FLIGHT / "search.story"),
                     "--scenarios", str(FLIGHT / "search.scen"),
                     "--prototype", str(FLIGHT / "search.bmml"),
                     "--page-map", str(FLIGHT / "flight.toml"),
                     "--mode", "Continue", "--report-out", str(out)])
    results, diagnostics = read_json_report(out)

# The console shows the summary line of each section.

print("\n".join(line for line in console.getvalue().splitlines() if line.startswith("#")))
print("exit code", code, "==", exit_code(results))

# The final GUI has no "Book Flights" screen, so every later step finds no screen.
# Per artifact counts of consistent and inconsistent steps.

for artifact, counts in summarize(results)["artifacts"].items():
    print(artifact, counts["total"], counts["consistent"], counts["inconsistent"])

# Failed steps carry an inconsistency category.

for r in results:
    if r.classification:
        print(r.artifact.value, r.classification.value, "|", r.step_text)

for d in diagnostics:
    print(d.kind, d.detail)
