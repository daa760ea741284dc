"""Command-line entry point.

Exit codes: 0 when every step is consistent, 1 when any step failed or was
not recognized, 2 on usage, input or configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Sequence, TextIO

from bac.errors import BacError
from bac.guicheck import PendingMarkers, assess_final_gui, load_dataset, load_page_map
from bac.ontology import OntologyCatalog, load_catalog, match_step
from bac.protocheck import Mode, assess_prototype, load_mapping, load_prototype
from bac.report import ScenarioDiagnostic, StepResult, dumps_report, emit_console_log, exit_code, summarize
from bac.story import Story, load_story
from bac.taskcheck import (
    EnrichedTaskScenario,
    TaskModelRef,
    assess_task_scenarios,
    dump_enriched_scenario,
    load_task_model,
    load_task_scenario,
    parse_raw_scenario,
)

EXIT_OK, EXIT_INCONSISTENT, EXIT_ERROR = 0, 1, 2


class Command(str, Enum):
    LINT = "lint"
    CHECK_TASKS = "check-tasks"
    CHECK_PROTO = "check-proto"
    CHECK_GUI = "check-gui"
    CHECK_ALL = "check-all"


@dataclass
class RunConfig:
    command: Command
    story_paths: list[Path]
    scenario_paths: list[Path] = field(default_factory=list)
    model_paths: list[Path] = field(default_factory=list)
    prototype_path: Path | None = None
    page_map_path: Path | None = None
    catalog_path: Path | None = None
    mapping_path: Path | None = None
    dataset_path: Path | None = None
    mode: Mode = Mode.FAIL_FAST
    seed: int = 0
    report_out: Path | None = None
    pending: list[str] = field(default_factory=list)
    skip_task_names: list[str] = field(default_factory=list)
    write_enriched: Path | None = None
    color: bool = False

    def validate(self) -> None:
        if not self.story_paths:
            raise UsageError("--stories is required")
        needs = {
            Command.CHECK_TASKS: [("--scenarios", self.scenario_paths)],
            Command.CHECK_PROTO: [("--prototype", self.prototype_path)],
            Command.CHECK_GUI: [("--page-map", self.page_map_path)],
            Command.CHECK_ALL: [("--scenarios", self.scenario_paths), ("--prototype", self.prototype_path),
                                ("--page-map", self.page_map_path)],
        }
        missing = [flag for flag, value in needs.get(self.command, []) if not value]
        if missing:
            raise UsageError(f"{self.command.value} requires {', '.join(missing)}")


class UsageError(BacError):
    pass


@dataclass(frozen=True)
class LintEntry:
    path: str
    line: int
    step: str
    behavior: str | None

    @property
    def ok(self) -> bool:
        return self.behavior is not None


def lint(stories: Sequence[Story], catalog: OntologyCatalog) -> list[LintEntry]:
    """Check every step against the catalog; unmatched steps have behavior None."""
    entries = []
    for story in stories:
        for scenario in story.scenarios:
            for step in scenario.steps:
                binding = match_step(step, catalog)
                entries.append(LintEntry(story.source_path, step.line_number, step.line,
                                         binding.behavior_id if binding else None))
    return entries


def _resolve_catalog(path: Path | None) -> OntologyCatalog:
    if path is None and os.environ.get("BAC_CATALOG"):
        path = Path(os.environ["BAC_CATALOG"])
    return load_catalog(path)


def _task_scenarios(config: RunConfig) -> list[EnrichedTaskScenario]:
    models: dict[str, TaskModelRef] = {p.name: load_task_model(p) for p in config.model_paths}
    only = next(iter(models.values())) if len(models) == 1 else None
    scenarios = []
    for path in config.scenario_paths:
        model = only
        if model is None and models:
            raw_model = parse_raw_scenario(path.read_bytes(), str(path)).model
            model = models.get(Path(raw_model).name) if raw_model else None
        scenario = load_task_scenario(path, model)
        scenarios.append(scenario)
        if config.write_enriched is not None:
            config.write_enriched.mkdir(parents=True, exist_ok=True)
            out = config.write_enriched / (path.name.split(".")[0] + ".enriched.scen")
            out.write_text(dump_enriched_scenario(scenario), encoding="utf-8")
    return scenarios


def _run_tasks(config, stories, catalog, out) -> tuple[list[StepResult], list[ScenarioDiagnostic]]:
    scenarios = _task_scenarios(config)
    results: list[StepResult] = []
    diagnostics: list[ScenarioDiagnostic] = []
    paths = ", ".join(str(p) for p in config.scenario_paths)
    for story in stories:
        assessment = assess_task_scenarios(story, scenarios, catalog, config.skip_task_names, paths)
        out.write(emit_console_log(assessment.log))
        out.write(emit_console_log(assessment.results, config.color))
        for d in assessment.diagnostics:
            out.write(f"[DIAGNOSTIC] {d.kind} | {d.scenario_title or d.story_title} | {d.detail}\n")
        results += assessment.results
        diagnostics += assessment.diagnostics
    return results, diagnostics


def _run_proto(config, stories, catalog, out) -> list[StepResult]:
    proto = load_prototype(config.prototype_path)
    mapping = load_mapping(config.mapping_path)
    results: list[StepResult] = []
    for story in stories:
        story_results = assess_prototype(story, proto, catalog, mapping, config.mode)
        out.write(emit_console_log(story_results, config.color))
        results += story_results
    return results


def _run_gui(config, stories, catalog, out) -> list[StepResult]:
    page_map = load_page_map(config.page_map_path)
    pending = PendingMarkers.parse(config.pending)
    datasets = load_dataset(config.dataset_path) if config.dataset_path else None
    results: list[StepResult] = []
    for story in stories:
        story_results = assess_final_gui(story, page_map, catalog, pending=pending, mode=config.mode,
                                         seed=config.seed, datasets=datasets)
        out.write(emit_console_log(story_results, config.color))
        results += story_results
    return results


def _write_summary(results: Sequence[StepResult], out: TextIO) -> None:
    for artifact, counts in summarize(results)["artifacts"].items():
        out.write(f"# {artifact}: {counts['total']} analyzed, {counts['consistent']} consistent, "
                  f"{counts['inconsistent']} inconsistent\n")


def run(config: RunConfig, out: TextIO | None = None) -> int:
    """Execute *config*; returns the process exit code."""
    out = out or sys.stdout
    config.validate()
    catalog = _resolve_catalog(config.catalog_path)
    stories = [load_story(p) for p in config.story_paths]

    if config.command is Command.LINT:
        entries = lint(stories, catalog)
        for e in entries:
            if not e.ok:
                out.write(f"{e.path}:{e.line}: no step is matching: {e.step}\n")
        bad = sum(not e.ok for e in entries)
        out.write(f"{len(entries)} step(s) checked, {bad} not recognized\n")
        return EXIT_INCONSISTENT if bad else EXIT_OK

    results: list[StepResult] = []
    diagnostics: list[ScenarioDiagnostic] = []
    sections = []
    if config.command in (Command.CHECK_TASKS, Command.CHECK_ALL):
        sections.append(lambda: _run_tasks(config, stories, catalog, out))
    if config.command in (Command.CHECK_PROTO, Command.CHECK_ALL):
        sections.append(lambda: (_run_proto(config, stories, catalog, out), []))
    if config.command in (Command.CHECK_GUI, Command.CHECK_ALL):
        sections.append(lambda: (_run_gui(config, stories, catalog, out), []))
    # each section prints its own summary so check-all equals the individual outputs in turn
    for section in sections:
        section_results, section_diagnostics = section()
        _write_summary(section_results, out)
        results += section_results
        diagnostics += section_diagnostics

    if config.report_out is not None:
        config.report_out.write_text(dumps_report(results, diagnostics), encoding="utf-8")
    return exit_code(results)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bac", description="Check design artifacts against BDD stories.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--stories", nargs="+", type=Path, required=True, help="BDD story files")
        p.add_argument("--catalog", type=Path, help="behavior catalog (default: bundled; env BAC_CATALOG)")
        p.add_argument("--color", action="store_true", help="ANSI-colored status markers")
        p.add_argument("-v", "--verbose", action="store_true")

    def checks(p: argparse.ArgumentParser) -> None:
        p.add_argument("--report-out", type=Path, help="write a JSON report here")

    def tasks(p: argparse.ArgumentParser) -> None:
        p.add_argument("--scenarios", nargs="+", type=Path, default=[], help="extracted task scenarios")
        p.add_argument("--models", nargs="+", type=Path, default=[], help="reference task models")
        p.add_argument("--skip-task-names", nargs="+", default=[], metavar="NAME",
                       help="task names to ignore when matching")
        p.add_argument("--write-enriched", type=Path, metavar="DIR", help="save preformatted scenarios")

    def proto(p: argparse.ArgumentParser) -> None:
        p.add_argument("--prototype", type=Path, help="prototype file (.bmml)")
        p.add_argument("--mapping", type=Path, help="abstract-to-prototype element mapping")

    def gui(p: argparse.ArgumentParser) -> None:
        p.add_argument("--page-map", type=Path, help="page map (TOML)")
        p.add_argument("--seed", type=int, default=0, help="seed for generated data")
        p.add_argument("--pending", action="append", default=[], metavar="SCENARIO:N|@TAG",
                       help="leave a step unexecuted (repeatable)")
        p.add_argument("--dataset", type=Path, help="key-value dataset file (TOML)")

    def mode(p: argparse.ArgumentParser) -> None:
        p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.FAIL_FAST.value)

    layout = {
        Command.LINT: ("report steps the catalog does not recognize", [common]),
        Command.CHECK_TASKS: ("check extracted task-model scenarios", [common, checks, tasks]),
        Command.CHECK_PROTO: ("check a prototype", [common, checks, proto, mode]),
        Command.CHECK_GUI: ("check a final GUI", [common, checks, gui, mode]),
        Command.CHECK_ALL: ("run the three checks in turn", [common, checks, tasks, proto, gui, mode]),
    }
    for command, (text, groups) in layout.items():
        p = sub.add_parser(command.value, help=text)
        for add in groups:
            add(p)
    return parser


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")

    def get(name: str, default=None):
        return getattr(args, name, default)

    return RunConfig(
        command=Command(args.command),
        story_paths=args.stories,
        scenario_paths=get("scenarios", []) or [],
        model_paths=get("models", []) or [],
        prototype_path=get("prototype"),
        page_map_path=get("page_map"),
        catalog_path=args.catalog,
        mapping_path=get("mapping"),
        dataset_path=get("dataset"),
        mode=Mode(get("mode", Mode.FAIL_FAST.value)),
        seed=get("seed", 0),
        report_out=get("report_out"),
        pending=get("pending", []) or [],
        skip_task_names=get("skip_task_names", []) or [],
        write_enriched=get("write_enriched"),
        color=args.color,
    )


def main(argv: Sequence[str] | None = None) -> int:
    try:
        config = parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_ERROR
    try:
        return run(config)
    except (BacError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
