"""Command-line entry points: simulate, recommend, validate.

Exit codes: 0 success, 2 configuration problems, 3 runtime failures. Output
files are written atomically (temp file then rename) so a crash never leaves
a partial artifact behind.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

import yaml

from .adsim import (
    RunReport,
    SimulationError,
    load_scenario,
    run_simulation,
    validate_scenario,
)
from .catalog import CatalogError
from .control import ControlError
from .metrics import tradeoff_point, tradeoff_to_csv
from .obfuscation import ObfuscationError, candidate_apps, plan_weightage
from .profiler import ProfilerError, assign_weightages, context_from_catalog
from .usage import UsageError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RUNTIME = 3

_CONFIG_ERRORS = (
    SimulationError,
    CatalogError,
    ControlError,
    ObfuscationError,
    ProfilerError,
    UsageError,
    yaml.YAMLError,
    FileNotFoundError,
    KeyError,
)

DECISION_COLUMNS = (
    "t",
    "state_case",
    "eta_lprime",
    "penalty",
    "objective",
    "R",
    "Q",
    "bound",
)


def atomic_write(path: Path, text: str) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def report_json(report: RunReport) -> str:
    return json.dumps(report.to_json_dict(), sort_keys=True, indent=2) + "\n"


def decisions_csv(report: RunReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(DECISION_COLUMNS)
    for row in report.control_log:
        writer.writerow([row[c] for c in DECISION_COLUMNS])
    return buf.getvalue()


def _cmd_simulate(args) -> int:
    paths = []
    if args.config:
        paths.append(args.config)
    paths.extend(args.scenarios or [])
    if not paths:
        print("simulate: provide --config and/or --scenarios", file=sys.stderr)
        return EXIT_CONFIG
    out_dir = Path(args.out) if args.out else Path(".")
    points = []
    for path in paths:
        scenario = load_scenario(path)
        seed = args.seed if args.seed is not None else scenario.seed
        report = run_simulation(scenario, seed=seed)
        stem = Path(path).stem
        if args.format == "json":
            atomic_write(out_dir / f"{stem}_report.json", report_json(report))
        atomic_write(out_dir / f"{stem}_decisions.csv", decisions_csv(report))
        points.append(tradeoff_point(report))
        print(
            f"{scenario.name}: {report.total_ad_requests} ad requests "
            f"({report.obfs_ad_requests} obfuscation), "
            f"disruption {report.disruption_pct:.1f}%, "
            f"relevance {report.relevance:.3f}"
        )
    if len(points) > 1:
        atomic_write(out_dir / "tradeoff.csv", tradeoff_to_csv(points))
    return EXIT_OK


def _cmd_recommend(args) -> int:
    scenario = load_scenario(args.config)
    problems = validate_scenario(scenario)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_CONFIG
    context = context_from_catalog(
        list(scenario.installed), scenario.usage_shares, scenario.catalog
    )
    profile = assign_weightages(context)
    ranked = candidate_apps(
        context,
        scenario.privacy,
        scenario.catalog,
        scenario.resolved_taxonomy(),
        k=scenario.candidates,
    )
    target = plan_weightage(scenario.disruption, (profile.eta_min, profile.eta_max))
    doc = {
        "scenario": scenario.disruption.value,
        "apps": [app.id for app, _ in ranked],
        "target_weightage": target,
    }
    text = json.dumps(doc, sort_keys=True, indent=2) + "\n"
    if args.out:
        atomic_write(Path(args.out), text)
    else:
        print(text, end="")
    return EXIT_OK


def _cmd_validate(args) -> int:
    scenario = load_scenario(args.config)
    problems = validate_scenario(scenario)
    if problems:
        for p in problems:
            print(p, file=sys.stderr)
        return EXIT_CONFIG
    print(f"{scenario.name}: ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="obfusim",
        description="Ad-profiling obfuscation simulator",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one or more scenarios")
    sim.add_argument("--config", help="scenario YAML file")
    sim.add_argument("--scenarios", nargs="+", help="additional scenario files")
    sim.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    sim.add_argument("--out", help="output directory (default: current)")
    sim.add_argument("--format", choices=["json", "csv"], default="json")
    sim.set_defaults(func=_cmd_simulate)

    rec = sub.add_parser("recommend", help="print the obfuscation-app plan")
    rec.add_argument("--config", required=True)
    rec.add_argument("--out", help="plan JSON path (default: stdout)")
    rec.set_defaults(func=_cmd_recommend)

    val = sub.add_parser("validate", help="check a scenario file")
    val.add_argument("--config", required=True)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
