"""Command-line entry point.

    prf <run|profile|localize|validate|report|bench> --config <path> [--reps N]

`run` chains every stage; the other commands expose single stages over the
artifacts persisted under the project's `.prf/` directory, so a pipeline
can be resumed or re-run piecewise. Exit status: 0 when at least one
plausible patch is reported, 1 when none is, 2 and above for configuration
or infrastructure failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager
from pathlib import Path

from .bench import render_csv, run_benchmark
from .config import load_config
from .errors import PrfError
from .localization import localize, write_ranking
from .model import Granularity, RepairConfig
from .pool import PatchPool, PluginContext, run_generation_plugin
from .profiler import Profile, load_profile, profile_project, save_profile
from .reporting import generate_report, render_fix_report, write_fix_report
from .validator import (
    load_validation_report,
    save_validation_report,
    validate_pool,
)
from .workdir import WorkDir

logger = logging.getLogger(__name__)


@contextmanager
def _stage(name: str):
    try:
        yield
    except PrfError as exc:
        raise type(exc)(f"[{name}] {exc}") from exc


def _plugin_context(config: RepairConfig, workdir: WorkDir) -> PluginContext:
    project = config.project_root
    source_dir = project / "src" if (project / "src").is_dir() else project
    test_dir = project / "tests" if (project / "tests").is_dir() else project
    return PluginContext(
        source_dir=source_dir,
        test_source_dir=test_dir,
        binaries_dir=project,
        ranking_file=workdir.ranking_csv if workdir.ranking_csv.exists() else None,
        coverage_file=workdir.coverage_csv if workdir.coverage_csv.exists() else None,
        pool_root=config.pool_root,
    )


def _profile_stage(config: RepairConfig, workdir: WorkDir) -> Profile:
    with _stage("profile"):
        profile = profile_project(config)
        save_profile(profile, workdir.profile_json, workdir.coverage_csv)
    print(
        f"profiled {len(profile.tests)} tests "
        f"({len(profile.failing)} failing)"
    )
    return profile


def _localize_stage(profile: Profile, config: RepairConfig, workdir: WorkDir) -> None:
    with _stage("localize"):
        ranking = localize(profile, config)
        write_ranking(ranking, workdir.ranking_csv)
    print(f"ranked {len(ranking.entries)} program elements -> {workdir.ranking_csv}")


def _generate_stage(
    profile: Profile, config: RepairConfig, workdir: WorkDir
) -> PatchPool:
    with _stage("generate"):
        context = _plugin_context(config, workdir)
        pool = run_generation_plugin(
            config, context, set(profile.test_ids()), workdir
        )
    print(f"patch pool: {len(pool.patches)} patches under {pool.root}")
    return pool


def _validate_stage(pool: PatchPool, profile: Profile, config: RepairConfig, workdir: WorkDir):
    with _stage("validate"):
        report = validate_pool(pool, profile, config, log_path=workdir.validation_log)
        save_validation_report(report, workdir.verdicts_json)
    print(
        f"validated {len(report.verdicts)} patches in {report.wall_ms} ms "
        f"({report.tests_run_total} test executions"
        f"{', stopped early' if report.stopped_early else ''})"
    )
    return report


def _report_stage(report, pool: PatchPool, config: RepairConfig, workdir: WorkDir) -> int:
    with _stage("report"):
        fix = generate_report(report, pool, config, workdir)
        write_fix_report(fix, workdir.fix_report_json)
    sys.stdout.write(render_fix_report(fix))
    return 0 if fix.entries else 1


def cmd_run(config: RepairConfig, args: argparse.Namespace) -> int:
    workdir = WorkDir.for_project(config.project_root).ensure()
    profile = _profile_stage(config, workdir)
    if config.fl_option is not Granularity.OFF:
        _localize_stage(profile, config, workdir)
    pool = _generate_stage(profile, config, workdir)
    report = _validate_stage(pool, profile, config, workdir)
    return _report_stage(report, pool, config, workdir)


def cmd_profile(config: RepairConfig, args: argparse.Namespace) -> int:
    workdir = WorkDir.for_project(config.project_root).ensure()
    _profile_stage(config, workdir)
    return 0


def cmd_localize(config: RepairConfig, args: argparse.Namespace) -> int:
    workdir = WorkDir.for_project(config.project_root).ensure()
    with _stage("localize"):
        profile = load_profile(workdir.profile_json, workdir.coverage_csv)
    _localize_stage(profile, config, workdir)
    return 0


def cmd_validate(config: RepairConfig, args: argparse.Namespace) -> int:
    workdir = WorkDir.for_project(config.project_root).ensure()
    with _stage("validate"):
        profile = load_profile(workdir.profile_json, workdir.coverage_csv)
    pool = _generate_stage(profile, config, workdir)
    _validate_stage(pool, profile, config, workdir)
    return 0


def cmd_report(config: RepairConfig, args: argparse.Namespace) -> int:
    workdir = WorkDir.for_project(config.project_root).ensure()
    with _stage("report"):
        profile = load_profile(workdir.profile_json, workdir.coverage_csv)
        report = load_validation_report(workdir.verdicts_json)
    pool = _generate_stage(profile, config, workdir)
    return _report_stage(report, pool, config, workdir)


def cmd_bench(config: RepairConfig, args: argparse.Namespace) -> int:
    workdir = WorkDir.for_project(config.project_root).ensure()
    profile = _profile_stage(config, workdir)
    pool = _generate_stage(profile, config, workdir)
    with _stage("bench"):
        rows = run_benchmark(pool, profile, config, args.reps)
    sys.stdout.write(render_csv(rows))
    return 0


_COMMANDS = {
    "run": cmd_run,
    "profile": cmd_profile,
    "localize": cmd_localize,
    "validate": cmd_validate,
    "report": cmd_report,
    "bench": cmd_bench,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prf",
        description="Generate-and-validate program repair orchestration",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        cmd = sub.add_parser(name)
        cmd.add_argument("--config", required=True, help="path to the JSON configuration")
        if name == "bench":
            cmd.add_argument(
                "--reps", type=int, default=3, help="repetitions per strategy"
            )
    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(format="prf: %(levelname)s: %(message)s", level=logging.INFO)
    args = build_parser().parse_args(argv)
    try:
        config = load_config(Path(args.config))
        return _COMMANDS[args.command](config, args)
    except PrfError as exc:
        print(f"prf {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
