"""Fix reports: the plausible patches, optionally reordered by a plugin.

The built-in dummy prioritization plugin keeps pool order. An external
plugin receives a JSON file of candidates (path as its only argument) and
prints the patch ids it keeps, one per line, in its preferred order; it may
drop and reorder candidates but cannot introduce new ids.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .errors import ReportError
from .model import DUMMY_PRIORITIZATION_PLUGIN, RepairConfig, ValidationVerdict, VerdictKind
from .pool import PatchPool
from .validator import ValidationReport
from .workdir import WorkDir


@dataclass(frozen=True)
class FixEntry:
    patch_id: str
    rank: int
    summary: str
    tests_executed: int
    wall_ms: int


@dataclass(frozen=True)
class FixReport:
    entries: tuple[FixEntry, ...]
    plugin_used: str


def generate_report(
    report: ValidationReport, pool: PatchPool, config: RepairConfig, workdir: WorkDir
) -> FixReport:
    """Filter verdicts to the plausible ones and rank them.

    Default order is pool order; an external prioritization plugin may
    reorder or narrow the list but never widen it.
    """
    plausible = [
        patch.id
        for patch in pool.patches
        if patch.id in report.verdicts
        and report.verdicts[patch.id].kind is VerdictKind.PLAUSIBLE
    ]
    plugin = config.patch_prioritization_plugin
    if plugin != DUMMY_PRIORITIZATION_PLUGIN and plausible:
        plausible = _run_prioritization_plugin(
            plugin, plausible, report.verdicts, config, workdir
        )
    entries = tuple(
        FixEntry(
            patch_id=patch_id,
            rank=rank,
            summary=_summarize(report.verdicts[patch_id]),
            tests_executed=report.verdicts[patch_id].tests_executed,
            wall_ms=report.verdicts[patch_id].wall_ms,
        )
        for rank, patch_id in enumerate(plausible, start=1)
    )
    return FixReport(entries, plugin)


def _summarize(verdict: ValidationVerdict) -> str:
    # Wall time stays out of the summary string; timing lives in its own
    # field so reports stay comparable across runs.
    return f"{verdict.kind.value.lower()} after {verdict.tests_executed} test(s)"


def _run_prioritization_plugin(
    plugin: str,
    plausible: list[str],
    verdicts: dict[str, ValidationVerdict],
    config: RepairConfig,
    workdir: WorkDir,
) -> list[str]:
    plugin_path = Path(plugin)
    if not plugin_path.is_file():
        raise ReportError(f"patch prioritization plugin {plugin} not found")
    candidates_path = workdir.ensure().candidates_json
    candidates_path.write_text(
        json.dumps(
            [
                {
                    "patch_id": patch_id,
                    "tests_executed": verdicts[patch_id].tests_executed,
                    "wall_ms": verdicts[patch_id].wall_ms,
                }
                for patch_id in plausible
            ],
            indent=2,
        )
        + "\n"
    )
    try:
        proc = subprocess.run(
            [str(plugin_path), str(candidates_path)],
            cwd=config.project_root,
            capture_output=True,
            text=True,
        )
    except OSError as exc:
        raise ReportError(f"cannot run prioritization plugin {plugin}: {exc}") from exc
    if proc.returncode != 0:
        raise ReportError(
            f"prioritization plugin exited with status {proc.returncode}:\n"
            f"{proc.stdout}{proc.stderr}"
        )
    allowed = set(plausible)
    chosen: list[str] = []
    for line in proc.stdout.splitlines():
        if not line.strip():
            continue
        if line not in allowed:
            raise ReportError(f"prioritization plugin produced unknown patch id {line!r}")
        if line in chosen:
            raise ReportError(f"prioritization plugin duplicated patch id {line!r}")
        chosen.append(line)
    return chosen


def render_fix_report(report: FixReport) -> str:
    if not report.entries:
        return "No plausible patches found: every candidate failed, timed out, or errored.\n"
    lines = [f"Plausible patches ({len(report.entries)}):"]
    for entry in report.entries:
        lines.append(f"  {entry.rank}. {entry.patch_id} ({entry.summary})")
    return "\n".join(lines) + "\n"


def write_fix_report(report: FixReport, path: Path) -> None:
    document = {
        "plugin": report.plugin_used,
        "plausible_total": len(report.entries),
        "entries": [
            {
                "rank": e.rank,
                "patch_id": e.patch_id,
                "verdict": "PLAUSIBLE",
                "summary": e.summary,
                "tests_executed": e.tests_executed,
                "wall_ms": e.wall_ms,
            }
            for e in report.entries
        ],
    }
    path.write_text(json.dumps(document, indent=2) + "\n")
