"""Patch pool: plugin-driven generation plus the on-disk pool layout.

A pool is a directory with one sub-directory per patch; the sub-directory
name is the patch id. A patch may declare which tests cover its patched
location in a ``covering-tests.txt`` manifest (one test id per line, blank
lines ignored); without a manifest the whole suite runs against it.

Generation plugins are external executables. The framework writes a JSON
context file (paths the plugin needs) and invokes the plugin with that
file's path as its only argument; the plugin must fill the pool directory
and exit 0. The built-in dummy plugin generates nothing and merely scans a
pre-populated pool.
"""

from __future__ import annotations

import json
import subprocess
from dataclasses import dataclass
from pathlib import Path

from .errors import GenerationError, PoolError
from .model import DUMMY_GENERATION_PLUGIN, PatchEntry, RepairConfig, TestId
from .workdir import WorkDir

MANIFEST_NAME = "covering-tests.txt"


@dataclass(frozen=True)
class PatchPool:
    """Loaded pool; patches are ordered ascending by id."""

    patches: tuple[PatchEntry, ...]
    root: Path

    def ids(self) -> list[str]:
        return [p.id for p in self.patches]


@dataclass(frozen=True)
class PluginContext:
    """Paths handed to a generation plugin."""

    source_dir: Path
    test_source_dir: Path
    binaries_dir: Path
    ranking_file: Path | None
    coverage_file: Path | None
    pool_root: Path

    def to_json(self) -> str:
        return json.dumps(
            {
                "source_dir": str(self.source_dir),
                "test_source_dir": str(self.test_source_dir),
                "binaries_dir": str(self.binaries_dir),
                "ranking_file": str(self.ranking_file) if self.ranking_file else None,
                "coverage_file": str(self.coverage_file) if self.coverage_file else None,
                "pool_root": str(self.pool_root),
            },
            indent=2,
        )


def load_pool(pool_root: Path, known_tests: set[TestId]) -> PatchPool:
    """Turn each immediate sub-directory of the pool into a PatchEntry.

    Manifests are validated against the known suite; a sub-directory holding
    nothing but a manifest carries no patch artifact and is rejected, as is
    an empty manifest (such a patch could never be meaningfully validated).
    """
    if not pool_root.is_dir():
        raise PoolError(f"patch pool directory {pool_root} does not exist")
    entries: list[PatchEntry] = []
    try:
        subdirs = sorted(p for p in pool_root.iterdir() if p.is_dir())
    except OSError as exc:
        raise PoolError(f"cannot read patch pool {pool_root}: {exc}") from exc
    for sub in subdirs:
        covering: frozenset[TestId] | None = None
        manifest = sub / MANIFEST_NAME
        if manifest.is_file():
            ids = [line for line in manifest.read_text().splitlines() if line.strip()]
            if not ids:
                raise PoolError(f"patch {sub.name!r}: covering-tests manifest is empty")
            unknown = sorted(set(ids) - known_tests)
            if unknown:
                raise PoolError(
                    f"patch {sub.name!r}: manifest names unknown test {unknown[0]!r}"
                )
            covering = frozenset(ids)
        try:
            has_artifact = any(
                p.is_file() and p != manifest for p in sub.rglob("*")
            )
        except OSError as exc:
            raise PoolError(f"patch {sub.name!r}: unreadable directory: {exc}") from exc
        if not has_artifact:
            raise PoolError(f"patch {sub.name!r}: no patch artifact files")
        entries.append(PatchEntry(id=sub.name, root=sub, covering_tests=covering))
    return PatchPool(tuple(entries), pool_root)


def run_generation_plugin(
    config: RepairConfig,
    context: PluginContext,
    known_tests: set[TestId],
    workdir: WorkDir,
) -> PatchPool:
    """Produce the patch pool, via the configured plugin, and load it."""
    if config.patch_generation_plugin == DUMMY_GENERATION_PLUGIN:
        if not context.pool_root.is_dir():
            raise GenerationError(
                f"patch pool directory {context.pool_root} not found "
                "(the dummy plugin performs no generation)"
            )
    else:
        plugin = Path(config.patch_generation_plugin)
        if not plugin.is_file():
            raise GenerationError(f"patch generation plugin {plugin} not found")
        context.pool_root.mkdir(parents=True, exist_ok=True)
        context_path = workdir.ensure().plugin_context_json
        context_path.write_text(context.to_json() + "\n")
        try:
            proc = subprocess.run(
                [str(plugin), str(context_path)],
                cwd=config.project_root,
                capture_output=True,
                text=True,
            )
        except OSError as exc:
            raise GenerationError(f"cannot run generation plugin {plugin}: {exc}") from exc
        if proc.returncode != 0:
            raise GenerationError(
                f"generation plugin exited with status {proc.returncode}:\n"
                f"{proc.stdout}{proc.stderr}"
            )
    pool = load_pool(context.pool_root, known_tests)
    if not pool.patches:
        raise GenerationError("no patches generated")
    return pool
