"""Locations of the framework's persisted artifacts under ``.prf/``."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

WORKDIR_NAME = ".prf"


@dataclass(frozen=True)
class WorkDir:
    root: Path

    @classmethod
    def for_project(cls, project_root: Path) -> "WorkDir":
        return cls(project_root / WORKDIR_NAME)

    def ensure(self) -> "WorkDir":
        self.root.mkdir(parents=True, exist_ok=True)
        return self

    @property
    def profile_json(self) -> Path:
        return self.root / "profile.json"

    @property
    def coverage_csv(self) -> Path:
        return self.root / "coverage.csv"

    @property
    def ranking_csv(self) -> Path:
        return self.root / "ranking.csv"

    @property
    def plugin_context_json(self) -> Path:
        return self.root / "plugin-context.json"

    @property
    def validation_log(self) -> Path:
        return self.root / "validation-log.jsonl"

    @property
    def verdicts_json(self) -> Path:
        return self.root / "verdicts.json"

    @property
    def candidates_json(self) -> Path:
        return self.root / "plausible-candidates.json"

    @property
    def fix_report_json(self) -> Path:
        return self.root / "fix-report.json"
