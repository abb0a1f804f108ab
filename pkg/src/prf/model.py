"""Core domain types: tests, program elements, coverage, patches, verdicts.

All types here are immutable values; they can be freely shared between the
validator's worker threads. Program elements have a canonical textual form
``file[:function][:line]`` that is used verbatim in coverage files, ranking
files, and covering-test manifests, so files and function names must not
contain colons or newlines.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import ConfigError, ElementParseError

# A test's identity: an opaque, non-empty, newline-free string, unique
# within one profiled suite.
TestId = str

DUMMY_GENERATION_PLUGIN = "dummy-patch-generation-plugin"
DUMMY_PRIORITIZATION_PLUGIN = "dummy-patch-prioritization-plugin"


class TestStatus(Enum):
    PASSING = "PASSING"
    FAILING = "FAILING"


class Granularity(Enum):
    """Program-element granularity; OFF disables fault localization entirely."""

    FILE = "FILE"
    FUNCTION = "FUNCTION"
    LINE = "LINE"
    OFF = "OFF"


class FlStrategy(Enum):
    OCHIAI = "OCHIAI"
    TARANTULA = "TARANTULA"


class VerdictKind(Enum):
    PLAUSIBLE = "PLAUSIBLE"
    TEST_FAILED = "TEST_FAILED"
    TIMED_OUT = "TIMED_OUT"
    INFRA_ERROR = "INFRA_ERROR"


def validate_test_id(test_id: str) -> str:
    if not test_id:
        raise ValueError("test id must be non-empty")
    if "\n" in test_id or "\r" in test_id:
        raise ValueError(f"test id {test_id!r} contains a newline")
    return test_id


@dataclass(frozen=True)
class TestRecord:
    """A test's identity, original pass/fail status, and measured duration."""

    id: TestId
    status: TestStatus
    duration_ms: int

    def __post_init__(self) -> None:
        validate_test_id(self.id)
        if self.duration_ms < 0:
            raise ValueError(f"test {self.id!r}: negative duration")


@dataclass(frozen=True)
class ProgramElement:
    """A file, function, or single line of the program under repair.

    LINE elements carry file, function, and line; FUNCTION elements drop the
    line; FILE elements carry only the file path (relative to the project
    root).
    """

    file: str
    function: str | None = None
    line: int | None = None
    granularity: Granularity = Granularity.LINE

    def __post_init__(self) -> None:
        if not self.file or ":" in self.file or "\n" in self.file:
            raise ValueError(f"bad element file path {self.file!r}")
        if self.function is not None and (":" in self.function or not self.function):
            raise ValueError(f"bad element function name {self.function!r}")
        g = self.granularity
        if g is Granularity.LINE:
            ok = self.function is not None and self.line is not None and self.line > 0
        elif g is Granularity.FUNCTION:
            ok = self.function is not None and self.line is None
        elif g is Granularity.FILE:
            ok = self.function is None and self.line is None
        else:
            ok = False  # elements never carry OFF
        if not ok:
            raise ValueError(f"element fields inconsistent with granularity {g.name}")

    def canonical(self) -> str:
        """Render the canonical string form ``file[:function][:line]``."""
        parts = [self.file]
        if self.function is not None:
            parts.append(self.function)
        if self.line is not None:
            parts.append(str(self.line))
        return ":".join(parts)


def parse_element(text: str, granularity: Granularity) -> ProgramElement:
    """Parse one canonical element string at the given granularity.

    The number of colon-separated fields must match the granularity: one for
    FILE, two for FUNCTION, three for LINE.
    """
    stripped = text.strip()
    if not stripped:
        raise ElementParseError("empty program element string")
    parts = stripped.split(":")
    try:
        if granularity is Granularity.FILE:
            if len(parts) != 1:
                raise ValueError("expected 1 field")
            return ProgramElement(file=parts[0], granularity=granularity)
        if granularity is Granularity.FUNCTION:
            if len(parts) != 2:
                raise ValueError("expected 2 fields")
            return ProgramElement(file=parts[0], function=parts[1], granularity=granularity)
        if granularity is Granularity.LINE:
            if len(parts) != 3:
                raise ValueError("expected 3 fields (file:function:line)")
            return ProgramElement(
                file=parts[0], function=parts[1], line=int(parts[2]), granularity=granularity
            )
    except ValueError as exc:
        raise ElementParseError(
            f"cannot parse {text!r} as a {granularity.name}-granularity element: {exc}"
        ) from exc
    raise ElementParseError(f"cannot parse elements at granularity {granularity.name}")


@dataclass(frozen=True)
class CoverageMatrix:
    """Per-test sets of covered line-granularity elements."""

    entries: dict[TestId, frozenset[ProgramElement]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for test_id, elements in self.entries.items():
            validate_test_id(test_id)
            for element in elements:
                if element.granularity is not Granularity.LINE:
                    raise ValueError(
                        f"coverage for {test_id!r} contains a non-LINE element "
                        f"{element.canonical()!r}"
                    )


@dataclass(frozen=True)
class SpectrumCounts:
    """Coverage tallies for one element: covering failing/passing tests plus
    suite-wide failing/passing totals."""

    failed_covering: int
    passed_covering: int
    total_failed: int
    total_passed: int

    def __post_init__(self) -> None:
        if not (0 <= self.failed_covering <= self.total_failed):
            raise ValueError("failing-test tally out of range")
        if not (0 <= self.passed_covering <= self.total_passed):
            raise ValueError("passing-test tally out of range")


@dataclass(frozen=True)
class PatchEntry:
    """One on-disk patch: a sub-directory of the pool, identified by its name."""

    id: str
    root: Path
    covering_tests: frozenset[TestId] | None = None
    metadata: dict[str, str] | None = None

    def __post_init__(self) -> None:
        if self.id != self.root.name:
            raise ValueError(f"patch id {self.id!r} differs from directory name {self.root.name!r}")


@dataclass(frozen=True)
class ValidationVerdict:
    """Outcome of validating one patch against its selected tests."""

    patch_id: str
    kind: VerdictKind
    culprit_test: TestId | None
    tests_executed: int
    wall_ms: int

    def __post_init__(self) -> None:
        if self.kind in (VerdictKind.TEST_FAILED, VerdictKind.TIMED_OUT):
            if self.culprit_test is None:
                raise ValueError(f"{self.kind.value} verdict requires a culprit test")
        elif self.kind is VerdictKind.PLAUSIBLE and self.culprit_test is not None:
            raise ValueError("plausible verdict must not name a culprit test")
        if self.tests_executed < 0 or self.wall_ms < 0:
            raise ValueError("verdict counters must be non-negative")


@dataclass(frozen=True)
class TimeoutPolicy:
    """Per-test time budget: a constant part plus a fraction of the test's
    original duration."""

    constant_ms: int = 5000
    percent: float = 0.5

    def __post_init__(self) -> None:
        if self.constant_ms < 0:
            raise ValueError("timeout constant must be non-negative")
        if self.percent < 0:
            raise ValueError("timeout percent must be non-negative")


@dataclass(frozen=True)
class RepairConfig:
    """Everything a repair run needs, mirroring the JSON configuration keys."""

    adapter_command: str
    project_root: Path
    fl_option: Granularity = Granularity.OFF
    fl_strategy: FlStrategy = FlStrategy.OCHIAI
    test_coverage: bool = False
    failing_tests: tuple[TestId, ...] = ()
    cg_option: str = "OFF"
    patch_generation_plugin: str = DUMMY_GENERATION_PLUGIN
    parallelism: int = 0
    patch_prioritization_plugin: str = DUMMY_PRIORITIZATION_PLUGIN
    timeout: TimeoutPolicy = TimeoutPolicy()
    early_stop: bool = False
    patches_dir: str = "patches-pool"

    def __post_init__(self) -> None:
        if self.parallelism < 0:
            raise ConfigError("parallelism must be >= 0 (0 means all CPU cores)")
        if self.cg_option != "OFF":
            raise ConfigError("dynamic call graph construction is out of scope")

    @property
    def pool_root(self) -> Path:
        return self.project_root / self.patches_dir

    def resolved_parallelism(self) -> int:
        """Number of validation workers; 0 means one per available CPU core."""
        if self.parallelism > 0:
            return self.parallelism
        return os.cpu_count() or 1
