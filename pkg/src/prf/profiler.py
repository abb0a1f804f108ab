"""Suite profiling: run every test once against the unpatched program.

Profiling is deliberately sequential and unbudgeted so the measured
durations are honest inputs to the per-test timeout formula; running the
suite under CPU contention would inflate budgets.
"""

from __future__ import annotations

import csv
import json
import logging
from dataclasses import dataclass
from pathlib import Path

from .adapter import ExecutionOutcome, discover_tests, run_test
from .errors import ConfigError, ProfilingError
from .model import (
    CoverageMatrix,
    Granularity,
    ProgramElement,
    RepairConfig,
    SpectrumCounts,
    TestId,
    TestRecord,
    TestStatus,
    parse_element,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Profile:
    """What profiling learned: records, optional coverage, the failing set."""

    tests: tuple[TestRecord, ...]
    coverage: CoverageMatrix | None
    failing: frozenset[TestId]

    def __post_init__(self) -> None:
        derived = frozenset(t.id for t in self.tests if t.status is TestStatus.FAILING)
        if derived != self.failing:
            raise ValueError("failing set does not match the records' statuses")

    def record(self, test_id: TestId) -> TestRecord:
        for rec in self.tests:
            if rec.id == test_id:
                return rec
        raise KeyError(test_id)

    def test_ids(self) -> list[TestId]:
        return [t.id for t in self.tests]


def resolve_failing_tests(
    config: RepairConfig,
    observed: set[TestId],
    discovered: list[TestId] | None = None,
) -> frozenset[TestId]:
    """Pick the failing set: the configured one when pinned, else the observed one.

    A pinned set naming an undiscovered test is a configuration error; a
    pinned set disagreeing with the observed failures wins but is warned
    about, listing the symmetric difference.
    """
    configured = frozenset(config.failing_tests)
    if not configured:
        return frozenset(observed)
    if discovered is not None:
        unknown = sorted(configured - set(discovered))
        if unknown:
            raise ConfigError(
                f"configured failing tests not present in the discovered suite: {unknown}"
            )
    if observed and configured != observed:
        diff = sorted(configured.symmetric_difference(observed))
        logger.warning(
            "configured failing tests disagree with observed failures; "
            "using the configured set (symmetric difference: %s)",
            diff,
        )
    return configured


def profile_project(config: RepairConfig) -> Profile:
    """Run the whole suite sequentially, without budgets, against the
    original program; collect statuses, durations, and (when needed)
    line-level coverage."""
    discovered = discover_tests(config.adapter_command, config.project_root)
    want_coverage = config.test_coverage or config.fl_option is not Granularity.OFF

    records: list[TestRecord] = []
    entries: dict[TestId, frozenset[ProgramElement]] = {}
    observed_failing: set[TestId] = set()
    for test_id in discovered:
        execution = run_test(
            config.adapter_command,
            config.project_root,
            test_id,
            want_coverage=want_coverage,
        )
        if execution.outcome is ExecutionOutcome.ADAPTER_ERROR:
            raise ProfilingError(
                f"profiling aborted: adapter error on test {test_id!r}\n"
                f"{execution.stdout}{execution.stderr}"
            )
        status = (
            TestStatus.PASSING
            if execution.outcome is ExecutionOutcome.PASSED
            else TestStatus.FAILING
        )
        if status is TestStatus.FAILING:
            observed_failing.add(test_id)
        records.append(TestRecord(test_id, status, execution.duration_ms))
        if want_coverage:
            entries[test_id] = execution.covered or frozenset()

    failing = resolve_failing_tests(config, observed_failing, discovered)
    if failing != observed_failing:
        # Pinned failing tests take precedence; realign statuses so the
        # failing-first ordering and FL see the pinned set.
        records = [
            TestRecord(
                r.id,
                TestStatus.FAILING if r.id in failing else TestStatus.PASSING,
                r.duration_ms,
            )
            for r in records
        ]
    coverage = CoverageMatrix(entries) if want_coverage else None
    return Profile(tuple(records), coverage, failing)


def coarsen_coverage(
    matrix: CoverageMatrix, granularity: Granularity
) -> dict[TestId, frozenset[ProgramElement]]:
    """Project line-level coverage up to the requested granularity.

    An element at the coarser granularity is covered by a test iff at least
    one of its lines is; LINE is the identity.
    """
    if granularity is Granularity.OFF:
        raise ValueError("cannot coarsen coverage to granularity OFF")
    if granularity is Granularity.LINE:
        return dict(matrix.entries)
    coarsened: dict[TestId, frozenset[ProgramElement]] = {}
    for test_id, elements in matrix.entries.items():
        if granularity is Granularity.FUNCTION:
            projected = {
                ProgramElement(e.file, e.function, granularity=Granularity.FUNCTION)
                for e in elements
            }
        else:
            projected = {
                ProgramElement(e.file, granularity=Granularity.FILE) for e in elements
            }
        coarsened[test_id] = frozenset(projected)
    return coarsened


def build_spectrum(
    coverage: dict[TestId, frozenset[ProgramElement]],
    failing: frozenset[TestId],
    all_tests: list[TestId],
) -> dict[ProgramElement, SpectrumCounts]:
    """Tally, for every covered element, how many failing and passing tests
    cover it, alongside the suite-wide totals. Uncovered elements are absent."""
    total_failed = len(failing)
    total_passed = len(all_tests) - total_failed
    failed_by: dict[ProgramElement, int] = {}
    passed_by: dict[ProgramElement, int] = {}
    for test_id, elements in coverage.items():
        bucket = failed_by if test_id in failing else passed_by
        for element in elements:
            bucket[element] = bucket.get(element, 0) + 1
    spectrum: dict[ProgramElement, SpectrumCounts] = {}
    for element in set(failed_by) | set(passed_by):
        spectrum[element] = SpectrumCounts(
            failed_by.get(element, 0),
            passed_by.get(element, 0),
            total_failed,
            total_passed,
        )
    return spectrum


def save_profile(profile: Profile, profile_path: Path, coverage_path: Path) -> None:
    document = {
        "tests": [
            {"name": t.id, "status": t.status.value, "duration_ms": t.duration_ms}
            for t in profile.tests
        ],
        "failing": sorted(profile.failing),
    }
    profile_path.write_text(json.dumps(document, indent=2) + "\n")
    if profile.coverage is not None:
        with coverage_path.open("w", newline="") as fh:
            writer = csv.writer(fh)
            for record in profile.tests:
                for element in sorted(
                    profile.coverage.entries.get(record.id, ()),
                    key=ProgramElement.canonical,
                ):
                    writer.writerow([record.id, element.canonical()])


def load_profile(profile_path: Path, coverage_path: Path) -> Profile:
    try:
        document = json.loads(profile_path.read_text())
    except FileNotFoundError:
        raise ProfilingError(
            f"no profile at {profile_path}; run `prf profile` first"
        ) from None
    records = tuple(
        TestRecord(t["name"], TestStatus(t["status"]), t["duration_ms"])
        for t in document["tests"]
    )
    coverage = None
    if coverage_path.exists():
        entries: dict[TestId, set[ProgramElement]] = {r.id: set() for r in records}
        with coverage_path.open(newline="") as fh:
            for row in csv.reader(fh):
                if not row:
                    continue
                test_id, element_text = row
                entries.setdefault(test_id, set()).add(
                    parse_element(element_text, Granularity.LINE)
                )
        coverage = CoverageMatrix({k: frozenset(v) for k, v in entries.items()})
    return Profile(records, coverage, frozenset(document["failing"]))
