"""Subprocess protocol for running a project's tests, patched or not.

The framework never touches the target project's build system directly.
Instead, the project supplies an *adapter*: any executable honouring this
contract:

  ``<adapter> list-tests``
      Print the project's test ids to stdout, one per line, in suite
      declaration order.

  ``<adapter> run-test <test-id>``
      Run exactly that test and exit with status 0 (passed), 1 (failed),
      or >= 2 (adapter/infrastructure error).

Two environment variables carry the per-invocation context; both are always
set and an empty value means "none":

  ``PRF_PATCH_ROOT``
      Directory whose files the adapter must overlay over the project's
      build output before running the test. Empty: run the original program.

  ``PRF_COVERAGE_FILE``
      Path to which the adapter writes the covered lines, one canonical
      ``file:function:line`` element per line. The adapter must create the
      file (even if empty) whenever the value is non-empty.

Every invocation is a fresh process, so test side effects cannot leak
between runs. Timeout enforcement lives here, not in the adapter: when a
budget elapses the whole process group is killed.
"""

from __future__ import annotations

import os
import shlex
import signal
import subprocess
import tempfile
import time
import uuid
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .errors import AdapterError, ElementParseError
from .model import Granularity, ProgramElement, TestId, parse_element


class ExecutionOutcome(Enum):
    PASSED = "PASSED"
    FAILED = "FAILED"
    TIMED_OUT = "TIMED_OUT"
    ADAPTER_ERROR = "ADAPTER_ERROR"


@dataclass(frozen=True)
class TestExecution:
    """Result of one adapter invocation for one test."""

    test: TestId
    outcome: ExecutionOutcome
    duration_ms: int
    covered: frozenset[ProgramElement] | None = None
    stdout: str = ""
    stderr: str = ""


def _adapter_argv(adapter_command: str) -> list[str]:
    argv = shlex.split(adapter_command)
    if not argv:
        raise AdapterError("adapter command is empty")
    return argv


def discover_tests(adapter_command: str, project_root: Path) -> list[TestId]:
    """Ask the adapter for the suite's test ids, in declaration order.

    Raises AdapterError on exit status >= 2, duplicate ids, or spawn failure.
    """
    argv = _adapter_argv(adapter_command) + ["list-tests"]
    env = dict(os.environ, PRF_PATCH_ROOT="", PRF_COVERAGE_FILE="")
    try:
        proc = subprocess.run(
            argv, cwd=project_root, env=env, capture_output=True, text=True
        )
    except OSError as exc:
        raise AdapterError(f"cannot run adapter {adapter_command!r}: {exc}") from exc
    if proc.returncode >= 2 or proc.returncode < 0:
        raise AdapterError(
            f"adapter list-tests exited with status {proc.returncode}:\n"
            f"{proc.stdout}{proc.stderr}"
        )
    tests: list[TestId] = []
    seen: set[TestId] = set()
    for line in proc.stdout.splitlines():
        if not line.strip():
            continue
        if line in seen:
            raise AdapterError(f"adapter declared duplicate test id {line!r}")
        seen.add(line)
        tests.append(line)
    return tests


def run_test(
    adapter_command: str,
    project_root: Path,
    test: TestId,
    *,
    patch_root: Path | None = None,
    budget_ms: int | None = None,
    want_coverage: bool = False,
    scratch_dir: Path | None = None,
) -> TestExecution:
    """Run one test in a fresh adapter process.

    Exit status 0 maps to PASSED and 1 to FAILED. If ``budget_ms`` elapses
    first, the adapter's whole process group is killed and the outcome is
    TIMED_OUT. Spawn failures, exit statuses >= 2, and unreadable coverage
    side-files yield ADAPTER_ERROR; this function itself does not raise for
    them.
    """
    argv = _adapter_argv(adapter_command) + ["run-test", test]
    coverage_file: Path | None = None
    if want_coverage:
        # Unique path the adapter must create itself; a missing file after a
        # completed run means the adapter does not honour the contract.
        base = Path(scratch_dir) if scratch_dir is not None else Path(tempfile.gettempdir())
        coverage_file = base / f"coverage-{os.getpid()}-{uuid.uuid4().hex}.txt"
    env = dict(
        os.environ,
        PRF_PATCH_ROOT=str(patch_root) if patch_root is not None else "",
        PRF_COVERAGE_FILE=str(coverage_file) if coverage_file is not None else "",
    )
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv,
            cwd=project_root,
            env=env,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            start_new_session=True,  # own process group: killable as a tree
        )
    except OSError as exc:
        _discard(coverage_file)
        return TestExecution(
            test, ExecutionOutcome.ADAPTER_ERROR, 0, stderr=f"failed to spawn adapter: {exc}"
        )

    timed_out = False
    try:
        stdout, stderr = proc.communicate(
            timeout=None if budget_ms is None else budget_ms / 1000.0
        )
    except subprocess.TimeoutExpired:
        timed_out = True
        _kill_process_group(proc)
        stdout, stderr = proc.communicate()
    duration_ms = int((time.monotonic() - start) * 1000)

    if timed_out:
        _discard(coverage_file)
        if budget_ms is not None and duration_ms < budget_ms:
            duration_ms = budget_ms
        return TestExecution(
            test, ExecutionOutcome.TIMED_OUT, duration_ms, stdout=stdout, stderr=stderr
        )

    if proc.returncode == 0:
        outcome = ExecutionOutcome.PASSED
    elif proc.returncode == 1:
        outcome = ExecutionOutcome.FAILED
    else:
        _discard(coverage_file)
        return TestExecution(
            test, ExecutionOutcome.ADAPTER_ERROR, duration_ms, stdout=stdout, stderr=stderr
        )

    covered: frozenset[ProgramElement] | None = None
    if coverage_file is not None:
        try:
            covered = _read_coverage(coverage_file)
        except (OSError, ElementParseError) as exc:
            return TestExecution(
                test,
                ExecutionOutcome.ADAPTER_ERROR,
                duration_ms,
                stdout=stdout,
                stderr=f"{stderr}\nbad coverage side-file: {exc}",
            )
        finally:
            _discard(coverage_file)
    return TestExecution(test, outcome, duration_ms, covered, stdout, stderr)


def _read_coverage(path: Path) -> frozenset[ProgramElement]:
    elements = set()
    for line in path.read_text().splitlines():
        if line.strip():
            elements.add(parse_element(line, Granularity.LINE))
    return frozenset(elements)


def _kill_process_group(proc: subprocess.Popen) -> None:
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        pass


def _discard(path: Path | None) -> None:
    if path is not None:
        try:
            path.unlink()
        except OSError:
            pass


@dataclass(frozen=True)
class ProjectAdapter:
    """Bound (command, project root) pair; convenience handle for callers
    that issue many invocations against the same project."""

    command: str
    project_root: Path

    def list_tests(self) -> list[TestId]:
        return discover_tests(self.command, self.project_root)

    def run(self, test: TestId, **kwargs) -> TestExecution:
        return run_test(self.command, self.project_root, test, **kwargs)
