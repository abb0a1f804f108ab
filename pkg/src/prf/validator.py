"""Patch validation: selection, reordering, budgets, work-stealing workers.

Each patch becomes one task. Workers own double-ended queues seeded
round-robin from the pool; a worker takes from the front of its own queue
and, when empty, steals from the back of a randomly chosen victim. Every
test runs in a fresh adapter process under a per-test time budget, and a
patch is invalidated by its first failing or timed-out test.

The scheduler emits an event log (task start/end, steals) that downstream
checks use to audit at-most-once execution, selection and reordering
savings, and worker liveness.
"""

from __future__ import annotations

import json
import os
import random
import tempfile
import threading
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .adapter import ExecutionOutcome, ProjectAdapter
from .model import (
    PatchEntry,
    RepairConfig,
    TestId,
    TestRecord,
    TestStatus,
    TimeoutPolicy,
    ValidationVerdict,
    VerdictKind,
)
from .pool import PatchPool
from .profiler import Profile


@dataclass(frozen=True)
class ValidationPlan:
    """One patch plus its tests, already selected, ordered, and budgeted."""

    patch: PatchEntry
    tests: tuple[tuple[TestId, int], ...]


@dataclass(frozen=True)
class ValidationReport:
    verdicts: dict[str, ValidationVerdict]
    stopped_early: bool
    wall_ms: int
    tests_run_total: int


def compute_timeout(tau_ms: int, policy: TimeoutPolicy) -> int:
    """Time budget for a test whose original run took tau_ms."""
    return policy.constant_ms + round((1.0 + policy.percent) * tau_ms)


def select_tests(patch: PatchEntry, all_tests: list[TestRecord]) -> list[TestRecord]:
    """Tests named by the patch's covering-tests manifest, in suite order;
    the whole suite when the patch declares no manifest."""
    if patch.covering_tests is None:
        return list(all_tests)
    return [record for record in all_tests if record.id in patch.covering_tests]


def order_tests(tests: list[TestRecord]) -> list[TestRecord]:
    """Originally-failing tests first, then shorter before longer, then by id.

    A failing test invalidates a bad patch immediately regardless of its
    length, so status dominates duration.
    """
    return sorted(
        tests,
        key=lambda r: (0 if r.status is TestStatus.FAILING else 1, r.duration_ms, r.id),
    )


def build_plan(
    patch: PatchEntry,
    profile: Profile,
    policy: TimeoutPolicy,
    *,
    select: bool = True,
    reorder: bool = True,
) -> ValidationPlan:
    records = select_tests(patch, list(profile.tests)) if select else list(profile.tests)
    if reorder:
        records = order_tests(records)
    return ValidationPlan(
        patch, tuple((r.id, compute_timeout(r.duration_ms, policy)) for r in records)
    )


def validate_patch(
    plan: ValidationPlan, adapter: ProjectAdapter, scratch_dir: Path
) -> ValidationVerdict:
    """Run the plan's tests, each in a fresh process, stopping at the first
    failure or timeout; plausible only if every selected test passed."""
    start = time.monotonic()
    executed = 0
    for test_id, budget_ms in plan.tests:
        execution = adapter.run(
            test_id,
            patch_root=plan.patch.root,
            budget_ms=budget_ms,
            scratch_dir=scratch_dir,
        )
        executed += 1
        wall_ms = int((time.monotonic() - start) * 1000)
        if execution.outcome is ExecutionOutcome.PASSED:
            continue
        if execution.outcome is ExecutionOutcome.FAILED:
            kind = VerdictKind.TEST_FAILED
        elif execution.outcome is ExecutionOutcome.TIMED_OUT:
            kind = VerdictKind.TIMED_OUT
        else:
            kind = VerdictKind.INFRA_ERROR
        return ValidationVerdict(plan.patch.id, kind, test_id, executed, wall_ms)
    wall_ms = int((time.monotonic() - start) * 1000)
    return ValidationVerdict(plan.patch.id, VerdictKind.PLAUSIBLE, None, executed, wall_ms)


def resolve_worker_count(parallelism: int) -> int:
    """Worker count for a configured degree of parallelism; 0 means one
    worker per available CPU core."""
    if parallelism < 0:
        raise ValueError("parallelism must be >= 0")
    return parallelism if parallelism > 0 else (os.cpu_count() or 1)


class _Scheduler:
    """Work-stealing state shared by the validation workers."""

    def __init__(self, plans: list[ValidationPlan], workers: int, seed: int = 2025):
        self.queues: list[deque[ValidationPlan]] = [deque() for _ in range(workers)]
        for index, plan in enumerate(plans):
            self.queues[index % workers].append(plan)
        self.workers = workers
        self.seed = seed
        self.stop = threading.Event()
        self.lock = threading.Lock()
        self.verdicts: dict[str, ValidationVerdict] = {}
        self.events: list[dict] = []
        self.started = time.monotonic()

    def now_ms(self) -> int:
        return int((time.monotonic() - self.started) * 1000)

    def log(self, event: dict) -> None:
        with self.lock:
            self.events.append(event)

    def record(self, verdict: ValidationVerdict) -> None:
        with self.lock:
            self.verdicts[verdict.patch_id] = verdict

    def take(self, worker: int, rng: random.Random) -> ValidationPlan | None:
        """Pop from the worker's own front, else steal from a random
        victim's back; None only when every queue was seen empty."""
        try:
            return self.queues[worker].popleft()
        except IndexError:
            pass
        victims = [v for v in range(self.workers) if v != worker]
        rng.shuffle(victims)
        for victim in victims:
            try:
                plan = self.queues[victim].pop()
            except IndexError:
                continue
            self.log(
                {
                    "event": "steal",
                    "worker": worker,
                    "victim": victim,
                    "patch": plan.patch.id,
                    "ts_ms": self.now_ms(),
                }
            )
            return plan
        return None


def validate_pool(
    pool: PatchPool,
    profile: Profile,
    config: RepairConfig,
    *,
    select: bool = True,
    reorder: bool = True,
    workers: int | None = None,
    early_stop: bool | None = None,
    log_path: Path | None = None,
) -> ValidationReport:
    """Validate every patch in the pool, in parallel when configured.

    With early stop enabled, the first plausible verdict cancels tasks that
    have not started; running tests are left to finish or time out, since
    killing mid-test would leave the adapter in an undefined state. A
    worker-side crash marks only the affected patch INFRA_ERROR.
    """
    worker_count = (
        workers if workers is not None else resolve_worker_count(config.parallelism)
    )
    if workers is not None and workers < 1:
        raise ValueError("explicit worker count must be >= 1")
    stop_on_plausible = config.early_stop if early_stop is None else early_stop

    plans = [
        build_plan(patch, profile, config.timeout, select=select, reorder=reorder)
        for patch in pool.patches
    ]
    adapter = ProjectAdapter(config.adapter_command, config.project_root)
    scheduler = _Scheduler(plans, worker_count)

    def work(worker: int, scratch: Path) -> None:
        rng = random.Random(scheduler.seed * 7919 + worker)
        while not scheduler.stop.is_set():
            plan = scheduler.take(worker, rng)
            if plan is None:
                return
            scheduler.log(
                {
                    "event": "start",
                    "worker": worker,
                    "patch": plan.patch.id,
                    "ts_ms": scheduler.now_ms(),
                }
            )
            task_started = time.monotonic()
            try:
                verdict = validate_patch(plan, adapter, scratch)
            except Exception as exc:  # contain crashes to the one patch
                verdict = ValidationVerdict(
                    plan.patch.id,
                    VerdictKind.INFRA_ERROR,
                    None,
                    0,
                    int((time.monotonic() - task_started) * 1000),
                )
                scheduler.log(
                    {
                        "event": "crash",
                        "worker": worker,
                        "patch": plan.patch.id,
                        "error": repr(exc),
                        "ts_ms": scheduler.now_ms(),
                    }
                )
            scheduler.record(verdict)
            scheduler.log(
                {
                    "event": "end",
                    "worker": worker,
                    "patch": plan.patch.id,
                    "kind": verdict.kind.value,
                    "tests_executed": verdict.tests_executed,
                    "ts_ms": scheduler.now_ms(),
                }
            )
            if stop_on_plausible and verdict.kind is VerdictKind.PLAUSIBLE:
                scheduler.stop.set()

    started = time.monotonic()
    with tempfile.TemporaryDirectory(prefix="prf-validate-") as scratch_root:
        threads = []
        for worker in range(worker_count):
            scratch = Path(scratch_root) / f"worker-{worker}"
            scratch.mkdir()
            thread = threading.Thread(
                target=work, args=(worker, scratch), name=f"prf-worker-{worker}"
            )
            thread.start()
            threads.append(thread)
        for thread in threads:
            thread.join()
    wall_ms = int((time.monotonic() - started) * 1000)

    if log_path is not None:
        with log_path.open("w") as fh:
            for event in scheduler.events:
                fh.write(json.dumps(event) + "\n")

    verdicts = dict(scheduler.verdicts)
    return ValidationReport(
        verdicts=verdicts,
        stopped_early=scheduler.stop.is_set(),
        wall_ms=wall_ms,
        tests_run_total=sum(v.tests_executed for v in verdicts.values()),
    )


def save_validation_report(report: ValidationReport, path: Path) -> None:
    document = {
        "stopped_early": report.stopped_early,
        "wall_ms": report.wall_ms,
        "tests_run_total": report.tests_run_total,
        "verdicts": {
            patch_id: {
                "kind": v.kind.value,
                "culprit_test": v.culprit_test,
                "tests_executed": v.tests_executed,
                "wall_ms": v.wall_ms,
            }
            for patch_id, v in sorted(report.verdicts.items())
        },
    }
    path.write_text(json.dumps(document, indent=2, sort_keys=True) + "\n")


def load_validation_report(path: Path) -> ValidationReport:
    document = json.loads(path.read_text())
    verdicts = {
        patch_id: ValidationVerdict(
            patch_id,
            VerdictKind(entry["kind"]),
            entry["culprit_test"],
            entry["tests_executed"],
            entry["wall_ms"],
        )
        for patch_id, entry in document["verdicts"].items()
    }
    return ValidationReport(
        verdicts=verdicts,
        stopped_early=document["stopped_early"],
        wall_ms=document["wall_ms"],
        tests_run_total=document["tests_run_total"],
    )
