"""Shared fixtures: synthetic adapter projects driven by a suite spec.

Each fixture project is a temp directory holding a generated adapter script
plus a ``suite.json`` describing every test's behaviour (pass/fail/error/
hang, sleep, coverage). Patches are directories whose ``outcomes.json``
overrides per-test behaviour, which is how a "patch" changes test results
without any real program underneath.
"""

from __future__ import annotations

import json
import shutil
import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

from prf import adapter as _adapter
from prf import model as _model
from prf.model import RepairConfig, TimeoutPolicy

# Domain classes whose names happen to start with "Test" are not test classes.
_model.TestRecord.__test__ = False
_model.TestStatus.__test__ = False
_adapter.TestExecution.__test__ = False

REPO_ROOT = Path(__file__).resolve().parent.parent
DEMO_DIR = REPO_ROOT / "demo"

FIXTURE_ADAPTER = '''\
#!/usr/bin/env python3
"""Generated test adapter: behaviour scripted by suite.json next to it."""
import json
import os
import sys
import time

HERE = os.path.dirname(os.path.abspath(__file__))


def load_suite():
    with open(os.path.join(HERE, "suite.json")) as fh:
        return json.load(fh)


def behaviour_for(suite, test_id):
    base = None
    for entry in suite["tests"]:
        if entry["id"] == test_id:
            base = dict(entry)
            break
    if base is None:
        return None
    patch_root = os.environ.get("PRF_PATCH_ROOT", "")
    if patch_root:
        overrides_path = os.path.join(patch_root, "outcomes.json")
        if os.path.exists(overrides_path):
            with open(overrides_path) as fh:
                overrides = json.load(fh)
            if test_id in overrides:
                base.update(overrides[test_id])
    return base


def write_coverage(behaviour):
    path = os.environ.get("PRF_COVERAGE_FILE", "")
    if not path or behaviour.get("skip_coverage"):
        return
    with open(path, "w") as fh:
        for element in behaviour.get("covers", []):
            fh.write(element + "\\n")


def run_test(suite, test_id):
    behaviour = behaviour_for(suite, test_id)
    if behaviour is None:
        sys.stderr.write("unknown test %r\\n" % test_id)
        return 2
    sleep_ms = behaviour.get("sleep_ms", 0)
    if sleep_ms:
        time.sleep(sleep_ms / 1000.0)
    write_coverage(behaviour)
    result = behaviour.get("result", "pass")
    if result == "hang":
        if behaviour.get("spawn_child"):
            import subprocess

            child = subprocess.Popen(
                [sys.executable, "-S", "-c", "import time; time.sleep(600)"]
            )
            with open(os.path.join(HERE, "child-%s.pid" % test_id), "w") as fh:
                fh.write(str(child.pid))
        with open(os.path.join(HERE, "self-%s.pid" % test_id), "w") as fh:
            fh.write(str(os.getpid()))
        while True:
            time.sleep(60)
    if result == "poison":
        # In-process state: a fresh interpreter never sees the marker, so a
        # framework that reused processes would turn the second run red.
        if globals().get("_POISONED"):
            return 1
        globals()["_POISONED"] = True
        print(os.getpid())
        return 0
    if result == "error":
        sys.stderr.write("scripted adapter error\\n")
        return int(behaviour.get("exit_code", 2))
    print(os.getpid())
    return 0 if result == "pass" else 1


def main():
    suite = load_suite()
    if len(sys.argv) >= 2 and sys.argv[1] == "list-tests":
        declared = suite.get("declared") or [t["id"] for t in suite["tests"]]
        for test_id in declared:
            print(test_id)
        return int(suite.get("list_exit", 0))
    if len(sys.argv) == 3 and sys.argv[1] == "run-test":
        return run_test(suite, sys.argv[2])
    sys.stderr.write("usage: adapter.py list-tests | run-test <id>\\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
'''


@dataclass
class FixtureProject:
    root: Path
    adapter_command: str

    @property
    def pool_root(self) -> Path:
        return self.root / "patches-pool"

    def config(self, **overrides) -> RepairConfig:
        kwargs = dict(
            adapter_command=self.adapter_command,
            project_root=self.root,
            timeout=TimeoutPolicy(constant_ms=5000, percent=0.5),
        )
        kwargs.update(overrides)
        return RepairConfig(**kwargs)

    def add_patch(
        self,
        patch_id: str,
        *,
        outcomes: dict | None = None,
        covering: list[str] | None = None,
        artifact: bool = True,
    ) -> Path:
        patch_dir = self.pool_root / patch_id
        patch_dir.mkdir(parents=True, exist_ok=True)
        if outcomes is not None:
            (patch_dir / "outcomes.json").write_text(json.dumps(outcomes))
        elif artifact:
            (patch_dir / "patch.bin").write_text("opaque patch artifact\n")
        if covering is not None:
            (patch_dir / "covering-tests.txt").write_text(
                "".join(f"{t}\n" for t in covering)
            )
        return patch_dir

    def rewrite_suite(self, suite: dict) -> None:
        (self.root / "suite.json").write_text(json.dumps(suite, indent=2))


def make_project(
    tmp_path: Path,
    tests: list[dict],
    *,
    declared: list[str] | None = None,
    list_exit: int | None = None,
    name: str = "proj",
) -> FixtureProject:
    root = tmp_path / name
    root.mkdir()
    suite: dict = {"tests": tests}
    if declared is not None:
        suite["declared"] = declared
    if list_exit is not None:
        suite["list_exit"] = list_exit
    (root / "suite.json").write_text(json.dumps(suite, indent=2))
    (root / "adapter.py").write_text(FIXTURE_ADAPTER)
    return FixtureProject(root=root, adapter_command=f"{sys.executable} -S adapter.py")


def passing(test_id: str, sleep_ms: int = 0, covers: list[str] | None = None) -> dict:
    entry = {"id": test_id, "result": "pass", "sleep_ms": sleep_ms}
    if covers is not None:
        entry["covers"] = covers
    return entry


def failing(test_id: str, sleep_ms: int = 0, covers: list[str] | None = None) -> dict:
    entry = {"id": test_id, "result": "fail", "sleep_ms": sleep_ms}
    if covers is not None:
        entry["covers"] = covers
    return entry


@pytest.fixture
def demo_project(tmp_path) -> FixtureProject:
    """Copy of the bundled demo project, safe to run in-place."""
    root = tmp_path / "demo"
    shutil.copytree(DEMO_DIR, root)
    return FixtureProject(root=root, adapter_command="python3 adapter.py")


# Shared parallel-validation workload: 32 single-test patches whose sleeps
# alternate around a 200 ms mean, so round-robin seeding loads even-numbered
# workers and leaves slow queue tails for idle workers to steal.
WORKLOAD_SIZE = 32
WORKLOAD_SLEEPS = [280 if i % 2 == 0 else 120 for i in range(WORKLOAD_SIZE)]


def build_parallel_workload(tmp_path: Path):
    from prf.model import TestRecord, TestStatus
    from prf.pool import load_pool
    from prf.profiler import Profile

    tests = [passing(f"t{i:02d}", WORKLOAD_SLEEPS[i]) for i in range(WORKLOAD_SIZE)]
    project = make_project(tmp_path, tests)
    for i in range(WORKLOAD_SIZE):
        outcomes = {f"t{i:02d}": {"result": "fail"}} if i % 3 == 0 else {}
        project.add_patch(f"p{i:02d}", outcomes=outcomes, covering=[f"t{i:02d}"])
    records = tuple(
        TestRecord(f"t{i:02d}", TestStatus.PASSING, WORKLOAD_SLEEPS[i])
        for i in range(WORKLOAD_SIZE)
    )
    profile = Profile(records, None, frozenset())
    pool = load_pool(project.pool_root, {r.id for r in records})
    return project, profile, pool
