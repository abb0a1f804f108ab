#!/usr/bin/env python3
"""Test adapter for the demo arithmetic project.

Implements the framework's adapter contract:

    adapter.py list-tests           print test ids, one per line
    adapter.py run-test <test-id>   run one test; exit 0=pass, 1=fail, 2+=error

Honours PRF_PATCH_ROOT (module overlay directory searched before src/) and
PRF_COVERAGE_FILE (line coverage of arith.py written as
``src/arith.py:<function>:<line>`` entries).
"""

import os
import sys
import time

HERE = os.path.dirname(os.path.abspath(__file__))

TESTS = {}


def test(name, sleep_ms):
    def register(fn):
        TESTS[name] = (fn, sleep_ms)
        return fn

    return register


@test("add_small", 10)
def _(arith):
    assert arith.add(2, 3) == 5


@test("add_negative", 5)
def _(arith):
    assert arith.add(-4, 4) == 0


@test("sub_basic", 15)
def _(arith):
    assert arith.sub(9, 3) == 6


@test("sub_to_zero", 5)
def _(arith):
    assert arith.sub(7, 7) == 0


@test("mul_small", 20)
def _(arith):
    assert arith.mul(3, 4) == 12


@test("mul_zero", 10)
def _(arith):
    assert arith.mul(5, 0) == 0


@test("div_exact", 25)
def _(arith):
    assert arith.div(12, 4) == 3


@test("div_remainder", 10)
def _(arith):
    assert arith.div(9, 4) == 2


def load_arith():
    patch_root = os.environ.get("PRF_PATCH_ROOT", "")
    if patch_root:
        sys.path.insert(0, patch_root)
    sys.path.append(os.path.join(HERE, "src"))
    import arith

    return arith


def make_tracer(collected, watched):
    def tracer(frame, event, arg):
        filename = frame.f_code.co_filename
        if event == "call":
            return tracer if filename in watched else None
        if event == "line" and filename in watched:
            collected.add((frame.f_code.co_name, frame.f_lineno))
        return tracer

    return tracer


def run_one(test_id):
    entry = TESTS.get(test_id)
    if entry is None:
        sys.stderr.write(f"unknown test {test_id!r}\n")
        return 2
    fn, sleep_ms = entry
    time.sleep(sleep_ms / 1000.0)
    arith = load_arith()
    coverage_path = os.environ.get("PRF_COVERAGE_FILE", "")
    collected = set()
    if coverage_path:
        watched = {os.path.abspath(arith.__file__)}
        sys.settrace(make_tracer(collected, watched))
    failed = False
    try:
        fn(arith)
    except AssertionError as exc:
        failed = True
        sys.stderr.write(f"assertion failed: {exc}\n")
    finally:
        sys.settrace(None)
        if coverage_path:
            with open(coverage_path, "w") as fh:
                for func, line in sorted(collected):
                    fh.write(f"src/arith.py:{func}:{line}\n")
    return 1 if failed else 0


def main():
    if len(sys.argv) < 2:
        sys.stderr.write("usage: adapter.py list-tests | run-test <test-id>\n")
        return 2
    if sys.argv[1] == "list-tests":
        for name in TESTS:
            print(name)
        return 0
    if sys.argv[1] == "run-test" and len(sys.argv) == 3:
        return run_one(sys.argv[2])
    sys.stderr.write(f"unknown subcommand {sys.argv[1]!r}\n")
    return 2


if __name__ == "__main__":
    sys.exit(main())
