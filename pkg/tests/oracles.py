"""Independent brute-force implementations used as test oracles.

Kept deliberately separate from the production modules: scores come from
the textbook formulas evaluated by direct iteration over the suite, not
from any code path under test.
"""

from __future__ import annotations

import math
import random

from prf.model import Granularity, ProgramElement


def brute_force_ranking(
    coverage: dict[str, set[ProgramElement]], failing: set[str], strategy: str
) -> list[tuple[ProgramElement, float]]:
    all_tests = sorted(coverage)
    total_failed = len(failing)
    total_passed = len(all_tests) - total_failed
    elements = set()
    for els in coverage.values():
        elements |= els
    scored = []
    for element in elements:
        ef = sum(1 for t in all_tests if t in failing and element in coverage[t])
        ep = sum(1 for t in all_tests if t not in failing and element in coverage[t])
        if strategy == "ochiai":
            denom = math.sqrt(total_failed * (ef + ep))
            score = ef / denom if ef > 0 and denom > 0 else 0.0
        elif strategy == "tarantula":
            fr = ef / total_failed if total_failed else 0.0
            pr = ep / total_passed if total_passed else 0.0
            score = fr / (fr + pr) if fr + pr > 0 else 0.0
        else:
            raise ValueError(strategy)
        scored.append((element, score))
    scored.sort(key=lambda pair: (-pair[1], pair[0].canonical()))
    return scored


def random_suite(rng: random.Random) -> tuple[dict, set]:
    """A random spectrum: up to 10 tests over up to 20 elements, at least
    one failing test."""
    n_tests = rng.randint(1, 10)
    n_elements = rng.randint(1, 20)
    pool = [
        ProgramElement("f.c", "fn", i + 1, Granularity.LINE) for i in range(n_elements)
    ]
    coverage = {
        f"t{i:02d}": {e for e in pool if rng.random() < 0.5} for i in range(n_tests)
    }
    failing = {t for t in coverage if rng.random() < 0.4}
    if not failing:
        failing = {sorted(coverage)[0]}
    return coverage, failing
