"""Wall-clock comparison of the validation strategies against vanilla.

Vanilla means what a naive harness would do: the whole suite in declaration
order against each patch, one patch at a time. The other rows switch on
reordering, then covering-test selection, then parallel workers, so the
speedup attributable to each mechanism is visible in one table.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass

from .errors import BenchmarkError
from .model import RepairConfig
from .pool import PatchPool
from .profiler import Profile
from .validator import validate_pool


@dataclass(frozen=True)
class BenchRow:
    strategy: str
    median_ms: float
    speedup_vs_vanilla: float
    tests_executed: int


def _strategies(config: RepairConfig) -> list[tuple[str, bool, bool, int]]:
    return [
        ("vanilla", False, False, 1),
        ("reorder-only", False, True, 1),
        ("reorder-selection", True, True, 1),
        ("reorder-selection-parallel", True, True, config.resolved_parallelism()),
    ]


def run_benchmark(
    pool: PatchPool, profile: Profile, config: RepairConfig, repetitions: int
) -> list[BenchRow]:
    """Validate the pool under each strategy `repetitions` times; report the
    median wall time and the ratio to the vanilla median."""
    if not pool.patches:
        raise BenchmarkError("patch pool is empty; nothing to benchmark")
    if repetitions < 1:
        raise BenchmarkError("repetitions must be >= 1")

    medians: dict[str, float] = {}
    counts: dict[str, int] = {}
    for name, select, reorder, workers in _strategies(config):
        walls = []
        for _ in range(repetitions):
            report = validate_pool(
                pool,
                profile,
                config,
                select=select,
                reorder=reorder,
                workers=workers,
                early_stop=False,
            )
            walls.append(report.wall_ms)
            counts.setdefault(name, report.tests_run_total)
        medians[name] = statistics.median(walls)

    vanilla = medians["vanilla"]
    rows = []
    for name, _, _, _ in _strategies(config):
        speedup = vanilla / medians[name] if medians[name] > 0 else float("inf")
        rows.append(BenchRow(name, medians[name], speedup, counts[name]))
    return rows


def render_csv(rows: list[BenchRow]) -> str:
    lines = ["strategy,median_ms,speedup_vs_vanilla,tests_executed"]
    for row in rows:
        lines.append(
            f"{row.strategy},{row.median_ms:.0f},{row.speedup_vs_vanilla:.2f},"
            f"{row.tests_executed}"
        )
    return "\n".join(lines) + "\n"
