"""Spectrum-based fault localization: Ochiai and Tarantula rankings.

Both formulas score from the standard (failed-covering, passed-covering,
total-failed, total-passed) tallies and use the zero-denominator convention
of scoring 0 so every covered element gets a total, comparable score.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

from .errors import LocalizationError
from .model import FlStrategy, Granularity, ProgramElement, RepairConfig, SpectrumCounts
from .profiler import Profile, build_spectrum, coarsen_coverage


@dataclass(frozen=True)
class SuspiciousnessRanking:
    """Elements with scores in [0, 1], non-increasing along the list."""

    entries: tuple[tuple[ProgramElement, float], ...]
    granularity: Granularity
    strategy: FlStrategy


def ochiai(counts: SpectrumCounts) -> float:
    """failed_covering / sqrt(total_failed * (failed_covering + passed_covering))."""
    if counts.failed_covering == 0:
        return 0.0
    denominator = math.sqrt(
        counts.total_failed * (counts.failed_covering + counts.passed_covering)
    )
    if denominator == 0.0:
        return 0.0
    return counts.failed_covering / denominator


def tarantula(counts: SpectrumCounts) -> float:
    """fail_ratio / (fail_ratio + pass_ratio), each ratio 0 when its total is 0."""
    fail_ratio = counts.failed_covering / counts.total_failed if counts.total_failed else 0.0
    pass_ratio = counts.passed_covering / counts.total_passed if counts.total_passed else 0.0
    if fail_ratio + pass_ratio == 0.0:
        return 0.0
    return fail_ratio / (fail_ratio + pass_ratio)


_SCORERS = {FlStrategy.OCHIAI: ochiai, FlStrategy.TARANTULA: tarantula}


def localize(profile: Profile, config: RepairConfig) -> SuspiciousnessRanking:
    """Rank every covered element by suspiciousness, descending, with ties
    broken by the canonical element string so rankings are reproducible."""
    if config.fl_option is Granularity.OFF:
        raise LocalizationError("fault localization is disabled (flOptions=OFF)")
    if profile.coverage is None:
        raise LocalizationError("profile has no coverage; re-profile with coverage enabled")
    if not profile.failing:
        raise LocalizationError("no failing tests; nothing to localize")
    coarsened = coarsen_coverage(profile.coverage, config.fl_option)
    spectrum = build_spectrum(coarsened, profile.failing, profile.test_ids())
    scorer = _SCORERS[config.fl_strategy]
    scored = [(element, scorer(counts)) for element, counts in spectrum.items()]
    scored.sort(key=lambda pair: (-pair[1], pair[0].canonical()))
    return SuspiciousnessRanking(tuple(scored), config.fl_option, config.fl_strategy)


def render_ranking(ranking: SuspiciousnessRanking) -> str:
    lines = [f"{element.canonical()},{score:.6f}" for element, score in ranking.entries]
    return "\n".join(lines) + ("\n" if lines else "")


def write_ranking(ranking: SuspiciousnessRanking, path: Path) -> None:
    path.write_text(render_ranking(ranking))
