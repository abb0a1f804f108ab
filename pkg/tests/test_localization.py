"""Suspiciousness formulas and ranking behaviour against a brute-force oracle."""

import math
import random

import pytest

from prf.errors import LocalizationError
from prf.localization import localize, ochiai, render_ranking, tarantula
from prf.model import (
    CoverageMatrix,
    FlStrategy,
    Granularity,
    ProgramElement,
    SpectrumCounts,
    TestRecord,
    TestStatus,
    parse_element,
)
from prf.profiler import Profile

from conftest import make_project
from oracles import brute_force_ranking, random_suite


def line(text: str) -> ProgramElement:
    return parse_element(text, Granularity.LINE)


def make_profile(coverage: dict[str, set[ProgramElement]], failing: set[str]) -> Profile:
    records = tuple(
        TestRecord(
            t,
            TestStatus.FAILING if t in failing else TestStatus.PASSING,
            10 * (i + 1),
        )
        for i, t in enumerate(sorted(coverage))
    )
    matrix = CoverageMatrix({t: frozenset(els) for t, els in coverage.items()})
    return Profile(records, matrix, frozenset(failing))


class TestOchiai:
    def test_sole_failing_coverer_scores_one(self):
        assert ochiai(SpectrumCounts(1, 0, 1, 3)) == 1.0

    def test_no_failing_coverage_scores_zero(self):
        assert ochiai(SpectrumCounts(0, 5, 2, 5)) == 0.0

    def test_mixed_coverage(self):
        score = ochiai(SpectrumCounts(2, 2, 2, 4))
        assert score == pytest.approx(2 / math.sqrt(2 * 4), abs=1e-12)


class TestTarantula:
    def test_only_failing_coverage_scores_one(self):
        assert tarantula(SpectrumCounts(1, 0, 1, 3)) == 1.0

    def test_no_failing_coverage_scores_zero(self):
        assert tarantula(SpectrumCounts(0, 1, 1, 1)) == 0.0

    def test_mixed_coverage(self):
        score = tarantula(SpectrumCounts(1, 1, 2, 4))
        assert score == pytest.approx(0.5 / (0.5 + 0.25), abs=1e-12)

    def test_zero_totals_score_zero(self):
        assert tarantula(SpectrumCounts(0, 0, 0, 0)) == 0.0


class TestFormulaRange:
    def test_scores_stay_in_unit_interval(self):
        rng = random.Random(123)
        for _ in range(2000):
            total_failed = rng.randint(0, 10)
            total_passed = rng.randint(0, 10)
            counts = SpectrumCounts(
                rng.randint(0, total_failed),
                rng.randint(0, total_passed),
                total_failed,
                total_passed,
            )
            for formula in (ochiai, tarantula):
                assert 0.0 <= formula(counts) <= 1.0


class TestLocalize:
    def test_two_element_fixture(self, tmp_path):
        project = make_project(tmp_path, [])
        profile = make_profile(
            {
                "t_fail": {line("a.c:f:1"), line("a.c:f:2")},
                "t_pass": {line("a.c:f:2")},
            },
            {"t_fail"},
        )
        config = project.config(fl_option=Granularity.LINE)
        ranking = localize(profile, config)
        elements = [e.canonical() for e, _ in ranking.entries]
        scores = [s for _, s in ranking.entries]
        assert elements == ["a.c:f:1", "a.c:f:2"]
        assert scores[0] == pytest.approx(1.0, abs=1e-12)
        assert scores[1] == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    def test_file_granularity_collapses(self, tmp_path):
        project = make_project(tmp_path, [])
        profile = make_profile(
            {
                "t_fail": {line("a.c:f:1"), line("a.c:f:2")},
                "t_pass": {line("a.c:f:2")},
            },
            {"t_fail"},
        )
        ranking = localize(profile, project.config(fl_option=Granularity.FILE))
        assert len(ranking.entries) == 1
        assert ranking.entries[0][0].canonical() == "a.c"

    def test_ties_break_by_canonical_string(self, tmp_path):
        project = make_project(tmp_path, [])
        profile = make_profile(
            {"t_fail": {line("b.c:f:1"), line("a.c:f:1")}}, {"t_fail"}
        )
        ranking = localize(profile, project.config(fl_option=Granularity.LINE))
        assert [e.canonical() for e, _ in ranking.entries] == ["a.c:f:1", "b.c:f:1"]

    def test_empty_failing_set_rejected(self, tmp_path):
        project = make_project(tmp_path, [])
        profile = make_profile({"t_pass": {line("a.c:f:1")}}, set())
        with pytest.raises(LocalizationError, match="no failing tests"):
            localize(profile, project.config(fl_option=Granularity.LINE))

    def test_fl_off_rejected(self, tmp_path):
        project = make_project(tmp_path, [])
        profile = make_profile({"t_fail": {line("a.c:f:1")}}, {"t_fail"})
        with pytest.raises(LocalizationError):
            localize(profile, project.config(fl_option=Granularity.OFF))

    def test_durations_do_not_affect_ranking(self, tmp_path):
        project = make_project(tmp_path, [])
        coverage = {
            "t_fail": {line("a.c:f:1"), line("a.c:f:2")},
            "t_pass": {line("a.c:f:2"), line("a.c:g:9")},
        }
        base = make_profile(coverage, {"t_fail"})
        scaled = Profile(
            tuple(
                TestRecord(r.id, r.status, r.duration_ms * 1000) for r in base.tests
            ),
            base.coverage,
            base.failing,
        )
        config = project.config(fl_option=Granularity.LINE)
        assert render_ranking(localize(base, config)) == render_ranking(
            localize(scaled, config)
        )

    def test_byte_identical_rankings(self, tmp_path):
        project = make_project(tmp_path, [])
        profile = make_profile(
            {"t_fail": {line("a.c:f:1")}, "t_pass": {line("a.c:f:1")}}, {"t_fail"}
        )
        config = project.config(fl_option=Granularity.LINE)
        assert render_ranking(localize(profile, config)) == render_ranking(
            localize(profile, config)
        )

    def test_matches_brute_force_on_random_suites(self, tmp_path):
        project = make_project(tmp_path, [])
        rng = random.Random(42)
        for _ in range(100):
            coverage, failing_set = random_suite(rng)
            profile = make_profile(coverage, failing_set)
            for strategy, name in (
                (FlStrategy.OCHIAI, "ochiai"),
                (FlStrategy.TARANTULA, "tarantula"),
            ):
                config = project.config(
                    fl_option=Granularity.LINE, fl_strategy=strategy
                )
                ranking = localize(profile, config)
                expected = brute_force_ranking(coverage, failing_set, name)
                assert [e for e, _ in ranking.entries] == [e for e, _ in expected]
                for (_, got), (_, want) in zip(ranking.entries, expected):
                    assert abs(got - want) <= 1e-12
