"""Generate-and-validate program repair orchestration.

Profiles a project's test suite through a subprocess adapter, localizes
faults with spectrum-based formulas, hosts patch-generation plugins,
validates patch pools with per-test budgets and work-stealing parallelism,
and emits prioritized fix reports.
"""

from .adapter import ExecutionOutcome, ProjectAdapter, TestExecution, discover_tests, run_test
from .config import load_config
from .errors import (
    AdapterError,
    BenchmarkError,
    ConfigError,
    ElementParseError,
    GenerationError,
    LocalizationError,
    PoolError,
    PrfError,
    ProfilingError,
    ReportError,
)
from .localization import SuspiciousnessRanking, localize, ochiai, tarantula
from .model import (
    CoverageMatrix,
    FlStrategy,
    Granularity,
    PatchEntry,
    ProgramElement,
    RepairConfig,
    SpectrumCounts,
    TestRecord,
    TestStatus,
    TimeoutPolicy,
    ValidationVerdict,
    VerdictKind,
    parse_element,
)
from .pool import PatchPool, PluginContext, load_pool, run_generation_plugin
from .profiler import (
    Profile,
    build_spectrum,
    coarsen_coverage,
    profile_project,
    resolve_failing_tests,
)
from .reporting import FixEntry, FixReport, generate_report
from .validator import (
    ValidationPlan,
    ValidationReport,
    build_plan,
    compute_timeout,
    order_tests,
    select_tests,
    validate_patch,
    validate_pool,
)

__version__ = "0.1.0"
