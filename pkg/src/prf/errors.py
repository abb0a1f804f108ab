"""Exception hierarchy shared across the framework.

Every error the framework raises deliberately derives from PrfError so the
CLI can map failures to its exit-code convention (>= 2 for infrastructure
and configuration problems).
"""


class PrfError(Exception):
    """Base class for all framework errors."""


class ConfigError(PrfError):
    """Invalid or inconsistent configuration."""


class ElementParseError(PrfError):
    """A program-element string does not match its granularity's shape."""


class AdapterError(PrfError):
    """The project adapter misbehaved (bad exit status, bad output, spawn failure)."""


class ProfilingError(PrfError):
    """Profiling could not complete."""


class LocalizationError(PrfError):
    """Fault localization preconditions not met."""


class PoolError(PrfError):
    """The on-disk patch pool is malformed."""


class GenerationError(PrfError):
    """Patch generation (plugin execution or pool materialization) failed."""


class ReportError(PrfError):
    """Fix-report generation failed (plugin error or bad plugin output)."""


class BenchmarkError(PrfError):
    """Benchmark could not run."""
