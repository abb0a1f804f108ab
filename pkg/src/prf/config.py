"""JSON configuration loading.

The configuration is a single JSON object; its key set is fixed and every
key except adapterCommand has a default. The project root is the directory
containing the configuration file.
"""

from __future__ import annotations

import json
from pathlib import Path

from .errors import ConfigError
from .model import (
    DUMMY_GENERATION_PLUGIN,
    DUMMY_PRIORITIZATION_PLUGIN,
    FlStrategy,
    Granularity,
    RepairConfig,
    TimeoutPolicy,
)

_GRANULARITIES = {
    "OFF": Granularity.OFF,
    "FILE": Granularity.FILE,
    "FUNCTION": Granularity.FUNCTION,
    "LINE": Granularity.LINE,
    # aliases kept for users coming from class/method-level tooling
    "CLASS_LEVEL": Granularity.FILE,
    "METHOD_LEVEL": Granularity.FUNCTION,
    "LINE_LEVEL": Granularity.LINE,
}

_KNOWN_KEYS = {
    "adapterCommand",
    "flOptions",
    "flStrategy",
    "testCoverage",
    "failingTests",
    "cgOptions",
    "patchGenerationPlugin",
    "parallelism",
    "patchPrioritizationPlugin",
    "timeoutConstant",
    "timeoutPercent",
    "earlyStop",
    "patchesDir",
}


def load_config(path: Path) -> RepairConfig:
    try:
        raw = json.loads(path.read_text())
    except FileNotFoundError:
        raise ConfigError(f"configuration file {path} does not exist") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"configuration file {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = sorted(set(raw) - _KNOWN_KEYS)
    if unknown:
        raise ConfigError(f"unknown configuration keys: {', '.join(unknown)}")

    adapter_command = raw.get("adapterCommand")
    if not isinstance(adapter_command, str) or not adapter_command.strip():
        raise ConfigError("adapterCommand is required and must be a non-empty string")

    cg_option = raw.get("cgOptions", "OFF")
    if cg_option == "DYNAMIC":
        raise ConfigError("dynamic call graph construction is out of scope")
    if cg_option != "OFF":
        raise ConfigError(f"cgOptions must be OFF, got {cg_option!r}")

    fl_option = _enum_value(raw, "flOptions", _GRANULARITIES, Granularity.OFF)
    fl_strategy = _enum_value(
        raw,
        "flStrategy",
        {s.value: s for s in FlStrategy},
        FlStrategy.OCHIAI,
    )

    failing_tests = raw.get("failingTests", [])
    if not isinstance(failing_tests, list) or not all(
        isinstance(t, str) and t for t in failing_tests
    ):
        raise ConfigError("failingTests must be a list of non-empty strings")

    return RepairConfig(
        adapter_command=adapter_command,
        project_root=path.resolve().parent,
        fl_option=fl_option,
        fl_strategy=fl_strategy,
        test_coverage=_typed(raw, "testCoverage", bool, False),
        failing_tests=tuple(failing_tests),
        cg_option=cg_option,
        patch_generation_plugin=_typed(
            raw, "patchGenerationPlugin", str, DUMMY_GENERATION_PLUGIN
        ),
        parallelism=_non_negative_int(raw, "parallelism", 0),
        patch_prioritization_plugin=_typed(
            raw, "patchPrioritizationPlugin", str, DUMMY_PRIORITIZATION_PLUGIN
        ),
        timeout=TimeoutPolicy(
            constant_ms=_non_negative_int(raw, "timeoutConstant", 5000),
            percent=_non_negative_number(raw, "timeoutPercent", 0.5),
        ),
        early_stop=_typed(raw, "earlyStop", bool, False),
        patches_dir=_typed(raw, "patchesDir", str, "patches-pool"),
    )


def _enum_value(raw: dict, key: str, mapping: dict, default):
    value = raw.get(key)
    if value is None:
        return default
    if not isinstance(value, str) or value not in mapping:
        raise ConfigError(
            f"{key} must be one of {', '.join(sorted(mapping))}; got {value!r}"
        )
    return mapping[value]


def _typed(raw: dict, key: str, kind: type, default):
    value = raw.get(key, default)
    if not isinstance(value, kind) or (kind is not bool and isinstance(value, bool)):
        raise ConfigError(f"{key} must be a {kind.__name__}")
    return value


def _non_negative_int(raw: dict, key: str, default: int) -> int:
    value = _typed(raw, key, int, default)
    if value < 0:
        raise ConfigError(f"{key} must be >= 0")
    return value


def _non_negative_number(raw: dict, key: str, default: float) -> float:
    value = raw.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key} must be a number")
    if value < 0:
        raise ConfigError(f"{key} must be >= 0")
    return float(value)
