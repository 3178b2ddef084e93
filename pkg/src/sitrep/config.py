"""Run configuration: one JSON document with a section per subsystem.

Sections and keys:

  atn               thresholds and time constants of the agent dynamics
  scales            spatial/temporal proximity scales (unset = ontology's)
  proximity         kernel: "linear" or "exponential"
  characterisation  theta, radius, min_pp, every
  engine            tick_ms, seed, snapshot_log

Hyphens in keys are accepted and treated as underscores. Unknown sections
or keys are rejected so a typo cannot silently fall back to a default.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .agents import AtnConfig
from .characterisation import ClusterConfig
from .proximity import KERNELS


class ConfigError(Exception):
    pass


class UnknownConfigKey(ConfigError):
    pass


@dataclass
class ScalesConfig:
    spatial: float | None = None
    temporal: float | None = None

    def __post_init__(self):
        for name in ("spatial", "temporal"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ConfigError(f"scales.{name} must be positive")


@dataclass
class ProximityConfig:
    kernel: str = "linear"

    def __post_init__(self):
        if self.kernel not in KERNELS:
            raise ConfigError(f"unknown kernel {self.kernel!r}; expected one of {sorted(KERNELS)}")


@dataclass
class EngineConfig:
    tick_ms: int = 0                # 0 = as fast as possible
    seed: int | None = None
    snapshot_log: str | None = None

    def __post_init__(self):
        if self.tick_ms < 0:
            raise ConfigError("engine.tick_ms must be >= 0")


@dataclass
class RunConfig:
    atn: AtnConfig = field(default_factory=AtnConfig)
    scales: ScalesConfig = field(default_factory=ScalesConfig)
    proximity: ProximityConfig = field(default_factory=ProximityConfig)
    characterisation: ClusterConfig = field(default_factory=ClusterConfig)
    engine: EngineConfig = field(default_factory=EngineConfig)


_SECTIONS = {
    "atn": AtnConfig,
    "scales": ScalesConfig,
    "proximity": ProximityConfig,
    "characterisation": ClusterConfig,
    "engine": EngineConfig,
}

# keys an operator may change on a running engine
LIVE_TUNABLE = ("scales.spatial", "scales.temporal", "characterisation.theta")


def _build_section(name: str, cls, entries: dict):
    known = {f.name for f in dataclasses.fields(cls)}
    kwargs = {}
    for key, value in entries.items():
        attr = key.replace("-", "_")
        if attr not in known:
            raise UnknownConfigKey(f"unknown key {name}.{key}")
        kwargs[attr] = value
    try:
        return cls(**kwargs)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"bad {name} section: {e}") from e


def load_config(source: str | Path | None = None) -> RunConfig:
    """Build a RunConfig from a JSON file path, raw JSON text, or defaults."""
    if source is None:
        return RunConfig()
    text = str(source)
    if "\n" not in text and not text.lstrip().startswith("{"):
        text = Path(source).read_text()
    doc = json.loads(text)
    if not isinstance(doc, dict):
        raise ConfigError("config document must be a JSON object")
    sections = {}
    for name, entries in doc.items():
        attr = name.replace("-", "_")
        if attr not in _SECTIONS:
            raise UnknownConfigKey(f"unknown section {name}")
        if not isinstance(entries, dict):
            raise ConfigError(f"section {name} must be an object")
        sections[attr] = _build_section(attr, _SECTIONS[attr], entries)
    return RunConfig(**sections)


def set_config_value(cfg: RunConfig, key: str, value) -> None:
    """Apply one live-tunable override, rejecting anything off the whitelist."""
    normalized = key.replace("-", "_")
    if normalized not in {k.replace("-", "_") for k in LIVE_TUNABLE}:
        raise UnknownConfigKey(f"key {key!r} is not live-tunable")
    section_name, attr = normalized.split(".", 1)
    section = getattr(cfg, section_name)
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ConfigError(f"{key} expects a number, got {value!r}")
    current = dataclasses.asdict(section)
    current[attr] = float(value)
    setattr(cfg, section_name, type(section)(**current))
