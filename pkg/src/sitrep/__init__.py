"""Real-time situation representation from disaster-world observation streams.

Raw field reports become semantic features; each feature is carried by one
factual agent whose indicators and four-state automaton track how the fact
is evolving; proximate, similarly moving agents are clustered into situation
summaries; everything is observable and steerable live over a small HTTP and
WebSocket API.
"""

from .agents import (
    AgentPool,
    AtnConfig,
    AtnState,
    FactualAgent,
    Indicators,
    SalientFact,
    compute_reinforcement,
    reap,
    spawn_or_merge,
    step_atn,
    update_acquaintances,
    update_indicators,
)
from .characterisation import (
    CharacterisationRecord,
    Characteriser,
    ClusterConfig,
    build_components,
    summarize_cluster,
)
from .config import RunConfig, load_config
from .engine import Engine, RunResult, run_scenario
from .features import (
    FeatureKey,
    Observation,
    ObservationKind,
    SemanticFeature,
    WorldMap,
    extract_features,
    format_feature,
    make_feature,
    parse_feature,
)
from .ingest import (
    Scenario,
    ScenarioSpec,
    generate_scenario,
    generate_worldmap,
    load_scenario_spec,
    load_worldmap,
    read_scenario,
    write_scenario,
)
from .ontology import (
    Ontology,
    load_default_ontology,
    load_ontology,
    semantic_proximity,
    validate_feature,
)
from .proximity import ProximityBreakdown, proximity, spatial_factor, temporal_factor
from .service import EngineDriver, build_service, create_app

__version__ = "0.1.0"

__all__ = [
    "AgentPool", "AtnConfig", "AtnState", "FactualAgent", "Indicators",
    "SalientFact", "compute_reinforcement", "reap", "spawn_or_merge",
    "step_atn", "update_acquaintances", "update_indicators",
    "CharacterisationRecord", "Characteriser", "ClusterConfig",
    "build_components", "summarize_cluster",
    "RunConfig", "load_config",
    "Engine", "RunResult", "run_scenario",
    "FeatureKey", "Observation", "ObservationKind", "SemanticFeature",
    "WorldMap", "extract_features", "format_feature", "make_feature",
    "parse_feature",
    "Scenario", "ScenarioSpec", "generate_scenario", "generate_worldmap",
    "load_scenario_spec", "load_worldmap", "read_scenario", "write_scenario",
    "Ontology", "load_default_ontology", "load_ontology",
    "semantic_proximity", "validate_feature",
    "ProximityBreakdown", "proximity", "spatial_factor", "temporal_factor",
    "EngineDriver", "build_service", "create_app",
    "__version__",
]
