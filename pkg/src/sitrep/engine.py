"""The simulation loop: one normative pipeline per cycle, deterministic snapshots.

Tick order is fixed: extract features from the batch, spawn or merge agents,
refresh acquaintances, compute all reinforcements against previous-cycle
indicators, apply indicator updates, step every automaton, reap the dead,
recluster, snapshot. Malformed observations become diagnostics inside the
snapshot; they never abort a tick.

Snapshots are plain value trees with floats rounded to 6 decimals, so a run
serializes byte-identically given the same inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from .agents import (
    AgentPool,
    AtnState,
    FactualAgent,
    SalientFact,
    compute_reinforcement,
    reap,
    spawn_or_merge,
    step_atn,
    update_acquaintances,
    update_indicators,
)
from .characterisation import CharacterisationRecord, Characteriser
from .config import RunConfig, UnknownConfigKey, set_config_value
from .features import (
    FeatureError,
    IdAllocator,
    Observation,
    SemanticFeature,
    WorldMap,
    extract_features,
    format_feature,
)
from .ingest import Scenario
from .ontology import Ontology


class ControlError(Exception):
    pass


class UnknownAgent(ControlError):
    pass


class NotFrozen(ControlError):
    pass


class UnknownCommand(ControlError):
    pass


def round6(x: float) -> float:
    """Serialization precision: 6 fractional digits, round half to even."""
    r = round(float(x), 6)
    return 0.0 if r == 0.0 else r


def encode_json_line(doc: dict) -> str:
    """Canonical one-line encoding: sorted keys, no whitespace."""
    return json.dumps(doc, sort_keys=True, separators=(",", ":"))


class Engine:
    """Owns the pool, the allocator, the clock, and the control surface.

    Single-writer: all mutation happens through tick and handle_control,
    which callers must serialize. Snapshots handed out are never mutated
    afterwards.
    """

    def __init__(self, ont: Ontology, worldmap: WorldMap, config: RunConfig | None = None):
        self.ont = ont
        self.worldmap = worldmap
        self.cfg = config if config is not None else RunConfig()
        self.pool = AgentPool()
        self.alloc = IdAllocator()
        self.characteriser = Characteriser()
        self.clusters: list[CharacterisationRecord] = []
        self.cycle = 0
        self.frozen = False
        self.feed: Callable[[], list[Observation]] | None = None
        self.latest: dict = self._build_snapshot([], [])

    @property
    def spatial_scale(self) -> float:
        return self.cfg.scales.spatial or self.ont.spatial_scale

    @property
    def temporal_scale(self) -> float:
        return self.cfg.scales.temporal or self.ont.temporal_scale

    @property
    def kernel(self) -> str:
        return self.cfg.proximity.kernel

    # ------------------------------------------------------------------
    # The tick pipeline
    # ------------------------------------------------------------------

    def tick(self, batch: list[Observation]) -> dict:
        self.cycle += 1
        cycle = self.cycle
        atn = self.cfg.atn

        features: list[SemanticFeature] = []
        diagnostics: list[dict] = []
        for index, obs in enumerate(batch):
            try:
                features.extend(extract_features(obs, self.worldmap, self.ont, self.alloc))
            except FeatureError as e:
                diagnostics.append({
                    "index": index,
                    "source": obs.source,
                    "error": type(e).__name__,
                    "message": str(e),
                })

        # group by key so agent-id allocation ignores in-batch order across
        # keys; same-key features keep their observation order
        by_key: dict = {}
        for f in features:
            by_key.setdefault(f.key, []).append(f)
        for key in sorted(by_key):
            for f in by_key[key]:
                spawn_or_merge(self.pool, f, atn, cycle)

        for a in self.pool.ordered():
            update_acquaintances(a, self.pool, self.ont, atn,
                                 self.spatial_scale, self.temporal_scale, self.kernel)

        reinforcement = {
            a.id: compute_reinforcement(a, self.pool, self.ont, atn)
            for a in self.pool.ordered()
        }
        for a in self.pool.ordered():
            update_indicators(a, reinforcement[a.id], atn, cycle)

        salient: list[SalientFact] = []
        for a in self.pool.ordered():
            event = step_atn(a, atn, cycle)
            if event is not None:
                salient.append(event)

        reap(self.pool, self.ont, atn, cycle)

        if cycle % self.cfg.characterisation.every == 0:
            self.clusters = self.characteriser.step(
                self.pool, self.ont, self.cfg.characterisation, atn, cycle,
                self.spatial_scale, self.temporal_scale, self.kernel)

        for a in self.pool.ordered():
            a.boosted = False

        self.latest = self._build_snapshot(salient, diagnostics)
        return self.latest

    # ------------------------------------------------------------------
    # Snapshots and inspection
    # ------------------------------------------------------------------

    def _agent_row(self, a: FactualAgent) -> dict:
        return {
            "id": a.id,
            "key": str(a.feature.key),
            "feature": format_feature(a.feature),
            "state": a.state.label,
            "pp": round6(a.indicators.pp),
            "ps": round6(a.indicators.ps),
            "pa": round6(a.indicators.pa),
            "satisfaction": round6(a.indicators.satisfaction),
            "constancy": round6(a.indicators.constancy),
            "localisation": a.feature.value("localisation"),
            "close": len(a.close),
            "opposite": len(a.opposite),
        }

    def _build_snapshot(self, salient: list[SalientFact], diagnostics: list[dict]) -> dict:
        return {
            "cycle": self.cycle,
            "frozen": self.frozen,
            "agents": [self._agent_row(a) for a in self.pool.ordered()],
            "clusters": [
                {
                    "id": c.cluster_id,
                    "dominant_type": c.dominant_type,
                    "members": list(c.members),
                    "count": c.count,
                    "centroid": [round6(v) for v in c.centroid],
                    "max_state": c.max_state,
                    "bbox": [round6(v) for v in c.bbox] if c.bbox else None,
                    "formed_cycle": c.formed_cycle,
                    "updated_cycle": c.updated_cycle,
                }
                for c in self.clusters
            ],
            "salient": [
                {"cycle": s.cycle, "agent": s.agent_id, "type": s.type,
                 "key": s.key, "pp": round6(s.pp)}
                for s in salient
            ],
            "diagnostics": diagnostics,
        }

    def snapshot(self) -> dict:
        return self.latest

    def inspect(self, agent_id: int) -> dict:
        agent = self.pool.get(agent_id)
        if agent is None:
            raise UnknownAgent(f"no agent with id {agent_id}")
        row = self._agent_row(agent)
        row["acquaintances"] = [
            {"id": j, "proximity": round6(agent.acquaintances[j])}
            for j in sorted(agent.acquaintances)
        ]
        return row

    # ------------------------------------------------------------------
    # Control commands
    # ------------------------------------------------------------------

    def handle_control(self, cmd: dict) -> dict:
        """Apply one command; results and failures are both in-band dicts."""
        name = cmd.get("cmd")
        try:
            if name == "freeze":
                self.frozen = True
                self.latest = dict(self.latest, frozen=True)
            elif name == "resume":
                self.frozen = False
                self.latest = dict(self.latest, frozen=False)
            elif name == "step":
                if not self.frozen:
                    raise NotFrozen("step requires the engine to be frozen")
                batch = self.feed() if self.feed is not None else []
                self.tick(batch)
            elif name == "inspect":
                report = self.inspect(cmd.get("agent"))
                return {"kind": "ack", "cmd": "inspect", "cycle": self.cycle, "agent": report}
            elif name == "set-config":
                set_config_value(self.cfg, cmd.get("key", ""), cmd.get("value"))
                return {"kind": "ack", "cmd": "set-config", "cycle": self.cycle,
                        "key": cmd.get("key"), "value": cmd.get("value")}
            else:
                raise UnknownCommand(f"unknown command {name!r}")
        except (ControlError, UnknownConfigKey) as e:
            return {"kind": "error", "error": type(e).__name__,
                    "message": str(e), "cycle": self.cycle}
        return {"kind": "ack", "cmd": name, "cycle": self.cycle}


@dataclass
class RunResult:
    final: dict
    log: list[str] = field(default_factory=list)

    def write_log(self, path) -> None:
        with open(path, "w") as fh:
            for line in self.log:
                fh.write(line + "\n")


def run_scenario(
    scenario: Scenario,
    worldmap: WorldMap,
    ont: Ontology,
    config: RunConfig | None = None,
    duration: int | None = None,
) -> RunResult:
    """Batch-run a whole scenario; the log holds one encoded snapshot per cycle.

    Cycles past the last observation tick with empty batches. Identical
    inputs produce byte-identical logs.
    """
    engine = Engine(ont, worldmap, config)
    horizon = scenario.duration if duration is None else duration
    log = [encode_json_line(engine.tick(scenario.batch(c)))
           for c in range(1, horizon + 1)]
    return RunResult(final=engine.latest, log=log)
