"""World-map and scenario files, plus a synthetic scenario generator.

Both file formats are JSON Lines. A map line places one world object:

    {"id":15,"concept":"Road","x":30,"y":40}

A scenario line is one observation, visual or auditory:

    {"cycle":7,"source":"fb#3","kind":"visual","object":14,"property":"fieryness","value":25}
    {"cycle":11,"source":"pf#1","kind":"auditory","sender":"pf#1","text":"clear road#15"}

Field names and their order are normative; unknown fields are rejected.
Cycles must not decrease from one line to the next, and the in-cycle line
order is preserved through a write/read round trip.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .features import Observation, ObservationKind, WorldMap


def fixture_path(name: str) -> Path:
    """Path to one of the data files shipped with the package."""
    return Path(str(resources.files("sitrep.data").joinpath(name)))


class IngestError(Exception):
    pass


class SchemaError(IngestError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class NonMonotoneCycle(IngestError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class DuplicateObjectId(IngestError):
    pass


class BadCoordinates(IngestError):
    pass


@dataclass(eq=False)
class Scenario:
    """Observation batches keyed by cycle; duration is the last cycle."""

    name: str = "scenario"
    seed: int | None = None
    batches: dict[int, list[Observation]] = field(default_factory=dict)

    @property
    def duration(self) -> int:
        return max(self.batches, default=0)

    def batch(self, cycle: int) -> list[Observation]:
        return self.batches.get(cycle, [])

    def observations(self) -> list[Observation]:
        out = []
        for cycle in sorted(self.batches):
            out.extend(self.batches[cycle])
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, Scenario):
            return NotImplemented
        return self.batches == other.batches


def _read_lines(source: str | Path) -> tuple[list[str], str]:
    text = str(source)
    if "\n" in text or text.lstrip().startswith("{") or text == "":
        return text.splitlines(), "scenario"
    p = Path(source)
    return p.read_text().splitlines(), p.stem


def load_worldmap(source: str | Path) -> WorldMap:
    """Read a map file (or raw JSONL text) into a WorldMap."""
    lines, _ = _read_lines(source)
    objects: dict[int, tuple[str, tuple[float, float]]] = {}
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as e:
            raise SchemaError(f"not valid JSON: {e}", n) from e
        if not isinstance(doc, dict) or set(doc) != {"id", "concept", "x", "y"}:
            raise SchemaError("map line must have exactly id, concept, x, y", n)
        if not isinstance(doc["id"], int) or not isinstance(doc["concept"], str):
            raise SchemaError("id must be an integer and concept a string", n)
        if doc["id"] in objects:
            raise DuplicateObjectId(f"line {n}: object id {doc['id']} declared twice")
        x, y = doc["x"], doc["y"]
        if not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in (x, y)):
            raise BadCoordinates(f"line {n}: coordinates must be numbers")
        if not all(abs(float(v)) != float("inf") and float(v) == float(v) for v in (x, y)):
            raise BadCoordinates(f"line {n}: coordinates must be finite")
        objects[doc["id"]] = (doc["concept"], (float(x), float(y)))
    return WorldMap(objects)


def write_worldmap(worldmap: WorldMap, path: str | Path) -> None:
    lines = []
    for object_id in sorted(worldmap.objects):
        concept, (x, y) = worldmap.objects[object_id]
        lines.append(json.dumps(
            {"id": object_id, "concept": concept, "x": _coord(x), "y": _coord(y)}))
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


def _coord(v: float):
    return int(v) if float(v).is_integer() else v


_VISUAL_FIELDS = ("cycle", "source", "kind", "object", "property", "value")
_AUDITORY_FIELDS = ("cycle", "source", "kind", "sender", "text")


def _observation_from_doc(doc: dict, n: int) -> Observation:
    kind = doc.get("kind")
    if kind == "visual":
        expected = _VISUAL_FIELDS
    elif kind == "auditory":
        expected = _AUDITORY_FIELDS
    else:
        raise SchemaError(f"kind must be 'visual' or 'auditory', got {kind!r}", n)
    if set(doc) != set(expected):
        extra = sorted(set(doc) - set(expected))
        missing = sorted(set(expected) - set(doc))
        parts = []
        if extra:
            parts.append(f"unknown fields {extra}")
        if missing:
            parts.append(f"missing fields {missing}")
        raise SchemaError("; ".join(parts), n)
    if not isinstance(doc["cycle"], int) or doc["cycle"] < 0:
        raise SchemaError("cycle must be a non-negative integer", n)
    try:
        if kind == "visual":
            if not isinstance(doc["object"], int) or not isinstance(doc["value"], int):
                raise SchemaError("object and value must be integers", n)
            return Observation(
                cycle=doc["cycle"], source=doc["source"], kind=ObservationKind.VISUAL,
                object=doc["object"], property=doc["property"], value=doc["value"])
        return Observation(
            cycle=doc["cycle"], source=doc["source"], kind=ObservationKind.AUDITORY,
            sender=doc["sender"], text=doc["text"])
    except (TypeError, ValueError) as e:
        raise SchemaError(str(e), n) from e


def read_scenario(source: str | Path) -> Scenario:
    """Read a scenario file (or raw JSONL text), preserving in-cycle order."""
    lines, name = _read_lines(source)
    batches: dict[int, list[Observation]] = {}
    last_cycle = -1
    for n, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            doc = json.loads(line)
        except json.JSONDecodeError as e:
            raise SchemaError(f"not valid JSON: {e}", n) from e
        if not isinstance(doc, dict):
            raise SchemaError("observation line must be a JSON object", n)
        obs = _observation_from_doc(doc, n)
        if obs.cycle < last_cycle:
            raise NonMonotoneCycle(
                f"cycle {obs.cycle} after cycle {last_cycle}", n)
        last_cycle = obs.cycle
        batches.setdefault(obs.cycle, []).append(obs)
    return Scenario(name=name, batches=batches)


def encode_observation(obs: Observation) -> str:
    """One scenario line, fields in the normative order."""
    if obs.kind is ObservationKind.VISUAL:
        doc = {"cycle": obs.cycle, "source": obs.source, "kind": "visual",
               "object": obs.object, "property": obs.property, "value": obs.value}
    else:
        doc = {"cycle": obs.cycle, "source": obs.source, "kind": "auditory",
               "sender": obs.sender, "text": obs.text}
    return json.dumps(doc)


def write_scenario(scenario: Scenario, path: str | Path) -> None:
    lines = [encode_observation(o) for o in scenario.observations()]
    Path(path).write_text("\n".join(lines) + ("\n" if lines else ""))


# ---------------------------------------------------------------------------
# Synthetic scenario generation
# ---------------------------------------------------------------------------

_EVENT_KINDS = {
    # kind -> (map concept, visual property, heard action)
    "fire": ("Building", "fieryness", "extinguish"),
    "blockade": ("Road", "blockade", "clear"),
    "injury": ("Civilian", "buriedness", "rescue"),
}

_NOISE_BASE_ID = 1000
_NOISE_ISOLATION = 1000.0   # min distance of a noise object from anything else
_PLACEMENT_TRIES = 200


@dataclass
class EventScript:
    kind: str
    object: int
    onset: int
    peak: int           # final property value of the growth ramp
    ramp: int           # cycles from onset to reach the peak

    def __post_init__(self):
        if self.kind not in _EVENT_KINDS:
            raise IngestError(f"unknown event kind {self.kind!r}")
        if self.onset < 1 or self.ramp < 1 or self.peak < 1:
            raise IngestError("onset, ramp and peak must all be >= 1")

    def value_at(self, cycle: int) -> int:
        step = min(cycle - self.onset + 1, self.ramp)
        return round(self.peak * step / self.ramp)


@dataclass
class ScenarioSpec:
    name: str = "generated"
    duration: int = 50
    map_size: tuple[float, float] = (10000.0, 10000.0)
    events: list[EventScript] = field(default_factory=list)
    reporters: int = 2
    message_rate: float = 0.3   # chance per event per cycle of a heard action
    noise_rate: float = 0.0     # expected isolated one-off reports per cycle
    seed: int = 0

    def __post_init__(self):
        if self.duration < 0 or self.reporters < 1:
            raise IngestError("duration must be >= 0 and reporters >= 1")
        if self.message_rate < 0 or self.noise_rate < 0:
            raise IngestError("rates must be >= 0")
        for ev in self.events:
            if ev.onset > self.duration:
                raise IngestError(
                    f"event onset {ev.onset} is outside duration {self.duration}")


def load_scenario_spec(source: str | Path) -> ScenarioSpec:
    text = str(source)
    if "\n" not in text and not text.lstrip().startswith("{"):
        text = Path(source).read_text()
    doc = json.loads(text)
    known = {"name", "duration", "map_size", "events", "reporters",
             "message_rate", "noise_rate", "seed"}
    unknown = sorted(set(doc) - known)
    if unknown:
        raise IngestError(f"unknown spec fields {unknown}")
    events = []
    for entry in doc.get("events", []):
        extra = sorted(set(entry) - {"kind", "object", "onset", "peak", "ramp"})
        if extra:
            raise IngestError(f"unknown event fields {extra}")
        events.append(EventScript(**entry))
    kwargs = {k: doc[k] for k in known & set(doc) if k not in ("events", "map_size")}
    if "map_size" in doc:
        kwargs["map_size"] = tuple(doc["map_size"])
    return ScenarioSpec(events=events, **kwargs)


def generate_worldmap(spec: ScenarioSpec) -> WorldMap:
    """Place event and noise objects deterministically from the spec seed.

    Noise objects take ids from 1000 up; event objects keep their scripted
    ids. Placement draws from its own RNG stream so the map never shifts
    when message or noise draws change.
    """
    rng = random.Random(spec.seed)
    w, h = spec.map_size
    objects: dict[int, tuple[str, tuple[float, float]]] = {}
    for ev in spec.events:
        if ev.object in objects:
            raise DuplicateObjectId(f"event object id {ev.object} used twice")
        concept = _EVENT_KINDS[ev.kind][0]
        pos = (round(rng.uniform(0, w), 1), round(rng.uniform(0, h), 1))
        objects[ev.object] = (concept, pos)
    noise_count = _noise_schedule(spec).count(True)
    for i in range(noise_count):
        # noise reports are isolated one-offs: keep their objects out of
        # proximity range of everything already placed
        pos = (round(rng.uniform(0, w), 1), round(rng.uniform(0, h), 1))
        for _ in range(_PLACEMENT_TRIES):
            if all(math.dist(pos, p) >= _NOISE_ISOLATION for _, p in objects.values()):
                break
            pos = (round(rng.uniform(0, w), 1), round(rng.uniform(0, h), 1))
        objects[_NOISE_BASE_ID + i] = ("Building", pos)
    return WorldMap(objects)


def _noise_schedule(spec: ScenarioSpec) -> list[bool]:
    """One draw per cycle, from a stream independent of placement draws."""
    rng = random.Random(f"{spec.seed}/noise")
    return [rng.random() < spec.noise_rate for _ in range(spec.duration)]


def generate_scenario(spec: ScenarioSpec) -> Scenario:
    """Script the observation stream: ramps, confirmations, messages, noise.

    Deterministic for a given spec and seed. Event readings ramp up to the
    peak, then repeat the peak value every cycle to the end so a reload of
    the written file sees the same duration; the extraction filter drops the
    unchanged repeats. Noise reports are one-offs about otherwise silent
    objects.
    """
    msg_rng = random.Random(f"{spec.seed}/messages")
    noise_rng = random.Random(f"{spec.seed}/noise-values")
    noise_cycles = _noise_schedule(spec)
    batches: dict[int, list[Observation]] = {}

    def emit(obs: Observation) -> None:
        batches.setdefault(obs.cycle, []).append(obs)

    for cycle in range(1, spec.duration + 1):
        for i, ev in enumerate(spec.events):
            _, prop, action = _EVENT_KINDS[ev.kind]
            concept = _EVENT_KINDS[ev.kind][0].lower()
            if cycle >= ev.onset:
                reporter = f"fb#{i % spec.reporters + 1}"
                emit(Observation(cycle=cycle, source=reporter, kind=ObservationKind.VISUAL,
                                 object=ev.object, property=prop, value=ev.value_at(cycle)))
            if cycle > ev.onset and msg_rng.random() < spec.message_rate:
                sender = f"pf#{i % spec.reporters + 1}"
                emit(Observation(cycle=cycle, source=sender, kind=ObservationKind.AUDITORY,
                                 sender=sender, text=f"{action} {concept}#{ev.object}"))
        if noise_cycles[cycle - 1]:
            noise_id = _NOISE_BASE_ID + noise_cycles[:cycle].count(True) - 1
            emit(Observation(cycle=cycle, source="fb#0", kind=ObservationKind.VISUAL,
                             object=noise_id, property="fieryness",
                             value=noise_rng.randint(1, 30)))
    return Scenario(name=spec.name, seed=spec.seed, batches=batches)
