"""Semantic features: data model, canonical text codec, observation extraction.

A semantic feature is the atomic unit of situation information: a key like
``Phenomenon#14`` plus ordered qualifier/value couples, e.g.

    (Phenomenon#14, type, fire, intensity, starting, localisation, 20|25, time, 7)

``extract_features`` turns raw per-cycle field reports (visual property
readings and heard messages) into features, dropping uninteresting readings
(an intact building is not an event) and keying repeated reports about the
same real-world object onto one feature key so they update one agent instead
of spawning many.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum

from .ontology import Ontology

_KEY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)#(\d+)$")
_QUALIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_TOKEN_RE = re.compile(r"^[^\s,()]+$")
_OBJECT_NAME_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)#(\d+)$")


class FeatureError(Exception):
    """Base class for codec and extraction failures."""


class FeatureSyntaxError(FeatureError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class OddCoupleCount(FeatureError):
    pass


class BadKey(FeatureError):
    pass


class UnknownProperty(FeatureError):
    pass


class UnparsableMessage(FeatureError):
    pass


def format_coordinate(x: float) -> str:
    """Render one coordinate: integers bare, floats trimmed to 6 decimals."""
    if float(x).is_integer():
        return str(int(x))
    return f"{x:.6f}".rstrip("0").rstrip(".")


def format_localisation(loc: tuple[float, float] | None) -> str:
    if loc is None:
        return "unknown"
    return f"{format_coordinate(loc[0])}|{format_coordinate(loc[1])}"


@dataclass(frozen=True, order=True)
class FeatureKey:
    concept: str
    id: int

    def __str__(self) -> str:
        return f"{self.concept}#{self.id}"

    @classmethod
    def parse(cls, text: str) -> "FeatureKey":
        m = _KEY_RE.match(text)
        if not m:
            raise BadKey(f"bad feature key {text!r}: expected Concept#digits")
        return cls(m.group(1), int(m.group(2)))


@dataclass(frozen=True)
class SemanticFeature:
    """One observed fact: a key plus ordered qualifier/value couples.

    The couples are the single source of truth; ``time`` and ``localisation``
    are parsed views of the corresponding couple values. Couple order is
    preserved so text round-trips exactly.
    """

    key: FeatureKey
    couples: tuple[tuple[str, str], ...]

    def __post_init__(self):
        seen = set()
        for q, _ in self.couples:
            if q in seen:
                raise FeatureSyntaxError(f"duplicate qualifier {q!r}", 0)
            seen.add(q)
        for required in ("type", "time", "localisation"):
            if required not in seen:
                raise FeatureSyntaxError(f"missing required qualifier {required!r}", 0)
        try:
            t = int(self.value("time"))
        except ValueError:
            raise FeatureSyntaxError(f"time value {self.value('time')!r} is not an integer", 0)
        if t < 0:
            raise FeatureSyntaxError(f"time value {t} is negative", 0)
        loc = self.value("localisation")
        if loc != "unknown" and _parse_coords(loc) is None:
            raise FeatureSyntaxError(f"localisation value {loc!r} is not x|y or unknown", 0)

    def value(self, qualifier: str) -> str | None:
        for q, v in self.couples:
            if q == qualifier:
                return v
        return None

    @property
    def type(self) -> str:
        return self.value("type")

    @property
    def time(self) -> int:
        return int(self.value("time"))

    @property
    def localisation(self) -> tuple[float, float] | None:
        return _parse_coords(self.value("localisation"))

    @property
    def intensity(self) -> str | None:
        return self.value("intensity")


def _parse_coords(text: str) -> tuple[float, float] | None:
    if text is None or text == "unknown":
        return None
    parts = text.split("|")
    if len(parts) != 2:
        return None
    try:
        return (float(parts[0]), float(parts[1]))
    except ValueError:
        return None


def make_feature(
    concept: str,
    id: int,
    type: str,
    time: int,
    localisation: tuple[float, float] | None,
    extra: list[tuple[str, str]] | None = None,
) -> SemanticFeature:
    """Build a feature with the canonical couple order: type, extras, localisation, time."""
    couples = [("type", type)]
    couples.extend(extra or [])
    couples.append(("localisation", format_localisation(localisation)))
    couples.append(("time", str(time)))
    return SemanticFeature(FeatureKey(concept, id), tuple(couples))


# ---------------------------------------------------------------------------
# Codec
# ---------------------------------------------------------------------------

def parse_feature(text: str) -> SemanticFeature:
    """Parse `(Key, q1, v1, ...)` text. Reformatting yields the canonical form."""
    stripped = text.strip()
    if not stripped.startswith("("):
        raise FeatureSyntaxError("feature text must start with '('", 0)
    if not stripped.endswith(")"):
        raise FeatureSyntaxError("feature text must end with ')'", len(text) - 1)
    body = stripped[1:-1]
    if "(" in body or ")" in body:
        raise FeatureSyntaxError("nested parentheses are not allowed", stripped.index("(", 1))
    parts = [p.strip() for p in body.split(",")]
    if any(p == "" for p in parts):
        raise FeatureSyntaxError("empty token", text.index(",,") if ",," in text else 0)
    key = FeatureKey.parse(parts[0])
    tokens = parts[1:]
    if len(tokens) % 2 != 0:
        raise OddCoupleCount(f"dangling qualifier {tokens[-1]!r} has no value")
    couples = []
    for i in range(0, len(tokens), 2):
        q, v = tokens[i], tokens[i + 1]
        if not _QUALIFIER_RE.match(q):
            raise FeatureSyntaxError(f"bad qualifier {q!r}", text.find(q))
        if not _TOKEN_RE.match(v):
            raise FeatureSyntaxError(f"bad value token {v!r}", text.find(v))
        couples.append((q, v))
    return SemanticFeature(key, tuple(couples))


def format_feature(f: SemanticFeature) -> str:
    """Canonical rendering; parse∘format is the identity."""
    items = [str(f.key)]
    for q, v in f.couples:
        items.append(q)
        items.append(v)
    return "(" + ", ".join(items) + ")"


# ---------------------------------------------------------------------------
# Observations and the world map
# ---------------------------------------------------------------------------

class ObservationKind(str, Enum):
    VISUAL = "visual"
    AUDITORY = "auditory"


@dataclass(frozen=True)
class Observation:
    """One raw per-cycle report from a field agent."""

    cycle: int
    source: str
    kind: ObservationKind
    object: int | None = None       # visual
    property: str | None = None
    value: int | None = None
    sender: str | None = None       # auditory
    text: str | None = None

    def __post_init__(self):
        if self.kind is ObservationKind.VISUAL:
            if self.object is None or self.property is None or self.value is None:
                raise ValueError("visual observation requires object/property/value")
            if self.sender is not None or self.text is not None:
                raise ValueError("visual observation must not carry an auditory payload")
        else:
            if self.sender is None or self.text is None:
                raise ValueError("auditory observation requires sender/text")
            if self.object is not None or self.property is not None or self.value is not None:
                raise ValueError("auditory observation must not carry a visual payload")


class WorldMap:
    """Static object id -> (concept name, coordinates) lookup."""

    def __init__(self, objects: dict[int, tuple[str, tuple[float, float]]] | None = None):
        self.objects = dict(objects or {})

    def lookup(self, object_id: int) -> tuple[str, tuple[float, float]] | None:
        return self.objects.get(object_id)

    def position(self, object_id: int) -> tuple[float, float] | None:
        entry = self.objects.get(object_id)
        return entry[1] if entry else None

    def __len__(self) -> int:
        return len(self.objects)


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

# property name -> (key concept, type token); intensity-banded where the
# concept is Phenomenon, carried raw as a couple where it is Person.
_PROPERTY_TABLE: dict[str, tuple[str, str]] = {
    "fieryness": ("Phenomenon", "fire"),
    "brokenness": ("Phenomenon", "break"),
    "blockade": ("Phenomenon", "blockade"),
    "buriedness": ("Person", "person"),
    "damage": ("Person", "person"),
    "hitPoint": ("Person", "person"),
}

# value a property reads on an intact, uninteresting object
INTACT_VALUES: dict[str, int] = {
    "fieryness": 0,
    "brokenness": 0,
    "blockade": 0,
    "buriedness": 0,
    "damage": 0,
    "hitPoint": 10000,
}

# heard action -> phenomenon it implies at the target object
_ACTION_PHENOMENON: dict[str, str] = {
    "clear": "blockade",
    "extinguish": "fire",
    "rescue": "injury",
}

_ACTIONS = frozenset({"load", "rescue", "unload", "extinguish", "move", "clear"})


def fire_intensity(value: int) -> str:
    """Band a fieryness reading: three equal bands above the intact zero."""
    if value <= 0:
        return "none"
    if value <= 33:
        return "starting"
    if value <= 66:
        return "strongly"
    return "extremely_strongly"


def generic_intensity(value: int) -> str:
    """Two-band scale for phenomena without a published vocabulary."""
    if value <= 0:
        return "none"
    return "low" if value <= 50 else "high"


class IdAllocator:
    """Stable feature-key ids plus the last-reading memory for the interest filter.

    One id per (type token, world object) pair per key concept, so repeated
    reports about the same fire update one agent. The preferred id is the
    world object's own id (the fire at building 14 becomes Phenomenon#14);
    on collision the smallest unused non-negative integer is taken.
    """

    def __init__(self):
        self._assigned: dict[tuple[str, str, int], int] = {}
        self._used: dict[str, set[int]] = {}
        self.last_readings: dict[tuple[int, str], int] = {}

    def key_for(self, concept: str, type_token: str, object_id: int) -> FeatureKey:
        slot = (concept, type_token, object_id)
        if slot in self._assigned:
            return FeatureKey(concept, self._assigned[slot])
        used = self._used.setdefault(concept, set())
        candidate = object_id
        if candidate in used:
            candidate = 0
            while candidate in used:
                candidate += 1
        used.add(candidate)
        self._assigned[slot] = candidate
        return FeatureKey(concept, candidate)

    def has_key(self, concept: str, type_token: str, object_id: int) -> bool:
        return (concept, type_token, object_id) in self._assigned

    def observe_reading(self, object_id: int, prop: str, value: int) -> int | None:
        """Record a reading; returns the previous one (None if first)."""
        previous = self.last_readings.get((object_id, prop))
        self.last_readings[(object_id, prop)] = value
        return previous


def extract_features(
    obs: Observation,
    worldmap: WorldMap,
    ont: Ontology,
    alloc: IdAllocator,
) -> list[SemanticFeature]:
    """Interpret one observation into zero or more semantic features.

    Uninteresting readings (intact objects, unchanged values) yield nothing.
    Raises UnknownProperty / UnparsableMessage for reports the ontology has no
    reading of; callers running live turn those into diagnostics, not faults.
    """
    if obs.kind is ObservationKind.VISUAL:
        return _extract_visual(obs, worldmap, alloc)
    return _extract_auditory(obs, worldmap, alloc)


def _extract_visual(obs: Observation, worldmap: WorldMap, alloc: IdAllocator) -> list[SemanticFeature]:
    mapping = _PROPERTY_TABLE.get(obs.property)
    if mapping is None:
        raise UnknownProperty(f"no interpretation for property {obs.property!r}")
    concept, type_token = mapping

    previous = alloc.observe_reading(obs.object, obs.property, obs.value)
    if previous is None:
        if obs.value == INTACT_VALUES[obs.property]:
            return []  # intact object, not an event
    elif obs.value == previous:
        return []  # unchanged, nothing new to represent

    localisation = worldmap.position(obs.object)

    if concept == "Phenomenon":
        band = fire_intensity if type_token == "fire" else generic_intensity
        intensity = band(obs.value)
        if intensity == "none" and not alloc.has_key(concept, type_token, obs.object):
            # back-to-intact on an object we never represented: still nothing
            return []
        key = alloc.key_for(concept, type_token, obs.object)
        return [make_feature(concept, key.id, type_token, obs.cycle, localisation,
                             extra=[("intensity", intensity)])]

    key = alloc.key_for(concept, type_token, obs.object)
    return [make_feature(concept, key.id, type_token, obs.cycle, localisation,
                         extra=[(obs.property, str(obs.value))])]


def _extract_auditory(obs: Observation, worldmap: WorldMap, alloc: IdAllocator) -> list[SemanticFeature]:
    words = obs.text.split()
    if len(words) != 2:
        raise UnparsableMessage(f"message {obs.text!r} is not 'action object#id'")
    action, object_name = words
    if action not in _ACTIONS:
        raise UnparsableMessage(f"unknown action {action!r} in message {obs.text!r}")
    m = _OBJECT_NAME_RE.match(object_name)
    if not m:
        raise UnparsableMessage(f"bad object name {object_name!r} in message {obs.text!r}")
    object_id = int(m.group(2))
    localisation = worldmap.position(object_id)

    out = []
    phenomenon = _ACTION_PHENOMENON.get(action)
    if phenomenon is not None:
        key = alloc.key_for("Phenomenon", phenomenon, object_id)
        out.append(make_feature("Phenomenon", key.id, phenomenon, obs.cycle, localisation,
                                extra=[("intensity", "unknown")]))
    key = alloc.key_for("Activity", action, object_id)
    out.append(make_feature("Activity", key.id, action, obs.cycle, localisation,
                            extra=[("actor", obs.sender), ("target", object_name)]))
    return out
