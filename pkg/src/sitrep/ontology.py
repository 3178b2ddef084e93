"""Domain ontology: concept hierarchy, attribute schemas, semantic proximity.

The ontology is loaded once from a JSON document and is immutable afterwards,
so it is safe to share across threads. It answers three questions for the
rest of the engine: which concepts exist and what attributes their features
must carry, how semantically related two type tokens are (signed, in [-1, 1]),
and which persistence class governs an agent's lifetime.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable

IDENTIFIER_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_#.|-]*$")

ROOT_CONCEPT = "Object"


class OntologyError(Exception):
    """Base class for ontology-document validation failures."""


class UnknownParent(OntologyError):
    pass


class CycleInHierarchy(OntologyError):
    pass


class DuplicateConcept(OntologyError):
    pass


class ProximityOutOfRange(OntologyError):
    pass


class UnknownTokenInProximityTable(OntologyError):
    pass


class UnknownToken(OntologyError):
    """A proximity lookup used a token the ontology never declared."""


class MissingPersistence(OntologyError):
    pass


class InvalidAttributeDomain(OntologyError):
    pass


class BadScale(OntologyError):
    pass


class Persistence(str, Enum):
    PERSISTENT = "persistent"
    TEMPORARY = "temporary"
    PUNCTUAL = "punctual"


class DomainKind(str, Enum):
    ENUMERATED = "enumerated"
    INTEGER_RANGE = "integer-range"
    COORDINATE_PAIR = "coordinate-pair"
    IDENTIFIER = "identifier"
    FREE_TEXT = "free-text"


@dataclass(frozen=True)
class AttributeSchema:
    """Allowed values for one qualifier of a concept."""

    qualifier: str
    kind: DomainKind
    required: bool = False
    tokens: tuple[str, ...] = ()          # enumerated
    lo: int = 0                           # integer-range
    hi: int = 0

    def admits(self, value: str) -> bool:
        if self.kind is DomainKind.ENUMERATED:
            return value in self.tokens
        if self.kind is DomainKind.INTEGER_RANGE:
            try:
                return self.lo <= int(value) <= self.hi
            except ValueError:
                return False
        if self.kind is DomainKind.COORDINATE_PAIR:
            if value == "unknown":
                return True
            parts = value.split("|")
            if len(parts) != 2:
                return False
            try:
                return all(math.isfinite(float(p)) for p in parts)
            except ValueError:
                return False
        if self.kind is DomainKind.IDENTIFIER:
            return bool(IDENTIFIER_RE.match(value))
        return True  # free-text


@dataclass(frozen=True)
class Concept:
    name: str
    parent: str | None
    abstract: bool
    attributes: tuple[AttributeSchema, ...] = ()


class ProximityTable:
    """Symmetric token-pair table of semantic proximities in [-1, 1]."""

    def __init__(self, entries: dict[tuple[str, str], float] | None = None):
        self._entries: dict[frozenset[str] | tuple[str, str], float] = {}
        for (a, b), v in (entries or {}).items():
            self.set(a, b, v)

    def set(self, a: str, b: str, value: float) -> None:
        if not -1.0 <= value <= 1.0:
            raise ProximityOutOfRange(f"proximity ({a}, {b}) = {value} outside [-1, 1]")
        self._entries[self._key(a, b)] = float(value)

    def get(self, a: str, b: str) -> float | None:
        return self._entries.get(self._key(a, b))

    @staticmethod
    def _key(a: str, b: str):
        return (a, a) if a == b else frozenset((a, b))

    def tokens(self) -> set[str]:
        out: set[str] = set()
        for k in self._entries:
            out.update(k if isinstance(k, frozenset) else {k[0]})
        return out

    def __len__(self) -> int:
        return len(self._entries)


@dataclass(frozen=True)
class Violation:
    """One failed check from validate_feature. Violations are data, not faults."""

    qualifier: str | None
    kind: str
    message: str

    def __str__(self) -> str:  # pragma: no cover - display helper
        return self.message


class Ontology:
    """Validated, immutable view of the loaded ontology document."""

    def __init__(
        self,
        concepts: dict[str, Concept],
        proximity: ProximityTable,
        spatial_scale: float,
        temporal_scale: float,
        persistence: dict[str, Persistence],
    ):
        self.concepts = dict(concepts)
        self.proximity = proximity
        self.spatial_scale = spatial_scale
        self.temporal_scale = temporal_scale
        self.persistence = dict(persistence)
        self._by_token = {name.lower(): name for name in self.concepts}
        self._tokens = self._declared_tokens()

    # -- hierarchy ---------------------------------------------------------

    def ancestry(self, name: str) -> list[Concept]:
        """Concepts from `name` up to the root, inclusive."""
        chain = []
        cur: str | None = name
        while cur is not None:
            c = self.concepts[cur]
            chain.append(c)
            cur = c.parent
        return chain

    def concept_for_token(self, token: str) -> Concept | None:
        name = self._by_token.get(token.lower())
        return self.concepts[name] if name else None

    def effective_schemas(self, concept: str, type_token: str | None = None) -> dict[str, AttributeSchema]:
        """Attribute schemas for a feature keyed by `concept`.

        Inherited from the root down so children override by qualifier; if the
        feature's `type` token names a declared concept (e.g. ``fire`` ->
        Fire), that concept's schemas overlay the key concept's, which is how
        per-phenomenon intensity vocabularies happen.
        """
        schemas: dict[str, AttributeSchema] = {}
        for c in reversed(self.ancestry(concept)):
            for s in c.attributes:
                schemas[s.qualifier] = s
        if type_token:
            sub = self.concept_for_token(type_token)
            if sub is not None and sub.name != concept:
                for c in reversed(self.ancestry(sub.name)):
                    for s in c.attributes:
                        schemas[s.qualifier] = s
        return schemas

    def persistence_of(self, concept: str) -> Persistence:
        return self.persistence[concept]

    # -- proximity ---------------------------------------------------------

    def _declared_tokens(self) -> set[str]:
        tokens = set(self._by_token)
        for c in self.concepts.values():
            for s in c.attributes:
                if s.kind is DomainKind.ENUMERATED and s.qualifier == "intensity":
                    tokens.update(s.tokens)
        return tokens

    @property
    def declared_tokens(self) -> frozenset[str]:
        return frozenset(self._tokens)

    def semantic_proximity(self, a: str, b: str) -> float:
        """Signed semantic relatedness of two type tokens, in [-1, 1].

        Table entry when present, 1 for identical tokens, 0 otherwise.
        """
        a, b = a.lower(), b.lower()
        for t in (a, b):
            if t not in self._tokens:
                raise UnknownToken(f"token {t!r} is not declared by the ontology")
        v = self.proximity.get(a, b)
        if v is not None:
            return v
        return 1.0 if a == b else 0.0

    # -- feature validation --------------------------------------------------

    def validate_feature(self, feature) -> list[Violation]:
        """Check a SemanticFeature against the schemas. Empty list = valid.

        Never raises on well-typed input: every problem is reported as a
        Violation.
        """
        violations: list[Violation] = []
        concept = self.concepts.get(feature.key.concept)
        if concept is None:
            return [Violation(None, "undeclared-concept",
                              f"concept {feature.key.concept!r} is not declared")]
        if concept.abstract:
            violations.append(Violation(None, "abstract-concept",
                                        f"concept {concept.name!r} is abstract and cannot be instantiated"))
        couples = dict(feature.couples)
        schemas = self.effective_schemas(concept.name, couples.get("type"))
        for qualifier, schema in schemas.items():
            if qualifier not in couples:
                if schema.required:
                    violations.append(Violation(qualifier, "missing-required",
                                                f"required qualifier {qualifier!r} absent"))
                continue
            value = couples[qualifier]
            if not schema.admits(value):
                violations.append(Violation(qualifier, "out-of-domain",
                                            f"value {value!r} outside {schema.kind.value} domain "
                                            f"of {qualifier!r}"))
        return violations


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

_DOMAIN_FIELDS = {"qualifier", "domain", "required", "tokens", "lo", "hi"}


def _parse_attribute(concept: str, raw: dict) -> AttributeSchema:
    try:
        kind = DomainKind(raw["domain"])
    except (KeyError, ValueError):
        raise InvalidAttributeDomain(
            f"{concept}.{raw.get('qualifier', '?')}: unknown domain {raw.get('domain')!r}")
    qualifier = raw["qualifier"]
    required = bool(raw.get("required", False))
    if kind is DomainKind.ENUMERATED:
        tokens = tuple(raw.get("tokens", ()))
        if not tokens:
            raise InvalidAttributeDomain(f"{concept}.{qualifier}: enumerated domain is empty")
        return AttributeSchema(qualifier, kind, required, tokens=tokens)
    if kind is DomainKind.INTEGER_RANGE:
        lo, hi = int(raw["lo"]), int(raw["hi"])
        if lo > hi:
            raise InvalidAttributeDomain(f"{concept}.{qualifier}: range {lo}..{hi} is inverted")
        return AttributeSchema(qualifier, kind, required, lo=lo, hi=hi)
    return AttributeSchema(qualifier, kind, required)


def load_ontology(source: str | Path) -> Ontology:
    """Load and validate an ontology document (path or JSON text)."""
    if isinstance(source, Path):
        text = source.read_text()
    elif "\n" in source or source.lstrip().startswith("{"):
        text = source
    else:
        text = Path(source).read_text()
    doc = json.loads(text)

    concepts: dict[str, Concept] = {}
    for raw in doc.get("concepts", []):
        name = raw["name"]
        if name in concepts:
            raise DuplicateConcept(f"concept {name!r} declared twice")
        attrs = tuple(_parse_attribute(name, a) for a in raw.get("attributes", []))
        concepts[name] = Concept(
            name=name,
            parent=raw.get("parent"),
            abstract=raw.get("kind", "concrete") == "abstract",
            attributes=attrs,
        )

    # parent chains resolve, terminate at the root, and contain no cycles
    for c in concepts.values():
        if c.parent is None:
            if c.name != ROOT_CONCEPT:
                raise UnknownParent(f"concept {c.name!r} has no parent and is not {ROOT_CONCEPT!r}")
            continue
        if c.parent not in concepts:
            raise UnknownParent(f"concept {c.name!r} names unknown parent {c.parent!r}")
    if ROOT_CONCEPT not in concepts:
        raise UnknownParent(f"root concept {ROOT_CONCEPT!r} is not declared")
    for c in concepts.values():
        seen = {c.name}
        cur = c.parent
        while cur is not None:
            if cur in seen:
                raise CycleInHierarchy(f"hierarchy cycle through {cur!r}")
            seen.add(cur)
            cur = concepts[cur].parent

    table = ProximityTable()
    vocabulary = {n.lower() for n in concepts}
    for c in concepts.values():
        for s in c.attributes:
            if s.kind is DomainKind.ENUMERATED and s.qualifier == "intensity":
                vocabulary.update(s.tokens)
    for raw in doc.get("proximity", []):
        a, b, value = raw["a"], raw["b"], raw["value"]
        for t in (a, b):
            if t.lower() not in vocabulary:
                raise UnknownTokenInProximityTable(
                    f"proximity entry ({a}, {b}) uses undeclared token {t!r}")
        table.set(a.lower(), b.lower(), value)  # raises ProximityOutOfRange

    scales = doc.get("scales", {})
    spatial = float(scales.get("spatial", 1000.0))
    temporal = float(scales.get("temporal", 10.0))
    if spatial <= 0 or temporal <= 0:
        raise BadScale(f"scales must be positive, got spatial={spatial} temporal={temporal}")

    persistence: dict[str, Persistence] = {}
    for name, value in doc.get("persistence", {}).items():
        if name not in concepts:
            raise UnknownToken(f"persistence entry names undeclared concept {name!r}")
        persistence[name] = Persistence(value)
    for c in concepts.values():
        if not c.abstract and c.name not in persistence:
            raise MissingPersistence(f"concrete concept {c.name!r} has no persistence class")

    return Ontology(concepts, table, spatial, temporal, persistence)


def default_ontology_path() -> Path:
    return Path(str(resources.files("sitrep").joinpath("data/default_ontology.json")))


def load_default_ontology() -> Ontology:
    return load_ontology(default_ontology_path())


def semantic_proximity(ont: Ontology, a: str, b: str) -> float:
    return ont.semantic_proximity(a, b)


def validate_feature(ont: Ontology, feature) -> list[Violation]:
    return ont.validate_feature(feature)
