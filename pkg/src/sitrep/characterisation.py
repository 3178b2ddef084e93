"""Clustering live agents into situation summaries.

Agents with enough pseudo-position are vertices of a threshold graph: an
edge joins two agents when their combined proximity clears the cluster
threshold and their indicator profiles lie within a normalized distance
budget of each other. Connected components of that graph are the clusters,
each reduced to one CharacterisationRecord.

Cluster ids persist across cycles by maximal member overlap with the
previous labelling, so a cluster keeps its id while it grows or shrinks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .agents import AgentPool, AtnConfig, FactualAgent
from .ontology import Ontology
from .proximity import proximity


class StaleMember(Exception):
    """A cluster names an agent id that is no longer in the pool."""


class UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class ClusterConfig:
    theta: float = 0.4          # combined-proximity floor for an edge
    radius: float = 0.5         # budget on normalized indicator distance
    min_pp: float | None = None # eligibility floor; defaults to the first ATN threshold
    every: int = 1              # recluster every N cycles

    def __post_init__(self):
        if not 0 < self.theta <= 1:
            raise ValueError("theta must be in (0, 1]")
        if self.radius <= 0:
            raise ValueError("radius must be positive")
        if self.every < 1:
            raise ValueError("every must be at least 1")


@dataclass
class CharacterisationRecord:
    cluster_id: int
    dominant_type: str
    members: list[int]
    count: int
    centroid: tuple[float, float, float]    # mean pp, ps, pa over members
    max_state: str
    bbox: tuple[float, float, float, float] | None
    formed_cycle: int
    updated_cycle: int


def indicator_distance(a: FactualAgent, b: FactualAgent, pool: AgentPool) -> float:
    """Euclidean distance over (pp, ps, pa), each axis normalized to [-1, 1].

    Each axis is divided by the pool-wide maximum absolute value of that
    indicator; an axis that is zero everywhere contributes nothing.
    """
    total = 0.0
    for name in ("pp", "ps", "pa"):
        m = max((abs(getattr(x.indicators, name)) for x in pool.agents.values()), default=0.0)
        if m == 0.0:
            continue
        d = (getattr(a.indicators, name) - getattr(b.indicators, name)) / m
        total += d * d
    return math.sqrt(total)


def eligible_agents(pool: AgentPool, cfg: ClusterConfig, atn: AtnConfig) -> list[FactualAgent]:
    floor = atn.theta1 if cfg.min_pp is None else cfg.min_pp
    return [a for a in pool.ordered() if a.indicators.pp >= floor]


def linked(
    a: FactualAgent,
    b: FactualAgent,
    pool: AgentPool,
    ont: Ontology,
    cfg: ClusterConfig,
    spatial_scale: float | None = None,
    temporal_scale: float | None = None,
    kernel: str = "linear",
) -> bool:
    """The edge predicate: proximate enough and dynamically similar enough."""
    p = proximity(ont, a.feature, b.feature, spatial_scale, temporal_scale, kernel).combined
    if p < cfg.theta:
        return False
    return indicator_distance(a, b, pool) <= cfg.radius


def build_components(
    pool: AgentPool,
    ont: Ontology,
    cfg: ClusterConfig,
    atn: AtnConfig,
    spatial_scale: float | None = None,
    temporal_scale: float | None = None,
    kernel: str = "linear",
) -> list[list[int]]:
    """Connected components over eligible agents, as sorted id lists."""
    members = eligible_agents(pool, cfg, atn)
    uf = UnionFind([a.id for a in members])
    for i, a in enumerate(members):
        for b in members[i + 1:]:
            if linked(a, b, pool, ont, cfg, spatial_scale, temporal_scale, kernel):
                uf.union(a.id, b.id)
    groups: dict[int, list[int]] = {}
    for a in members:
        groups.setdefault(uf.find(a.id), []).append(a.id)
    return sorted(groups.values(), key=min)


def assign_cluster_ids(
    components: list[list[int]],
    previous: dict[int, list[int]],
) -> dict[int, list[int]]:
    """Label components, keeping ids stable by maximal member overlap.

    Each component takes the previous id it overlaps most (ties go to the
    lower id); each previous id is given out once. Components left over get
    fresh ids above any previous one, in order of smallest member.
    """
    taken: set[int] = set()
    labelled: dict[int, list[int]] = {}
    unlabelled: list[list[int]] = []
    for comp in components:
        comp_set = set(comp)
        best_id, best_overlap = None, 0
        for old_id in sorted(previous):
            if old_id in taken:
                continue
            overlap = len(comp_set & set(previous[old_id]))
            if overlap > best_overlap:
                best_id, best_overlap = old_id, overlap
        if best_id is None:
            unlabelled.append(comp)
        else:
            taken.add(best_id)
            labelled[best_id] = comp
    next_id = max(previous, default=0) + 1
    for comp in sorted(unlabelled, key=min):
        labelled[next_id] = comp
        next_id += 1
    return labelled


def summarize_cluster(
    cluster_id: int,
    member_ids: list[int],
    pool: AgentPool,
    formed_cycle: int,
    cycle: int,
) -> CharacterisationRecord:
    """Reduce one labelled component to its summary record.

    Dominant type is the most frequent type token (ties break to the
    lexicographically smallest); the centroid lives in indicator space; the
    bounding box covers member localisations, ignoring unknown ones.
    """
    members = []
    for i in sorted(member_ids):
        agent = pool.get(i)
        if agent is None:
            raise StaleMember(f"agent {i} is not in the pool")
        members.append(agent)
    counts: dict[str, int] = {}
    points: list[tuple[float, float]] = []
    for a in members:
        counts[a.feature.type] = counts.get(a.feature.type, 0) + 1
        loc = a.feature.localisation
        if loc is not None:
            points.append(loc)
    dominant = min(t for t in counts if counts[t] == max(counts.values()))
    n = len(members)
    centroid = (
        sum(a.indicators.pp for a in members) / n,
        sum(a.indicators.ps for a in members) / n,
        sum(a.indicators.pa for a in members) / n,
    )
    bbox = None
    if points:
        bbox = (
            min(p[0] for p in points),
            min(p[1] for p in points),
            max(p[0] for p in points),
            max(p[1] for p in points),
        )
    return CharacterisationRecord(
        cluster_id=cluster_id,
        dominant_type=dominant,
        members=[a.id for a in members],
        count=n,
        centroid=centroid,
        max_state=max(a.state for a in members).label,
        bbox=bbox,
        formed_cycle=formed_cycle,
        updated_cycle=cycle,
    )


class Characteriser:
    """Per-engine clustering state: stable labels and formation cycles."""

    def __init__(self):
        self.previous: dict[int, list[int]] = {}
        self.formed: dict[int, int] = {}

    def step(
        self,
        pool: AgentPool,
        ont: Ontology,
        cfg: ClusterConfig,
        atn: AtnConfig,
        cycle: int,
        spatial_scale: float | None = None,
        temporal_scale: float | None = None,
        kernel: str = "linear",
    ) -> list[CharacterisationRecord]:
        components = build_components(
            pool, ont, cfg, atn, spatial_scale, temporal_scale, kernel)
        labelled = assign_cluster_ids(components, self.previous)
        for cid in labelled:
            self.formed.setdefault(cid, cycle)
        self.formed = {cid: c for cid, c in self.formed.items() if cid in labelled}
        self.previous = labelled
        return [
            summarize_cluster(cid, labelled[cid], pool, self.formed[cid], cycle)
            for cid in sorted(labelled)
        ]
