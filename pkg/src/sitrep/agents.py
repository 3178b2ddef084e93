"""Factual agents: indicator dynamics, the four-state automaton, acquaintances.

Each agent carries exactly one semantic feature and turns the stream of
reinforcements it receives (observation boosts, aid from close acquaintances,
aggression from opposite ones) into five indicators:

  pp  PseudoPosition    accumulated significance, decays by λ each cycle
  ps  PseudoSpeed       exact first difference of pp
  pa  PseudoAcceleration exact second difference
  satisfaction          EMA of ps, clamped to [-1, 1]
  constancy             dwell time in the current state, saturating at 1

The behavioural automaton moves Initialisation → Deliberation → Decision →
Action on pp thresholds, one step per cycle at most, and regresses after a
run of negative PseudoSpeed. Entering Action emits a salient fact.

All per-cycle reinforcements are computed against previous-cycle indicator
values before any agent is updated (synchronous update), which makes runs
independent of pool iteration order.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import IntEnum

from .features import SemanticFeature
from .ontology import Ontology, Persistence
from .proximity import proximity


class AtnState(IntEnum):
    INITIALISATION = 0
    DELIBERATION = 1
    DECISION = 2
    ACTION = 3

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass
class AtnConfig:
    """Thresholds and time constants of the agent dynamics.

    The automaton thresholds must be strictly increasing. Forward moves
    require pp strictly above the threshold, so a lone single-report agent
    (pp peaks at exactly obs_boost) stays in Initialisation.
    """

    theta1: float = 1.0
    theta2: float = 3.0
    theta3: float = 6.0
    s_min: float = 0.2              # satisfaction gate for entering Action
    regression_k: int = 3           # consecutive negative-PS cycles to regress
    decay: float = 0.95             # λ applied to pp each cycle
    obs_boost: float = 1.0          # b added once per cycle with a fresh report
    link_threshold: float = 0.1     # |proximity| below this is no acquaintance
    pp_ref: float = 10.0            # P normalizing acquaintance pp weight
    ema_alpha: float = 0.3          # α of the satisfaction EMA
    window: int = 5                 # W: constancy saturation / reaper patience
    death_floor: float = 0.1        # ε under which an idle agent fades out

    def __post_init__(self):
        if not (self.theta1 < self.theta2 < self.theta3):
            raise ValueError("thresholds must satisfy theta1 < theta2 < theta3")
        for name in ("decay", "obs_boost", "pp_ref", "ema_alpha", "window", "death_floor"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if not 0 < self.link_threshold < 1:
            raise ValueError("link_threshold must be in (0, 1)")


@dataclass
class Indicators:
    pp: float = 0.0
    ps: float = 0.0
    pa: float = 0.0
    satisfaction: float = 0.0
    constancy: float = 0.0
    ps_ema: float = 0.0


@dataclass
class SalientFact:
    """Emitted when an agent reaches the Action state."""

    cycle: int
    agent_id: int
    type: str
    key: str
    pp: float


@dataclass
class FactualAgent:
    id: int
    feature: SemanticFeature
    birth_cycle: int
    indicators: Indicators = field(default_factory=Indicators)
    state: AtnState = AtnState.INITIALISATION
    acquaintances: dict[int, float] = field(default_factory=dict)
    negative_streak: int = 0
    low_pp_streak: int = 0
    last_boost_cycle: int = 0
    state_entry_cycle: int = 0
    boosted: bool = False           # received a fresh report this cycle

    @property
    def close(self) -> dict[int, float]:
        return {j: v for j, v in self.acquaintances.items() if v > 0}

    @property
    def opposite(self) -> dict[int, float]:
        return {j: v for j, v in self.acquaintances.items() if v < 0}


class AgentPool:
    """All live factual agents, keyed both by agent id and by feature key."""

    def __init__(self):
        self.agents: dict[int, FactualAgent] = {}
        self._by_key: dict = {}
        self._next_id = 1

    def __len__(self) -> int:
        return len(self.agents)

    def __iter__(self):
        return iter(self.ordered())

    def ordered(self) -> list[FactualAgent]:
        return [self.agents[i] for i in sorted(self.agents)]

    def get(self, agent_id: int) -> FactualAgent | None:
        return self.agents.get(agent_id)

    def by_key(self, key) -> FactualAgent | None:
        return self._by_key.get(key)

    def add(self, agent: FactualAgent) -> None:
        self.agents[agent.id] = agent
        self._by_key[agent.feature.key] = agent

    def remove(self, agent_id: int) -> None:
        agent = self.agents.pop(agent_id)
        del self._by_key[agent.feature.key]
        for other in self.agents.values():
            other.acquaintances.pop(agent_id, None)

    def allocate_id(self) -> int:
        i = self._next_id
        self._next_id += 1
        return i


def spawn_or_merge(pool: AgentPool, f: SemanticFeature, cfg: AtnConfig, cycle: int) -> tuple[int, str]:
    """Route a feature to its agent: update the same-key agent or create one.

    Either way the agent is marked observation-boosted for this cycle.
    """
    existing = pool.by_key(f.key)
    if existing is not None:
        existing.feature = f
        existing.last_boost_cycle = cycle
        existing.boosted = True
        return existing.id, "merged"
    agent = FactualAgent(
        id=pool.allocate_id(),
        feature=f,
        birth_cycle=cycle,
        last_boost_cycle=cycle,
        state_entry_cycle=cycle,
        boosted=True,
    )
    pool.add(agent)
    return agent.id, "created"


def update_acquaintances(
    a: FactualAgent,
    pool: AgentPool,
    ont: Ontology,
    cfg: AtnConfig,
    spatial_scale: float | None = None,
    temporal_scale: float | None = None,
    kernel: str = "linear",
) -> list[tuple[str, int, float]]:
    """Recompute this agent's links to every other agent.

    Links exist where |combined proximity| reaches the threshold; the cached
    value's sign is the close/opposite partition. Returns the changes made as
    (op, other id, proximity) tuples.
    """
    changes: list[tuple[str, int, float]] = []
    for other in pool.ordered():
        if other.id == a.id:
            continue
        p = proximity(ont, a.feature, other.feature, spatial_scale, temporal_scale, kernel).combined
        if abs(p) >= cfg.link_threshold:
            had = other.id in a.acquaintances
            if not had or a.acquaintances[other.id] != p:
                changes.append(("set" if had else "add", other.id, p))
            a.acquaintances[other.id] = p
        elif other.id in a.acquaintances:
            del a.acquaintances[other.id]
            changes.append(("drop", other.id, p))
    return changes


def compute_reinforcement(a: FactualAgent, pool: AgentPool, ont: Ontology, cfg: AtnConfig) -> float:
    """This cycle's reinforcement from fresh reports and acquaintances.

    Must run before any indicator update of the cycle: acquaintance pp values
    are read as previous-cycle values (synchronous update). Each neighbour
    contributes proximity × clamp(pp/P, 0, 1), so aid is capped and agents
    with non-positive pp exert no pull either way.
    """
    r = cfg.obs_boost if a.boosted else 0.0
    for j in sorted(a.acquaintances):
        other = pool.get(j)
        if other is None:
            continue
        weight = min(max(other.indicators.pp, 0.0) / cfg.pp_ref, 1.0)
        r += a.acquaintances[j] * weight
    return r


def update_indicators(a: FactualAgent, r: float, cfg: AtnConfig, cycle: int) -> Indicators:
    """Apply one cycle of the indicator recurrence.

    pp decays then absorbs the reinforcement; ps and pa are its exact first
    and second differences, so `ps == Δpp` and `pa == Δps` hold identically.
    """
    ind = a.indicators
    pp = cfg.decay * ind.pp + r
    ps = pp - ind.pp
    pa = ps - ind.ps
    ps_ema = cfg.ema_alpha * ps + (1.0 - cfg.ema_alpha) * ind.ps_ema
    satisfaction = min(1.0, max(-1.0, ps_ema))
    constancy = min(1.0, (cycle - a.state_entry_cycle) / cfg.window)
    a.indicators = Indicators(pp, ps, pa, satisfaction, constancy, ps_ema)
    return a.indicators


def step_atn(a: FactualAgent, cfg: AtnConfig, cycle: int) -> SalientFact | None:
    """Advance the automaton by at most one state; indicators must be current.

    Regression (a run of regression_k negative-PS cycles) takes precedence
    over forward moves. Returns the salient fact when Action is entered.
    """
    ind = a.indicators
    if ind.ps < 0:
        a.negative_streak += 1
    else:
        a.negative_streak = 0

    if a.negative_streak >= cfg.regression_k and a.state > AtnState.INITIALISATION:
        a.state = AtnState(a.state - 1)
        a.state_entry_cycle = cycle
        a.negative_streak = 0
        return None

    advanced = False
    if a.state is AtnState.INITIALISATION and ind.pp > cfg.theta1:
        advanced = True
    elif a.state is AtnState.DELIBERATION and ind.pp > cfg.theta2 and ind.ps > 0:
        advanced = True
    elif a.state is AtnState.DECISION and ind.pp > cfg.theta3 and ind.satisfaction >= cfg.s_min:
        advanced = True
    if not advanced:
        return None

    a.state = AtnState(a.state + 1)
    a.state_entry_cycle = cycle
    if a.state is AtnState.ACTION:
        return SalientFact(cycle, a.id, a.feature.type, str(a.feature.key), ind.pp)
    return None


def reap(pool: AgentPool, ont: Ontology, cfg: AtnConfig, cycle: int) -> list[int]:
    """Remove faded and expired agents; returns the removed ids.

    An agent fades out after its pp sits under the death floor for a full
    window while it is still in Initialisation and unboosted. Agents whose
    key concept has punctual persistence (messages) expire a window after
    birth regardless: their relevance is instantaneous by definition.
    """
    removed: list[int] = []
    for agent in pool.ordered():
        persistence = ont.persistence.get(agent.feature.key.concept)
        if persistence is Persistence.PUNCTUAL and cycle - agent.birth_cycle >= cfg.window:
            removed.append(agent.id)
            continue
        if agent.state is AtnState.INITIALISATION and agent.indicators.pp < cfg.death_floor:
            agent.low_pp_streak += 1
        else:
            agent.low_pp_streak = 0
        if agent.low_pp_streak >= cfg.window and cycle - agent.last_boost_cycle >= cfg.window:
            removed.append(agent.id)
    for agent_id in removed:
        pool.remove(agent_id)
    return removed
