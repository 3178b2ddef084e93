import json

import pytest
from hypothesis import given, strategies as st

from conftest import phenomenon
from sitrep.agents import AgentPool, AtnConfig, AtnState, FactualAgent, Indicators
from sitrep.characterisation import (
    Characteriser,
    ClusterConfig,
    StaleMember,
    assign_cluster_ids,
    build_components,
    eligible_agents,
    indicator_distance,
    linked,
    summarize_cluster,
)
from sitrep.features import make_feature
from sitrep.ontology import load_ontology

# a small world of four made-up phenomenon types whose relatedness graph is
# a chain: alpha - beta - gamma, with delta unrelated to everything
CHAIN_ONTOLOGY = json.dumps({
    "concepts": [
        {"name": "Object", "parent": None, "kind": "abstract", "attributes": [
            {"qualifier": "type", "domain": "identifier", "required": True},
            {"qualifier": "time", "domain": "integer-range", "lo": 0, "hi": 10**9, "required": True},
            {"qualifier": "localisation", "domain": "coordinate-pair", "required": True},
        ]},
        {"name": "Alpha", "parent": "Object", "attributes": []},
        {"name": "Beta", "parent": "Object", "attributes": []},
        {"name": "Gamma", "parent": "Object", "attributes": []},
        {"name": "Delta", "parent": "Object", "attributes": []},
    ],
    "proximity": [
        {"a": "alpha", "b": "beta", "value": 0.7},
        {"a": "beta", "b": "gamma", "value": 0.8},
        {"a": "alpha", "b": "gamma", "value": 0.2},
    ],
    "scales": {"spatial": 1000, "temporal": 10},
    "persistence": {"Alpha": "temporary", "Beta": "temporary",
                    "Gamma": "temporary", "Delta": "temporary"},
})


CHAIN_ONT = load_ontology(CHAIN_ONTOLOGY)


@pytest.fixture
def chain_ont():
    return CHAIN_ONT


@pytest.fixture
def atn():
    return AtnConfig()


@pytest.fixture
def ccfg():
    return ClusterConfig()


def add_agent(pool, type_token, pp, loc=(0.0, 0.0), time=0, ps=0.0, pa=0.0,
              state=AtnState.DELIBERATION, concept=None):
    concept = concept or type_token.capitalize()
    aid = pool.allocate_id()
    a = FactualAgent(
        id=aid,
        feature=make_feature(concept, aid, type_token, time, loc),
        birth_cycle=0,
        indicators=Indicators(pp=pp, ps=ps, pa=pa),
        state=state,
    )
    pool.add(a)
    return a


class TestConfig:
    @pytest.mark.parametrize("kwargs", [
        {"theta": 0.0}, {"theta": 1.5}, {"radius": 0.0}, {"every": 0},
    ])
    def test_bad_values_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ClusterConfig(**kwargs)


class TestIndicatorDistance:
    def test_identical_profiles_are_at_distance_zero(self, chain_ont):
        pool = AgentPool()
        a = add_agent(pool, "alpha", pp=5.0, ps=1.0, pa=0.5)
        b = add_agent(pool, "beta", pp=5.0, ps=1.0, pa=0.5)
        assert indicator_distance(a, b, pool) == 0.0

    def test_axes_normalize_by_the_pool_maximum(self, chain_ont):
        pool = AgentPool()
        a = add_agent(pool, "alpha", pp=10.0)
        b = add_agent(pool, "beta", pp=2.0)
        # ps and pa are zero pool-wide, so only the pp axis contributes
        assert indicator_distance(a, b, pool) == pytest.approx(0.8)

    def test_quiet_axes_contribute_nothing(self, chain_ont):
        pool = AgentPool()
        a = add_agent(pool, "alpha", pp=1.0, ps=3.0)
        b = add_agent(pool, "beta", pp=1.0, ps=-3.0)
        assert indicator_distance(a, b, pool) == pytest.approx(2.0)


class TestEligibility:
    def test_floor_defaults_to_the_first_atn_threshold(self, atn, ccfg):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=0.5)
        live = add_agent(pool, "beta", pp=1.0)
        assert [a.id for a in eligible_agents(pool, ccfg, atn)] == [live.id]

    def test_explicit_floor_overrides(self, atn):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=0.5)
        add_agent(pool, "beta", pp=1.0)
        cfg = ClusterConfig(min_pp=0.2)
        assert len(eligible_agents(pool, cfg, atn)) == 2


class TestComponents:
    def test_chain_links_transitively_but_delta_stays_apart(self, chain_ont, atn, ccfg):
        pool = AgentPool()
        for t in ("alpha", "beta", "gamma", "delta"):
            add_agent(pool, t, pp=5.0)
        assert build_components(pool, chain_ont, ccfg, atn) == [[1, 2, 3], [4]]

    def test_weak_relation_alone_does_not_link(self, chain_ont, atn, ccfg):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=5.0)
        add_agent(pool, "gamma", pp=5.0)     # alpha-gamma is only 0.2 < theta
        assert build_components(pool, chain_ont, ccfg, atn) == [[1], [2]]

    def test_dissimilar_dynamics_block_an_edge(self, chain_ont, atn, ccfg):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=10.0)
        add_agent(pool, "beta", pp=1.0)      # normalized pp gap 0.9 > radius
        assert build_components(pool, chain_ont, ccfg, atn) == [[1], [2]]

    def test_distance_attenuation_blocks_an_edge(self, chain_ont, atn, ccfg):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=5.0, loc=(0.0, 0.0))
        add_agent(pool, "beta", pp=5.0, loc=(600.0, 0.0))   # 0.7 * 0.4 < theta
        assert build_components(pool, chain_ont, ccfg, atn) == [[1], [2]]

    def test_components_partition_the_eligible_agents(self, chain_ont, atn, ccfg):
        pool = AgentPool()
        for t in ("alpha", "beta", "gamma", "delta", "alpha"):
            add_agent(pool, t, pp=5.0)
        add_agent(pool, "beta", pp=0.1)      # ineligible
        comps = build_components(pool, chain_ont, ccfg, atn)
        flat = [i for comp in comps for i in comp]
        assert sorted(flat) == [1, 2, 3, 4, 5]
        assert len(set(flat)) == len(flat)

    @given(st.data())
    def test_matches_a_brute_force_component_search(self, data):
        atn, ccfg = AtnConfig(), ClusterConfig()
        pool = AgentPool()
        n = data.draw(st.integers(min_value=2, max_value=7))
        for _ in range(n):
            add_agent(
                pool,
                data.draw(st.sampled_from(["alpha", "beta", "gamma", "delta"])),
                pp=data.draw(st.floats(1.0, 15.0)),
                ps=data.draw(st.floats(-2.0, 2.0)),
                pa=data.draw(st.floats(-2.0, 2.0)),
                loc=(data.draw(st.floats(0, 800)), 0.0),
            )
        got = build_components(pool, CHAIN_ONT, ccfg, atn)

        agents = pool.ordered()
        neighbours = {a.id: set() for a in agents}
        for a in agents:
            for b in agents:
                if a.id < b.id and linked(a, b, pool, CHAIN_ONT, ccfg):
                    neighbours[a.id].add(b.id)
                    neighbours[b.id].add(a.id)
        seen, expected = set(), []
        for a in agents:
            if a.id in seen:
                continue
            comp, frontier = set(), [a.id]
            while frontier:
                x = frontier.pop()
                if x in comp:
                    continue
                comp.add(x)
                frontier.extend(neighbours[x] - comp)
            seen |= comp
            expected.append(sorted(comp))
        assert got == sorted(expected, key=min)


class TestIdAssignment:
    def test_first_labelling_numbers_from_one(self):
        assert assign_cluster_ids([[3, 7], [9]], {}) == {1: [3, 7], 2: [9]}

    def test_growth_keeps_the_id(self):
        previous = {1: [3, 7]}
        assert assign_cluster_ids([[3, 7, 9]], previous) == {1: [3, 7, 9]}

    def test_split_keeps_the_id_on_the_bigger_overlap(self):
        previous = {1: [1, 2, 3]}
        got = assign_cluster_ids([[1, 2], [3, 4]], previous)
        assert got == {1: [1, 2], 2: [3, 4]}

    def test_overlap_ties_go_to_the_lower_previous_id(self):
        previous = {1: [1], 2: [2]}
        assert assign_cluster_ids([[1, 2]], previous) == {1: [1, 2]}

    def test_each_previous_id_is_given_out_once(self):
        previous = {3: [5, 6]}
        got = assign_cluster_ids([[5], [6]], previous)
        assert got == {3: [5], 4: [6]}

    def test_fresh_ids_never_reuse_retired_ones(self):
        previous = {2: [1], 5: [9]}
        got = assign_cluster_ids([[3], [4]], previous)
        assert got == {6: [3], 7: [4]}


class TestSummaries:
    def test_dominant_type_is_the_plurality(self, chain_ont):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=5.0)
        add_agent(pool, "alpha", pp=5.0)
        add_agent(pool, "beta", pp=5.0)
        rec = summarize_cluster(1, [1, 2, 3], pool, formed_cycle=2, cycle=6)
        assert rec.dominant_type == "alpha"
        assert rec.count == 3
        assert rec.formed_cycle == 2 and rec.updated_cycle == 6

    def test_dominant_type_ties_break_lexicographically(self, chain_ont):
        pool = AgentPool()
        add_agent(pool, "gamma", pp=5.0)
        add_agent(pool, "beta", pp=5.0)
        rec = summarize_cluster(1, [1, 2], pool, 0, 0)
        assert rec.dominant_type == "beta"

    def test_centroid_is_the_indicator_mean(self, chain_ont):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=4.0, ps=1.0, pa=-1.0)
        add_agent(pool, "beta", pp=6.0, ps=3.0, pa=1.0)
        rec = summarize_cluster(1, [1, 2], pool, 0, 0)
        assert rec.centroid == pytest.approx((5.0, 2.0, 0.0))

    def test_max_state_and_bbox(self, chain_ont):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=5.0, loc=(10.0, 40.0), state=AtnState.INITIALISATION)
        add_agent(pool, "beta", pp=5.0, loc=(30.0, 20.0), state=AtnState.DECISION)
        add_agent(pool, "gamma", pp=5.0, loc=None)          # unknown stays out
        rec = summarize_cluster(1, [1, 2, 3], pool, 0, 0)
        assert rec.max_state == "decision"
        assert rec.bbox == (10.0, 20.0, 30.0, 40.0)

    def test_all_unknown_localisations_mean_no_bbox(self, chain_ont):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=5.0, loc=None)
        rec = summarize_cluster(1, [1], pool, 0, 0)
        assert rec.bbox is None

    def test_stale_member_is_a_fault(self, chain_ont):
        pool = AgentPool()
        add_agent(pool, "alpha", pp=5.0)
        with pytest.raises(StaleMember):
            summarize_cluster(1, [1, 99], pool, 0, 0)


class TestCharacteriser:
    def test_labels_survive_growth_and_record_formation(self, chain_ont, atn, ccfg):
        pool = AgentPool()
        ch = Characteriser()
        add_agent(pool, "alpha", pp=5.0)
        add_agent(pool, "beta", pp=5.0)
        first = ch.step(pool, chain_ont, ccfg, atn, cycle=3)
        assert [(r.cluster_id, r.members) for r in first] == [(1, [1, 2])]
        assert (first[0].formed_cycle, first[0].updated_cycle) == (3, 3)

        add_agent(pool, "gamma", pp=5.0)
        add_agent(pool, "delta", pp=5.0)
        second = ch.step(pool, chain_ont, ccfg, atn, cycle=4)
        assert [(r.cluster_id, r.members) for r in second] == [(1, [1, 2, 3]), (2, [4])]
        assert (second[0].formed_cycle, second[0].updated_cycle) == (3, 4)
        assert (second[1].formed_cycle, second[1].updated_cycle) == (4, 4)

    def test_labels_restart_once_every_cluster_is_gone(self, chain_ont, atn, ccfg):
        # fresh ids count up from the previous labelling, so they are never
        # reused while any cluster survives, but a total wipe resets the clock
        pool = AgentPool()
        ch = Characteriser()
        a = add_agent(pool, "alpha", pp=5.0)
        ch.step(pool, chain_ont, ccfg, atn, cycle=1)
        pool.remove(a.id)
        assert ch.step(pool, chain_ont, ccfg, atn, cycle=2) == []
        add_agent(pool, "beta", pp=5.0)
        third = ch.step(pool, chain_ont, ccfg, atn, cycle=3)
        assert [(r.cluster_id, r.formed_cycle) for r in third] == [(1, 3)]

    def test_empty_pool_yields_no_clusters(self, chain_ont, atn, ccfg):
        assert Characteriser().step(AgentPool(), chain_ont, ccfg, atn, cycle=1) == []
