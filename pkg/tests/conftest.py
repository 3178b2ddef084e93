import pytest

from sitrep.features import make_feature
from sitrep.ingest import fixture_path, load_worldmap, read_scenario
from sitrep.ontology import load_default_ontology


@pytest.fixture(scope="session")
def ont():
    return load_default_ontology()


@pytest.fixture(scope="session")
def fire_block_scenario():
    return read_scenario(fixture_path("fire-block.scenario"))


@pytest.fixture(scope="session")
def fire_block_map():
    return load_worldmap(fixture_path("fire-block.map.jsonl"))


def phenomenon(id=1, type="fire", intensity="starting", time=0, loc=(0.0, 0.0)):
    """Shorthand for a valid Phenomenon feature in tests."""
    return make_feature("Phenomenon", id, type, time, loc,
                        extra=[("intensity", intensity)])
