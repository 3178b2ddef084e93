"""Replay the bundled fire-block scenario and narrate what the engine does.

One building catches fire and escalates over eight cycles while a platoon
radios extinguish activity; five one-off noise reports land far away. Watch
the fire agent climb the state machine, emit its salient fact, and then see
the reinforcement loop between the fire and the extinguish activity keep
both alive long after the reports stop, while the noise agents fade out.

Run with:  python3 demos/fire_block_walkthrough.py
"""

from sitrep.engine import Engine
from sitrep.ingest import fixture_path, load_worldmap, read_scenario
from sitrep.ontology import load_default_ontology


def agent_row(snapshot, key):
    return next((a for a in snapshot["agents"] if a["key"] == key), None)


def main():
    ont = load_default_ontology()
    scenario = read_scenario(fixture_path("fire-block.scenario"))
    worldmap = load_worldmap(fixture_path("fire-block.map.jsonl"))
    engine = Engine(ont, worldmap)

    print(f"scenario: {scenario.name!r}, {scenario.duration} cycles, "
          f"{sum(len(b) for b in scenario.batches.values())} observations\n")

    pool_size = 0
    for cycle in range(1, scenario.duration + 1):
        snapshot = engine.tick(scenario.batch(cycle))
        fire = agent_row(snapshot, "Phenomenon#14")

        if cycle <= 9 and fire:
            print(f"cycle {cycle:>2}: fire pp={fire['pp']:<8} ps={fire['ps']:<8} "
                  f"state={fire['state']:<14} {fire['feature']}")
        for fact in snapshot["salient"]:
            print(f"cycle {cycle:>2}: *** salient: agent {fact['agent']} "
                  f"({fact['type']}) entered action at pp={fact['pp']} ***")
        if len(snapshot["agents"]) < pool_size:
            gone = pool_size - len(snapshot["agents"])
            print(f"cycle {cycle:>2}: reaper removed {gone} faded agent(s); "
                  f"{len(snapshot['agents'])} remain")
        pool_size = len(snapshot["agents"])

    print("\nfinal population (the fire and the extinguish activity sustain "
          "each other through their mutual acquaintance):")
    for row in engine.latest["agents"]:
        print(f"  {row['key']:<14} pp={row['pp']:<9} state={row['state']}")
    for cluster in engine.latest["clusters"]:
        print(f"cluster {cluster['id']}: members={cluster['members']} "
              f"dominant={cluster['dominant_type']!r} max_state={cluster['max_state']}")


if __name__ == "__main__":
    main()
