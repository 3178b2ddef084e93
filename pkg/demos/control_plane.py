"""Drive the live control plane headlessly: freeze, step, inspect, resume.

Starts the engine driver on its own thread exactly as the HTTP service does,
but talks to it through the in-process command queue, so you can see the
ack/error/stream protocol without opening a socket.

Run with:  python3 demos/control_plane.py
"""

import json
import time

from sitrep.config import load_config
from sitrep.ingest import fixture_path, load_worldmap, read_scenario
from sitrep.ontology import load_default_ontology
from sitrep.service import build_service, decode_stream_message


def show(label, message):
    print(f"{label:<10} {json.dumps(message, sort_keys=True)}")


def drain(sub, limit=3):
    seen = 0
    while seen < limit:
        line = sub.pop()
        if line is None:
            time.sleep(0.005)
            continue
        message = decode_stream_message(line)
        compact = {k: message[k] for k in ("kind", "cycle") if k in message}
        if message["kind"] == "snapshot":
            compact["agents"] = len(message["agents"])
        show("stream <-", compact)
        seen += 1


def main():
    ont = load_default_ontology()
    scenario = read_scenario(fixture_path("fire-block.scenario"))
    worldmap = load_worldmap(fixture_path("fire-block.map.jsonl"))
    config = load_config('{"engine": {"tick_ms": 20}}')
    driver, _app = build_service(ont, worldmap, scenario, config)

    driver.start()
    try:
        time.sleep(0.3)                      # let a few live cycles elapse
        show("control ->", {"cmd": "freeze"})
        show("ack    <-", driver.submit({"cmd": "freeze"}))
        sub = driver.subscribe()
        drain(sub)                           # heartbeats now repeat one cycle

        for _ in range(3):
            show("ack    <-", driver.submit({"cmd": "step"}))

        frozen = driver.engine.latest
        target = frozen["agents"][0]["id"]
        answer = driver.submit({"cmd": "inspect", "agent": target})
        show("inspect<-", {"id": answer["agent"]["id"],
                           "state": answer["agent"]["state"],
                           "pp": answer["agent"]["pp"],
                           "acquaintances": answer["agent"]["acquaintances"]})

        show("ack    <-", driver.submit({"cmd": "set-config", "key": "scales.spatial",
                                         "value": 500}))
        show("error  <-", driver.submit({"cmd": "set-config", "key": "atn.theta1",
                                         "value": 2}))
        show("ack    <-", driver.submit({"cmd": "resume"}))
        time.sleep(0.1)
        drain(sub, limit=2)                  # cycles advance on their own again
    finally:
        driver.unsubscribe(sub)
        driver.stop()
    print("driver stopped cleanly")


if __name__ == "__main__":
    main()
