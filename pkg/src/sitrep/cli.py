"""Command-line entry points.

  sitrep run       replay a scenario, optionally serving the live API
  sitrep gen       generate a synthetic scenario (and its map) from a spec
  sitrep validate  check an ontology file, optionally one feature against it
  sitrep inspect   pull one snapshot (or agent row) out of a snapshot log

Exit codes: 0 ok, 1 input error, 2 runtime fault.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .engine import run_scenario
from .features import FeatureError, parse_feature
from .ingest import (
    IngestError,
    generate_scenario,
    generate_worldmap,
    load_scenario_spec,
    load_worldmap,
    read_scenario,
    write_scenario,
    write_worldmap,
)
from .ontology import OntologyError, load_ontology, validate_feature

_INPUT_ERRORS = (OntologyError, IngestError, ConfigError, FeatureError,
                 FileNotFoundError, IsADirectoryError, PermissionError,
                 json.JSONDecodeError, UnicodeDecodeError)


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sitrep",
                                     description="situation-representation engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="replay a scenario")
    p_run.add_argument("--scenario", required=True)
    p_run.add_argument("--ontology", required=True)
    p_run.add_argument("--map", required=True)
    p_run.add_argument("--config")
    p_run.add_argument("--tick-ms", type=int)
    p_run.add_argument("--serve", metavar="HOST:PORT")
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--snapshot-log")

    p_gen = sub.add_parser("gen", help="generate a scenario from a spec")
    p_gen.add_argument("--spec", required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--out", required=True)

    p_val = sub.add_parser("validate", help="validate an ontology or a feature")
    p_val.add_argument("--ontology", required=True)
    p_val.add_argument("--feature")

    p_ins = sub.add_parser("inspect", help="inspect a snapshot log")
    p_ins.add_argument("--log", required=True)
    p_ins.add_argument("--cycle", type=int, required=True)
    p_ins.add_argument("--agent", type=int)

    return parser


def _cmd_run(args) -> int:
    ont = load_ontology(args.ontology)
    worldmap = load_worldmap(args.map)
    scenario = read_scenario(args.scenario)
    config = load_config(args.config)
    if args.tick_ms is not None:
        config.engine.tick_ms = args.tick_ms
    if args.seed is not None:
        config.engine.seed = args.seed
    if args.snapshot_log is not None:
        config.engine.snapshot_log = args.snapshot_log

    if args.serve:
        host, _, port_text = args.serve.rpartition(":")
        if not host or not port_text.isdigit():
            raise IngestError(f"--serve expects HOST:PORT, got {args.serve!r}")
        from .service import EngineDriver, create_app
        from .engine import Engine
        import uvicorn

        driver = EngineDriver(Engine(ont, worldmap, config), scenario)
        uvicorn.run(create_app(driver), host=host, port=int(port_text),
                    log_level="warning")
        return 0

    result = run_scenario(scenario, worldmap, ont, config)
    if config.engine.snapshot_log:
        result.write_log(config.engine.snapshot_log)
    final = result.final
    print(f"cycle={final['cycle']} agents={len(final['agents'])} "
          f"clusters={len(final['clusters'])}")
    return 0


def _cmd_gen(args) -> int:
    spec = load_scenario_spec(args.spec)
    spec.seed = args.seed
    scenario = generate_scenario(spec)
    worldmap = generate_worldmap(spec)
    out = Path(args.out)
    map_path = out.with_suffix(".map.jsonl") if out.suffix else Path(str(out) + ".map.jsonl")
    write_scenario(scenario, out)
    write_worldmap(worldmap, map_path)
    print(f"wrote {out} ({sum(len(b) for b in scenario.batches.values())} observations)")
    print(f"wrote {map_path} ({len(worldmap)} objects)")
    return 0


def _cmd_validate(args) -> int:
    ont = load_ontology(args.ontology)
    print(f"ontology ok: {len(ont.concepts)} concepts")
    if args.feature is None:
        return 0
    feature = parse_feature(args.feature)
    violations = validate_feature(ont, feature)
    if not violations:
        print("feature ok")
        return 0
    for v in violations:
        print(f"violation: {v.qualifier}: {v.message}")
    return 1


def _cmd_inspect(args) -> int:
    lines = Path(args.log).read_text().splitlines()
    for line in lines:
        if not line.strip():
            continue
        snapshot = json.loads(line)
        if snapshot.get("cycle") != args.cycle:
            continue
        if args.agent is None:
            print(json.dumps(snapshot, indent=2, sort_keys=True))
            return 0
        for row in snapshot.get("agents", []):
            if row.get("id") == args.agent:
                print(json.dumps(row, indent=2, sort_keys=True))
                return 0
        print(f"no agent {args.agent} in cycle {args.cycle}", file=sys.stderr)
        return 1
    print(f"no snapshot for cycle {args.cycle}", file=sys.stderr)
    return 1


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    handlers = {"run": _cmd_run, "gen": _cmd_gen,
                "validate": _cmd_validate, "inspect": _cmd_inspect}
    try:
        return handlers[args.command](args)
    except _INPUT_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except Exception as e:  # pragma: no cover - defensive
        print(f"fault: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
