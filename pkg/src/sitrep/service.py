"""Network face of the engine: snapshot stream plus a small control plane.

HTTP:
  GET  /health        liveness, cycle, frozen flag, agent count
  GET  /snapshot      the current snapshot
  GET  /agents/{id}   one agent inspected: snapshot row + acquaintances
  POST /control       {"cmd": "freeze" | "resume" | "step"}

Stream:
  GET /stream         WebSocket; server sends StreamMessages (kind one of
                      snapshot / ack / error / salient), client may send
                      control commands with the POST /control schema.

The engine runs on its own driver thread; the service only forwards
commands into it and fans immutable encoded snapshots out. A slow
subscriber never blocks the engine: its queue is bounded, overflow drops
the oldest messages and the drop count is reported in-band.
"""

from __future__ import annotations

import asyncio
import json
import queue
import threading
import time
from collections import deque
from contextlib import asynccontextmanager

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from .config import RunConfig
from .engine import Engine, encode_json_line
from .features import Observation, WorldMap
from .ingest import Scenario
from .ontology import Ontology

STREAM_KINDS = ("snapshot", "ack", "error", "salient")

_ERROR_STATUS = {
    "NotFrozen": 409,
    "UnknownAgent": 404,
    "UnknownConfigKey": 400,
    "UnknownCommand": 400,
    "ConfigError": 400,
}


def encode_stream_message(message: dict) -> str:
    """Canonical single-line wire form; decode(encode(m)) == m."""
    kind = message.get("kind")
    if kind not in STREAM_KINDS:
        raise ValueError(f"bad stream message kind {kind!r}")
    return encode_json_line(message)


def decode_stream_message(text: str) -> dict:
    message = json.loads(text)
    if not isinstance(message, dict) or message.get("kind") not in STREAM_KINDS:
        raise ValueError("not a stream message")
    return message


class Subscriber:
    """One stream consumer's bounded outbox (drop-oldest on overflow)."""

    def __init__(self, maxsize: int = 256):
        self.maxsize = maxsize
        self._items: deque[str] = deque()
        self._dropped = 0
        self._lock = threading.Lock()

    def push(self, line: str) -> None:
        with self._lock:
            if len(self._items) >= self.maxsize:
                self._items.popleft()
                self._dropped += 1
            self._items.append(line)

    def pop(self) -> str | None:
        with self._lock:
            if self._dropped:
                n, self._dropped = self._dropped, 0
                return encode_stream_message({
                    "kind": "error", "error": "SlowConsumer",
                    "message": f"dropped {n} stream messages"})
            if self._items:
                return self._items.popleft()
            return None


class _Pending:
    def __init__(self, command: dict):
        self.command = command
        self.reply: queue.Queue = queue.Queue(maxsize=1)


class EngineDriver:
    """Runs the engine on a dedicated thread at a fixed cadence.

    While running, each loop turn ticks once with the next scenario batch
    (empty once the scenario is exhausted) and broadcasts the snapshot.
    While frozen it broadcasts the unchanged snapshot as a heartbeat so
    subscribers can see that the cycle is holding still. Commands arriving
    between turns are applied in order and answered synchronously.
    """

    def __init__(self, engine: Engine, scenario: Scenario | None = None,
                 queue_size: int = 256):
        self.engine = engine
        self.scenario = scenario or Scenario()
        self.queue_size = queue_size
        self._commands: queue.Queue[_Pending] = queue.Queue()
        self._subscribers: list[Subscriber] = []
        self._sub_lock = threading.Lock()
        self._stop = threading.Event()
        self._thread: threading.Thread | None = None
        self._next_cycle = 1
        self._latest_line = encode_stream_message(
            {"kind": "snapshot", **engine.latest})
        engine.feed = self._next_batch

    # -- scenario feed -------------------------------------------------

    def _next_batch(self) -> list[Observation]:
        batch = self.scenario.batch(self._next_cycle)
        self._next_cycle += 1
        return batch

    # -- fan-out ---------------------------------------------------------

    def subscribe(self) -> Subscriber:
        sub = Subscriber(self.queue_size)
        with self._sub_lock:
            sub.push(self._latest_line)
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: Subscriber) -> None:
        with self._sub_lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    def _broadcast(self, lines: list[str]) -> None:
        with self._sub_lock:
            for sub in self._subscribers:
                for line in lines:
                    sub.push(line)

    def _broadcast_snapshot(self, snapshot: dict) -> None:
        lines = [encode_stream_message({"kind": "snapshot", **snapshot})]
        for fact in snapshot.get("salient", []):
            lines.append(encode_stream_message({"kind": "salient", **fact}))
        self._latest_line = lines[0]
        self._broadcast(lines)

    # -- control ---------------------------------------------------------

    def submit(self, command: dict, timeout: float = 10.0) -> dict:
        """Send one command to the engine thread and wait for its reply."""
        pending = _Pending(command)
        self._commands.put(pending)
        return pending.reply.get(timeout=timeout)

    def _apply(self, pending: _Pending) -> None:
        before = self.engine.cycle
        reply = self.engine.handle_control(pending.command)
        if self.engine.cycle != before:
            self._broadcast_snapshot(self.engine.latest)
        else:
            # freeze/resume rewrite the frozen flag without ticking; keep the
            # heartbeat line in step with it
            self._latest_line = encode_stream_message(
                {"kind": "snapshot", **self.engine.latest})
        pending.reply.put(reply)

    # -- the loop ----------------------------------------------------------

    @property
    def tick_seconds(self) -> float:
        ms = self.engine.cfg.engine.tick_ms
        return (ms if ms > 0 else 50) / 1000.0

    def _loop(self) -> None:
        while not self._stop.is_set():
            deadline = time.monotonic() + self.tick_seconds
            while True:
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    break
                try:
                    pending = self._commands.get(timeout=remaining)
                except queue.Empty:
                    break
                self._apply(pending)
            if self._stop.is_set():
                break
            if self.engine.frozen:
                self._broadcast([self._latest_line])
            else:
                self._broadcast_snapshot(self.engine.tick(self._next_batch()))

    def start(self) -> None:
        if self._thread is None:
            self._thread = threading.Thread(target=self._loop, daemon=True)
            self._thread.start()

    def stop(self) -> None:
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=5)
            self._thread = None


# ---------------------------------------------------------------------------
# HTTP + WebSocket app
# ---------------------------------------------------------------------------

def create_app(driver: EngineDriver) -> FastAPI:
    @asynccontextmanager
    async def lifespan(app: FastAPI):
        driver.start()
        try:
            yield
        finally:
            driver.stop()

    app = FastAPI(title="situation engine", lifespan=lifespan)

    @app.get("/health")
    def health():
        return {
            "status": "ok",
            "cycle": driver.engine.cycle,
            "frozen": driver.engine.frozen,
            "agents": len(driver.engine.pool),
        }

    @app.get("/snapshot")
    def snapshot():
        return JSONResponse(driver.engine.latest)

    @app.get("/agents/{agent_id}")
    def inspect_agent(agent_id: int):
        reply = driver.submit({"cmd": "inspect", "agent": agent_id})
        if reply.get("kind") == "error":
            return JSONResponse(reply, status_code=_ERROR_STATUS.get(reply["error"], 400))
        return JSONResponse(reply["agent"])

    @app.post("/control")
    def control(command: dict):
        reply = driver.submit(command)
        if reply.get("kind") == "error":
            return JSONResponse(reply, status_code=_ERROR_STATUS.get(reply["error"], 400))
        return JSONResponse(reply)

    @app.websocket("/stream")
    async def stream(ws: WebSocket):
        await ws.accept()
        sub = driver.subscribe()

        async def sender():
            while True:
                line = sub.pop()
                if line is None:
                    await asyncio.sleep(0.01)
                    continue
                await ws.send_text(line)

        async def receiver():
            while True:
                text = await ws.receive_text()
                try:
                    command = json.loads(text)
                except json.JSONDecodeError:
                    await ws.send_text(encode_stream_message(
                        {"kind": "error", "error": "BadCommand",
                         "message": "commands must be JSON objects"}))
                    continue
                reply = await asyncio.to_thread(driver.submit, command)
                await ws.send_text(encode_json_line(reply))

        tasks = [asyncio.create_task(sender()), asyncio.create_task(receiver())]
        try:
            done, pending = await asyncio.wait(tasks, return_when=asyncio.FIRST_COMPLETED)
            for t in pending:
                t.cancel()
            for t in done:
                exc = t.exception()
                if exc is not None and not isinstance(exc, WebSocketDisconnect):
                    raise exc
        except WebSocketDisconnect:
            pass
        finally:
            for t in tasks:
                t.cancel()
            driver.unsubscribe(sub)

    return app


def build_service(
    ont: Ontology,
    worldmap: WorldMap,
    scenario: Scenario | None = None,
    config: RunConfig | None = None,
) -> tuple[EngineDriver, FastAPI]:
    engine = Engine(ont, worldmap, config)
    driver = EngineDriver(engine, scenario)
    return driver, create_app(driver)


def serve(driver: EngineDriver, host: str, port: int) -> None:  # pragma: no cover
    """Run the service until interrupted; the driver follows app lifespan."""
    import uvicorn

    uvicorn.run(create_app(driver), host=host, port=port, log_level="warning")
