"""Websocket host for shared sessions: one JSON message per text frame.

Connections funnel events into a per-session lock so directive application
is serialized (one logical writer per scene); deltas fan out to every
connection in the session afterwards. Sessions are created on first Hello
and are independent of each other.
"""
from __future__ import annotations

import asyncio
import json
import logging
import os

from websockets.asyncio.server import serve

from .bindings import Keymap, lower
from .fusion import DEFAULT_CONFIG, FusionConfig
from .lexicon import Lexicon
from .session import (
    Session,
    SessionError,
    decode_event_payload,
    delta_message,
    error_message,
    handle_connect,
    handle_event,
    validate_hello,
    welcome_message,
)

log = logging.getLogger("modalcad.server")


def configure_logging() -> None:
    level = os.environ.get("MODALCAD_LOG", "INFO").upper()
    logging.basicConfig(level=getattr(logging, level, logging.INFO),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")


class SessionHub:
    """All live sessions plus their connections and write locks."""

    def __init__(self, lexicon: Lexicon, keymap: Keymap | None = None,
                 config: FusionConfig = DEFAULT_CONFIG):
        self.lexicon = lexicon
        self.keymap = keymap
        self.config = config
        self.sessions: dict[str, Session] = {}
        self.locks: dict[str, asyncio.Lock] = {}
        self.connections: dict[str, set] = {}

    def session_for(self, session_id: str) -> Session:
        if session_id not in self.sessions:
            self.sessions[session_id] = Session(
                session_id=session_id, lexicon=self.lexicon, config=self.config
            )
            self.locks[session_id] = asyncio.Lock()
            self.connections[session_id] = set()
            log.info("session %s created", session_id)
        return self.sessions[session_id]

    async def broadcast(self, session_id: str, message: dict) -> None:
        text = json.dumps(message)
        for ws in list(self.connections.get(session_id, ())):
            try:
                await ws.send(text)
            except Exception:
                self.connections[session_id].discard(ws)


async def _serve_connection(hub: SessionHub, websocket) -> None:
    session_id = None
    client_id = None
    try:
        async for raw in websocket:
            try:
                message = json.loads(raw)
            except json.JSONDecodeError:
                await websocket.send(json.dumps(error_message("bad_message", "invalid JSON")))
                continue
            if not isinstance(message, dict):
                await websocket.send(json.dumps(error_message("bad_message", "not an object")))
                continue
            mtype = message.get("type")
            try:
                if client_id is None:
                    # First message must be a hello. Registration and the
                    # welcome send stay inside the lock so no delta can slip
                    # between the snapshot and this connection joining the
                    # broadcast set.
                    sid, _ = validate_hello(message)
                    session = hub.session_for(sid)
                    async with hub.locks[sid]:
                        _, welcome = handle_connect(session, message)
                        session_id = sid
                        client_id = welcome["client_id"]
                        hub.connections[sid].add(websocket)
                        await websocket.send(json.dumps(welcome))
                    log.info("client %s joined session %s", client_id, sid)
                elif mtype == "hello":
                    # Resync request: fresh snapshot, same client id.
                    async with hub.locks[session_id]:
                        await websocket.send(
                            json.dumps(welcome_message(hub.sessions[session_id], client_id))
                        )
                elif mtype == "event":
                    event = decode_event_payload(message)
                    async with hub.locks[session_id]:
                        _, delta = handle_event(hub.sessions[session_id], client_id, event)
                        if delta is not None:
                            if hub.keymap is not None and log.isEnabledFor(logging.DEBUG):
                                for d in delta.directives:
                                    log.debug("actions %s", lower(d, hub.keymap))
                            await hub.broadcast(session_id, delta_message(delta))
                else:
                    await websocket.send(
                        json.dumps(error_message("bad_message", f"unknown type {mtype!r}"))
                    )
            except SessionError as exc:
                await websocket.send(json.dumps(error_message(exc.code, exc.detail)))
                if exc.code == "bad_hello":
                    await websocket.close()
                    return
    finally:
        if session_id is not None:
            hub.connections.get(session_id, set()).discard(websocket)
            log.info("client %s left session %s", client_id, session_id)


async def run_server(host: str, port: int, lexicon: Lexicon, keymap: Keymap | None = None,
                     config: FusionConfig = DEFAULT_CONFIG, ready: asyncio.Event | None = None):
    hub = SessionHub(lexicon, keymap, config)

    async def handler(websocket):
        await _serve_connection(hub, websocket)

    async with serve(handler, host, port) as server:
        log.info("listening on ws://%s:%d", host, port)
        if ready is not None:
            ready.set()
        await server.serve_forever()
