"""Shared-scene session core: client registry, serialized application, ordered deltas.

Transport-free so the protocol can be tested in process. Each client has its
own fusion state and gesture pipeline; the scene is shared and mutated only
here, in event arrival order. Every applied batch increments seq by exactly
one and is broadcast as a Delta carrying the post-application scene hash, so
replicas can verify convergence per delta.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .directives import Directive, directive_from_json, directive_to_json
from .fusion import (
    DEFAULT_CONFIG,
    EventOrderError,
    FusionConfig,
    FusionState,
    InputEvent,
    SpeechChunk,
    event_from_json,
    initial_state,
    step,
)
from .gestures import FrameOrderError, GestureProcessor, LandmarkFrame, parse_landmark_record
from .lexicon import Lexicon
from .scene import Scene, SceneError, apply_all, canonical_dict, scene_hash

log = logging.getLogger(__name__)


class SessionError(Exception):
    """Protocol-level failure; code goes on the wire as Error{code, detail}."""

    def __init__(self, code: str, detail: str):
        super().__init__(f"{code}: {detail}")
        self.code = code
        self.detail = detail


@dataclass
class ClientState:
    client_id: str
    name: str
    fusion: FusionState
    gestures: GestureProcessor


@dataclass
class Session:
    session_id: str
    lexicon: Lexicon
    config: FusionConfig = DEFAULT_CONFIG
    scene: Scene = field(default_factory=Scene)
    clients: dict[str, ClientState] = field(default_factory=dict)
    seq: int = 0
    _next_client: int = 1


@dataclass(frozen=True)
class Delta:
    seq: int
    directives: tuple[Directive, ...]
    scene_hash: str


def welcome_message(session: Session, client_id: str) -> dict:
    return {
        "type": "welcome",
        "client_id": client_id,
        "snapshot": canonical_dict(session.scene),
        "hud": session.lexicon.hud_listing(),
        "seq": session.seq,
    }


def delta_message(delta: Delta) -> dict:
    return {
        "type": "delta",
        "seq": delta.seq,
        "directives": [directive_to_json(d) for d in delta.directives],
        "scene_hash": delta.scene_hash,
    }


def error_message(code: str, detail: str) -> dict:
    return {"type": "error", "code": code, "detail": detail}


def validate_hello(message: object) -> tuple[str, str]:
    """Returns (session_id, client_name) or raises SessionError("bad_hello")."""
    if not isinstance(message, dict) or message.get("type") != "hello":
        raise SessionError("bad_hello", "first message must be a hello")
    session_id = message.get("session_id")
    client_name = message.get("client_name")
    if not isinstance(session_id, str) or not session_id:
        raise SessionError("bad_hello", "session_id must be a non-empty string")
    if not isinstance(client_name, str):
        raise SessionError("bad_hello", "client_name must be a string")
    return session_id, client_name


def handle_connect(session: Session, hello: dict) -> tuple[Session, dict]:
    """Register a new client and build its Welcome (snapshot + HUD + seq)."""
    _, client_name = validate_hello(hello)
    client_id = f"c{session._next_client}"
    session._next_client += 1
    session.clients[client_id] = ClientState(
        client_id=client_id,
        name=client_name,
        fusion=initial_state(),
        gestures=GestureProcessor(viewport=session.config.viewport),
    )
    return session, welcome_message(session, client_id)


def handle_event(
    session: Session, client_id: str, event: InputEvent | LandmarkFrame
) -> tuple[Session, Delta | None]:
    """Fuse one client event against the shared scene; apply atomically.

    Landmark frames are expanded through the client's gesture pipeline first.
    Events that produce no directive produce no delta. On apply failure the
    scene and the client's fusion state are both left unchanged.
    """
    client = session.clients.get(client_id)
    if client is None:
        raise SessionError("unknown_client", f"no client {client_id!r} in session")
    try:
        if isinstance(event, LandmarkFrame):
            gesture_events = client.gestures.feed(event)
            inputs = [InputEvent(event.t, g) for g in gesture_events]
        else:
            inputs = [event]
        fusion = client.fusion
        directives: list[Directive] = []
        for ie in inputs:
            fusion, emitted = step(fusion, ie, session.lexicon, session.scene, session.config)
            directives.extend(emitted)
    except (EventOrderError, FrameOrderError) as exc:
        # out-of-order input is a client bug, not a session failure
        raise SessionError("bad_event", str(exc)) from exc
    if not directives:
        client.fusion = fusion
        return session, None
    _flag_concurrent_transforms(session, client_id, fusion)
    try:
        new_scene = apply_all(session.scene, directives, session.config.viewport)
    except SceneError as exc:
        raise SessionError("apply_failed", str(exc)) from exc
    session.scene = new_scene
    client.fusion = fusion
    session.seq += 1
    delta = Delta(session.seq, tuple(directives), scene_hash(new_scene))
    return session, delta


def _target_of(state: FusionState) -> int | None:
    mode = state.mode
    snapshot = getattr(mode, "snapshot", None)
    return snapshot.object_id if snapshot is not None else None


def _flag_concurrent_transforms(session: Session, client_id: str, fusion: FusionState) -> None:
    # Last writer wins on commit; we flag the overlap rather than prevent it.
    target = _target_of(fusion)
    if target is None:
        return
    for other_id, other in session.clients.items():
        if other_id != client_id and _target_of(other.fusion) == target:
            log.warning(
                "clients %s and %s are both transforming object %d; last commit wins",
                client_id, other_id, target,
            )


def decode_event_payload(message: dict) -> InputEvent | LandmarkFrame:
    """Decode a wire Event message body into an input event or landmark frame."""
    body = message.get("event")
    if not isinstance(body, dict):
        raise SessionError("bad_event", "event message must carry an 'event' object")
    payload = body.get("payload")
    if isinstance(payload, dict) and payload.get("kind") == "landmark":
        t = body.get("t")
        if not isinstance(t, int) or isinstance(t, bool):
            raise SessionError("bad_event", "event 't' must be integer milliseconds")
        try:
            return parse_landmark_record(
                {"t": t, "hand": payload.get("hand"), "points": payload.get("points")}
            )
        except ValueError as exc:
            raise SessionError("bad_event", str(exc)) from exc
    try:
        return event_from_json(body)
    except (KeyError, ValueError, TypeError) as exc:
        raise SessionError("bad_event", str(exc)) from exc


def speech_event(t: int, text: str) -> InputEvent:
    """Convenience constructor for scripted clients and tests."""
    return InputEvent(t, SpeechChunk(text))


def apply_delta_json(snapshot_scene: Scene, delta_obj: dict, viewport) -> Scene:
    """Client-side replica step: apply a decoded Delta to a local scene."""
    directives = [directive_from_json(d) for d in delta_obj["directives"]]
    return apply_all(snapshot_scene, directives, viewport)
