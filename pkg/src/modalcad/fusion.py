"""Merges speech and gesture events and turns them into scene directives.

The state machine has three modes. Idle handles one-shot commands, object
creation, selection pinches and grab entry. Transforming collects an axis
constraint and a numeric magnitude for translate/rotate/scale, then commits
on "enter" or cancels on "escape". Grabbing translates the grabbed object in
the view plane as the cursor moves, committing on pinch release or "enter".

Anything unrecognized or inapplicable is a no-op: users retry, the engine
never errors on input content.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .directives import (
    Cancel,
    Commit,
    Create,
    Directive,
    SelectAt,
    SetTransform,
    Undo,
    Vec3,
    ViewFront,
)
from .gestures import (
    DEFAULT_VIEWPORT,
    CursorMove,
    GestureEvent,
    PinchEnd,
    PinchStart,
    Viewport,
    gesture_event_from_json,
    gesture_event_to_json,
)
from .lexicon import AXIS_COMMANDS, Lexicon, match_command, parse_number
from .scene import Scene, pick

GRAB_GAIN = 0.01  # scene units per pixel of cursor travel
GREATER_FACTOR = 1.25
SMALLER_FACTOR = 0.8
PRESET_TRANSLATE = 1.0  # scene units for upwards/down
DEFAULT_ROTATE_AXIS = "y"  # camera-facing axis in the front view
DEFAULT_TRANSLATE_AXIS = "x"  # view-plane horizontal

_AXIS_INDEX = {"x": 0, "y": 1, "z": 2}


class EventOrderError(ValueError):
    """An input stream handed events to the state machine out of timestamp order."""


@dataclass(frozen=True)
class SpeechChunk:
    text: str


@dataclass(frozen=True)
class InputEvent:
    t: int
    payload: SpeechChunk | GestureEvent


@dataclass(frozen=True)
class TransformSnapshot:
    object_id: int
    translation: Vec3
    rotation: Vec3
    scale: Vec3


@dataclass(frozen=True)
class Idle:
    pass


@dataclass(frozen=True)
class Transforming:
    kind: str  # translate | rotate | scale
    axis: str | None
    magnitude: float | None
    snapshot: TransformSnapshot


@dataclass(frozen=True)
class Grabbing:
    object_id: int
    anchor_cursor: tuple[float, float]
    snapshot: TransformSnapshot


Mode = Idle | Transforming | Grabbing


@dataclass(frozen=True)
class FusionState:
    mode: Mode = Idle()
    cursor: tuple[float, float] = (0.0, 0.0)
    selection: int | None = None
    last_t: int | None = None


@dataclass(frozen=True)
class FusionConfig:
    viewport: Viewport = DEFAULT_VIEWPORT
    grab_gain: float = GRAB_GAIN
    greater_factor: float = GREATER_FACTOR
    smaller_factor: float = SMALLER_FACTOR
    preset_translate: float = PRESET_TRANSLATE


DEFAULT_CONFIG = FusionConfig()


def initial_state() -> FusionState:
    return FusionState()


def merge_streams(speech, gesture) -> list[InputEvent]:
    """Stable timestamp merge; gesture events precede speech events on equal t."""
    speech = list(speech)
    gesture = list(gesture)
    for name, stream in (("speech", speech), ("gesture", gesture)):
        last = None
        for ev in stream:
            if last is not None and ev.t < last:
                raise EventOrderError(
                    f"{name} stream out of order: t={ev.t} after t={last}"
                )
            last = ev.t
    merged: list[InputEvent] = []
    si, gi = 0, 0
    while si < len(speech) and gi < len(gesture):
        if gesture[gi].t <= speech[si].t:
            merged.append(gesture[gi])
            gi += 1
        else:
            merged.append(speech[si])
            si += 1
    merged.extend(gesture[gi:])
    merged.extend(speech[si:])
    return merged


def _snapshot_of(obj) -> TransformSnapshot:
    return TransformSnapshot(obj.id, obj.translation, obj.rotation, obj.scale)


def _with_axis(vec: Vec3, axis: str, value: float) -> Vec3:
    out = list(vec)
    out[_AXIS_INDEX[axis]] = value
    return (out[0], out[1], out[2])


def _add_axis(vec: Vec3, axis: str, delta: float) -> Vec3:
    i = _AXIS_INDEX[axis]
    return _with_axis(vec, axis, vec[i] + delta)


def _selected_object(state: FusionState, scene: Scene):
    """The live selected object, clearing a selection that no longer exists."""
    obj = scene.find(state.selection)
    if obj is None and state.selection is not None:
        state = replace(state, selection=None)
    return state, obj


def step(
    state: FusionState,
    event: InputEvent,
    lexicon: Lexicon,
    scene: Scene,
    config: FusionConfig = DEFAULT_CONFIG,
) -> tuple[FusionState, list[Directive]]:
    """Advance the state machine by one event; returns (state, directives).

    The scene is read only. Emitted directives must be applied to the scene
    before the next call so creation ids and snapshots stay aligned.
    """
    if state.last_t is not None and event.t < state.last_t:
        raise EventOrderError(f"event at t={event.t} after t={state.last_t}")
    state = replace(state, last_t=event.t)
    payload = event.payload
    if isinstance(payload, SpeechChunk):
        return _step_speech(state, payload.text, lexicon, scene, config)
    return _step_gesture(state, payload, scene, config)


def _step_speech(state, text, lexicon, scene, config):
    scored = match_command(text, lexicon)
    if scored is not None:
        return _dispatch_command(state, scored.id, scene, config)
    value = parse_number(text)
    if value is not None and isinstance(state.mode, Transforming):
        return _apply_magnitude(state, value)
    return state, []


def _dispatch_command(state, command, scene, config):
    mode = state.mode

    if isinstance(mode, Transforming):
        snap = mode.snapshot
        if command == "enter":
            return replace(state, mode=Idle()), [Commit(snap.object_id)]
        if command == "escape":
            return replace(state, mode=Idle()), [
                Cancel(snap.object_id, snap.translation, snap.rotation, snap.scale)
            ]
        if command in AXIS_COMMANDS:
            return replace(state, mode=replace(mode, axis=AXIS_COMMANDS[command])), []
        return state, []

    if isinstance(mode, Grabbing):
        snap = mode.snapshot
        if command == "enter":
            return replace(state, mode=Idle()), [Commit(mode.object_id)]
        if command == "escape":
            return replace(state, mode=Idle()), [
                Cancel(mode.object_id, snap.translation, snap.rotation, snap.scale)
            ]
        return state, []

    # Idle
    if command in ("create_cube", "create_cylinder"):
        primitive = "cube" if command == "create_cube" else "cylinder"
        return replace(state, selection=scene.next_id), [Create(primitive)]
    if command in ("translate", "rotate", "scale"):
        state, obj = _selected_object(state, scene)
        if obj is None:
            return state, []
        mode = Transforming(command, axis=None, magnitude=None, snapshot=_snapshot_of(obj))
        return replace(state, mode=mode), []
    if command in ("greater", "smaller"):
        state, obj = _selected_object(state, scene)
        if obj is None:
            return state, []
        factor = config.greater_factor if command == "greater" else config.smaller_factor
        scaled = (obj.scale[0] * factor, obj.scale[1] * factor, obj.scale[2] * factor)
        return state, [
            SetTransform(
                obj.id, obj.translation, obj.rotation, scaled,
                op="scale", axis=None, magnitude=factor,
            ),
            Commit(obj.id),
        ]
    if command in ("upwards", "down"):
        state, obj = _selected_object(state, scene)
        if obj is None:
            return state, []
        amount = config.preset_translate if command == "upwards" else -config.preset_translate
        moved = _add_axis(obj.translation, "z", amount)
        return state, [
            SetTransform(
                obj.id, moved, obj.rotation, obj.scale,
                op="translate", axis="z", magnitude=amount,
            ),
            Commit(obj.id),
        ]
    if command == "undo":
        return state, [Undo()]
    if command == "front":
        return state, [ViewFront()]
    # enter/escape/axis words/numbers have no effect in Idle
    return state, []


def _apply_magnitude(state, value):
    mode = state.mode
    snap = mode.snapshot
    if mode.kind == "scale":
        if value <= 0.0:
            return state, []  # would violate the positive-scale invariant
        if mode.axis is None:
            scaled = (snap.scale[0] * value, snap.scale[1] * value, snap.scale[2] * value)
        else:
            i = _AXIS_INDEX[mode.axis]
            scaled = _with_axis(snap.scale, mode.axis, snap.scale[i] * value)
        directive = SetTransform(
            snap.object_id, snap.translation, snap.rotation, scaled,
            op="scale", axis=mode.axis, magnitude=value,
        )
    elif mode.kind == "rotate":
        axis = mode.axis or DEFAULT_ROTATE_AXIS
        rotated = _add_axis(snap.rotation, axis, value)
        directive = SetTransform(
            snap.object_id, snap.translation, rotated, snap.scale,
            op="rotate", axis=axis, magnitude=value,
        )
    else:  # translate
        axis = mode.axis or DEFAULT_TRANSLATE_AXIS
        moved = _add_axis(snap.translation, axis, value)
        directive = SetTransform(
            snap.object_id, moved, snap.rotation, snap.scale,
            op="translate", axis=axis, magnitude=value,
        )
    return replace(state, mode=replace(mode, magnitude=value)), [directive]


def _step_gesture(state, event, scene, config):
    mode = state.mode

    if isinstance(event, CursorMove):
        cursor = (event.x_px, event.y_px)
        state = replace(state, cursor=cursor)
        if isinstance(mode, Grabbing):
            snap = mode.snapshot
            dx = (cursor[0] - mode.anchor_cursor[0]) * config.grab_gain
            dz = -(cursor[1] - mode.anchor_cursor[1]) * config.grab_gain
            moved = (
                snap.translation[0] + dx,
                snap.translation[1],
                snap.translation[2] + dz,
            )
            return state, [
                SetTransform(
                    mode.object_id, moved, snap.rotation, snap.scale,
                    op="grab", axis=None, magnitude=None, cursor=cursor,
                )
            ]
        return state, []

    if isinstance(event, PinchStart):
        if not isinstance(mode, Idle):
            return state, []
        if event.hand == "right":
            selected = pick(scene, state.cursor, config.viewport)
            return replace(state, selection=selected), [
                SelectAt(state.cursor[0], state.cursor[1])
            ]
        # left hand: grab the current selection
        state, obj = _selected_object(state, scene)
        if obj is None:
            return state, []
        grab = Grabbing(obj.id, state.cursor, _snapshot_of(obj))
        return replace(state, mode=grab), []

    if isinstance(event, PinchEnd):
        if isinstance(mode, Grabbing) and event.hand == "left":
            return replace(state, mode=Idle()), [Commit(mode.object_id)]
        return state, []

    return state, []


def event_to_json(event: InputEvent) -> dict:
    if isinstance(event.payload, SpeechChunk):
        payload = {"kind": "speech", "text": event.payload.text}
    else:
        payload = gesture_event_to_json(event.payload)
    return {"t": event.t, "payload": payload}


def event_from_json(obj: dict) -> InputEvent:
    t = obj["t"]
    if not isinstance(t, int) or isinstance(t, bool):
        raise ValueError("input event field 't' must be integer milliseconds")
    payload = obj["payload"]
    if not isinstance(payload, dict):
        raise ValueError("input event payload must be an object")
    if payload.get("kind") == "speech":
        text = payload.get("text")
        if not isinstance(text, str):
            raise ValueError("speech payload must carry a 'text' string")
        return InputEvent(t, SpeechChunk(text))
    return InputEvent(t, gesture_event_from_json(t, payload))
