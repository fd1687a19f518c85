"""Deterministic session replay from recorded traces, plus phase/modality metrics.

A trace is line-delimited JSON: transcript records and landmark records,
non-decreasing in time. Replay pushes landmarks through the gesture pipeline,
merges the resulting events with speech chunks, folds the fusion state
machine over the merged stream, applies every directive to a fresh scene and
lowers it to key/mouse actions. Equal inputs give bit-identical outputs.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .bindings import Keymap, lower
from .directives import (
    Cancel,
    Commit,
    Create,
    Directive,
    SetTransform,
    ViewFront,
    directive_to_json,
)
from .fusion import (
    DEFAULT_CONFIG,
    FusionConfig,
    InputEvent,
    SpeechChunk,
    initial_state,
    merge_streams,
    step,
)
from .gestures import DEFAULT_ALPHA, GestureProcessor, LandmarkFrame, parse_landmark_record
from .lexicon import Lexicon, match_command, parse_number
from .scene import Scene, apply

SPEECH_CHUNK_SECONDS = 2.5  # fixed transcript chunk length


class TraceError(ValueError):
    """Malformed trace record; message carries the line number."""


@dataclass(frozen=True)
class TraceRecord:
    t: int
    kind: str  # "landmark" | "transcript"
    frame: LandmarkFrame | None = None
    text: str | None = None


def parse_trace_line(line: str, lineno: int) -> TraceRecord:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise TraceError(f"line {lineno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise TraceError(f"line {lineno}: record must be a JSON object")
    t = obj.get("t")
    if not isinstance(t, int) or isinstance(t, bool):
        raise TraceError(f"line {lineno}: 't' must be integer milliseconds")
    kind = obj.get("kind")
    if kind == "transcript":
        text = obj.get("text")
        if not isinstance(text, str):
            raise TraceError(f"line {lineno}: transcript record needs a 'text' string")
        return TraceRecord(t, "transcript", text=text)
    if kind == "landmark":
        try:
            frame = parse_landmark_record(
                {"t": t, "hand": obj.get("hand"), "points": obj.get("points")}
            )
        except ValueError as exc:
            raise TraceError(f"line {lineno}: {exc}") from exc
        return TraceRecord(t, "landmark", frame=frame)
    raise TraceError(f"line {lineno}: unknown record kind {kind!r}")


def load_trace(path: str | Path) -> list[TraceRecord]:
    records = []
    last_t = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            record = parse_trace_line(line, lineno)
            if last_t is not None and record.t < last_t:
                raise TraceError(
                    f"line {lineno}: records must be non-decreasing in t "
                    f"({record.t} after {last_t})"
                )
            last_t = record.t
            records.append(record)
    return records


@dataclass(frozen=True)
class LoggedEvent:
    """One recognized input event and the directives it produced."""

    t: int
    source: str  # "speech" | "gesture"
    label: str  # command id, "number", or gesture kind
    directives: tuple[Directive, ...]

    def to_json(self) -> dict:
        return {
            "t": self.t,
            "source": self.source,
            "label": self.label,
            "directives": [directive_to_json(d) for d in self.directives],
        }


@dataclass
class ReplayResult:
    scene: Scene
    log: list[LoggedEvent]
    actions: list[dict]  # {"t": ms, "action": ..., ...} per lowered action
    trace_start_ms: int | None = None
    trace_end_ms: int | None = None


def _gesture_label(payload) -> str:
    name = type(payload).__name__
    return {"CursorMove": "cursor_move", "PinchStart": "pinch_start", "PinchEnd": "pinch_end"}[
        name
    ]


def replay(
    records: list[TraceRecord],
    lexicon: Lexicon,
    keymap: Keymap,
    config: FusionConfig = DEFAULT_CONFIG,
    alpha: float = DEFAULT_ALPHA,
) -> ReplayResult:
    """Replay a trace; output is a pure function of the inputs."""
    processor = GestureProcessor(alpha=alpha, viewport=config.viewport)
    speech_events: list[InputEvent] = []
    gesture_events: list[InputEvent] = []
    for record in records:
        if record.kind == "transcript":
            speech_events.append(InputEvent(record.t, SpeechChunk(record.text)))
        else:
            for ev in processor.feed(record.frame):
                gesture_events.append(InputEvent(record.t, ev))
    merged = merge_streams(speech_events, gesture_events)

    scene = Scene()
    state = initial_state()
    log: list[LoggedEvent] = []
    actions: list[dict] = []
    for event in merged:
        state, directives = step(state, event, lexicon, scene, config)
        for d in directives:
            apply(scene, d, config.viewport)
            for action in lower(d, keymap):
                actions.append({"t": event.t, **action})
        if isinstance(event.payload, SpeechChunk):
            scored = match_command(event.payload.text, lexicon)
            if scored is not None:
                label = scored.id
            elif parse_number(event.payload.text) is not None:
                label = "number"
            else:
                continue  # unrecognized chunk: processed, nothing to log
            log.append(LoggedEvent(event.t, "speech", label, tuple(directives)))
        elif directives:
            log.append(
                LoggedEvent(event.t, "gesture", _gesture_label(event.payload), tuple(directives))
            )
    return ReplayResult(
        scene=scene,
        log=log,
        actions=actions,
        trace_start_ms=records[0].t if records else None,
        trace_end_ms=records[-1].t if records else None,
    )


@dataclass
class SessionMetrics:
    warmup: float = 0.0
    creation: float = 0.0
    manipulation: float = 0.0
    navigation: float = 0.0
    speech_s: float = 0.0
    gesture_s: float = 0.0
    command_counts: dict[str, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "warmup": self.warmup,
            "creation": self.creation,
            "manipulation": self.manipulation,
            "navigation": self.navigation,
            "speech_s": self.speech_s,
            "gesture_s": self.gesture_s,
            "command_counts": dict(self.command_counts),
        }


def metrics(log: list[LoggedEvent], trace_start_ms: int | None = None) -> SessionMetrics:
    """Phase and modality metrics over a replay log.

    Consecutive directive timestamps partition the timeline; each interval is
    attributed to the directive that ends it. The interval ending at the first
    Create is the warm-up; later Creates count as creation time. Transform
    activity (SetTransform/Commit/Cancel) is manipulation, ViewFront is
    navigation. Speech time is a fixed chunk length per recognized chunk.
    """
    out = SessionMetrics()
    start = trace_start_ms
    if start is None:
        start = log[0].t if log else 0
    prev = start
    seen_create = False
    for entry in log:
        for directive in entry.directives:
            interval = max(entry.t - prev, 0) / 1000.0
            prev = max(entry.t, prev)
            if isinstance(directive, Create):
                if seen_create:
                    out.creation += interval
                else:
                    out.warmup += interval
                    seen_create = True
            elif isinstance(directive, (SetTransform, Commit, Cancel)):
                out.manipulation += interval
            elif isinstance(directive, ViewFront):
                out.navigation += interval
            if entry.source == "gesture":
                out.gesture_s += interval
    counts: Counter[str] = Counter()
    for entry in log:
        if entry.source == "speech":
            counts[entry.label] += 1
    out.speech_s = SPEECH_CHUNK_SECONDS * sum(counts.values())
    out.command_counts = dict(sorted(counts.items()))
    return out


def write_actions(actions: list[dict], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for action in actions:
            fh.write(json.dumps(action, ensure_ascii=True))
            fh.write("\n")


def write_metrics(m: SessionMetrics, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(m.to_json(), ensure_ascii=True, indent=2))
        fh.write("\n")
