"""Hand landmark streams to gesture events: smoothing, pinch hysteresis, cursor mapping.

Frames carry the standard 21-point hand topology (0 wrist, 4 thumb tip,
8 index fingertip, 9 middle-finger base). The right hand drives the cursor;
either hand can pinch.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

LANDMARK_COUNT = 21
WRIST = 0
THUMB_TIP = 4
INDEX_TIP = 8
PALM_CENTER = 9

# Pinch hysteresis: engage below the low threshold, release above the high one.
# The dead band keeps a hand hovering at the boundary from chattering.
PINCH_ENGAGE = 0.06
PINCH_RELEASE = 0.08

DEFAULT_ALPHA = 0.5
HANDS = ("left", "right")

Point = tuple[float, float, float]


class HandRoleError(ValueError):
    """A hand was used for a role it never drives (left hand on the cursor)."""


class FrameOrderError(ValueError):
    """Frames for one hand arrived with a decreasing timestamp."""


@dataclass(frozen=True)
class Viewport:
    w_px: int
    h_px: int


DEFAULT_VIEWPORT = Viewport(1920, 1080)


@dataclass(frozen=True)
class LandmarkFrame:
    t: int
    hand: str
    points: tuple[Point, ...]


def make_frame(t: int, hand: str, points) -> LandmarkFrame:
    """Validated ingestion: exactly 21 points, x/y clamped to [0, 1]."""
    if hand not in HANDS:
        raise ValueError(f"hand must be 'left' or 'right', got {hand!r}")
    pts = list(points)
    if len(pts) != LANDMARK_COUNT:
        raise ValueError(f"expected {LANDMARK_COUNT} landmarks, got {len(pts)}")
    clamped = []
    for p in pts:
        x, y, z = (float(v) for v in p)
        clamped.append((min(max(x, 0.0), 1.0), min(max(y, 0.0), 1.0), z))
    return LandmarkFrame(int(t), hand, tuple(clamped))


@dataclass(frozen=True)
class CursorMove:
    t: int
    x_px: float
    y_px: float


@dataclass(frozen=True)
class PinchStart:
    t: int
    hand: str


@dataclass(frozen=True)
class PinchEnd:
    t: int
    hand: str


GestureEvent = CursorMove | PinchStart | PinchEnd


@dataclass
class HandTrack:
    engaged: bool = False
    smoothed: tuple[Point, ...] | None = None
    last_t: int | None = None


@dataclass
class PinchState:
    """Per-hand pinch engagement plus the smoothed landmark cache."""

    left: HandTrack = field(default_factory=HandTrack)
    right: HandTrack = field(default_factory=HandTrack)

    def track(self, hand: str) -> HandTrack:
        if hand == "left":
            return self.left
        if hand == "right":
            return self.right
        raise ValueError(f"unknown hand {hand!r}")


def smooth(frame: LandmarkFrame, state: PinchState, alpha: float = DEFAULT_ALPHA) -> LandmarkFrame:
    """Exponential moving average per coordinate: out = alpha*in + (1-alpha)*prev.

    The first frame for a hand passes through unchanged; alpha = 1 is the
    identity. Updates the hand's smoothed cache in state.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must be in (0, 1], got {alpha}")
    track = state.track(frame.hand)
    if track.smoothed is None or alpha == 1.0:
        out = frame.points
    else:
        beta = 1.0 - alpha
        out = tuple(
            (alpha * p[0] + beta * q[0], alpha * p[1] + beta * q[1], alpha * p[2] + beta * q[2])
            for p, q in zip(frame.points, track.smoothed)
        )
    track.smoothed = out
    return LandmarkFrame(frame.t, frame.hand, out)


def pinch_distance(frame: LandmarkFrame) -> float:
    """Thumb tip to index fingertip distance in normalized x/y (depth ignored)."""
    thumb = frame.points[THUMB_TIP]
    index = frame.points[INDEX_TIP]
    return math.hypot(thumb[0] - index[0], thumb[1] - index[1])


def detect_pinch(
    frame: LandmarkFrame,
    state: PinchState,
    engage: float = PINCH_ENGAGE,
    release: float = PINCH_RELEASE,
) -> tuple[PinchState, GestureEvent | None]:
    """Hysteresis pinch automaton; emits PinchStart/PinchEnd on transitions.

    Distances inside [engage, release] never change the state, so starts and
    ends strictly alternate per hand.
    """
    track = state.track(frame.hand)
    d = pinch_distance(frame)
    if not track.engaged and d < engage:
        track.engaged = True
        return state, PinchStart(frame.t, frame.hand)
    if track.engaged and d > release:
        track.engaged = False
        return state, PinchEnd(frame.t, frame.hand)
    return state, None


def map_cursor(frame: LandmarkFrame, viewport: Viewport, mirror: bool = True) -> CursorMove:
    """Map the right palm landmark to viewport pixels.

    Mirrored horizontally by default so webcam input moves the cursor the way
    a mirror would. Output is clamped to the viewport.
    """
    if frame.hand != "right":
        raise HandRoleError("only the right hand drives the cursor")
    if viewport.w_px <= 0 or viewport.h_px <= 0:
        raise ValueError("viewport dimensions must be positive")
    x, y, _ = frame.points[PALM_CENTER]
    x_px = (1.0 - x) * viewport.w_px if mirror else x * viewport.w_px
    y_px = y * viewport.h_px
    x_px = min(max(x_px, 0.0), float(viewport.w_px))
    y_px = min(max(y_px, 0.0), float(viewport.h_px))
    return CursorMove(frame.t, x_px, y_px)


class GestureProcessor:
    """Turns one interleaved frame stream into gesture events.

    Frames for a given hand must arrive in timestamp order (the hands may be
    interleaved freely). Right-hand frames yield a CursorMove for every frame,
    then any pinch transition; left-hand frames yield pinch transitions only.
    """

    def __init__(
        self,
        alpha: float = DEFAULT_ALPHA,
        viewport: Viewport = DEFAULT_VIEWPORT,
        engage: float = PINCH_ENGAGE,
        release: float = PINCH_RELEASE,
        mirror: bool = True,
    ):
        self.alpha = alpha
        self.viewport = viewport
        self.engage = engage
        self.release = release
        self.mirror = mirror
        self.state = PinchState()

    def feed(self, frame: LandmarkFrame) -> list[GestureEvent]:
        track = self.state.track(frame.hand)
        if track.last_t is not None and frame.t < track.last_t:
            raise FrameOrderError(
                f"{frame.hand} hand frame at t={frame.t} after t={track.last_t}"
            )
        track.last_t = frame.t
        smoothed = smooth(frame, self.state, self.alpha)
        events: list[GestureEvent] = []
        if frame.hand == "right":
            events.append(map_cursor(smoothed, self.viewport, self.mirror))
        _, pinch = detect_pinch(smoothed, self.state, self.engage, self.release)
        if pinch is not None:
            events.append(pinch)
        return events


def parse_landmark_record(obj: object) -> LandmarkFrame:
    """Parse one landmark stream record: {"t", "hand", "points": [[x,y,z] x 21]}."""
    if not isinstance(obj, dict):
        raise ValueError("landmark record must be a JSON object")
    for key in ("t", "hand", "points"):
        if key not in obj:
            raise ValueError(f"landmark record missing field {key!r}")
    t = obj["t"]
    if not isinstance(t, int) or isinstance(t, bool):
        raise ValueError("landmark record field 't' must be integer milliseconds")
    points = obj["points"]
    if not isinstance(points, list):
        raise ValueError("landmark record field 'points' must be a list")
    for p in points:
        if not isinstance(p, list) or len(p) != 3 or not all(
            isinstance(v, (int, float)) and not isinstance(v, bool) for v in p
        ):
            raise ValueError("each landmark point must be an [x, y, z] number triple")
    return make_frame(t, obj["hand"], points)


def frame_to_record(frame: LandmarkFrame) -> dict:
    return {"t": frame.t, "hand": frame.hand, "points": [list(p) for p in frame.points]}


def gesture_event_to_json(event: GestureEvent) -> dict:
    if isinstance(event, CursorMove):
        return {"kind": "cursor_move", "x_px": event.x_px, "y_px": event.y_px}
    if isinstance(event, PinchStart):
        return {"kind": "pinch_start", "hand": event.hand}
    if isinstance(event, PinchEnd):
        return {"kind": "pinch_end", "hand": event.hand}
    raise TypeError(f"not a gesture event: {event!r}")


def gesture_event_from_json(t: int, obj: dict) -> GestureEvent:
    kind = obj.get("kind")
    if kind == "cursor_move":
        return CursorMove(t, float(obj["x_px"]), float(obj["y_px"]))
    if kind == "pinch_start":
        return PinchStart(t, obj["hand"])
    if kind == "pinch_end":
        return PinchEnd(t, obj["hand"])
    raise ValueError(f"unknown gesture kind {kind!r}")
