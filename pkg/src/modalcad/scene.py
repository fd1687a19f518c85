"""Deterministic 3D scene kernel: primitives, transforms, picking, undo.

The canonical serialization is the convergence contract: it covers the whole
replicated state (objects, selection, view, id counter, open transform
brackets, undo history), renders every decimal with 6 fractional digits, and
is byte-stable across platforms. scene_hash digests exactly these bytes.
"""
from __future__ import annotations

import copy
import hashlib
import json
import logging
import math
from dataclasses import dataclass, field

from .directives import (
    PRIMITIVES,
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
from .gestures import DEFAULT_VIEWPORT, Viewport

log = logging.getLogger(__name__)

PICK_RADIUS_PX = 40.0
WORLD_HALF_SPAN = 5.0  # front view maps world [-5, 5] in X and Z onto the viewport

Transform = tuple[Vec3, Vec3, Vec3]  # translation, rotation (Euler XYZ degrees), scale


class SceneError(ValueError):
    """A directive referenced a missing object or carried an invalid value."""


@dataclass
class SceneObject:
    id: int
    primitive: str
    translation: Vec3 = (0.0, 0.0, 0.0)
    rotation: Vec3 = (0.0, 0.0, 0.0)
    scale: Vec3 = (1.0, 1.0, 1.0)

    def transform(self) -> Transform:
        return (self.translation, self.rotation, self.scale)


@dataclass
class Scene:
    objects: list[SceneObject] = field(default_factory=list)
    selection: int | None = None
    view: str = "default"
    next_id: int = 1
    # Open transform brackets: object id -> transform at the first SetTransform
    # since that object's last Commit/Cancel.
    pending: dict[int, Transform] = field(default_factory=dict)
    undo_stack: list[dict] = field(default_factory=list)

    def find(self, object_id: int | None) -> SceneObject | None:
        if object_id is None:
            return None
        for obj in self.objects:
            if obj.id == object_id:
                return obj
        return None


def new_scene() -> Scene:
    return Scene()


def _require(scene: Scene, object_id: int, what: str) -> SceneObject:
    obj = scene.find(object_id)
    if obj is None:
        raise SceneError(f"{what}: no object with id {object_id}")
    return obj


def _transform_entry(t: Transform) -> list:
    return [list(t[0]), list(t[1]), list(t[2])]


def _transform_from_entry(entry) -> Transform:
    tr, rot, sc = entry
    return (
        (float(tr[0]), float(tr[1]), float(tr[2])),
        (float(rot[0]), float(rot[1]), float(rot[2])),
        (float(sc[0]), float(sc[1]), float(sc[2])),
    )


def apply(scene: Scene, directive: Directive, viewport: Viewport = DEFAULT_VIEWPORT) -> Scene:
    """Apply one directive in place; returns the scene.

    Undo granularity is one committed action per step: Create pushes its own
    step, SetTransform only opens a pending bracket, Commit closes the bracket
    into a step, Cancel restores without pushing.
    """
    if isinstance(directive, Create):
        if directive.primitive not in PRIMITIVES:
            raise SceneError(f"unknown primitive {directive.primitive!r}")
        obj = SceneObject(id=scene.next_id, primitive=directive.primitive)
        scene.objects.append(obj)
        scene.next_id += 1
        scene.selection = obj.id
        scene.undo_stack.append({"kind": "create", "id": obj.id})
    elif isinstance(directive, SetTransform):
        obj = _require(scene, directive.object_id, "set_transform")
        if any(not (s > 0.0) for s in directive.scale):
            raise SceneError(f"scale components must be positive, got {directive.scale}")
        if directive.object_id not in scene.pending:
            scene.pending[directive.object_id] = obj.transform()
        obj.translation = directive.translation
        obj.rotation = directive.rotation
        obj.scale = directive.scale
    elif isinstance(directive, Commit):
        oid = directive.object_id
        if oid is None:
            if not scene.pending:
                return scene
            if len(scene.pending) > 1:
                raise SceneError(
                    f"ambiguous commit: open brackets on objects {sorted(scene.pending)}"
                )
            oid = next(iter(scene.pending))
        before = scene.pending.pop(oid, None)
        if before is None:
            return scene  # nothing changed since the bracket opened
        obj = _require(scene, oid, "commit")
        after = obj.transform()
        if after != before:
            scene.undo_stack.append(
                {
                    "kind": "transform",
                    "id": oid,
                    "before": _transform_entry(before),
                    "after": _transform_entry(after),
                }
            )
    elif isinstance(directive, Cancel):
        obj = _require(scene, directive.object_id, "cancel")
        obj.translation = directive.translation
        obj.rotation = directive.rotation
        obj.scale = directive.scale
        scene.pending.pop(directive.object_id, None)
    elif isinstance(directive, Undo):
        if not scene.undo_stack:
            log.warning("undo requested on an empty history; ignored")
            return scene
        step = scene.undo_stack.pop()
        if step["kind"] == "create":
            oid = step["id"]
            scene.objects = [o for o in scene.objects if o.id != oid]
            scene.pending.pop(oid, None)
            if scene.selection == oid:
                scene.selection = None
        else:
            obj = _require(scene, step["id"], "undo")
            obj.translation, obj.rotation, obj.scale = _transform_from_entry(step["before"])
    elif isinstance(directive, SelectAt):
        scene.selection = pick(scene, (directive.x_px, directive.y_px), viewport)
    elif isinstance(directive, ViewFront):
        scene.view = "front"
    else:
        raise SceneError(f"unknown directive {directive!r}")
    return scene


def apply_all(
    scene: Scene, directives, viewport: Viewport = DEFAULT_VIEWPORT
) -> Scene:
    """Apply a directive batch atomically: returns a new scene, or raises
    leaving the input scene untouched."""
    scratch = copy.deepcopy(scene)
    for d in directives:
        apply(scratch, d, viewport)
    return scratch


def project(translation: Vec3, viewport: Viewport) -> tuple[float, float]:
    """Front-view orthographic projection: X right, Z up, Y ignored."""
    span = 2.0 * WORLD_HALF_SPAN
    u = (translation[0] + WORLD_HALF_SPAN) / span * viewport.w_px
    v = (1.0 - (translation[2] + WORLD_HALF_SPAN) / span) * viewport.h_px
    return (u, v)


def pick(
    scene: Scene, cursor: tuple[float, float], viewport: Viewport = DEFAULT_VIEWPORT
) -> int | None:
    """Nearest projected object center within PICK_RADIUS_PX, lower id on ties."""
    if viewport.w_px <= 0 or viewport.h_px <= 0:
        raise ValueError("viewport dimensions must be positive")
    best_id: int | None = None
    best_d = math.inf
    for obj in sorted(scene.objects, key=lambda o: o.id):
        u, v = project(obj.translation, viewport)
        du, dv = u - cursor[0], v - cursor[1]
        # sqrt form, not hypot: identical bit-level results in every IEEE
        # runtime, so remote replicas resolve boundary picks the same way
        d = math.sqrt(du * du + dv * dv)
        if d <= PICK_RADIUS_PX and d < best_d:
            best_d = d
            best_id = obj.id
    return best_id


def _fmt(value: float) -> str:
    s = f"{value:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _emit(value) -> str:
    if isinstance(value, bool):
        raise TypeError("booleans have no canonical scene form")
    if value is None:
        return "null"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return _fmt(value)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=True)
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_emit(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_emit(v)}" for k, v in value.items()) + "}"
    raise TypeError(f"cannot canonicalize {type(value).__name__}")


def canonical_dict(scene: Scene) -> dict:
    """Fixed field order, id-sorted objects; decimals stay floats here and are
    fixed to 6 digits by the canonical emitter."""
    return {
        "next_id": scene.next_id,
        "selection": scene.selection,
        "view": scene.view,
        "objects": [
            {
                "id": o.id,
                "primitive": o.primitive,
                "translation": [float(v) for v in o.translation],
                "rotation": [float(v) for v in o.rotation],
                "scale": [float(v) for v in o.scale],
            }
            for o in sorted(scene.objects, key=lambda o: o.id)
        ],
        "pending": {
            str(oid): [
                [float(v) for v in part] for part in _transform_entry(scene.pending[oid])
            ]
            for oid in sorted(scene.pending)
        },
        "undo_stack": [_canonical_step(step) for step in scene.undo_stack],
    }


def _canonical_step(step: dict) -> dict:
    if step["kind"] == "create":
        return {"kind": "create", "id": step["id"]}
    return {
        "kind": "transform",
        "id": step["id"],
        "before": [[float(v) for v in part] for part in step["before"]],
        "after": [[float(v) for v in part] for part in step["after"]],
    }


def canonical_json(scene: Scene) -> str:
    return _emit(canonical_dict(scene))


def scene_hash(scene: Scene) -> str:
    return hashlib.sha256(canonical_json(scene).encode("ascii")).hexdigest()


def scene_from_canonical(data: dict) -> Scene:
    """Rebuild a scene from its canonical dict (the parsed snapshot/file form)."""
    objects = [
        SceneObject(
            id=int(o["id"]),
            primitive=o["primitive"],
            translation=tuple(float(v) for v in o["translation"]),
            rotation=tuple(float(v) for v in o["rotation"]),
            scale=tuple(float(v) for v in o["scale"]),
        )
        for o in data["objects"]
    ]
    selection = data["selection"]
    return Scene(
        objects=objects,
        selection=int(selection) if selection is not None else None,
        view=data["view"],
        next_id=int(data["next_id"]),
        pending={
            int(oid): _transform_from_entry(entry) for oid, entry in data["pending"].items()
        },
        undo_stack=[dict(step) for step in data["undo_stack"]],
    )


def parse_scene(text: str) -> Scene:
    return scene_from_canonical(json.loads(text))


def write_scene(scene: Scene, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(canonical_json(scene))
        fh.write("\n")
