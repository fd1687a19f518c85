"""Resolved scene commands and their wire/log JSON form.

Directives carry absolute values (full transforms, not deltas) so that every
replica applying the same directive sequence lands on the same scene.
"""
from __future__ import annotations

from dataclasses import dataclass

Vec3 = tuple[float, float, float]

PRIMITIVES = ("cube", "cylinder")
TRANSFORM_OPS = ("translate", "rotate", "scale", "grab")
AXES = ("x", "y", "z")


@dataclass(frozen=True)
class Create:
    primitive: str


@dataclass(frozen=True)
class SetTransform:
    object_id: int
    translation: Vec3
    rotation: Vec3
    scale: Vec3
    # Provenance for the binding adapter: how the transform was produced.
    op: str
    axis: str | None = None
    magnitude: float | None = None
    cursor: tuple[float, float] | None = None


@dataclass(frozen=True)
class Commit:
    object_id: int | None = None


@dataclass(frozen=True)
class Cancel:
    object_id: int
    translation: Vec3
    rotation: Vec3
    scale: Vec3


@dataclass(frozen=True)
class Undo:
    pass


@dataclass(frozen=True)
class SelectAt:
    x_px: float
    y_px: float


@dataclass(frozen=True)
class ViewFront:
    pass


Directive = Create | SetTransform | Commit | Cancel | Undo | SelectAt | ViewFront


def _vec(values) -> Vec3:
    x, y, z = (float(v) for v in values)
    return (x, y, z)


def directive_to_json(d: Directive) -> dict:
    if isinstance(d, Create):
        return {"kind": "create", "primitive": d.primitive}
    if isinstance(d, SetTransform):
        out = {
            "kind": "set_transform",
            "object_id": d.object_id,
            "translation": list(d.translation),
            "rotation": list(d.rotation),
            "scale": list(d.scale),
            "op": d.op,
        }
        if d.axis is not None:
            out["axis"] = d.axis
        if d.magnitude is not None:
            out["magnitude"] = d.magnitude
        if d.cursor is not None:
            out["cursor"] = list(d.cursor)
        return out
    if isinstance(d, Commit):
        out = {"kind": "commit"}
        if d.object_id is not None:
            out["object_id"] = d.object_id
        return out
    if isinstance(d, Cancel):
        return {
            "kind": "cancel",
            "object_id": d.object_id,
            "translation": list(d.translation),
            "rotation": list(d.rotation),
            "scale": list(d.scale),
        }
    if isinstance(d, Undo):
        return {"kind": "undo"}
    if isinstance(d, SelectAt):
        return {"kind": "select_at", "x_px": d.x_px, "y_px": d.y_px}
    if isinstance(d, ViewFront):
        return {"kind": "view_front"}
    raise TypeError(f"not a directive: {d!r}")


def directive_from_json(obj: dict) -> Directive:
    kind = obj.get("kind")
    if kind == "create":
        primitive = obj["primitive"]
        if primitive not in PRIMITIVES:
            raise ValueError(f"unknown primitive {primitive!r}")
        return Create(primitive)
    if kind == "set_transform":
        cursor = obj.get("cursor")
        return SetTransform(
            object_id=int(obj["object_id"]),
            translation=_vec(obj["translation"]),
            rotation=_vec(obj["rotation"]),
            scale=_vec(obj["scale"]),
            op=obj.get("op", "translate"),
            axis=obj.get("axis"),
            magnitude=obj.get("magnitude"),
            cursor=(float(cursor[0]), float(cursor[1])) if cursor is not None else None,
        )
    if kind == "commit":
        oid = obj.get("object_id")
        return Commit(int(oid) if oid is not None else None)
    if kind == "cancel":
        return Cancel(
            object_id=int(obj["object_id"]),
            translation=_vec(obj["translation"]),
            rotation=_vec(obj["rotation"]),
            scale=_vec(obj["scale"]),
        )
    if kind == "undo":
        return Undo()
    if kind == "select_at":
        return SelectAt(float(obj["x_px"]), float(obj["y_px"]))
    if kind == "view_front":
        return ViewFront()
    raise ValueError(f"unknown directive kind {kind!r}")
