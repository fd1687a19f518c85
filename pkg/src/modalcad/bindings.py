"""Lowers directives to synthetic key/mouse action sequences via a keymap.

Templates are semicolon-separated steps: a key ("esc"), a modifier chord
("ctrl+z"), a numeric placeholder ("{number}" types the magnitude), or a
mouse step ("move:{cursor}", "click:left"). Chords always press and release
the modifier explicitly; nothing is ever emitted as shifted text, which is
what breaks when hotkeys are injected as characters.

Output is data (a list of action dicts), never real input injection.
"""
from __future__ import annotations

import json
import re
from importlib import resources
from pathlib import Path

from .directives import (
    AXES,
    Cancel,
    Commit,
    Create,
    Directive,
    SelectAt,
    SetTransform,
    Undo,
    ViewFront,
)

Keymap = dict[str, str]

_KEY_TOKEN = re.compile(r"[a-z0-9_]+")

# Characters that a US keyboard only produces with shift held.
SHIFTED_TEXT_CHARS = set('~!@#$%^&*()_+{}|:"<>?') | set("ABCDEFGHIJKLMNOPQRSTUVWXYZ")


class KeymapError(ValueError):
    """Missing or malformed keymap template for a directive."""


def key_down(key: str) -> dict:
    return {"action": "key_down", "key": key}


def key_up(key: str) -> dict:
    return {"action": "key_up", "key": key}


def move_to(x: float, y: float) -> dict:
    return {"action": "move_to", "x": x, "y": y}


def click(button: str, x: float, y: float) -> dict:
    return {"action": "click", "button": button, "x": x, "y": y}


def type_text(text: str) -> dict:
    return {"action": "type_text", "text": text}


def render_number(value: float) -> str:
    """Shortest exact decimal: 45.0 -> "45", 2.1 -> "2.1"."""
    if value == int(value):
        return str(int(value))
    return repr(float(value))


def _template_key(directive: Directive) -> list[str]:
    """Candidate keymap keys, most specific first."""
    if isinstance(directive, Create):
        return [f"create.{directive.primitive}", "create"]
    if isinstance(directive, SetTransform):
        keys = []
        if directive.axis is not None:
            keys.append(f"set_transform.{directive.op}.{directive.axis}")
        keys.append(f"set_transform.{directive.op}")
        keys.append("set_transform")
        return keys
    if isinstance(directive, Commit):
        return ["commit"]
    if isinstance(directive, Cancel):
        return ["cancel"]
    if isinstance(directive, Undo):
        return ["undo"]
    if isinstance(directive, SelectAt):
        return ["select_at"]
    if isinstance(directive, ViewFront):
        return ["view_front"]
    raise KeymapError(f"not a directive: {directive!r}")


def _cursor_of(directive: Directive) -> tuple[float, float]:
    if isinstance(directive, SelectAt):
        return (directive.x_px, directive.y_px)
    if isinstance(directive, SetTransform) and directive.cursor is not None:
        return directive.cursor
    raise KeymapError(f"template needs cursor coordinates but {_kind(directive)} has none")


def _kind(directive: Directive) -> str:
    return _template_key(directive)[-1] if not isinstance(directive, SetTransform) else (
        f"set_transform.{directive.op}"
    )


def lower(directive: Directive, keymap: Keymap) -> list[dict]:
    """Instantiate the directive's template into an action sequence."""
    template = None
    for key in _template_key(directive):
        if key in keymap:
            template = keymap[key]
            break
    if template is None:
        raise KeymapError(f"keymap has no template for directive kind {_kind(directive)!r}")
    actions: list[dict] = []
    for step in template.split(";"):
        step = step.strip()
        if not step:
            raise KeymapError(f"empty step in template {template!r}")
        if step == "{number}":
            magnitude = getattr(directive, "magnitude", None)
            if magnitude is None:
                raise KeymapError(
                    f"template {template!r} needs a magnitude but {_kind(directive)} has none"
                )
            actions.append(type_text(render_number(magnitude)))
        elif step == "move:{cursor}":
            x, y = _cursor_of(directive)
            actions.append(move_to(x, y))
        elif step.startswith("click:"):
            button = step[len("click:"):]
            if button not in ("left", "right", "middle"):
                raise KeymapError(f"unknown mouse button {button!r} in template {template!r}")
            x, y = _cursor_of(directive)
            actions.append(click(button, x, y))
        else:
            keys = [k.strip() for k in step.split("+")]
            for k in keys:
                if not _KEY_TOKEN.fullmatch(k):
                    raise KeymapError(f"bad key token {k!r} in template {template!r}")
            for k in keys:
                actions.append(key_down(k))
            for k in reversed(keys):
                actions.append(key_up(k))
    return actions


def directive_alphabet() -> list[Directive]:
    """One representative instance of every directive the fusion layer emits."""
    v0 = (0.0, 0.0, 0.0)
    v1 = (1.0, 1.0, 1.0)
    alphabet: list[Directive] = [Create("cube"), Create("cylinder")]
    for op in ("translate", "rotate", "scale"):
        axes: tuple[str | None, ...] = AXES if op != "scale" else (None, *AXES)
        for axis in axes:
            alphabet.append(
                SetTransform(1, v0, v0, v1, op=op, axis=axis, magnitude=2.1)
            )
    alphabet.append(
        SetTransform(1, v0, v0, v1, op="grab", axis=None, magnitude=None, cursor=(10.0, 20.0))
    )
    alphabet.extend(
        [Commit(1), Cancel(1, v0, v0, v1), Undo(), SelectAt(960.0, 540.0), ViewFront()]
    )
    return alphabet


def validate_keymap(keymap: Keymap) -> None:
    """Every fusion-emittable directive must lower successfully."""
    for directive in directive_alphabet():
        lower(directive, keymap)


def parse_keymap(text: str, source: str = "<keymap>") -> Keymap:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise KeymapError(f"{source}:{exc.lineno}: {exc.msg}") from exc
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise KeymapError(f"{source}: keymap must be a JSON object of string templates")
    keymap = dict(data)
    validate_keymap(keymap)
    return keymap


def load_keymap(path: str | Path) -> Keymap:
    p = Path(path)
    return parse_keymap(p.read_text(encoding="utf-8"), source=str(p))


def default_keymap() -> Keymap:
    text = resources.files("modalcad").joinpath("data/default_keymap.json").read_text("utf-8")
    return parse_keymap(text, source="modalcad/data/default_keymap.json")
