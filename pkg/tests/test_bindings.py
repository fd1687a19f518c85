from __future__ import annotations

import json
import random

import pytest

from modalcad.bindings import (
    KeymapError,
    default_keymap,
    directive_alphabet,
    load_keymap,
    lower,
    parse_keymap,
    render_number,
    validate_keymap,
)
from modalcad.directives import Cancel, Commit, Create, SelectAt, SetTransform, Undo, ViewFront


def _kd(k):
    return {"action": "key_down", "key": k}


def _ku(k):
    return {"action": "key_up", "key": k}


def test_undo_lowers_to_explicit_modifier_chord(keymap):
    assert lower(Undo(), keymap) == [_kd("ctrl"), _kd("z"), _ku("z"), _ku("ctrl")]


def test_scale_z_template(keymap):
    directive = SetTransform(
        1, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (1.0, 1.0, 2.1),
        op="scale", axis="z", magnitude=2.1,
    )
    assert lower(directive, keymap) == [
        _kd("s"), _ku("s"), _kd("z"), _ku("z"),
        {"action": "type_text", "text": "2.1"},
    ]


def test_cancel_is_single_key(keymap):
    assert lower(Cancel(1, (0, 0, 0), (0, 0, 0), (1, 1, 1)), keymap) == [_kd("esc"), _ku("esc")]


def test_select_at_moves_then_clicks(keymap):
    assert lower(SelectAt(120.0, 40.0), keymap) == [
        {"action": "move_to", "x": 120.0, "y": 40.0},
        {"action": "click", "button": "left", "x": 120.0, "y": 40.0},
    ]


def test_grab_set_transform_moves_cursor(keymap):
    directive = SetTransform(
        1, (1.0, 0.0, 0.0), (0.0, 0.0, 0.0), (1.0, 1.0, 1.0),
        op="grab", cursor=(810.0, 540.0),
    )
    assert lower(directive, keymap) == [{"action": "move_to", "x": 810.0, "y": 540.0}]


def test_create_uses_balanced_shift_chord(keymap):
    actions = lower(Create("cube"), keymap)
    assert actions[0] == _kd("shift")
    assert actions[-1] == _ku("shift")
    assert not any(a["action"] == "type_text" for a in actions)


def test_uniform_scale_falls_back_to_axisless_template(keymap):
    directive = SetTransform(
        1, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (2.0, 2.0, 2.0),
        op="scale", axis=None, magnitude=2.0,
    )
    assert lower(directive, keymap) == [_kd("s"), _ku("s"), {"action": "type_text", "text": "2"}]


@pytest.mark.parametrize(
    "value,text",
    [(45.0, "45"), (2.1, "2.1"), (0.8, "0.8"), (1.25, "1.25"), (-1.0, "-1"), (120.0, "120")],
)
def test_render_number_shortest_exact(value, text):
    assert render_number(value) == text
    assert float(text) == value


def test_every_fusion_directive_has_a_template(keymap):
    validate_keymap(keymap)  # raises on any gap
    for directive in directive_alphabet():
        assert lower(directive, keymap)


def test_missing_template_names_the_kind(keymap):
    trimmed = {k: v for k, v in keymap.items() if k != "undo"}
    with pytest.raises(KeymapError, match="'undo'"):
        lower(Undo(), trimmed)


def _balanced(actions):
    stack = []
    for action in actions:
        if action["action"] == "key_down":
            stack.append(action["key"])
        elif action["action"] == "key_up":
            if not stack or stack.pop() != action["key"]:
                return False
    return not stack


def _random_directives(rng, count):
    pool = directive_alphabet()
    out = []
    for _ in range(count):
        d = rng.choice(pool)
        if isinstance(d, SetTransform) and d.magnitude is not None:
            d = SetTransform(
                d.object_id, d.translation, d.rotation, d.scale,
                op=d.op, axis=d.axis,
                magnitude=rng.choice([45.0, 2.1, 0.8, -1.0, 12.5, 0.001]),
            )
        out.append(d)
    return out


def test_fuzzed_streams_keep_key_pairs_balanced(keymap):
    rng = random.Random(41)
    for _ in range(200):
        for directive in _random_directives(rng, 10):
            assert _balanced(lower(directive, keymap))


def test_no_type_text_ever_needs_shift(keymap):
    rng = random.Random(42)
    benign = set("0123456789.-")
    for _ in range(200):
        for directive in _random_directives(rng, 10):
            for action in lower(directive, keymap):
                if action["action"] == "type_text":
                    assert set(action["text"]) <= benign


def test_load_default_keymap_file(keymap, tmp_path):
    path = tmp_path / "keymap.json"
    path.write_text(json.dumps(keymap), encoding="utf-8")
    assert load_keymap(path) == keymap


def test_parse_keymap_rejects_incomplete_map(keymap):
    trimmed = {k: v for k, v in keymap.items() if k != "commit"}
    with pytest.raises(KeymapError, match="commit"):
        parse_keymap(json.dumps(trimmed))


def test_parse_keymap_rejects_bad_token(keymap):
    bad = dict(keymap, undo="ctrl+Z!")
    with pytest.raises(KeymapError, match="bad key token"):
        parse_keymap(json.dumps(bad))


def test_parse_keymap_rejects_non_object():
    with pytest.raises(KeymapError):
        parse_keymap("[1, 2]")


def test_default_keymap_loads():
    assert default_keymap()["undo"] == "ctrl+z"
