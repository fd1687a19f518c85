from __future__ import annotations

import logging
import random

import pytest

from modalcad.directives import (
    Cancel,
    Commit,
    Create,
    SelectAt,
    SetTransform,
    Undo,
    ViewFront,
)
from modalcad.gestures import Viewport
from modalcad.scene import (
    Scene,
    SceneError,
    apply,
    apply_all,
    canonical_json,
    parse_scene,
    pick,
    project,
    scene_hash,
)


def _set(oid, translation=(0.0, 0.0, 0.0), rotation=(0.0, 0.0, 0.0), scale=(1.0, 1.0, 1.0)):
    return SetTransform(oid, translation, rotation, scale, op="translate")


def test_create_places_unit_cube_at_origin():
    scene = Scene()
    apply(scene, Create("cube"))
    assert len(scene.objects) == 1
    obj = scene.objects[0]
    assert (obj.id, obj.primitive) == (1, "cube")
    assert obj.translation == (0.0, 0.0, 0.0)
    assert obj.rotation == (0.0, 0.0, 0.0)
    assert obj.scale == (1.0, 1.0, 1.0)
    assert scene.selection == 1
    assert scene.undo_stack == [{"kind": "create", "id": 1}]


def test_commit_then_undo_restores_scale():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, _set(1, scale=(1.0, 1.0, 2.1)))
    apply(scene, Commit(1))
    assert scene.objects[0].scale == (1.0, 1.0, 2.1)
    assert len(scene.undo_stack) == 2
    apply(scene, Undo())
    assert scene.objects[0].scale == (1.0, 1.0, 1.0)
    assert len(scene.undo_stack) == 1


def test_set_transform_opens_bracket_without_undo_push():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, _set(1, translation=(2.0, 0.0, 0.0)))
    apply(scene, _set(1, translation=(3.0, 0.0, 0.0)))
    assert scene.pending == {1: ((0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (1.0, 1.0, 1.0))}
    assert len(scene.undo_stack) == 1  # only the create
    apply(scene, Commit(1))
    assert scene.pending == {}
    step = scene.undo_stack[-1]
    assert step["before"][0] == [0.0, 0.0, 0.0]
    assert step["after"][0] == [3.0, 0.0, 0.0]


def test_cancel_restores_without_undo_push():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, _set(1, rotation=(0.0, 9.0, 0.0)))
    apply(scene, Cancel(1, (0.0, 0.0, 0.0), (0.0, 0.0, 0.0), (1.0, 1.0, 1.0)))
    assert scene.objects[0].rotation == (0.0, 0.0, 0.0)
    assert scene.pending == {}
    assert len(scene.undo_stack) == 1


def test_commit_without_changes_pushes_nothing():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, Commit(1))
    assert len(scene.undo_stack) == 1


def test_bare_commit_closes_single_bracket():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, _set(1, translation=(1.0, 0.0, 0.0)))
    apply(scene, Commit())
    assert len(scene.undo_stack) == 2


def test_bare_commit_with_two_brackets_is_ambiguous():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, Create("cube"))
    apply(scene, _set(1, translation=(1.0, 0.0, 0.0)))
    apply(scene, _set(2, translation=(2.0, 0.0, 0.0)))
    with pytest.raises(SceneError, match="ambiguous"):
        apply(scene, Commit())


def test_undo_on_empty_stack_warns_and_keeps_scene(caplog):
    scene = Scene()
    with caplog.at_level(logging.WARNING, logger="modalcad.scene"):
        apply(scene, Undo())
    assert scene == Scene()
    assert any("undo" in r.message for r in caplog.records)


def test_undo_create_removes_object_and_ids_never_repeat():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, Undo())
    assert scene.objects == []
    assert scene.selection is None
    apply(scene, Create("cylinder"))
    assert scene.objects[0].id == 2  # id 1 is never reused


def test_set_transform_missing_object_errors():
    scene = Scene()
    with pytest.raises(SceneError, match="no object with id 7"):
        apply(scene, _set(7))


def test_non_positive_scale_rejected():
    scene = Scene()
    apply(scene, Create("cube"))
    with pytest.raises(SceneError, match="positive"):
        apply(scene, _set(1, scale=(1.0, 0.0, 1.0)))


def test_apply_all_is_atomic():
    scene = Scene()
    apply(scene, Create("cube"))
    before = canonical_json(scene)
    with pytest.raises(SceneError):
        apply_all(scene, [_set(1, translation=(5.0, 0.0, 0.0)), _set(99)])
    assert canonical_json(scene) == before


def test_arch_script_matches_hand_computed_transforms():
    scene = Scene()
    for _ in range(3):
        apply(scene, Create("cube"))
    script = [
        _set(1, translation=(1.5, 0.0, 0.0)),
        Commit(1),
        _set(1, translation=(1.5, 0.0, 0.0), scale=(1.0, 1.0, 3.0)),
        Commit(1),
        _set(2, translation=(-1.5, 0.0, 0.0)),
        Commit(2),
        _set(2, translation=(-1.5, 0.0, 0.0), scale=(1.0, 1.0, 3.0)),
        Commit(2),
        _set(3, translation=(0.0, 0.0, 3.5)),
        Commit(3),
        _set(3, translation=(0.0, 0.0, 3.5), scale=(4.0, 1.0, 1.0)),
        Commit(3),
    ]
    for directive in script:
        apply(scene, directive)
    by_id = {o.id: o for o in scene.objects}
    assert by_id[1].translation == (1.5, 0.0, 0.0) and by_id[1].scale == (1.0, 1.0, 3.0)
    assert by_id[2].translation == (-1.5, 0.0, 0.0) and by_id[2].scale == (1.0, 1.0, 3.0)
    assert by_id[3].translation == (0.0, 0.0, 3.5) and by_id[3].scale == (4.0, 1.0, 1.0)
    assert len(scene.undo_stack) == 3 + 6


def test_select_at_sets_scene_selection():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, Create("cube"))
    scene.objects[1].translation = (4.9, 0.0, 0.0)  # far right edge
    vp = Viewport(200, 200)
    u, v = project((0.0, 0.0, 0.0), vp)
    apply(scene, SelectAt(u, v), viewport=vp)
    assert scene.selection == 1


def test_view_front():
    scene = Scene()
    apply(scene, ViewFront())
    assert scene.view == "front"


def test_pick_zero_distance():
    scene = Scene()
    apply(scene, Create("cube"))
    vp = Viewport(640, 480)
    assert pick(scene, project((0.0, 0.0, 0.0), vp), vp) == 1


def test_pick_empty_scene():
    assert pick(Scene(), (10.0, 10.0), Viewport(640, 480)) is None


def test_pick_two_cubes_cursor_left_of_center():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, Create("cube"))
    scene.objects[0].translation = (-1.0, 0.0, 0.0)
    scene.objects[1].translation = (1.0, 0.0, 0.0)
    vp = Viewport(200, 200)
    # centers project to (80, 100) and (120, 100); cursor 10 px left of center
    assert project((-1.0, 0.0, 0.0), vp) == (80.0, 100.0)
    assert pick(scene, (90.0, 100.0), vp) == 1


def test_pick_outside_radius_returns_nothing():
    scene = Scene()
    apply(scene, Create("cube"))
    vp = Viewport(1920, 1080)
    u, v = project((0.0, 0.0, 0.0), vp)
    assert pick(scene, (u + 41.0, v), vp) is None
    assert pick(scene, (u + 40.0, v), vp) == 1


def test_pick_tie_breaks_by_lower_id():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, Create("cube"))  # both at origin
    vp = Viewport(640, 480)
    assert pick(scene, project((0.0, 0.0, 0.0), vp), vp) == 1


def test_hash_equal_for_empty_scenes():
    assert scene_hash(Scene()) == scene_hash(Scene())


def test_hash_differs_on_one_scale_component():
    a, b = Scene(), Scene()
    apply(a, Create("cube"))
    apply(b, Create("cube"))
    b.objects[0].scale = (1.0, 1.0, 1.000001)
    assert scene_hash(a) != scene_hash(b)


def test_hash_stable_through_serialize_parse_cycle():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, _set(1, translation=(0.07, 0.0, -1.5)))
    apply(scene, Commit(1))
    apply(scene, ViewFront())
    reparsed = parse_scene(canonical_json(scene))
    assert scene_hash(reparsed) == scene_hash(scene)
    assert canonical_json(reparsed) == canonical_json(scene)


def test_canonical_normalizes_negative_zero():
    scene = Scene()
    apply(scene, Create("cube"))
    scene.objects[0].translation = (-0.0, 0.0, 0.0)
    assert "-0.000000" not in canonical_json(scene)


def test_canonical_serialization_round_trips_pending():
    scene = Scene()
    apply(scene, Create("cube"))
    apply(scene, _set(1, translation=(2.0, 0.0, 0.0)))  # open bracket
    reparsed = parse_scene(canonical_json(scene))
    assert reparsed.pending == scene.pending
    assert reparsed == scene


def test_undo_inverse_over_random_sequences_small():
    rng = random.Random(5)
    for _ in range(50):
        scene = Scene()
        committed = 0
        for _ in range(rng.randint(1, 12)):
            if not scene.objects or rng.random() < 0.4:
                apply(scene, Create(rng.choice(["cube", "cylinder"])))
                committed += 1
            else:
                target = rng.choice(scene.objects)
                apply(
                    scene,
                    SetTransform(
                        target.id,
                        (rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)),
                        (rng.uniform(0, 360), 0.0, 0.0),
                        (rng.uniform(0.1, 3), rng.uniform(0.1, 3), rng.uniform(0.1, 3)),
                        op="translate",
                    ),
                )
                apply(scene, Commit(target.id))
                committed += 1
        assert len(scene.undo_stack) == committed
        for _ in range(committed):
            apply(scene, Undo())
        assert scene.objects == []
        assert scene.undo_stack == []
