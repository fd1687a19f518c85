from __future__ import annotations

import pytest

from modalcad.directives import Create, directive_from_json
from modalcad.fusion import InputEvent, SpeechChunk, Transforming
from modalcad.gestures import make_frame
from modalcad.scene import apply_all, canonical_json, scene_from_canonical, scene_hash
from modalcad.session import (
    Session,
    SessionError,
    decode_event_payload,
    delta_message,
    handle_connect,
    handle_event,
    speech_event,
    validate_hello,
    welcome_message,
)
from oracles import hand_points


def _hello(session_id="studio", name="alice"):
    return {"type": "hello", "session_id": session_id, "client_name": name}


def _session(lexicon):
    return Session(session_id="studio", lexicon=lexicon)


def test_first_welcome_has_empty_snapshot_and_seq_zero(lexicon):
    session = _session(lexicon)
    _, welcome = handle_connect(session, _hello())
    assert welcome["type"] == "welcome"
    assert welcome["client_id"] == "c1"
    assert welcome["seq"] == 0
    assert welcome["snapshot"]["objects"] == []
    assert welcome["hud"] == lexicon.hud_listing()


def test_client_ids_are_fresh(lexicon):
    session = _session(lexicon)
    _, w1 = handle_connect(session, _hello(name="alice"))
    _, w2 = handle_connect(session, _hello(name="bob"))
    assert w1["client_id"] != w2["client_id"]
    assert set(session.clients) == {"c1", "c2"}


@pytest.mark.parametrize(
    "message",
    [
        {"type": "hello", "session_id": "", "client_name": "x"},
        {"type": "hello", "client_name": "x"},
        {"type": "hello", "session_id": 7, "client_name": "x"},
        {"type": "event", "session_id": "studio", "client_name": "x"},
        "hello",
    ],
)
def test_bad_hello_rejected(message):
    with pytest.raises(SessionError) as err:
        validate_hello(message)
    assert err.value.code == "bad_hello"


def test_unknown_client_rejected(lexicon):
    session = _session(lexicon)
    with pytest.raises(SessionError) as err:
        handle_event(session, "c9", speech_event(0, "create cube"))
    assert err.value.code == "unknown_client"


def test_create_event_produces_delta(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    _, delta = handle_event(session, "c1", speech_event(0, "create cube"))
    assert delta is not None
    assert delta.seq == 1
    assert delta.directives == (Create("cube"),)
    assert delta.scene_hash == scene_hash(session.scene)
    assert len(session.scene.objects) == 1


def test_unmatched_chunk_produces_no_delta(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    _, delta = handle_event(session, "c1", speech_event(0, "hello there"))
    assert delta is None
    assert session.seq == 0


def test_late_joiner_snapshot_equals_delta_replay(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello(name="alice"))
    _, w1 = handle_connect(session, _hello(name="bob"))
    replica = scene_from_canonical(w1["snapshot"])
    deltas = []
    for t, text in [(0, "create cube"), (2500, "greater"), (5000, "create cylinder")]:
        _, delta = handle_event(session, "c1", speech_event(t, text))
        deltas.append(delta)
    assert [d.seq for d in deltas] == [1, 2, 3]
    for delta in deltas:
        replica = apply_all(replica, delta.directives)
        assert scene_hash(replica) == delta.scene_hash
    _, w3 = handle_connect(session, _hello(name="carol"))
    assert canonical_json(scene_from_canonical(w3["snapshot"])) == canonical_json(session.scene)
    assert w3["seq"] == 3


def test_mode_isolation_between_clients(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello(name="alice"))
    handle_connect(session, _hello(name="bob"))
    handle_event(session, "c1", speech_event(0, "create cube"))
    handle_event(session, "c1", speech_event(2500, "scale"))
    assert isinstance(session.clients["c1"].fusion.mode, Transforming)
    assert not isinstance(session.clients["c2"].fusion.mode, Transforming)


def test_apply_failure_is_atomic_and_keeps_fusion_state(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello(name="alice"))
    handle_connect(session, _hello(name="bob"))
    handle_event(session, "c1", speech_event(0, "create cube"))
    handle_event(session, "c1", speech_event(2500, "scale"))
    # bob undoes the create while alice is mid-transform
    handle_event(session, "c2", speech_event(100, "undo"))
    assert session.scene.objects == []
    hash_before = scene_hash(session.scene)
    seq_before = session.seq
    fusion_before = session.clients["c1"].fusion
    with pytest.raises(SessionError) as err:
        handle_event(session, "c1", speech_event(5000, "two"))
    assert err.value.code == "apply_failed"
    assert scene_hash(session.scene) == hash_before
    assert session.seq == seq_before
    assert session.clients["c1"].fusion == fusion_before


def test_concurrent_transform_on_same_object_is_flagged(lexicon, caplog):
    import logging

    session = _session(lexicon)
    handle_connect(session, _hello(name="alice"))
    handle_connect(session, _hello(name="bob"))
    handle_event(session, "c1", speech_event(0, "create cube"))
    # both clients select the shared cube and start transforms on it
    frame = make_frame(100, "right", hand_points(palm=(0.5, 0.5), pinch_d=0.0))
    handle_event(session, "c2", frame)
    handle_event(session, "c1", speech_event(2500, "scale"))
    handle_event(session, "c2", speech_event(2500, "rotate"))
    with caplog.at_level(logging.WARNING, logger="modalcad.session"):
        handle_event(session, "c1", speech_event(5000, "two"))
    assert any("both transforming object 1" in r.message for r in caplog.records)


def test_landmark_event_expands_to_gesture_directives(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    handle_event(session, "c1", speech_event(0, "create cube"))
    # right-hand frame over the scene center: cursor move + select pinch
    frame = make_frame(100, "right", hand_points(palm=(0.5, 0.5), pinch_d=0.0))
    _, delta = handle_event(session, "c1", frame)
    assert delta is not None
    kinds = [type(d).__name__ for d in delta.directives]
    assert kinds == ["SelectAt"]
    assert session.clients["c1"].fusion.selection == 1


def test_landmark_without_transition_produces_no_delta(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    frame = make_frame(0, "left", hand_points(pinch_d=0.2))
    _, delta = handle_event(session, "c1", frame)
    assert delta is None


def test_out_of_order_client_events_become_protocol_errors(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    handle_event(session, "c1", speech_event(1000, "create cube"))
    with pytest.raises(SessionError) as err:
        handle_event(session, "c1", speech_event(500, "undo"))
    assert err.value.code == "bad_event"
    # the session survives and keeps serving in-order events
    _, delta = handle_event(session, "c1", speech_event(2000, "greater"))
    assert delta is not None and delta.seq == 2


def test_decode_event_payload_speech_and_landmark():
    event = decode_event_payload(
        {"type": "event", "event": {"t": 5, "payload": {"kind": "speech", "text": "undo"}}}
    )
    assert isinstance(event, InputEvent) and isinstance(event.payload, SpeechChunk)
    frame = decode_event_payload(
        {
            "type": "event",
            "event": {
                "t": 5,
                "payload": {"kind": "landmark", "hand": "left", "points": hand_points()},
            },
        }
    )
    assert frame.hand == "left"
    with pytest.raises(SessionError) as err:
        decode_event_payload({"type": "event", "event": {"t": 5, "payload": {"kind": "nope"}}})
    assert err.value.code == "bad_event"
    with pytest.raises(SessionError):
        decode_event_payload({"type": "event"})


def test_delta_message_round_trips_directives(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    _, delta = handle_event(session, "c1", speech_event(0, "create cube"))
    message = delta_message(delta)
    assert message["type"] == "delta"
    assert message["seq"] == 1
    assert [directive_from_json(d) for d in message["directives"]] == list(delta.directives)
    assert message["scene_hash"] == delta.scene_hash


def test_welcome_message_reflects_current_state(lexicon):
    session = _session(lexicon)
    handle_connect(session, _hello())
    handle_event(session, "c1", speech_event(0, "create cube"))
    welcome = welcome_message(session, "c1")
    assert welcome["seq"] == 1
    assert len(welcome["snapshot"]["objects"]) == 1
