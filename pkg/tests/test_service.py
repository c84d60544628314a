"""Session service: protocol, isolation, streaming, timers."""

import time

import pytest
from fastapi.testclient import TestClient

from hmiv.service import create_app

from .conftest import FIXTURE_DIR

TINY_TIMER_MODEL = """
statechart blinker {
  modes ON, OFF
  initial ON
  timer auto_off 200 ms in ON emits expire
  transition off: ON -> OFF on expire
  transition on: OFF -> ON on push
}
"""


@pytest.fixture()
def client():
    app = create_app(root=FIXTURE_DIR, frozen_time=True)
    with TestClient(app) as c:
        yield c


def make_session(client, **payload):
    r = client.post("/sessions", json=payload or {"model": "fcu.hmi"})
    assert r.status_code == 200, r.text
    return r.json()["id"]


def test_create_and_state(client):
    sid = make_session(client, model="fcu.hmi")
    r = client.get(f"/sessions/{sid}/state")
    body = r.json()
    assert body["mode"] == "STD"
    assert body["display"] == "STD"
    assert body["variables"]["display"] == "1013.00"
    assert body["enabled"] == ["qnhClick", "unitClick"]


def test_post_event_and_enabled(client):
    sid = make_session(client)
    r = client.post(f"/sessions/{sid}/events", json={"event": "qnhClick"})
    assert r.json()["accepted"] is True
    assert r.json()["state"]["mode"] == "QNH"
    r = client.post(f"/sessions/{sid}/events", json={"event": "qnhClick"})
    assert r.json()["accepted"] is False     # no-op click
    enabled = client.get(f"/sessions/{sid}/enabled").json()["enabled"]
    assert "stdClick" in enabled and "digit9" in enabled


def test_unknown_event_400(client):
    sid = make_session(client)
    r = client.post(f"/sessions/{sid}/events", json={"event": "bogus"})
    assert r.status_code == 400
    assert "unknown event" in r.json()["detail"][0]["message"]


def test_session_isolation(client):
    a = make_session(client)
    b = make_session(client)
    for ev in ("qnhClick", "digit7", "digit5", "digit0", "entKey"):
        client.post(f"/sessions/{a}/events", json={"event": ev})
        # interleave reads of b between writes to a
        assert client.get(f"/sessions/{b}/state").json()["mode"] == "STD"
    assert client.get(f"/sessions/{a}/state").json()["display"] == "750 hPa"
    assert client.get(f"/sessions/{b}/state").json()["variables"]["display"] == "1013.00"


def test_delete_session(client):
    sid = make_session(client)
    assert client.delete(f"/sessions/{sid}").status_code == 200
    assert client.get(f"/sessions/{sid}/state").status_code == 404
    assert client.delete(f"/sessions/{sid}").status_code == 404


def test_inline_source_session(client):
    sid = make_session(client, source=TINY_TIMER_MODEL)
    r = client.get(f"/sessions/{sid}/state")
    assert r.json()["mode"] == "ON"


def test_invalid_model_400(client):
    r = client.post("/sessions", json={"source": "statechart X { initial M }"})
    assert r.status_code == 400
    assert any("initial mode" in d["message"] for d in r.json()["detail"])


def test_stream_pushes_states(client):
    sid = make_session(client)
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        assert ws.receive_json()["mode"] == "STD"
        for ev, expect_mode in (("qnhClick", "QNH"), ("digit9", "EDIT_PRESSURE")):
            client.post(f"/sessions/{sid}/events", json={"event": ev})
            assert ws.receive_json()["mode"] == expect_mode
        # ignored events push nothing; the next accepted event arrives next
        client.post(f"/sessions/{sid}/events", json={"event": "qnhClick"})
        client.post(f"/sessions/{sid}/events", json={"event": "escKey"})
        assert ws.receive_json()["mode"] == "QNH"


def test_no_dropped_updates_in_scripted_run(client):
    sid = make_session(client)
    script = ["qnhClick"] + ["digit9", "escKey"] * 49 + ["digit1"]
    with client.websocket_connect(f"/sessions/{sid}/stream") as ws:
        ws.receive_json()
        accepted = 0
        for ev in script:
            r = client.post(f"/sessions/{sid}/events", json={"event": ev})
            if r.json()["accepted"]:
                accepted += 1
        got = [ws.receive_json() for _ in range(accepted)]
    assert len(got) == 100
    assert got[-1]["mode"] == "EDIT_PRESSURE"


def test_wall_clock_timer_advances():
    app = create_app(root=FIXTURE_DIR, frozen_time=False)
    with TestClient(app) as client:
        r = client.post("/sessions", json={"source": TINY_TIMER_MODEL})
        sid = r.json()["id"]
        assert r.json()["state"]["mode"] == "ON"
        time.sleep(0.45)
        assert client.get(f"/sessions/{sid}/state").json()["mode"] == "OFF"


def test_frozen_time_keeps_state(client):
    sid = make_session(client, source=TINY_TIMER_MODEL)
    time.sleep(0.35)
    assert client.get(f"/sessions/{sid}/state").json()["mode"] == "ON"


def test_files_mount_serves_fixtures(client):
    r = client.get("/files/fcu.hmi")
    assert r.status_code == 200
    assert "statechart fcu" in r.text
