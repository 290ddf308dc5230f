import threading

import pytest
from fastapi.testclient import TestClient

from crowdlens.datasets import demo_scene
from crowdlens.errors import FrameOutOfRange, UnknownScene
from crowdlens.service import (
    OverlayConfig,
    PlaybackSession,
    SceneStore,
    advance_session,
    create_app,
)

from conftest import make_scene


@pytest.fixture(scope="module")
def store():
    return SceneStore.from_scenes([demo_scene("AE-01"), demo_scene("AT-03")])


@pytest.fixture()
def client(store):
    return TestClient(create_app(store))


class TestStore:
    def test_list_scenes_sorted_and_stable(self, store):
        first = store.list_scenes()
        second = store.list_scenes()
        assert first == second
        assert [s["scene_id"] for s in first] == ["AE-01", "AT-03"]
        assert first[0]["density_label"] == "Low"

    def test_empty_store_lists_nothing(self):
        assert SceneStore([]).list_scenes() == []

    def test_six_video_store_ordering(self):
        from crowdlens.datasets import demo_scenes

        listing = SceneStore.from_scenes(demo_scenes()).list_scenes()
        assert len(listing) == 6
        assert listing[0]["scene_id"] == "AE-01"
        assert [s["scene_id"] for s in listing] == sorted(s["scene_id"] for s in listing)

    def test_frame_payload_pure(self, store):
        overlay = OverlayConfig(show_collectivity=True, highlight={1: "yellow"})
        a = store.frame_payload("AE-01", 10, overlay)
        b = store.frame_payload("AE-01", 10, overlay)
        assert a == b

    def test_overlay_toggles(self, store):
        bare = store.frame_payload("AE-01", 0)
        assert set(bare["pedestrians"][0]) == {"id", "x", "y", "heading", "animation"}
        assert len(bare["pedestrians"]) == 12

        rich = store.frame_payload("AE-01", 0, OverlayConfig(
            show_emotion=True, show_socialization=True, show_collectivity=True,
            highlight={1: "yellow", 3: "red"}))
        by_id = {p["id"]: p for p in rich["pedestrians"]}
        assert 0.0 <= by_id[2]["collectivity"] <= 1.0
        assert 0.0 <= by_id[2]["socialization"] <= 1.0
        assert set(by_id[2]["emotion"]) == {"fear", "happiness", "sadness", "anger", "dominant"}
        assert by_id[1]["color"] == "yellow"
        assert by_id[3]["color"] == "red"
        assert "color" not in by_id[2]

    def test_errors(self, store):
        with pytest.raises(UnknownScene):
            store.frame_payload("nope", 0)
        with pytest.raises(FrameOutOfRange):
            store.frame_payload("AE-01", 10_000)

    def test_overlay_query_parsing(self):
        o = OverlayConfig.from_query("emotion,collectivity", "3:yellow,8:red")
        assert o.show_emotion and o.show_collectivity and not o.show_socialization
        assert o.highlight == {3: "yellow", 8: "red"}
        with pytest.raises(ValueError):
            OverlayConfig.from_query("sparkles", "")
        with pytest.raises(ValueError):
            OverlayConfig.from_query("", "3:purple")


class TestAdvanceSession:
    def session(self, **kw):
        defaults = dict(session_id="s", scene_id="AE-01", cursor_frame=0,
                        rate=1.0, state="Playing")
        defaults.update(kw)
        return PlaybackSession(**defaults)

    def test_half_second_at_unit_rate(self):
        s = advance_session(self.session(), 0.5, fps=24, frame_range=(0, 239))
        assert s.cursor_frame == 12

    def test_rate_multiplier(self):
        s = advance_session(self.session(rate=4.0), 0.5, fps=24, frame_range=(0, 239))
        assert s.cursor_frame == 48

    def test_paused_unchanged(self):
        s = self.session(state="Paused", cursor_frame=7)
        assert advance_session(s, 10.0, fps=24, frame_range=(0, 239)) is s

    def test_clamp_and_stop_at_end(self):
        s = advance_session(self.session(cursor_frame=230), 10.0, fps=24,
                            frame_range=(0, 239))
        assert s.cursor_frame == 239
        assert s.state == "Stopped"

    def test_negative_step_clamps_at_start(self):
        s = advance_session(self.session(cursor_frame=5), -10.0, fps=24,
                            frame_range=(0, 239))
        assert s.cursor_frame == 0
        assert s.state == "Playing"

    def test_never_leaves_range(self):
        for dt in (-100.0, -0.01, 0.0, 0.3, 5.0, 1e4):
            s = advance_session(self.session(cursor_frame=100), dt, fps=24,
                                frame_range=(0, 239))
            assert 0 <= s.cursor_frame <= 239


class TestEndpoints:
    def test_scene_listing(self, client):
        r = client.get("/scenes")
        assert r.status_code == 200
        assert [s["scene_id"] for s in r.json()] == ["AE-01", "AT-03"]

    def test_summary_endpoint(self, client):
        r = client.get("/scenes/AE-01/summary")
        assert r.status_code == 200
        assert r.json()["scene"]["scene_id"] == "AE-01"
        assert client.get("/scenes/zzz/summary").status_code == 404

    def test_frame_endpoint(self, client):
        r = client.get("/scenes/AE-01/frames/0?overlays=collectivity&highlight=1:yellow")
        assert r.status_code == 200
        doc = r.json()
        assert doc["frame"] == 0
        assert len(doc["pedestrians"]) == 12
        assert client.get("/scenes/AE-01/frames/999999").status_code == 400
        assert client.get("/scenes/AE-01/frames/0?overlays=bogus").status_code == 400

    def test_session_lifecycle(self, client):
        sid = client.post("/sessions", json={"scene_id": "AE-01"}).json()["session_id"]
        r = client.post(f"/sessions/{sid}/control", json={"action": "rate", "rate": 2.0})
        assert r.json()["rate"] == 2.0
        r = client.post(f"/sessions/{sid}/control", json={"action": "rate", "rate": 3.0})
        assert r.status_code == 400
        r = client.post(f"/sessions/{sid}/control", json={"action": "seek", "frame": 10_000})
        assert r.json()["cursor_frame"] == 239
        r = client.post(f"/sessions/{sid}/control", json={"action": "seek", "frame": -4})
        assert r.json()["cursor_frame"] == 0
        r = client.post(f"/sessions/{sid}/control", json={"action": "play"})
        assert r.json()["state"] == "Playing"
        r = client.post(f"/sessions/{sid}/control", json={"action": "pause"})
        assert r.json()["state"] == "Paused"
        assert client.post("/sessions/none/control", json={"action": "play"}).status_code == 404
        assert client.post("/sessions", json={}).status_code == 400
        assert client.post("/sessions", json={"scene_id": "zzz"}).status_code == 404

    def test_sessions_isolated(self, client):
        a = client.post("/sessions", json={"scene_id": "AE-01"}).json()["session_id"]
        b = client.post("/sessions", json={"scene_id": "AE-01"}).json()["session_id"]
        client.post(f"/sessions/{a}/control", json={"action": "seek", "frame": 50})
        client.post(f"/sessions/{b}/control", json={"action": "seek", "frame": 7})
        assert client.get(f"/sessions/{a}").json()["cursor_frame"] == 50
        assert client.get(f"/sessions/{b}").json()["cursor_frame"] == 7

    def test_concurrent_control_does_not_corrupt(self, client):
        ids = [client.post("/sessions", json={"scene_id": "AT-03"}).json()["session_id"]
               for _ in range(4)]

        def hammer(sid, frame):
            for _ in range(25):
                client.post(f"/sessions/{sid}/control",
                            json={"action": "seek", "frame": frame})

        threads = [threading.Thread(target=hammer, args=(sid, 10 * k))
                   for k, sid in enumerate(ids)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        for k, sid in enumerate(ids):
            assert client.get(f"/sessions/{sid}").json()["cursor_frame"] == 10 * k

    def test_feed_stream(self, client):
        sid = client.post("/sessions", json={"scene_id": "AE-01"}).json()["session_id"]
        client.post(f"/sessions/{sid}/control", json={"action": "play"})
        with client.websocket_connect(f"/sessions/{sid}/feed?overlays=collectivity") as ws:
            frames = [ws.receive_json() for _ in range(4)]
        assert [f["frame"] for f in frames] == sorted(f["frame"] for f in frames)
        assert frames[-1]["frame"] > frames[0]["frame"]
        assert all("collectivity" in p for f in frames for p in f["pedestrians"])
        cursor = client.get(f"/sessions/{sid}").json()["cursor_frame"]
        assert cursor >= frames[-1]["frame"]

    def test_feed_payload_matches_rest(self, client):
        sid = client.post("/sessions", json={"scene_id": "AE-01"}).json()["session_id"]
        client.post(f"/sessions/{sid}/control", json={"action": "play"})
        with client.websocket_connect(f"/sessions/{sid}/feed") as ws:
            msg = ws.receive_json()
        rest = client.get(f"/scenes/AE-01/frames/{msg['frame']}").json()
        playback = msg.pop("playback")
        assert playback["state"] == "Playing"
        assert msg == rest
