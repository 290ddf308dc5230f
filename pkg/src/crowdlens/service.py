"""Playback service: scenes, frame payloads, sessions and the frame feed.

All analysis happens once at ingest; every frame query reads the cached
per-scene analysis. Sessions are independent in-memory records keyed by an
opaque token, so concurrent clients can play the same scene at different
cursors and rates.

Endpoints (JSON bodies, UTF-8):

    GET  /scenes
    GET  /scenes/{scene_id}/summary
    GET  /scenes/{scene_id}/frames/{frame}?overlays=...&highlight=...
    POST /sessions                {"scene_id": ...}
    GET  /sessions/{session_id}
    POST /sessions/{session_id}/control
         {"action": "play"|"pause"|"stop"|"rate"|"seek", "rate"?, "frame"?}
    WS   /sessions/{session_id}/feed?overlays=...&highlight=...

The feed emits one frame payload per tick at ``rate * fps`` messages per
second while the session plays, advancing the cursor by wall time (slow
consumers skip frames rather than lag behind).
"""

from __future__ import annotations

import asyncio
import time
import uuid
from dataclasses import dataclass, field, replace
from pathlib import Path

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.middleware.cors import CORSMiddleware

from .errors import FrameOutOfRange, StoreUnavailable, UnknownScene, UnknownSession
from .pipeline import AnalysisConfig, SceneAnalysis, analyze_scene
from .report import summarize_scene
from .tracking import TrackedScene, detect_format, parse_tracking_file

RATES = (0.5, 1.0, 2.0, 4.0)
HIGHLIGHT_COLORS = ("yellow", "red", "none")

OVERLAY_KEYS = ("emotion", "socialization", "collectivity")


@dataclass(frozen=True)
class OverlayConfig:
    show_emotion: bool = False
    show_socialization: bool = False
    show_collectivity: bool = False
    highlight: dict = field(default_factory=dict)  # pedestrian id -> color

    def __post_init__(self):
        for ped, color in self.highlight.items():
            if color not in HIGHLIGHT_COLORS:
                raise ValueError(f"highlight color for {ped} must be one of {HIGHLIGHT_COLORS}")

    @classmethod
    def from_query(cls, overlays: str = "", highlight: str = "") -> "OverlayConfig":
        """Parse ``overlays=emotion,collectivity`` and ``highlight=3:yellow,8:red``."""
        toggles = {t.strip() for t in overlays.split(",") if t.strip()}
        unknown = toggles - set(OVERLAY_KEYS)
        if unknown:
            raise ValueError(f"unknown overlays: {sorted(unknown)}")
        hl = {}
        for part in highlight.split(","):
            part = part.strip()
            if not part:
                continue
            ped, _, color = part.partition(":")
            hl[int(ped)] = color
        return cls(
            show_emotion="emotion" in toggles,
            show_socialization="socialization" in toggles,
            show_collectivity="collectivity" in toggles,
            highlight=hl,
        )


@dataclass(frozen=True)
class PlaybackSession:
    session_id: str
    scene_id: str
    cursor_frame: int
    rate: float = 1.0
    state: str = "Paused"  # Playing | Paused | Stopped

    def __post_init__(self):
        if self.rate not in RATES:
            raise ValueError(f"rate must be one of {RATES}")
        if self.state not in ("Playing", "Paused", "Stopped"):
            raise ValueError(f"invalid playback state {self.state!r}")


def advance_session(s: PlaybackSession, wall_dt: float, *,
                    fps: int, frame_range: tuple[int, int]) -> PlaybackSession:
    """Move a playing session's cursor by wall time; clamp and stop at the end.

    Paused and stopped sessions are returned unchanged.
    """
    if s.state != "Playing":
        return s
    step = round(wall_dt * fps * s.rate)
    cursor = min(max(s.cursor_frame + step, frame_range[0]), frame_range[1])
    state = "Stopped" if cursor >= frame_range[1] else "Playing"
    return replace(s, cursor_frame=cursor, state=state)


class SceneStore:
    """Immutable post-ingest cache: scene, analysis and summary per id."""

    def __init__(self, analyses: list[SceneAnalysis]):
        self._entries = {a.scene.scene_id: a for a in analyses}
        self._summaries = {sid: summarize_scene(a) for sid, a in self._entries.items()}

    @classmethod
    def from_scenes(cls, scenes: list[TrackedScene],
                    config: AnalysisConfig | None = None) -> "SceneStore":
        config = config or AnalysisConfig()
        return cls([analyze_scene(scene, config) for scene in scenes])

    @classmethod
    def from_paths(cls, paths, config: AnalysisConfig | None = None) -> "SceneStore":
        scenes = [
            parse_tracking_file(Path(p).read_bytes(), detect_format(p))
            for p in paths
        ]
        if not scenes:
            raise StoreUnavailable("no scene files found")
        return cls.from_scenes(scenes, config)

    def __len__(self):
        return len(self._entries)

    def analysis(self, scene_id: str) -> SceneAnalysis:
        try:
            return self._entries[scene_id]
        except KeyError:
            raise UnknownScene(scene_id) from None

    def list_scenes(self) -> list[dict]:
        out = []
        for sid in sorted(self._entries):
            a = self._entries[sid]
            md = a.scene.metadata
            out.append({
                "scene_id": sid,
                "country": md.country,
                "fps": md.fps,
                "pedestrian_count": md.pedestrian_count,
                "density_label": md.density_label,
                "density_computed": a.density.value,
                "frame_range": [a.scene.frame_range[0], a.scene.frame_range[1]],
            })
        return out

    def summary(self, scene_id: str) -> dict:
        try:
            return self._summaries[scene_id]
        except KeyError:
            raise UnknownScene(scene_id) from None

    def frame_payload(self, scene_id: str, frame: int,
                      overlay: OverlayConfig | None = None) -> dict:
        """Positions, animation states and toggled overlay values for every
        pedestrian present at a frame; a pure function of its arguments."""
        overlay = overlay or OverlayConfig()
        analysis = self.analysis(scene_id)
        lo, hi = analysis.scene.frame_range
        if not lo <= frame <= hi:
            raise FrameOutOfRange(f"frame {frame} outside [{lo}, {hi}]")
        pedestrians = []
        for ped_id in sorted(analysis.pedestrians):
            pa = analysis.pedestrians[ped_id]
            first = pa.frames[0].frame
            idx = frame - first
            if idx < 0 or idx >= len(pa.frames):
                continue
            f = pa.frames[idx]
            record = {
                "id": ped_id,
                "x": f.position[0],
                "y": f.position[1],
                "heading": f.heading,
                "animation": pa.animations[idx].value,
            }
            color = overlay.highlight.get(ped_id, "none")
            if color != "none":
                record["color"] = color
            if overlay.show_collectivity:
                record["collectivity"] = f.collectivity
            if overlay.show_socialization:
                record["socialization"] = pa.social.socialization
            if overlay.show_emotion:
                record["emotion"] = dict(pa.emotions.as_dict(), dominant=pa.dominant_emotion)
            pedestrians.append(record)
        return {
            "scene_id": scene_id,
            "frame": frame,
            "fps": analysis.scene.metadata.fps,
            "pedestrians": pedestrians,
        }


def create_app(store: SceneStore, viewer_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="crowdlens playback service")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    app.state.store = store
    sessions: dict[str, PlaybackSession] = {}
    app.state.sessions = sessions

    def get_session(session_id: str) -> PlaybackSession:
        try:
            return sessions[session_id]
        except KeyError:
            raise UnknownSession(session_id) from None

    def scene_bounds(scene_id: str):
        analysis = store.analysis(scene_id)
        return analysis.scene.metadata.fps, analysis.scene.frame_range

    def session_dict(s: PlaybackSession) -> dict:
        fps, frame_range = scene_bounds(s.scene_id)
        return {
            "session_id": s.session_id,
            "scene_id": s.scene_id,
            "cursor_frame": s.cursor_frame,
            "rate": s.rate,
            "state": s.state,
            "fps": fps,
            "frame_range": [frame_range[0], frame_range[1]],
        }

    @app.get("/scenes")
    def list_scenes():
        return store.list_scenes()

    @app.get("/scenes/{scene_id}/summary")
    def scene_summary(scene_id: str):
        try:
            return store.summary(scene_id)
        except UnknownScene as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.get("/scenes/{scene_id}/frames/{frame}")
    def frame(scene_id: str, frame: int, overlays: str = "", highlight: str = ""):
        try:
            overlay = OverlayConfig.from_query(overlays, highlight)
            return store.frame_payload(scene_id, frame, overlay)
        except UnknownScene as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        except FrameOutOfRange as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc
        except ValueError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from exc

    @app.post("/sessions", status_code=201)
    def create_session(body: dict):
        scene_id = body.get("scene_id")
        if not scene_id:
            raise HTTPException(status_code=400, detail="scene_id is required")
        try:
            _, frame_range = scene_bounds(scene_id)
        except UnknownScene as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        session = PlaybackSession(
            session_id=uuid.uuid4().hex,
            scene_id=scene_id,
            cursor_frame=frame_range[0],
        )
        sessions[session.session_id] = session
        return session_dict(session)

    @app.get("/sessions/{session_id}")
    def read_session(session_id: str):
        try:
            return session_dict(get_session(session_id))
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc

    @app.post("/sessions/{session_id}/control")
    def control_session(session_id: str, body: dict):
        try:
            s = get_session(session_id)
        except UnknownSession as exc:
            raise HTTPException(status_code=404, detail=str(exc)) from exc
        _, frame_range = scene_bounds(s.scene_id)
        action = body.get("action")
        if action == "play":
            cursor = s.cursor_frame
            if cursor >= frame_range[1]:  # restart a finished session
                cursor = frame_range[0]
            s = replace(s, state="Playing", cursor_frame=cursor)
        elif action == "pause":
            s = replace(s, state="Paused")
        elif action == "stop":
            s = replace(s, state="Stopped")
        elif action == "rate":
            rate = body.get("rate")
            if rate not in RATES:
                raise HTTPException(status_code=400, detail=f"rate must be one of {RATES}")
            s = replace(s, rate=float(rate))
        elif action == "seek":
            frame = body.get("frame")
            if not isinstance(frame, int):
                raise HTTPException(status_code=400, detail="seek needs an integer 'frame'")
            frame = min(max(frame, frame_range[0]), frame_range[1])
            s = replace(s, cursor_frame=frame)
        else:
            raise HTTPException(status_code=400, detail=f"unknown action {action!r}")
        sessions[session_id] = s
        return session_dict(s)

    @app.websocket("/sessions/{session_id}/feed")
    async def feed(ws: WebSocket, session_id: str):
        await ws.accept()
        try:
            overlay = OverlayConfig.from_query(
                ws.query_params.get("overlays", ""),
                ws.query_params.get("highlight", ""),
            )
        except ValueError:
            await ws.close(code=1008)
            return
        if session_id not in sessions:
            await ws.close(code=1008)
            return
        try:
            last_tick = time.monotonic()
            while True:
                s = sessions.get(session_id)
                if s is None:
                    break
                if s.state != "Playing":
                    last_tick = time.monotonic()
                    await asyncio.sleep(0.05)
                    continue
                fps, frame_range = scene_bounds(s.scene_id)
                payload = store.frame_payload(s.scene_id, s.cursor_frame, overlay)
                payload["playback"] = {"state": s.state, "rate": s.rate}
                await ws.send_json(payload)
                await asyncio.sleep(1.0 / (fps * s.rate))
                now = time.monotonic()
                advanced = advance_session(s, now - last_tick, fps=fps,
                                           frame_range=frame_range)
                last_tick = now
                # another client may have reset the session meanwhile
                if sessions.get(session_id) is s:
                    sessions[session_id] = advanced
                if advanced.state == "Stopped":
                    final = store.frame_payload(s.scene_id, advanced.cursor_frame, overlay)
                    final["playback"] = {"state": "Stopped", "rate": advanced.rate}
                    await ws.send_json(final)
        except WebSocketDisconnect:
            pass

    if viewer_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/viewer", StaticFiles(directory=viewer_dir, html=True), name="viewer")

    return app


def serve(store: SceneStore, host: str = "127.0.0.1", port: int = 8000,
          viewer_dir: str | None = None):
    import uvicorn

    uvicorn.run(create_app(store, viewer_dir), host=host, port=port, log_level="info")
