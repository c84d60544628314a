"""HTTP/WebSocket session service for live simulation.

External clients (the browser prototype, test scripts) create sessions over
a document, post events, and watch state pushes on a WebSocket stream:

    POST   /sessions {"model": "path.hmi"} | {"source": "..."}  -> {"id": ...}
    GET    /sessions/{id}/state
    GET    /sessions/{id}/enabled
    POST   /sessions/{id}/events {"event": "qnhClick"}
    DELETE /sessions/{id}
    WS     /sessions/{id}/stream          (state JSON after every accepted
                                           event or timer tick)

Each session owns its state; requests for one session are serialised.  Timers
advance with wall-clock time quantized to 100 ms ticks unless the service
runs with frozen time.
"""

from __future__ import annotations

import asyncio
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse

from . import render
from . import statechart as sc
from .dsl import parse_document, validate_document
from .dsl.document import Document

TICK_MS = 100


@dataclass
class Session:
    id: str
    document: Document
    model: sc.StatechartModel
    state: sc.SystemState
    log: list[tuple[int, str, str]] = field(default_factory=list)  # (ms, event, mode)
    created_at: float = field(default_factory=time.time)
    last_access: float = field(default_factory=time.time)
    clock_ms: int = 0
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    watchers: list[asyncio.Queue] = field(default_factory=list)

    def snapshot(self) -> dict:
        enabled = sc.enabled_events(self.model, self.state)
        return render.state_json(self.model, self.state, enabled)

    def push(self) -> None:
        snap = self.snapshot()
        for q in list(self.watchers):
            q.put_nowait(snap)


def create_app(root: str = ".", default_model: Optional[str] = None,
               frozen_time: bool = False, idle_minutes: float = 30.0,
               ui_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="hmiv session service")
    sessions: dict[str, Session] = {}
    registry_lock = asyncio.Lock()
    root_path = Path(root).resolve()

    def expire_stale() -> None:
        deadline = time.time() - idle_minutes * 60
        for sid in [s for s, sess in sessions.items() if sess.last_access < deadline]:
            del sessions[sid]

    def load_model_source(payload: dict) -> Document:
        if "source" in payload:
            source = payload["source"]
        elif "model" in payload or default_model:
            rel = payload.get("model") or default_model
            path = (root_path / rel).resolve()
            if not str(path).startswith(str(root_path)) and rel != default_model:
                raise HTTPException(400, detail=[{"message": "model path escapes the root"}])
            try:
                source = path.read_text(encoding="utf-8", errors="replace")
            except OSError as e:
                raise HTTPException(400, detail=[{"message": str(e)}])
        else:
            raise HTTPException(400, detail=[{"message": "request needs 'model' or 'source'"}])
        result = parse_document(source)
        diags = list(result.diagnostics)
        if result.document is not None:
            diags += validate_document(result.document)
        errors = [d for d in diags if d.severity == "error"]
        if result.document is None or errors:
            raise HTTPException(400, detail=[
                {"message": d.message, "line": d.span[0], "column": d.span[1], "code": d.code}
                for d in errors])
        return result.document

    async def get_session(sid: str) -> Session:
        async with registry_lock:
            expire_stale()
            sess = sessions.get(sid)
        if sess is None:
            raise HTTPException(404, detail=[{"message": f"no session {sid}"}])
        sess.last_access = time.time()
        return sess

    def advance_timers(sess: Session) -> bool:
        """Quantized wall-clock timer advancement; True if state changed."""
        if frozen_time or not sess.model.timers:
            return False
        now_ms = int((time.time() - sess.created_at) * 1000)
        ticks = (now_ms - sess.clock_ms) // TICK_MS
        if ticks <= 0:
            return False
        sess.clock_ms += ticks * TICK_MS
        before = sess.state
        sess.state = sc.tick(sess.model, sess.state, ticks * TICK_MS)
        return sess.state != before

    @app.post("/sessions")
    async def create_session(payload: dict):
        doc = load_model_source(payload)
        if not doc.statecharts:
            raise HTTPException(400, detail=[{"message": "document has no statechart"}])
        name = payload.get("statechart")
        model = doc.statechart(name) if name else doc.statecharts[0]
        if model is None:
            raise HTTPException(400, detail=[{"message": f"no statechart named '{name}'"}])
        sess = Session(id=uuid.uuid4().hex, document=doc, model=model,
                       state=sc.initial_state(model))
        async with registry_lock:
            expire_stale()
            sessions[sess.id] = sess
        return {"id": sess.id, "state": sess.snapshot()}

    @app.get("/sessions/{sid}/state")
    async def get_state(sid: str):
        sess = await get_session(sid)
        async with sess.lock:
            if advance_timers(sess):
                sess.push()
            return sess.snapshot()

    @app.get("/sessions/{sid}/enabled")
    async def get_enabled(sid: str):
        sess = await get_session(sid)
        async with sess.lock:
            if advance_timers(sess):
                sess.push()
            return {"enabled": sc.enabled_events(sess.model, sess.state)}

    @app.post("/sessions/{sid}/events")
    async def post_event(sid: str, payload: dict):
        sess = await get_session(sid)
        event = payload.get("event")
        if not isinstance(event, str) or event not in sess.model.events():
            raise HTTPException(400, detail=[{"message": f"unknown event {event!r}"}])
        async with sess.lock:
            if advance_timers(sess):
                sess.push()
            outcome = sc.step(sess.model, sess.state, event)
            sess.state = outcome.state
            sess.log.append((sess.clock_ms, event, sess.state.mode))
            if not outcome.ignored:
                sess.push()
            return {"accepted": not outcome.ignored, "fired": outcome.fired,
                    "state": sess.snapshot()}

    @app.delete("/sessions/{sid}")
    async def delete_session(sid: str):
        async with registry_lock:
            if sid not in sessions:
                raise HTTPException(404, detail=[{"message": f"no session {sid}"}])
            del sessions[sid]
        return JSONResponse({"deleted": sid})

    @app.websocket("/sessions/{sid}/stream")
    async def stream(ws: WebSocket, sid: str):
        await ws.accept()
        sess = sessions.get(sid)
        if sess is None:
            await ws.close(code=4004)
            return
        queue: asyncio.Queue = asyncio.Queue()
        sess.watchers.append(queue)
        try:
            await ws.send_json(sess.snapshot())
            while True:
                if frozen_time:
                    snap = await queue.get()
                else:
                    try:
                        snap = await asyncio.wait_for(queue.get(), timeout=TICK_MS / 1000)
                    except asyncio.TimeoutError:
                        async with sess.lock:
                            if advance_timers(sess):
                                sess.push()
                        continue
                await ws.send_json(snap)
        except (WebSocketDisconnect, RuntimeError):
            pass
        finally:
            if queue in sess.watchers:
                sess.watchers.remove(queue)

    if ui_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=ui_dir, html=True), name="ui")
    app.mount("/files", _SafeFiles(root_path), name="files")
    return app


class _SafeFiles:
    """Read-only static file serving under the document root."""

    def __init__(self, root: Path):
        self.root = root
        from fastapi.staticfiles import StaticFiles
        self._inner = StaticFiles(directory=str(root))

    async def __call__(self, scope, receive, send):
        await self._inner(scope, receive, send)
