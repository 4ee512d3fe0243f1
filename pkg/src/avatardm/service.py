"""HTTP gateway exposing sessions to the chat UI.

Turns are atomic request/response, matching the engine's strictly turn-based
loop, so there is no streaming. A per-session lock serializes concurrent
messages to one session; distinct sessions proceed in parallel. The store is
in memory with idle eviction; this is a desk-scale service, not a cluster.
"""

from __future__ import annotations

import threading
import time
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .engine import EngineAssets, Session, load_assets, start_session
from .errors import EmptyInput, SessionEnded

IDLE_TTL_SECONDS = 30 * 60


class _Entry:
    def __init__(self, session: Session):
        self.session = session
        self.lock = threading.Lock()
        self.last_used = time.monotonic()


class SessionStore:
    """Thread-safe map of live sessions with idle eviction."""

    def __init__(self, assets: EngineAssets, ttl: float = IDLE_TTL_SECONDS):
        self.assets = assets
        self.ttl = ttl
        self._entries: dict[str, _Entry] = {}
        self._lock = threading.Lock()

    def create(self, seed: int = 0) -> Session:
        session = start_session(self.assets, seed=seed)
        with self._lock:
            self._purge()
            self._entries[session.id] = _Entry(session)
        return session

    def get(self, session_id: str) -> Optional[_Entry]:
        with self._lock:
            self._purge()
            entry = self._entries.get(session_id)
            if entry is not None:
                entry.last_used = time.monotonic()
            return entry

    def delete(self, session_id: str) -> bool:
        with self._lock:
            return self._entries.pop(session_id, None) is not None

    def _purge(self) -> None:
        cutoff = time.monotonic() - self.ttl
        stale = [sid for sid, e in self._entries.items() if e.last_used < cutoff]
        for sid in stale:
            del self._entries[sid]


def _turn_payload(session: Session, turn_index: int) -> dict:
    turn = session.turns[turn_index - 1]
    payload = turn.to_dict()
    payload["session_id"] = session.id
    payload["turn"] = turn_index
    payload["goal_reached"] = session.goal_reached
    return payload


def create_app(
    assets: Optional[EngineAssets] = None,
    static_dir: str | Path | None = None,
    ttl: float = IDLE_TTL_SECONDS,
) -> FastAPI:
    """Build the API app; mount a static UI directory when one is given."""
    store = SessionStore(assets or load_assets(), ttl=ttl)
    app = FastAPI(title="avatardm gateway")
    app.state.store = store

    def error(status: int, message: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": message})

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/session")
    async def create_session(request: Request):
        try:
            body = await request.json() if await request.body() else {}
        except Exception:
            return error(400, "malformed JSON body")
        if not isinstance(body, dict):
            return error(400, "body must be a JSON object")
        seed = body.get("seed", 0)
        if not isinstance(seed, int):
            return error(400, "seed must be an integer")
        session = store.create(seed=seed)
        return {"session_id": session.id, "greeting": session.greeting}

    @app.post("/api/session/{session_id}/message")
    async def post_message(session_id: str, request: Request):
        try:
            body = await request.json()
        except Exception:
            return error(400, "malformed JSON body")
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            return error(400, "body must be a JSON object with a string 'text'")
        text = body["text"]
        entry = store.get(session_id)
        if entry is None:
            return error(404, "unknown session")
        with entry.lock:
            try:
                entry.session.step(text)
            except SessionEnded:
                return error(409, "session already ended")
            except EmptyInput:
                return error(400, "text must not be empty")
            return _turn_payload(entry.session, entry.session.turn)

    @app.get("/api/session/{session_id}/transcript")
    def transcript(session_id: str):
        entry = store.get(session_id)
        if entry is None:
            return error(404, "unknown session")
        with entry.lock:
            return [
                _turn_payload(entry.session, i)
                for i in range(1, len(entry.session.turns) + 1)
            ]

    @app.delete("/api/session/{session_id}")
    def delete_session(session_id: str):
        if not store.delete(session_id):
            return error(404, "unknown session")
        return {"deleted": True}

    if static_dir is not None and Path(static_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def serve(
    port: int = 8000,
    host: str = "127.0.0.1",
    assets: Optional[EngineAssets] = None,
    static_dir: str | Path | None = None,
) -> None:
    """Run the gateway under uvicorn (blocking)."""
    import uvicorn

    uvicorn.run(create_app(assets=assets, static_dir=static_dir), host=host, port=port)
