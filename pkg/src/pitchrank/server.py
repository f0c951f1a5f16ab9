"""HTTP+JSON API over live sessions.

Errors are returned as {"error": <code>, "detail": <message>} with a status
that matches the error class (404 unknown ids, 409 rejected commands, 400
bad input).  The annotation console is a pure client of these endpoints; a
built UI directory can optionally be mounted at /.
"""

from __future__ import annotations

import asyncio
import socket

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from .errors import (
    AlreadyUsed,
    ClockRegression,
    NotOnPitch,
    PitchrankError,
    PlayerOffPitch,
    UnknownModel,
    UnknownPlayer,
    UnknownSession,
)
from .events import event_from_json
from .live import SessionStore

_NOT_FOUND = (UnknownSession, UnknownModel, UnknownPlayer)
_CONFLICT = (PlayerOffPitch, ClockRegression, NotOnPitch, AlreadyUsed)


def _status_for(exc: PitchrankError) -> int:
    if isinstance(exc, _NOT_FOUND):
        return 404
    if isinstance(exc, _CONFLICT):
        return 409
    return 400


def create_app(store: SessionStore, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="pitchrank live", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(PitchrankError)
    async def _domain_error(_request: Request, exc: PitchrankError):
        return JSONResponse({"error": exc.code, "detail": str(exc)},
                            status_code=_status_for(exc))

    @app.get("/models")
    def list_models():
        return {"models": sorted(store.models)}

    @app.post("/sessions", status_code=201)
    async def create_session(request: Request):
        body = await request.json()
        session = store.create_session(
            rosters_doc=body.get("rosters", {}),
            model_id=body.get("model_id", ""),
            tick_minutes=body.get("tick_minutes", 5),
        )
        return {"session_id": session.session_id}

    @app.get("/sessions/{session_id}")
    def session_meta(session_id: str):
        session = store.get(session_id)
        return {
            "session_id": session.session_id,
            "model_id": session.model_id,
            "tick_minutes": session.tick_minutes,
            "rosters": {team: [vars(e) for e in entries]
                        for team, entries in session.rosters.items()},
            "elapsed_minute": session.elapsed_minute(),
            "next_seq": session.next_seq,
        }

    @app.post("/sessions/{session_id}/events")
    async def post_event(session_id: str, request: Request):
        body = await request.json()
        body.setdefault("match_id", session_id)
        seq = store.append_event(session_id, event_from_json(body))
        return {"seq": seq}

    @app.post("/sessions/{session_id}/subs")
    async def post_sub(session_id: str, request: Request):
        body = await request.json()
        store.record_substitution(session_id, body.get("minute"),
                                  str(body.get("off_player")),
                                  str(body.get("on_player")))
        return {"ok": True}

    @app.get("/sessions/{session_id}/snapshots")
    def get_snapshot(session_id: str, mark: int):
        return store.snapshot(session_id, mark).to_json_dict()

    @app.get("/sessions/{session_id}/series")
    def get_series(session_id: str):
        return [snap.to_json_dict() for snap in store.series(session_id)]

    @app.get("/sessions/{session_id}/export")
    def get_export(session_id: str):
        return PlainTextResponse(store.export_text(session_id))

    if ui_dir:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    return app


def serve(app: FastAPI, host: str = "127.0.0.1", port: int = 8000) -> None:
    """Run uvicorn on an explicitly bound socket; port 0 picks and prints an
    ephemeral port before serving."""
    import uvicorn

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    bound_port = sock.getsockname()[1]
    print(f"listening on http://{host}:{bound_port}", flush=True)
    config = uvicorn.Config(app, host=host, port=bound_port, log_level="warning")
    server = uvicorn.Server(config)
    asyncio.run(server.serve(sockets=[sock]))
