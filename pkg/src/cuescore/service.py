"""HTTP/JSON service backing the leitmotif-selection UI.

All request and response bodies are JSON except the rendered MIDI stream.
Renders run as background jobs; poll the status endpoint, then fetch the
artifacts. State is persisted by the ProjectStore, so the service can be
restarted without losing projects.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import BackgroundTasks, FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .config import EngineConfig
from .project import (
    IncompleteAssignment,
    InvalidAssignment,
    ProjectNotFound,
    ProjectStore,
)
from .vision import EmptyAnalysis, NoFaces, SchemaError

ARTIFACT_MEDIA_TYPES = {
    "score.mid": "audio/midi",
    "score.chords.txt": "text/plain; charset=utf-8",
    "timeline.json": "application/json",
}


def create_app(data_dir: str | Path, config: EngineConfig | None = None,
               ui_dir: str | Path | None = None) -> FastAPI:
    store = ProjectStore(data_dir, config)
    app = FastAPI(title="cuescore", version="0.1.0")
    app.state.store = store
    # Single-user tool; let a separately served UI reach the API.
    app.add_middleware(CORSMiddleware, allow_origins=["*"],
                       allow_methods=["*"], allow_headers=["*"])

    @app.exception_handler(ProjectNotFound)
    async def _not_found(request: Request, exc: ProjectNotFound):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.post("/projects", status_code=201)
    def create_project(body: dict):
        if "analysis" not in body:
            raise HTTPException(400, "body must include 'analysis'")
        try:
            return store.create(
                body["analysis"],
                seed=int(body.get("seed", 0)),
                melody_corpus=body.get("melody_corpus"),
                chord_corpus=body.get("chord_corpus"),
            )
        except (SchemaError, EmptyAnalysis, NoFaces, ValueError) as exc:
            raise HTTPException(400, str(exc))

    @app.get("/projects/{project_id}")
    def get_project(project_id: str):
        return store.describe(project_id)

    @app.get("/projects/{project_id}/segments")
    def get_segments(project_id: str):
        return store.segments(project_id)

    @app.get("/projects/{project_id}/characters")
    def get_characters(project_id: str):
        return store.characters(project_id)

    @app.get("/projects/{project_id}/characters/{character_id}/candidates")
    def get_candidates(project_id: str, character_id: str):
        return store.candidates(project_id, character_id)

    @app.put("/projects/{project_id}/assignment")
    def put_assignment(project_id: str, body: dict):
        try:
            return store.set_assignment(project_id, body)
        except InvalidAssignment as exc:
            raise HTTPException(400, str(exc))

    @app.post("/projects/{project_id}/render")
    def post_render(project_id: str, background: BackgroundTasks):
        try:
            store.check_render_ready(project_id)
        except IncompleteAssignment as exc:
            raise HTTPException(409, str(exc))
        store.mark_render_pending(project_id)
        background.add_task(store.render, project_id)
        return {"status": "started"}

    @app.get("/projects/{project_id}/render/status")
    def render_status(project_id: str):
        status = store.render_status(project_id)
        return {"status": status.state, "detail": status.detail}

    @app.get("/projects/{project_id}/{artifact}")
    def get_artifact(project_id: str, artifact: str):
        if artifact not in ARTIFACT_MEDIA_TYPES:
            raise HTTPException(404, f"unknown artifact {artifact!r}")
        data = store.artifact(project_id, artifact)
        return Response(content=data, media_type=ARTIFACT_MEDIA_TYPES[artifact])

    if ui_dir is not None and Path(ui_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
