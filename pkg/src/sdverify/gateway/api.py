"""HTTP API over the gateway service.

Routes (JSON unless noted):
    GET  /api/communities
    GET  /api/communities/{community_id}/members
    POST /api/runs                      -> {"run_id": ...}
    GET  /api/runs/{run_id}             (persisted canonical document)
    GET  /api/runs/{run_id}/export?format=csv|json|table
    GET  /api/config                    (verifier defaults, for UI forms)

Errors: 400 validation, 404 unknown entity, 409 run not done.  When a static
directory is given, it is served at / for the dashboard.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from ..errors import (
    RunNotDoneError,
    UnknownCommunityError,
    UnknownMemberError,
    UnknownRunError,
    ValidationError,
)
from .service import EXPORT_FORMATS, Gateway
from .store import VerificationRequest

_MEDIA_TYPES = {"json": "application/json",
                "csv": "text/csv; charset=utf-8",
                "table": "text/plain; charset=utf-8"}


class RunSubmission(BaseModel):
    community_id: str
    member_ids: list[str] = []
    characteristics: list[str] | None = None
    config: dict = {}


def create_app(gateway: Gateway, static_dir=None) -> FastAPI:
    app = FastAPI(title="sdverify gateway", version="0.1.0")

    @app.exception_handler(ValidationError)
    async def _validation(request: Request, exc: ValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def _body_validation(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"error": str(exc)})

    @app.exception_handler(UnknownCommunityError)
    @app.exception_handler(UnknownMemberError)
    @app.exception_handler(UnknownRunError)
    async def _not_found(request: Request, exc: Exception):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(RunNotDoneError)
    async def _not_done(request: Request, exc: RunNotDoneError):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.get("/api/communities")
    def communities():
        return [{"community_id": community_id, "member_count": count}
                for community_id, count in gateway.list_communities()]

    @app.get("/api/communities/{community_id}/members")
    def members(community_id: str):
        return gateway.list_community_members(community_id)

    @app.get("/api/config")
    def config():
        cfg = gateway.config
        return {
            "theta_min": cfg.theta_min,
            "theta_sat": cfg.theta_sat,
            "theta_conf": cfg.theta_conf,
            "per_post_cap": cfg.per_post_cap,
            "reference_year": cfg.reference_year,
            "characteristics": gateway.lexicon.characteristic_ids(),
        }

    @app.post("/api/runs")
    def submit(body: RunSubmission):
        request = VerificationRequest(
            community_id=body.community_id,
            member_ids=tuple(body.member_ids),
            characteristics=None if body.characteristics is None
            else tuple(body.characteristics),
            config_overrides=dict(body.config),
        )
        return {"run_id": gateway.submit_run(request)}

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        return Response(content=gateway.get_run_bytes(run_id),
                        media_type="application/json")

    @app.get("/api/runs/{run_id}/export")
    def export_run(run_id: str, format: str = "json"):
        if format not in EXPORT_FORMATS:
            raise ValidationError(
                f"format must be one of {', '.join(EXPORT_FORMATS)}")
        return Response(content=gateway.export_run(run_id, format),
                        media_type=_MEDIA_TYPES[format])

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")

    return app
