"""Read-only JSON facade over one loaded dataset, plus the bundled UI.

Every handler is stateless: the dataset is loaded once at startup and
never mutated, and each simulation request derives its own rng streams,
so identical requests produce identical bodies.
"""

import json
from pathlib import Path

from fastapi import Body, FastAPI, HTTPException, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles

from .engine import OverrideError, UnknownModelError, document_to_json, load_engine

# Latency guard for the simulation model; larger runs belong on the CLI.
MAX_SIMS = 100_000

_REQUEST_FIELDS = {"model_id", "overrides", "n_sims", "seed"}


def _default_ui_dir():
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def _checked_count(body, field, upper):
    value = body.get(field)
    if value is None:
        return None
    # bool is an int subclass; reject it explicitly.
    if type(value) is not int:
        raise HTTPException(400, f"{field} must be an integer")
    if upper is not None and value > upper:
        raise HTTPException(400, f"{field} must be at most {upper}")
    return value


def create_app(data_dir, cors_origins=(), ui_dir=None) -> FastAPI:
    engine = load_engine(data_dir)
    app = FastAPI(title="housecast", docs_url=None, redoc_url=None)
    if cors_origins:
        app.add_middleware(
            CORSMiddleware,
            allow_origins=list(cors_origins),
            allow_methods=["GET", "POST"],
            allow_headers=["*"],
        )

    @app.get("/api/manifest")
    def manifest() -> Response:
        payload = json.dumps(engine.manifest_payload(), sort_keys=True)
        return Response(content=payload, media_type="application/json")

    @app.post("/api/forecast")
    def forecast(body: dict = Body(...)) -> Response:
        unknown = set(body) - _REQUEST_FIELDS
        if unknown:
            raise HTTPException(
                400, f"unknown request field(s): {', '.join(sorted(unknown))}"
            )
        model_id = body.get("model_id")
        if not isinstance(model_id, str):
            raise HTTPException(400, "model_id is required and must be a string")
        overrides = body.get("overrides") or {}
        if not isinstance(overrides, dict):
            raise HTTPException(400, "overrides must be an object")
        n_sims = _checked_count(body, "n_sims", MAX_SIMS)
        seed = _checked_count(body, "seed", None)
        try:
            document = engine.forecast(model_id, overrides, n_sims=n_sims, seed=seed)
        except (UnknownModelError, OverrideError) as exc:
            raise HTTPException(400, str(exc))
        except ValueError as exc:
            # Model preconditions: empty poll window, missing fields, bad
            # input combinations.
            raise HTTPException(422, str(exc))
        return Response(
            content=document_to_json(document), media_type="application/json"
        )

    static_dir = Path(ui_dir) if ui_dir is not None else _default_ui_dir()
    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")
    return app
