"""HTTP service exposing the scenario runners.

Requests and responses are the pydantic models from ``scenarios``; the
rendered CSV travels inside the JSON response so any client can persist a
byte-stable artifact.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import __version__
from .errors import ConfigurationError
from .scenarios import SCENARIOS, ScenarioReport, ScenarioRequest, run_scenario

app = FastAPI(title="qjjlab", version=__version__)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/scenarios")
def list_scenarios() -> dict:
    return {"scenarios": sorted(SCENARIOS)}


@app.post("/scenarios/{name}", response_model=ScenarioReport)
def post_scenario(name: str, req: ScenarioRequest) -> ScenarioReport:
    if name not in SCENARIOS:
        raise HTTPException(status_code=404, detail=f"unknown scenario {name!r}")
    try:
        return run_scenario(name, req)
    except ConfigurationError as exc:
        raise HTTPException(status_code=422, detail=str(exc))
