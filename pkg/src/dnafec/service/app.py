"""FastAPI application exposing the codec and simulator over HTTP."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__
from . import ops
from .schemas import (
    CapacityRequest,
    CapacityResponse,
    DecodeRequest,
    DecodeResponse,
    EncodeRequest,
    EncodeResponse,
    HealthResponse,
    PotentialRequest,
    PotentialResponse,
    SimRequest,
    SimResponse,
)

app = FastAPI(title="dnafec", version=__version__)


@app.exception_handler(ValueError)
async def _value_error_handler(request: Request, exc: ValueError):
    return JSONResponse(status_code=400, content={"detail": str(exc)})


@app.get("/v1/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return ops.health()


@app.post("/v1/encode", response_model=EncodeResponse)
def encode(req: EncodeRequest) -> EncodeResponse:
    return ops.encode(req)


@app.post("/v1/decode", response_model=DecodeResponse)
def decode(req: DecodeRequest) -> DecodeResponse:
    return ops.decode(req)


@app.post("/v1/capacity", response_model=CapacityResponse)
def channel_capacity(req: CapacityRequest) -> CapacityResponse:
    return ops.channel_capacity(req)


@app.post("/v1/potential", response_model=PotentialResponse)
def coding_potential(req: PotentialRequest) -> PotentialResponse:
    return ops.coding_potential(req)


@app.post("/v1/sim", response_model=SimResponse)
def simulate(req: SimRequest) -> SimResponse:
    return ops.simulate(req)
