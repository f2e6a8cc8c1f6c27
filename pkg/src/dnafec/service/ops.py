"""Service operations: pure functions from request models to response models.

Both the HTTP routes and the local CLI dispatch go through these, so the
two transports behave identically.
"""

from __future__ import annotations

import dataclasses

from .. import __version__
from ..channel import capacity
from ..constrained import format_bits
from ..pipeline import decode_frame, encode_frame, get_code
from ..sim import SimConfig, emit_csv, make_model, overall_coding_potential, run
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
    SimPointModel,
    SimRequest,
    SimResponse,
)


def health() -> HealthResponse:
    return HealthResponse(status="ok", version=__version__)


def encode(req: EncodeRequest) -> EncodeResponse:
    record = encode_frame(req.bits, req.rate, lift_seed=req.lift_seed, initial_state=req.initial_state)
    return EncodeResponse(
        strand=record.strand,
        boundary=record.boundary,
        pad_count=record.pad_count,
        k=record.interim_bits.size,
        code_id=record.code.code_id,
    )


def decode(req: DecodeRequest) -> DecodeResponse:
    model = make_model(req.channel.kind, req.channel.param)
    code, decoder = get_code(req.rate, 2 * req.boundary, req.lift_seed)
    out = decode_frame(
        req.strand,
        code=code,
        boundary=req.boundary,
        source_len=req.info_bits,
        model=model,
        max_iter=req.max_iter,
        initial_state=req.initial_state,
        decoder=decoder,
    )
    return DecodeResponse(
        bits=format_bits(out.source_bits),
        iterations=out.iterations,
        syndrome_ok=out.syndrome_ok,
    )


def channel_capacity(req: CapacityRequest) -> CapacityResponse:
    model = make_model(req.channel.kind, req.channel.param)
    return CapacityResponse(bits_per_nt=capacity(model, tol=req.tol))


def coding_potential(req: PotentialRequest) -> PotentialResponse:
    return PotentialResponse(bits_per_nt=overall_coding_potential(req.rate))


def simulate(req: SimRequest) -> SimResponse:
    config = SimConfig.defaults(
        req.channel,
        params=tuple(req.params) if req.params else None,
        info_bits=req.info_bits,
        rate=req.rate,
    )
    config.frames = req.frames
    config.max_iter = req.max_iter
    config.seed = req.seed
    config.lift_seed = req.lift_seed
    points = run(config)
    return SimResponse(
        points=[SimPointModel(**dataclasses.asdict(p)) for p in points],
        csv=emit_csv(points),
    )
