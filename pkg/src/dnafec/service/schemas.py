"""Pydantic request/response models for the dnafec service."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field


class ChannelSpec(BaseModel):
    kind: Literal["nanopore", "illumina"]
    param: float = Field(ge=0.0)


class EncodeRequest(BaseModel):
    bits: str = Field(min_length=1, pattern="^[01]+$")
    rate: Literal["1/2", "4/5"] = "1/2"
    lift_seed: int = 0
    initial_state: Literal["A", "T", "G", "C"] = "A"


class EncodeResponse(BaseModel):
    strand: str
    boundary: int
    pad_count: int
    k: int
    code_id: str


class DecodeRequest(BaseModel):
    strand: str = Field(min_length=1, pattern="^[ATGC]+$")
    boundary: int = Field(ge=1)
    info_bits: int = Field(ge=1)
    rate: Literal["1/2", "4/5"] = "1/2"
    channel: ChannelSpec
    max_iter: int = Field(default=50, ge=0)
    lift_seed: int = 0
    initial_state: Literal["A", "T", "G", "C"] = "A"


class DecodeResponse(BaseModel):
    bits: str
    iterations: int
    syndrome_ok: bool


class CapacityRequest(BaseModel):
    channel: ChannelSpec
    tol: float = Field(default=1e-9, gt=0.0)


class CapacityResponse(BaseModel):
    bits_per_nt: float


class PotentialRequest(BaseModel):
    rate: str = Field(pattern=r"^(1/2|4/5|1)$")


class PotentialResponse(BaseModel):
    bits_per_nt: float


class SimRequest(BaseModel):
    channel: Literal["nanopore", "illumina"]
    params: Optional[list[float]] = None
    info_bits: Optional[int] = None
    rate: Optional[Literal["1/2", "4/5"]] = None
    frames: int = Field(default=1000, ge=1)
    max_iter: int = Field(default=50, ge=0)
    seed: int = 0
    lift_seed: int = 0


class SimPointModel(BaseModel):
    channel: str
    param: float
    frames: int
    ner_raw: float
    ber_interim_raw: float
    ber_source_raw: float
    ner_post: float
    ber_interim_post: float
    ber_source_post: float
    fer: float
    mean_iters: float
    wall_time_s: float


class SimResponse(BaseModel):
    points: list[SimPointModel]
    csv: str


class HealthResponse(BaseModel):
    status: str
    version: str
