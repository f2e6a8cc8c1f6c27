"""Monte Carlo evaluation harness sweeping a channel parameter.

Every frame draws its random source bits and channel noise from an
independent substream derived from (master seed, sweep index, frame
index), and per-point aggregation sums integer error counts, so results
are bit-identical regardless of how many worker threads run the frames.
The DNAFEC_THREADS environment variable caps concurrency.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import ChannelModel, illumina, nanopore, transmit
from .ldpc import SUPPORTED_RATES
from .pipeline import decode_frame, encode_frame, get_code, metric_taps

CSV_HEADER = (
    "channel,param,frames,ner_raw,ber_interim_raw,ber_source_raw,"
    "ner_post,ber_interim_post,ber_source_post,fer,mean_iters"
)

_METRICS = ("ner_raw", "ber_interim_raw", "ber_source_raw", "ner_post", "ber_interim_post", "ber_source_post")

_CHANNEL_DEFAULTS = {
    "nanopore": {"params": (0.03, 0.035, 0.04), "info_bits": 1000, "rate": "1/2"},
    "illumina": {"params": (0.5e-3, 1.0e-3, 1.5e-3), "info_bits": 300, "rate": "4/5"},
}


class ConfigError(ValueError):
    """A simulation configuration is invalid; reported before any work."""


def make_model(channel: str, param: float) -> ChannelModel:
    if channel == "nanopore":
        return nanopore(param)
    if channel == "illumina":
        return illumina(param)
    raise ConfigError(f"unknown channel {channel!r}; choose nanopore or illumina")


@dataclass
class SimConfig:
    """One sweep: a channel family, its parameter values, and frame counts."""

    channel: str
    params: tuple[float, ...]
    info_bits: int
    rate: str
    frames: int = 1000
    max_iter: int = 50
    seed: int = 0
    lift_seed: int = 0
    out: str | None = None

    @classmethod
    def defaults(cls, channel: str, **overrides) -> "SimConfig":
        if channel not in _CHANNEL_DEFAULTS:
            raise ConfigError(f"unknown channel {channel!r}; choose nanopore or illumina")
        merged = dict(_CHANNEL_DEFAULTS[channel])
        merged.update({k: v for k, v in overrides.items() if v is not None})
        merged["params"] = tuple(merged["params"])
        return cls(channel=channel, **merged)

    def validate(self) -> None:
        if self.channel not in _CHANNEL_DEFAULTS:
            raise ConfigError(f"unknown channel {self.channel!r}; choose nanopore or illumina")
        if self.rate not in SUPPORTED_RATES:
            raise ConfigError(f"unsupported rate {self.rate!r}; choose from {SUPPORTED_RATES}")
        if not self.params:
            raise ConfigError("parameter sweep is empty")
        for p in self.params:
            try:
                make_model(self.channel, p)
            except ValueError as exc:
                raise ConfigError(f"channel parameter {p} is invalid: {exc}") from exc
        if self.frames < 1:
            raise ConfigError("need at least one frame per sweep point")
        if self.info_bits < 16:
            raise ConfigError("info_bits must be at least 16")
        if self.max_iter < 0:
            raise ConfigError("max_iter must be non-negative")


@dataclass
class SimPoint:
    """Aggregated metrics for one sweep value."""

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
    wall_time_s: float = field(default=0.0, compare=False)


def _run_frame(config: SimConfig, model: ChannelModel, sweep_idx: int, frame_idx: int):
    rng = np.random.default_rng([config.seed, sweep_idx, frame_idx])
    source = rng.integers(0, 2, size=config.info_bits, dtype=np.uint8)
    record = encode_frame(source, config.rate, lift_seed=config.lift_seed)
    _, decoder = get_code(config.rate, record.interim_bits.size, config.lift_seed)
    received = transmit(model, record.strand, rng)
    decoded = decode_frame(
        received,
        code=record.code,
        boundary=record.boundary,
        source_len=config.info_bits,
        model=model,
        max_iter=config.max_iter,
        decoder=decoder,
    )
    taps = metric_taps(record, received, decoded)
    counts = []
    for name in _METRICS:
        counts.extend(getattr(taps, name))
    frame_error = int(np.any(record.source_bits != decoded.source_bits))
    return counts, frame_error, decoded.iterations


def run(config: SimConfig) -> list[SimPoint]:
    """Run the sweep and return one aggregated point per parameter value."""
    config.validate()
    threads = max(1, int(os.environ.get("DNAFEC_THREADS", "1") or "1"))
    points = []
    for sweep_idx, param in enumerate(config.params):
        model = make_model(config.channel, param)
        started = time.perf_counter()
        if threads == 1:
            results = [_run_frame(config, model, sweep_idx, f) for f in range(config.frames)]
        else:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                results = list(pool.map(lambda f: _run_frame(config, model, sweep_idx, f), range(config.frames)))
        totals = np.zeros(12, dtype=np.int64)
        frame_errors = 0
        iter_sum = 0
        for counts, frame_error, iters in results:
            totals += np.asarray(counts, dtype=np.int64)
            frame_errors += frame_error
            iter_sum += iters
        rates = {
            name: (totals[2 * i] / totals[2 * i + 1] if totals[2 * i + 1] else 0.0)
            for i, name in enumerate(_METRICS)
        }
        points.append(
            SimPoint(
                channel=config.channel,
                param=float(param),
                frames=config.frames,
                fer=frame_errors / config.frames,
                mean_iters=iter_sum / config.frames,
                wall_time_s=time.perf_counter() - started,
                **rates,
            )
        )
    return points


def overall_coding_potential(rate) -> float:
    """Stored information density of the whole pipeline in bits per nucleotide.

    Combines the message-strand density (83/42 bits/nt), the fixed
    redundancy density (2 bits/nt) and the error-correction rate.  Rate 1
    degenerates to the message-strand density alone.
    """
    if isinstance(rate, str):
        if "/" in rate:
            num, den = rate.split("/", 1)
            R = Fraction(int(num), int(den))
        else:
            R = Fraction(rate)
    else:
        R = Fraction(rate)
    if not 0 < R <= 1:
        raise ConfigError(f"code rate must lie in (0, 1], got {rate}")
    info_density = Fraction(83, 42)
    redundancy_density = Fraction(2)
    overhead = 2 * (1 - R) / (info_density * R)
    value = (1 + overhead) / (1 / info_density + overhead / redundancy_density)
    return float(value)


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def emit_csv(points: list[SimPoint], path: str | None = None) -> str:
    """Render sweep points as CSV; byte-identical for identical points."""
    if not points:
        raise ValueError("no sweep points to emit")
    lines = [CSV_HEADER]
    for p in points:
        lines.append(
            ",".join(
                [
                    p.channel,
                    _fmt(p.param),
                    str(p.frames),
                    _fmt(p.ner_raw),
                    _fmt(p.ber_interim_raw),
                    _fmt(p.ber_source_raw),
                    _fmt(p.ner_post),
                    _fmt(p.ber_interim_post),
                    _fmt(p.ber_source_post),
                    _fmt(p.fer),
                    _fmt(p.mean_iters),
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if path is not None:
        try:
            with open(path, "w", encoding="ascii") as fh:
                fh.write(text)
        except OSError as exc:
            raise RuntimeError(f"cannot write CSV to {path}: {exc}") from exc
    return text
