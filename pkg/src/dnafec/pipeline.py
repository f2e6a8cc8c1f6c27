"""End-to-end hybrid encode/decode chain for one storage strand.

Encoding: source bits -> constrained message strand -> interim bits ->
systematic LDPC parity -> fixed-rate constrained redundancy strand,
appended behind the message strand so the whole stored strand respects
the run-length constraint.  Decoding splits the received strand at the
known block boundary, builds per-bit LLRs, runs belief propagation and
inverts the constrained mapping, exposing every intermediate estimate
for error-rate accounting.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np

from .bp import BpDecoder, DecodeResult
from .channel import ChannelModel
from .constrained import (
    as_bit_array,
    interim_map,
    interim_unmap,
    vlrll_decode,
    vlrll_encode,
    mvlrll_encode,
)
from .ldpc import LiftedCode, build_code_for_k
from .llr import build_frame

_CODE_CACHE: dict[tuple[str, int, int], tuple[LiftedCode, BpDecoder]] = {}
_CACHE_LOCK = threading.Lock()


def get_code(rate: str, k: int, lift_seed: int = 0) -> tuple[LiftedCode, BpDecoder]:
    """Deterministic code and decoder for an information length, cached."""
    key = (rate, k, lift_seed)
    with _CACHE_LOCK:
        hit = _CODE_CACHE.get(key)
    if hit is not None:
        return hit
    code = build_code_for_k(rate, k, lift_seed)
    decoder = BpDecoder(code.H)
    with _CACHE_LOCK:
        return _CODE_CACHE.setdefault(key, (code, decoder))


@dataclass
class FrameRecord:
    """Everything produced while encoding one strand."""

    source_bits: np.ndarray
    message_dna: str
    redundancy_dna: str
    interim_bits: np.ndarray
    parity_bits: np.ndarray
    state: str
    pad_count: int
    code: LiftedCode
    initial_state: str = "A"

    @property
    def boundary(self) -> int:
        return len(self.message_dna)

    @property
    def strand(self) -> str:
        return self.message_dna + self.redundancy_dna


@dataclass
class DecodeOutput:
    """Decoder result with every intermediate estimate tapped."""

    source_bits: np.ndarray
    interim_bits: np.ndarray
    message_dna: str
    received_message: str
    received_redundancy: str
    iterations: int
    syndrome_ok: bool


@dataclass
class MetricTaps:
    """Six error counters over one frame, each an (errors, length) pair."""

    ner_raw: tuple[int, int]
    ber_interim_raw: tuple[int, int]
    ber_source_raw: tuple[int, int]
    ner_post: tuple[int, int]
    ber_interim_post: tuple[int, int]
    ber_source_post: tuple[int, int]

    def rates(self) -> dict[str, float]:
        out = {}
        for name in ("ner_raw", "ber_interim_raw", "ber_source_raw", "ner_post", "ber_interim_post", "ber_source_post"):
            errors, total = getattr(self, name)
            out[name] = errors / total if total else 0.0
        return out


def encode_frame(source_bits, rate: str, *, lift_seed: int = 0, initial_state: str = "A") -> FrameRecord:
    """Encode source bits into a stored strand plus bookkeeping."""
    bits = as_bit_array(source_bits)
    if bits.size == 0:
        raise ValueError("cannot encode an empty message")
    message_dna, pad_count = vlrll_encode(bits, initial_state)
    interim_bits = interim_map(message_dna)
    code, _ = get_code(rate, interim_bits.size, lift_seed)
    codeword = code.encode(interim_bits)
    parity_bits = codeword[code.parity_tx_cols]
    state = message_dna[-1]
    redundancy_dna = mvlrll_encode(parity_bits, state)
    return FrameRecord(
        source_bits=bits,
        message_dna=message_dna,
        redundancy_dna=redundancy_dna,
        interim_bits=interim_bits,
        parity_bits=parity_bits,
        state=state,
        pad_count=pad_count,
        code=code,
        initial_state=initial_state,
    )


def decode_frame(
    received: str,
    *,
    code: LiftedCode,
    boundary: int,
    source_len: int,
    model: ChannelModel,
    max_iter: int = 50,
    initial_state: str = "A",
    decoder: BpDecoder | None = None,
) -> DecodeOutput:
    """Decode a received strand back to source bits.

    The block boundary, source length and code identity are side
    information carried out of band.  ``max_iter`` 0 skips belief
    propagation and decodes the channel hard decisions directly.
    """
    expected = boundary + code.parity_tx_cols.size // 2
    if len(received) != expected:
        raise ValueError(f"received strand has {len(received)} nt, expected {expected}")
    received_message = received[:boundary]
    received_redundancy = received[boundary:]
    frame = build_frame(model, received_message, received_redundancy, code)
    if decoder is None:
        decoder = BpDecoder(code.H)
    result: DecodeResult = decoder.decode(frame.values, max_iter)
    interim_hat = result.bits[code.info_cols]
    message_dna_hat = interim_unmap(interim_hat)
    source_hat = vlrll_decode(message_dna_hat, initial_state, source_len)
    return DecodeOutput(
        source_bits=source_hat,
        interim_bits=interim_hat,
        message_dna=message_dna_hat,
        received_message=received_message,
        received_redundancy=received_redundancy,
        iterations=result.iterations,
        syndrome_ok=result.syndrome_ok,
    )


def _str_errors(a: str, b: str) -> int:
    return int(np.count_nonzero(np.frombuffer(a.encode(), np.uint8) != np.frombuffer(b.encode(), np.uint8)))


def _bit_errors(a: np.ndarray, b: np.ndarray) -> int:
    return int(np.count_nonzero(a != b))


def metric_taps(record: FrameRecord, received: str, decoded: DecodeOutput) -> MetricTaps:
    """Error counts before and after decoding, at each pipeline stage.

    Raw metrics compare the received message block against the stored one
    (and its demapped images); post metrics compare the decoder estimates.
    Source-bit comparisons are positional after truncation or zero padding
    to the original length.
    """
    received_message = received[: record.boundary]
    source_len = record.source_bits.size
    raw_source = vlrll_decode(received_message, record.initial_state, source_len)
    return MetricTaps(
        ner_raw=(_str_errors(record.message_dna, received_message), len(record.message_dna)),
        ber_interim_raw=(
            _bit_errors(record.interim_bits, interim_map(received_message)),
            record.interim_bits.size,
        ),
        ber_source_raw=(_bit_errors(record.source_bits, raw_source), source_len),
        ner_post=(_str_errors(record.message_dna, decoded.message_dna), len(record.message_dna)),
        ber_interim_post=(
            _bit_errors(record.interim_bits, decoded.interim_bits),
            record.interim_bits.size,
        ),
        ber_source_post=(_bit_errors(record.source_bits, decoded.source_bits), source_len),
    )
