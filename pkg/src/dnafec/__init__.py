"""DNA data storage coding toolkit.

Run-length-limited constrained coding, protograph LDPC error correction
over asymmetric sequencing channels, belief-propagation decoding, and a
Monte Carlo error-rate harness, wrapped by a CLI and an HTTP service.
"""

__version__ = "0.1.0"

from .bp import BpDecoder, DecodeResult, bp_decode
from .channel import ChannelModel, capacity, illumina, nanopore, transmit
from .constrained import (
    MappingTable,
    coding_potential,
    fuzzy_bit_prob,
    interim_map,
    interim_unmap,
    max_homopolymer_run,
    mvlrll_demap_hard,
    mvlrll_encode,
    vlrll_decode,
    vlrll_encode,
)
from .ldpc import LiftedCode, base_matrix, build_code, build_code_for_k, lift, rate_match
from .llr import LlrFrame, build_frame, message_llrs, pair_llrs, posterior
from .pipeline import FrameRecord, MetricTaps, decode_frame, encode_frame, metric_taps
from .sim import SimConfig, SimPoint, emit_csv, overall_coding_potential, run

__all__ = [
    "BpDecoder",
    "ChannelModel",
    "DecodeResult",
    "FrameRecord",
    "LiftedCode",
    "LlrFrame",
    "MappingTable",
    "MetricTaps",
    "SimConfig",
    "SimPoint",
    "base_matrix",
    "bp_decode",
    "build_code",
    "build_code_for_k",
    "build_frame",
    "capacity",
    "coding_potential",
    "decode_frame",
    "emit_csv",
    "encode_frame",
    "fuzzy_bit_prob",
    "illumina",
    "interim_map",
    "interim_unmap",
    "lift",
    "max_homopolymer_run",
    "message_llrs",
    "metric_taps",
    "mvlrll_demap_hard",
    "mvlrll_encode",
    "nanopore",
    "overall_coding_potential",
    "pair_llrs",
    "posterior",
    "rate_match",
    "run",
    "transmit",
    "vlrll_decode",
    "vlrll_encode",
]
