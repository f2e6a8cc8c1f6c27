"""Initial log-likelihood ratios for belief propagation over DNA strands.

Message-block bits get per-nucleotide LLRs through the 2-bit interim
mapping.  Redundancy-block bits are differentially coded, so each bit pair
depends on two neighbouring received nucleotides: the 16 stored-pair
hypotheses are enumerated, weighted by channel posteriors, and folded
through the transition-to-bits demapping with the fuzzy-bit weight applied
to transition symbol 3.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelModel
from .constrained import dna_to_indices, fuzzy_bit_prob, nucleotide_index
from .ldpc import LiftedCode

LLR_CLAMP = 30.0

SEG_MESSAGE = 0
SEG_PARITY = 1
SEG_PUNCTURED = 2
SEG_SHORTENED = 3
_SEG_NAMES = {SEG_MESSAGE: "message", SEG_PARITY: "parity", SEG_PUNCTURED: "punctured", SEG_SHORTENED: "shortened"}

# Transition value of a stored pair (prev, curr): (curr - prev) mod 4.
_TRANSITION = (np.arange(4)[None, :] - np.arange(4)[:, None]) % 4


def posterior_matrix(model: ChannelModel) -> np.ndarray:
    """POST[y, x] = Pr(stored=x | received=y) under a uniform stored prior."""
    col = model.matrix.sum(axis=0)
    if (col <= 0).any():
        raise ValueError("channel has a received symbol with zero likelihood")
    return (model.matrix / col).T


def posterior(model: ChannelModel, received: str) -> np.ndarray:
    """Posterior over stored nucleotides given one received nucleotide."""
    return posterior_matrix(model)[nucleotide_index(received)]


def _clamped_log_ratio(num, den):
    with np.errstate(divide="ignore"):
        return np.clip(np.log(num) - np.log(den), -LLR_CLAMP, LLR_CLAMP)


def message_llr_table(model: ChannelModel) -> np.ndarray:
    """Per received nucleotide, the LLRs of its two interim-mapped bits."""
    post = posterior_matrix(model)
    table = np.empty((4, 2))
    table[:, 0] = _clamped_log_ratio(post[:, 0] + post[:, 1], post[:, 2] + post[:, 3])
    table[:, 1] = _clamped_log_ratio(post[:, 0] + post[:, 2], post[:, 1] + post[:, 3])
    return table


def message_llrs(model: ChannelModel, received: str) -> tuple[float, float]:
    l1, l2 = message_llr_table(model)[nucleotide_index(received)]
    return float(l1), float(l2)


def pair_llr_table(model: ChannelModel) -> np.ndarray:
    """LLRs of the bit pair demapped from each received nucleotide pair.

    Entry [prev, curr] weighs all 16 stored pairs by the product of their
    posteriors and accumulates the transition masses: the first bit is 0
    for transitions 1 and 2; the second bit is 0 for transition 1 and,
    with the fuzzy-bit weight, for transition 3.
    """
    post = posterior_matrix(model)
    pw = float(fuzzy_bit_prob())
    table = np.empty((4, 4, 2))
    for prev in range(4):
        for curr in range(4):
            w = np.outer(post[prev], post[curr])
            mass = np.bincount(_TRANSITION.ravel(), weights=w.ravel(), minlength=4)
            p1 = mass[1] + mass[2]
            p2 = mass[0] + mass[3]
            p3 = mass[1] + pw * mass[3]
            p4 = mass[0] + mass[2] + (1.0 - pw) * mass[3]
            table[prev, curr, 0] = _clamped_log_ratio(p1, p2)
            table[prev, curr, 1] = _clamped_log_ratio(p3, p4)
    return table


def pair_llrs(model: ChannelModel, prev: str, curr: str) -> tuple[float, float]:
    l1, l2 = pair_llr_table(model)[nucleotide_index(prev), nucleotide_index(curr)]
    return float(l1), float(l2)


@dataclass
class LlrFrame:
    """Initial LLRs for one codeword, tagged by column segment."""

    values: np.ndarray
    segments: np.ndarray
    clamp: float = LLR_CLAMP

    def __len__(self) -> int:
        return self.values.size

    def to_csv_text(self) -> str:
        lines = ["index,segment,value"]
        for i, (seg, val) in enumerate(zip(self.segments.tolist(), self.values.tolist())):
            lines.append(f"{i},{_SEG_NAMES[seg]},{val:.12g}")
        return "\n".join(lines) + "\n"


def build_frame(
    model: ChannelModel,
    received_message: str,
    received_redundancy: str,
    code: LiftedCode,
) -> LlrFrame:
    """Assemble the initial LLRs for a received strand.

    Message nucleotides fill the information columns, consecutive
    redundancy pairs fill the transmitted-parity columns (the first pair
    reuses the last message nucleotide as its predecessor), and punctured
    columns start at zero.
    """
    msg = dna_to_indices(received_message)
    red = dna_to_indices(received_redundancy)
    if 2 * msg.size != code.k:
        raise ValueError(f"message block carries {2 * msg.size} bits, code expects {code.k}")
    if 2 * red.size != code.parity_tx_cols.size:
        raise ValueError(
            f"redundancy block carries {2 * red.size} bits, code expects {code.parity_tx_cols.size}"
        )
    values = np.zeros(code.n_cols)
    segments = np.full(code.n_cols, SEG_PUNCTURED, dtype=np.uint8)
    segments[code.info_cols] = SEG_MESSAGE
    segments[code.parity_tx_cols] = SEG_PARITY
    if msg.size:
        values[code.info_cols] = message_llr_table(model)[msg].ravel()
    if red.size:
        if msg.size == 0:
            raise ValueError("redundancy block needs a preceding message nucleotide")
        prev = np.concatenate(([msg[-1]], red[:-1]))
        values[code.parity_tx_cols] = pair_llr_table(model)[prev, red].ravel()
    return LlrFrame(values=values, segments=segments)
