"""Asymmetric substitution channel models for DNA sequencing readout.

Two parameterisations are provided.  The nanopore model has pairwise
symmetric confusions dominated by T/C (probability 4*alpha), weaker A/T
and C/G confusions (alpha), a fixed A/C and T/G floor, and a negligible
A/G term.  The illumina model mutates T and G with total probability
1.5*beta and A and C with total probability beta, spread evenly over the
other three nucleotides.  A Blahut-Arimoto iteration estimates channel
capacity numerically.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .constrained import NUCLEOTIDES, dna_to_indices, indices_to_dna

_ROW_TOL = 1e-12


class ChannelError(ValueError):
    """A channel model contract was violated."""


@dataclass(frozen=True)
class ChannelModel:
    """Row-stochastic substitution matrix Pr(received | stored).

    Rows and columns are indexed by nucleotide in A, T, G, C order.
    """

    kind: str
    matrix: np.ndarray
    params: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise ChannelError("substitution matrix must be 4x4")
        if (m < 0).any():
            raise ChannelError("substitution probabilities must be non-negative")
        if np.abs(m.sum(axis=1) - 1.0).max() > _ROW_TOL:
            raise ChannelError("substitution matrix rows must sum to 1")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def average_error(self) -> float:
        """Substitution probability under a uniform stored nucleotide."""
        return float(1.0 - np.trace(self.matrix) / 4.0)

    def dump_text(self) -> str:
        """Rows labelled A/T/G/C with 12 significant digits."""
        lines = []
        for i, nt in enumerate(NUCLEOTIDES):
            lines.append(nt + " " + " ".join(f"{v:.12g}" for v in self.matrix[i]))
        return "\n".join(lines) + "\n"


def identity_channel() -> ChannelModel:
    return ChannelModel("identity", np.eye(4))


def uniform_channel() -> ChannelModel:
    return ChannelModel("uniform", np.full((4, 4), 0.25))


def nanopore(alpha: float, *, floor_error: float = 0.01, rare_error: float = 0.0) -> ChannelModel:
    """Nanopore readout model with T/C confusion 4*alpha.

    ``floor_error`` is the fixed A/C and T/G confusion (0.01 by default;
    set to 0 for a noiseless debug limit) and ``rare_error`` the A/G term
    that is normally negligible.
    """
    if not 0.0 <= alpha < 0.25:
        raise ChannelError(f"alpha must lie in [0, 0.25), got {alpha}")
    p1, p2, p3, p4 = 4.0 * alpha, alpha, floor_error, rare_error
    if p1 + p2 + p3 > 1.0 or p2 + p3 + p4 > 1.0:
        raise ChannelError(f"alpha={alpha} leaves a negative retention probability")
    m = np.array(
        [
            [1.0 - p2 - p3 - p4, p2, p4, p3],
            [p2, 1.0 - p1 - p2 - p3, p3, p1],
            [p4, p3, 1.0 - p2 - p3 - p4, p2],
            [p3, p1, p2, 1.0 - p1 - p2 - p3],
        ]
    )
    return ChannelModel("nanopore", m, (("alpha", alpha), ("p1", p1), ("p2", p2), ("p3", p3), ("p4", p4)))


def illumina(beta: float) -> ChannelModel:
    """Illumina readout model; T/G mutate with 1.5*beta, A/C with beta."""
    if not 0.0 <= beta <= 2.0 / 3.0:
        raise ChannelError(f"beta must lie in [0, 2/3], got {beta}")
    pa, pb = 1.5 * beta, beta
    strong = pa / 3.0
    weak = pb / 3.0
    m = np.array(
        [
            [1.0 - pb, weak, weak, weak],
            [strong, 1.0 - pa, strong, strong],
            [strong, strong, 1.0 - pa, strong],
            [weak, weak, weak, 1.0 - pb],
        ]
    )
    return ChannelModel("illumina", m, (("beta", beta), ("p_a", pa), ("p_b", pb)))


def transmit(model: ChannelModel, dna: str, rng: np.random.Generator) -> str:
    """Pass a strand through the memoryless substitution channel.

    Each nucleotide is independently replaced by a draw from its matrix
    row; the caller owns and seeds ``rng``.
    """
    idx = dna_to_indices(dna)
    if idx.size == 0:
        return ""
    cum = np.cumsum(model.matrix, axis=1)
    u = rng.random(idx.size)
    out = np.empty(idx.size, dtype=np.uint8)
    for s in range(4):
        mask = idx == s
        if mask.any():
            out[mask] = np.searchsorted(cum[s], u[mask], side="right")
    return indices_to_dna(np.minimum(out, 3))


def capacity(model: ChannelModel, tol: float = 1e-9, max_iter: int = 200_000) -> float:
    """Channel capacity in bits per nucleotide via Blahut-Arimoto.

    Iterates until the gap between the capacity upper and lower bounds
    drops below ``tol`` (in bits); raises if the cap is hit first.
    """
    if tol <= 0:
        raise ChannelError("tolerance must be positive")
    P = model.matrix
    support = P > 0
    logP = np.where(support, np.log(np.where(support, P, 1.0)), 0.0)
    r = np.full(4, 0.25)
    gap = np.inf
    for _ in range(max_iter):
        q = r[:, None] * P
        colsum = q.sum(axis=0)
        logq = np.where(support, np.log(np.where(q > 0, q, 1.0)) - np.log(np.where(colsum > 0, colsum, 1.0)), 0.0)
        # relative entropy between each row and the induced output posterior
        d = (P * (logq - np.log(r)[:, None])).sum(axis=1)
        lower = float(r @ d)
        upper = float(d.max())
        gap = (upper - lower) / np.log(2.0)
        if gap < tol:
            return lower / np.log(2.0)
        w = r * np.exp(d - upper)
        r = np.maximum(w / w.sum(), 1e-300)
    raise RuntimeError(f"capacity iteration did not converge; last bound gap {gap:.3e} bits")
