"""Flooding sum-product belief propagation over a binary parity-check matrix."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .llr import LLR_CLAMP, LlrFrame

_TANH_LIMIT = 1.0 - 1e-15


@dataclass
class DecodeResult:
    """Outcome of one decoding attempt.

    ``syndrome_ok`` guarantees the hard decisions satisfy every check;
    a False flag is a valid non-converged result, not an error.
    """

    bits: np.ndarray
    iterations: int
    syndrome_ok: bool
    posterior: np.ndarray


class BpDecoder:
    """Reusable message-passing state for one parity-check matrix.

    The decoder itself is immutable; every call owns its scratch buffers,
    so distinct frames may be decoded concurrently.
    """

    def __init__(self, H: np.ndarray):
        H = np.asarray(H, dtype=np.uint8)
        if H.ndim != 2:
            raise ValueError("parity-check matrix must be 2-D")
        deg = H.sum(axis=1)
        if (deg == 0).any():
            raise ValueError("parity-check matrix has an empty row")
        self.n_checks, self.n_vars = H.shape
        chk, var = np.nonzero(H)
        self._edge_var = var.astype(np.int64)
        self._edge_chk = chk.astype(np.int64)
        self._starts = np.searchsorted(chk, np.arange(self.n_checks))

    def _syndrome_ok(self, bits: np.ndarray) -> bool:
        sums = np.add.reduceat(bits[self._edge_var].astype(np.int64), self._starts)
        return not (sums % 2).any()

    def decode(self, llrs: np.ndarray, max_iter: int = 50) -> DecodeResult:
        """Run flooding BP with early termination on a zero syndrome.

        Ties at LLR exactly zero resolve to bit 0.  With ``max_iter`` 0 the
        channel hard decisions are returned unmodified.
        """
        llrs = np.asarray(llrs, dtype=np.float64)
        if llrs.size != self.n_vars:
            raise ValueError(f"expected {self.n_vars} LLRs, got {llrs.size}")
        prior = np.clip(llrs, -LLR_CLAMP, LLR_CLAMP)
        bits = (prior < 0).astype(np.uint8)
        prior_ok = self._syndrome_ok(bits)
        if max_iter <= 0 or prior_ok:
            return DecodeResult(bits, 0, prior_ok, prior.copy())

        evar, starts = self._edge_var, self._starts
        v2c = prior[evar]
        posterior = prior
        for iteration in range(1, max_iter + 1):
            t = np.tanh(0.5 * v2c)
            zero = t == 0.0
            tn = np.where(zero, 1.0, t)
            prod = np.multiply.reduceat(tn, starts)
            zcount = np.add.reduceat(zero.astype(np.int64), starts)
            pc = prod[self._edge_chk]
            zc = zcount[self._edge_chk]
            ext = np.where((zc == 0) | ((zc == 1) & zero), pc / tn, 0.0)
            c2v = 2.0 * np.arctanh(np.clip(ext, -_TANH_LIMIT, _TANH_LIMIT))
            c2v = np.clip(c2v, -LLR_CLAMP, LLR_CLAMP)
            posterior = prior + np.bincount(evar, weights=c2v, minlength=self.n_vars)
            bits = (posterior < 0).astype(np.uint8)
            if self._syndrome_ok(bits):
                return DecodeResult(bits, iteration, True, posterior)
            v2c = np.clip(posterior[evar] - c2v, -LLR_CLAMP, LLR_CLAMP)
        return DecodeResult(bits, max_iter, False, posterior)


def bp_decode(code, frame, max_iter: int = 50) -> DecodeResult:
    """Decode one frame against a LiftedCode or a bare parity-check matrix."""
    H = code.H if hasattr(code, "H") else code
    llrs = frame.values if isinstance(frame, LlrFrame) else frame
    return BpDecoder(H).decode(llrs, max_iter)
