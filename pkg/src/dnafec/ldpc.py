"""Protograph LDPC codes built by circulant lifting of AR4JA base matrices.

Supports the rate-1/2 and rate-4/5 members of the AR4JA family.  Each base
matrix entry e expands to a sum of e distinct circulant permutation
matrices; shifts are chosen greedily to avoid length-4 cycles where the
lifting factor permits.  One protograph column (the degree-6 one) is
punctured: its bits are never transmitted and enter decoding with zero
prior.  Rate matching shortens trailing information columns (and, for
the high-rate family, trailing rows) so that arbitrary even information
lengths can be hosted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_BASES = {
    "1/2": (
        (1, 2, 0, 0, 0),
        (0, 3, 1, 1, 1),
        (0, 1, 2, 2, 1),
    ),
    "4/5": (
        (1, 2, 0, 0, 0, 0, 0, 0, 0, 0, 0),
        (0, 3, 1, 3, 1, 3, 1, 3, 1, 1, 1),
        (0, 1, 2, 1, 3, 1, 3, 1, 3, 2, 1),
    ),
}

# Protograph column roles.  The degree-6 column is punctured in both
# rates.  Transmitted parity rides the redundancy strand, whose pairwise
# demapping sees roughly twice the message strand's bit error rate, so for
# the half-rate code the two degree-3 columns are kept systematic (strong
# observations on strong nodes) and the degree-1/degree-2 columns carry
# parity.  The high-rate code keeps its trailing blocks systematic so that
# rate matching deletes literal trailing columns.
PUNCTURED_BLOCK = 1
_PARITY_BLOCKS = {"1/2": (0, 4), "4/5": (0, 2)}

SUPPORTED_RATES = tuple(_BASES)


class CodeError(ValueError):
    """An LDPC construction contract was violated."""


class RankDeficientError(CodeError):
    """The lifted matrix lost full row rank for this lifting seed."""


def base_matrix(rate: str) -> np.ndarray:
    """Base matrix of the requested AR4JA rate (entries are edge counts)."""
    if rate not in _BASES:
        raise CodeError(f"unsupported rate {rate!r}; choose from {SUPPORTED_RATES}")
    return np.array(_BASES[rate], dtype=np.int64)


def info_blocks(rate: str) -> tuple[int, ...]:
    cols = base_matrix(rate).shape[1]
    reserved = set(_PARITY_BLOCKS[rate]) | {PUNCTURED_BLOCK}
    return tuple(j for j in range(cols) if j not in reserved)


def lift(base: np.ndarray, Z: int, seed: int = 0) -> np.ndarray:
    """Expand a base matrix into a binary parity-check matrix.

    When Z is a multiple of eight (or four), a copy-and-permute
    pre-expansion by that factor first spreads every multi-edge over
    distinct copies (parallel edges collapse the minimum distance of a
    plain circulant lift), and the resulting binary base is
    circulant-lifted by the cofactor.  Otherwise every entry e directly
    becomes the GF(2) sum of e distinct circulants of size Z.  Both
    stages draw shifts in a seeded order and accept them greedily so that
    no length-4 cycle is closed when avoidable; row and column weights
    always equal the base entry sums.
    """
    base = np.asarray(base, dtype=np.int64)
    if base.ndim != 2 or (base < 0).any():
        raise CodeError("base matrix must be 2-D with non-negative entries")
    max_entry = int(base.max())
    if Z < max(4, max_entry):
        raise CodeError(f"lifting factor {Z} too small for base entries up to {max_entry}")
    for factor in (8, 4):
        if Z % factor == 0 and max_entry <= factor:
            expanded = _lift_circulant(base, factor, seed).astype(np.int64)
            return _lift_circulant(expanded, Z // factor, seed + 1)
    return _lift_circulant(base, Z, seed)


def _lift_circulant(base: np.ndarray, Z: int, seed: int = 0) -> np.ndarray:
    max_entry = int(base.max())
    if Z < max(1, max_entry):
        raise CodeError(f"lifting factor {Z} too small for base entries up to {max_entry}")
    rng = np.random.default_rng(seed)
    n_rows, n_cols = base.shape
    shifts: dict[tuple[int, int], list[int]] = {}
    cross: dict[tuple[int, int], set[int]] = {}
    within: dict[int, set[int]] = {i: set() for i in range(n_rows)}

    def collisions(i, j, s):
        new = []
        for c in shifts.get((i, j), []):
            new += [(s - c) % Z, (c - s) % Z]
        hits = sum(d in within[i] for d in new)
        hits += len(new) - len(set(new))
        for i2 in range(n_rows):
            if i2 == i:
                continue
            other = shifts.get((i2, j))
            if not other:
                continue
            key = (min(i, i2), max(i, i2))
            seen = cross.setdefault(key, set())
            diffs = [(s - c) % Z if i < i2 else (c - s) % Z for c in other]
            hits += sum(d in seen for d in diffs)
            hits += len(diffs) - len(set(diffs))
        return hits

    def register(i, j, s):
        for c in shifts.get((i, j), []):
            within[i].update(((s - c) % Z, (c - s) % Z))
        for i2 in range(n_rows):
            if i2 == i:
                continue
            other = shifts.get((i2, j))
            if not other:
                continue
            key = (min(i, i2), max(i, i2))
            seen = cross.setdefault(key, set())
            seen.update((s - c) % Z if i < i2 else (c - s) % Z for c in other)
        shifts.setdefault((i, j), []).append(s)

    for i in range(n_rows):
        for j in range(n_cols):
            for _ in range(int(base[i, j])):
                order = rng.permutation(Z)
                taken = shifts.get((i, j), [])
                best, best_hits = None, None
                for cand in order.tolist():
                    if cand in taken:
                        continue
                    hits = collisions(i, j, cand)
                    if hits == 0:
                        best = cand
                        break
                    if best_hits is None or hits < best_hits:
                        best, best_hits = cand, hits
                register(i, j, best)

    H = np.zeros((n_rows * Z, n_cols * Z), dtype=np.uint8)
    rr = np.arange(Z)
    for (i, j), ss in shifts.items():
        for s in ss:
            H[i * Z + rr, j * Z + (rr + s) % Z] = 1
    return H


def _gf2_systematize(H: np.ndarray, col_order) -> tuple[np.ndarray, np.ndarray, np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form over GF(2) with a preferred pivot order.

    Returns (pivot_cols, free_cols, solver, dropped_rows) where solver maps
    free-column bits to pivot-column bits (one row per pivot), and
    dropped_rows lists linearly dependent rows.
    """
    n_rows, n_cols = H.shape
    P = np.packbits(H, axis=1)
    row_used = np.zeros(n_rows, dtype=bool)
    pivot_cols: list[int] = []
    pivot_rows: list[int] = []
    for col in col_order:
        if len(pivot_cols) == n_rows:
            break
        byte, bit = divmod(int(col), 8)
        colbits = (P[:, byte] >> (7 - bit)) & 1
        candidates = np.flatnonzero(colbits.astype(bool) & ~row_used)
        if candidates.size == 0:
            continue
        r = int(candidates[0])
        sel = colbits.astype(bool)
        sel[r] = False
        if sel.any():
            P[sel] ^= P[r]
        row_used[r] = True
        pivot_rows.append(r)
        pivot_cols.append(int(col))
    dropped = tuple(int(r) for r in np.flatnonzero(~row_used))
    R = np.unpackbits(P, axis=1)[:, :n_cols]
    pivots = np.array(pivot_cols, dtype=np.int64)
    free = np.setdiff1d(np.arange(n_cols, dtype=np.int64), pivots)
    # float64 keeps the matvec on BLAS; counts stay exact well below 2**53
    solver = R[np.array(pivot_rows, dtype=np.int64)][:, free].astype(np.float64)
    return pivots, free, solver, dropped


@dataclass
class LiftedCode:
    """A lifted, systematised parity-check matrix with column roles.

    ``info_cols`` hold systematic bits, ``parity_tx_cols`` transmitted
    parity, ``punctured_cols`` parity that is never transmitted.  The
    solver produces the pivot-column bits from the information bits.
    ``promoted_cols`` records parity-designated columns that ended up
    systematic because the preferred pivot set was singular.
    """

    rate: str
    lifting: int
    seed: int
    H: np.ndarray
    info_cols: np.ndarray
    parity_tx_cols: np.ndarray
    punctured_cols: np.ndarray
    pivot_cols: np.ndarray
    solver: np.ndarray
    promoted_cols: tuple[int, ...] = ()
    dropped_rows: tuple[int, ...] = ()
    rate_matched: bool = False

    @property
    def n_rows(self) -> int:
        return self.H.shape[0]

    @property
    def n_cols(self) -> int:
        return self.H.shape[1]

    @property
    def k(self) -> int:
        return int(self.info_cols.size)

    @property
    def code_id(self) -> str:
        tag = "-rm" if self.rate_matched else ""
        return f"ar4ja{self.rate.replace('/', '')}-z{self.lifting}-k{self.k}-s{self.seed}{tag}"

    def layout(self) -> tuple[int, int, int]:
        """(information bits, transmitted parity bits, punctured bits)."""
        return self.k, int(self.parity_tx_cols.size), int(self.punctured_cols.size)

    def encode(self, info) -> np.ndarray:
        """Systematic encoding: information bits verbatim, parity solved."""
        bits = np.asarray(info, dtype=np.uint8)
        if bits.size != self.k:
            raise CodeError(f"expected {self.k} information bits, got {bits.size}")
        cw = np.zeros(self.n_cols, dtype=np.uint8)
        cw[self.info_cols] = bits
        cw[self.pivot_cols] = (self.solver @ bits.astype(np.float64)).astype(np.int64) & 1
        return cw

    def syndrome(self, bits) -> np.ndarray:
        return (self.H @ np.asarray(bits, dtype=np.uint8)) % 2

    def export_text(self) -> str:
        return export_parity_text(self.H)


def _assemble(rate, Z, seed, H, punct_cols, parity_cols, rate_matched) -> LiftedCode:
    n_cols = H.shape[1]
    designated = set(punct_cols.tolist()) | set(parity_cols.tolist())
    rest = [c for c in range(n_cols) if c not in designated]
    order = punct_cols.tolist() + parity_cols.tolist() + rest
    pivots, free, solver, dropped = _gf2_systematize(H, order)
    if dropped:
        raise RankDeficientError(
            f"parity-check matrix is rank deficient (rows {dropped}); "
            f"only {n_cols - len(pivots)} information bits are supported"
        )
    pivot_set = set(pivots.tolist())
    missing_punct = [c for c in punct_cols.tolist() if c not in pivot_set]
    if missing_punct:
        raise CodeError(f"punctured columns {missing_punct} could not be made parity")
    promoted = tuple(c for c in parity_cols.tolist() if c not in pivot_set)
    punct = np.array(sorted(punct_cols.tolist()), dtype=np.int64)
    parity_tx = np.array(sorted(pivot_set - set(punct.tolist())), dtype=np.int64)
    if parity_tx.size % 2:
        # The pair-rate redundancy mapper needs an even bit count; transmit
        # one formerly punctured bit to restore it.
        moved = punct[-1]
        punct = punct[:-1]
        parity_tx = np.sort(np.append(parity_tx, moved))
    return LiftedCode(
        rate=rate,
        lifting=Z,
        seed=seed,
        H=H,
        info_cols=free,
        parity_tx_cols=parity_tx,
        punctured_cols=punct,
        pivot_cols=pivots,
        solver=solver,
        promoted_cols=promoted,
        dropped_rows=(),
        rate_matched=rate_matched,
    )


def build_code(rate: str, Z: int, seed: int = 0) -> LiftedCode:
    """Lift the base matrix of ``rate`` and systematise the result."""
    H = lift(base_matrix(rate), Z, seed)
    punct = np.arange(PUNCTURED_BLOCK * Z, (PUNCTURED_BLOCK + 1) * Z, dtype=np.int64)
    parity = np.concatenate(
        [np.arange(b * Z, (b + 1) * Z, dtype=np.int64) for b in _PARITY_BLOCKS[rate]]
    )
    return _assemble(rate, Z, seed, H, punct, np.sort(parity), rate_matched=False)


def rate_match(code: LiftedCode, k_target: int) -> LiftedCode:
    """Shrink a code to ``k_target`` information bits.

    Deleted columns sit in the trailing information blocks and are
    shortened: fixed to zero and never transmitted.  For the high-rate
    family a deficit d removes the trailing 3d/2 columns and d/2 rows;
    the half-rate family keeps every check row and removes d columns,
    which leaves its transmitted rate marginally below one half.  The
    deficit must be even.
    """
    deficit = code.k - k_target
    if deficit == 0:
        return code
    if deficit < 0 or deficit % 2 or code.rate_matched:
        nearest = code.k if code.rate_matched or deficit < 0 else k_target + 1
        raise CodeError(
            f"cannot rate-match k={code.k} to k={k_target}; nearest feasible is {nearest}"
        )
    rows_cut = deficit // 2 if code.rate == "4/5" else 0
    cols_cut = deficit + rows_cut
    Z = code.lifting
    blocks = info_blocks(code.rate)
    info_end = (blocks[-1] + 1) * Z
    info_start = blocks[0] * Z
    if info_end - cols_cut < info_start:
        raise CodeError(f"rate matching to k={k_target} would cut non-information columns")
    keep = np.concatenate(
        [np.arange(0, info_end - cols_cut), np.arange(info_end, code.n_cols)]
    )
    H = np.ascontiguousarray(code.H[: code.n_rows - rows_cut][:, keep])
    n_cols = H.shape[1]
    punct = np.arange(PUNCTURED_BLOCK * Z, (PUNCTURED_BLOCK + 1) * Z, dtype=np.int64)
    parity_parts = []
    for b in _PARITY_BLOCKS[code.rate]:
        start = b * Z if b * Z < info_start else b * Z - cols_cut
        parity_parts.append(np.arange(start, start + Z, dtype=np.int64))
    parity = np.sort(np.concatenate(parity_parts))
    if parity.max() >= n_cols:
        raise CodeError("internal role bookkeeping error after rate matching")
    matched = _assemble(code.rate, Z, code.seed, H, punct, parity, rate_matched=True)
    if matched.k != k_target:
        raise CodeError(f"rate matching produced k={matched.k}, wanted {k_target}")
    return matched


def build_code_for_k(rate: str, k: int, seed: int = 0) -> LiftedCode:
    """Build the smallest code of ``rate`` hosting exactly k information bits.

    If a lifting seed yields a rank-deficient matrix (or one whose
    trailing deletion loses rank), deterministically derived fallback
    seeds are tried, so the result is still a pure function of
    (rate, k, seed).
    """
    if k <= 0:
        raise CodeError("information length must be positive")
    if rate not in SUPPORTED_RATES:
        raise CodeError(f"unsupported rate {rate!r}; choose from {SUPPORTED_RATES}")
    if k % 2:
        raise CodeError(f"rate {rate} hosts even information lengths; nearest is {k + 1}")
    if rate == "1/2":
        # smallest multiple of eight with 2Z >= k, so the lift can pre-expand
        Z = 8 * math.ceil(k / 16)
    else:
        Z = max(4, math.ceil(k / 8))
    if Z < 4:
        raise CodeError("information length too short; need at least 8 bits")
    last_error = None
    for attempt in range(32):
        effective = seed + 10007 * attempt
        try:
            code = build_code(rate, Z, effective)
            return rate_match(code, k) if code.k != k else code
        except RankDeficientError as exc:
            last_error = exc
    raise CodeError(f"no full-rank lifting found for rate {rate}, k={k}: {last_error}")


def export_parity_text(H: np.ndarray) -> str:
    """Sparse text form: 'rows cols' header, then set column indices per row."""
    lines = [f"{H.shape[0]} {H.shape[1]}"]
    for row in H:
        lines.append(" ".join(str(int(c)) for c in np.flatnonzero(row)))
    return "\n".join(lines) + "\n"


def parse_parity_text(text: str) -> np.ndarray:
    lines = text.splitlines()
    if not lines:
        raise CodeError("empty parity-check text")
    try:
        n_rows, n_cols = (int(x) for x in lines[0].split())
    except ValueError as exc:
        raise CodeError(f"bad header line {lines[0]!r}") from exc
    if len(lines) < n_rows + 1:
        raise CodeError(f"expected {n_rows} rows, found {len(lines) - 1}")
    H = np.zeros((n_rows, n_cols), dtype=np.uint8)
    for i in range(n_rows):
        for tok in lines[i + 1].split():
            H[i, int(tok)] = 1
    return H
