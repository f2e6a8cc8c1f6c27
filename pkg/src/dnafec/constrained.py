"""Run-length-limited constrained coding between bitstreams and DNA strands.

Binary data is parsed into variable-length source words and mapped to
quaternary transition words whose concatenations never contain more than
two consecutive zero transitions.  Differential precoding then turns the
transition stream into a strand whose homopolymer runs never exceed three
nucleotides.  A modified fixed-rate variant (exactly two bits per
nucleotide, with one "fuzzy" bit) encodes parity blocks so that they can
be appended to a message strand without breaking the run constraint.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

NUCLEOTIDES = "ATGC"

_NT_CODE = np.full(256, 255, dtype=np.uint8)
for _i, _c in enumerate(NUCLEOTIDES):
    _NT_CODE[ord(_c)] = _i
_NT_CHAR = np.frombuffer(NUCLEOTIDES.encode("ascii"), dtype=np.uint8)

# Bijection between variable-length source words and the transition words
# whose free concatenation keeps homopolymer runs at three or less.
STANDARD_WORDS = (
    ("00", (1,)),
    ("01", (2,)),
    ("10", (3,)),
    ("1100", (0, 1)),
    ("1101", (0, 2)),
    ("1110", (0, 3)),
    ("111100", (0, 0, 1)),
    ("111101", (0, 0, 2)),
    ("11111", (0, 0, 3)),
)

# The modified table replaces the single odd-length entry by a fixed-rate
# one: the sixth source bit is fuzzy ('X' stands for either value), so each
# consumed bit pair always emits exactly one transition symbol.
MODIFIED_WORDS = STANDARD_WORDS[:-1] + (("11111X", (0, 0, 3)),)

# Transition symbol -> bit pair used when demapping redundancy strands.
# Symbol 3 demaps to "10" on the majority branch; see fuzzy_bit_prob().
_DEMAP_B1 = np.array([1, 0, 0, 1], dtype=np.uint8)
_DEMAP_B2 = np.array([1, 0, 1, 0], dtype=np.uint8)


class CodingError(ValueError):
    """A constrained-coding contract was violated."""


def nucleotide_index(nt: str) -> int:
    """Numeric alias of a nucleotide (A=0, T=1, G=2, C=3)."""
    if len(nt) != 1 or nt not in NUCLEOTIDES:
        raise CodingError(f"not a nucleotide: {nt!r}")
    return NUCLEOTIDES.index(nt)


def dna_to_indices(dna: str) -> np.ndarray:
    """Convert an A/T/G/C string to its numeric alias array."""
    raw = np.frombuffer(dna.encode("ascii"), dtype=np.uint8)
    idx = _NT_CODE[raw]
    if idx.size and idx.max() > 3:
        bad = dna[int(np.argmax(idx > 3))]
        raise CodingError(f"invalid nucleotide {bad!r} in strand")
    return idx


def indices_to_dna(idx: np.ndarray) -> str:
    return _NT_CHAR[np.asarray(idx, dtype=np.uint8)].tobytes().decode("ascii")


def as_bit_array(bits) -> np.ndarray:
    """Coerce a '01' string or integer sequence to a uint8 bit array."""
    if isinstance(bits, str):
        arr = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    else:
        arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1:
        raise CodingError("bitstream must be one-dimensional")
    if arr.size and arr.max() > 1:
        raise CodingError("bitstream may only contain 0 and 1")
    return arr.astype(np.uint8)


def format_bits(bits: np.ndarray) -> str:
    return (np.asarray(bits, dtype=np.uint8) + ord("0")).tobytes().decode("ascii")


def precode(transitions: np.ndarray, initial: int) -> np.ndarray:
    """Differential precoding y_j = (y_{j-1} + t_j) mod 4, y_0 = initial."""
    t = np.asarray(transitions, dtype=np.int64)
    if t.size == 0:
        return np.zeros(0, dtype=np.uint8)
    return ((initial + np.cumsum(t)) % 4).astype(np.uint8)


def deprecode(indices: np.ndarray, initial: int) -> np.ndarray:
    """Inverse of precode: t_j = (y_j - y_{j-1}) mod 4."""
    y = np.asarray(indices, dtype=np.int64)
    if y.size == 0:
        return np.zeros(0, dtype=np.uint8)
    return (np.diff(y, prepend=initial) % 4).astype(np.uint8)


def max_homopolymer_run(dna: str) -> int:
    """Length of the longest run of identical nucleotides (0 if empty)."""
    if not dna:
        return 0
    a = np.frombuffer(dna.encode("ascii"), dtype=np.uint8)
    if a.size == 1:
        return 1
    bounds = np.flatnonzero(a[1:] != a[:-1])
    edges = np.concatenate(([-1], bounds, [a.size - 1]))
    return int(np.diff(edges).max())


@dataclass(frozen=True)
class MappingTable:
    """Source-word to transition-word mapping with metadata.

    ``entries`` pairs each source word (a '01' string, possibly ending in
    'X' for a fuzzy bit) with its transition word.  Source words must form
    a prefix-free set once fuzzy bits are expanded.
    """

    entries: tuple[tuple[str, tuple[int, ...]], ...]
    variant: str

    def __post_init__(self):
        expanded = []
        for word, _ in self.entries:
            if word.endswith("X"):
                expanded += [word[:-1] + "0", word[:-1] + "1"]
            else:
                expanded.append(word)
        for i, a in enumerate(expanded):
            for j, b in enumerate(expanded):
                if i != j and b.startswith(a):
                    raise CodingError(f"source words not prefix-free: {a} / {b}")

    @classmethod
    def standard(cls) -> "MappingTable":
        return cls(STANDARD_WORDS, "standard")

    @classmethod
    def modified(cls) -> "MappingTable":
        return cls(MODIFIED_WORDS, "modified")


def coding_potential(table: MappingTable) -> Fraction:
    """Average information density of a mapping table in bits per nucleotide.

    Source words are weighted by 2^-(determined bits); fuzzy bits count
    toward the word length but not toward the weight.
    """
    if not table.entries:
        raise CodingError("mapping table is empty")
    num = Fraction(0)
    den = Fraction(0)
    for word, transitions in table.entries:
        determined = sum(1 for ch in word if ch != "X")
        weight = Fraction(1, 2 ** determined)
        num += weight * len(word)
        den += weight * len(transitions)
    return num / den


def fuzzy_bit_prob() -> Fraction:
    """Probability that a transition symbol 3 carries source bits '10'.

    Conditioned on an i.i.d. uniform bit source, symbol 3 terminates the
    words '10', '1110' or '11111X'; only the last leaves its final bit
    undetermined, so the '10' branch carries almost all of the mass.
    """
    num = Fraction(1, 4) + Fraction(1, 16) + Fraction(1, 128)
    den = Fraction(1, 4) + Fraction(1, 16) + Fraction(1, 64)
    return num / den


def _build_parser():
    words = dict(STANDARD_WORDS)
    states = {""}
    for w in words:
        for i in range(1, len(w)):
            if w[:i] not in words:
                states.add(w[:i])
    step = {}
    for s in states:
        row = []
        for b in "01":
            p = s + b
            row.append(words[p] if p in words else p)
        step[s] = tuple(row)
    pad = {}
    for s in states:
        if not s:
            continue
        p, n = s, 0
        while p not in words:
            p += "0"
            n += 1
        pad[s] = (n, words[p])
    inverse = {}
    for w, t in words.items():
        inverse[(len(t) - 1, t[-1])] = w
    return step, pad, inverse


_STEP, _PAD, _INVERSE = _build_parser()

# Longest shared source prefix of the words starting with n zero
# transitions; used to resynthesise bits from a truncated word.
_PREFIX_BITS = {1: "11", 2: "1111"}


def vlrll_encode(bits, initial_state: str = "A") -> tuple[str, int]:
    """Encode a bitstream into a run-length-limited strand.

    The stream is greedily parsed into source words; an incomplete tail is
    completed with the minimum number of zero bits (at most two).  Returns
    the strand and the pad count.
    """
    arr = as_bit_array(bits)
    start = nucleotide_index(initial_state)
    transitions: list[int] = []
    state = ""
    step = _STEP
    for bit in arr.tolist():
        nxt = step[state][bit]
        if type(nxt) is str:
            state = nxt
        else:
            transitions.extend(nxt)
            state = ""
    pad = 0
    if state:
        pad, tail = _PAD[state]
        transitions.extend(tail)
    return indices_to_dna(precode(np.array(transitions, dtype=np.uint8), start)), pad


def vlrll_decode(dna: str, initial_state: str = "A", source_len: int | None = None) -> np.ndarray:
    """Best-effort inverse of vlrll_encode.

    Transition words are rebuilt by accumulating zero transitions until a
    nonzero terminator.  Corrupted strands can desynchronise the parse; a
    malformed word (a third consecutive zero, or trailing zeros with no
    terminator) contributes the longest source prefix shared by its
    candidate completions, and the output is truncated or zero-padded to
    ``source_len``.  Never raises on strand content.
    """
    idx = dna_to_indices(dna)
    t = deprecode(idx, nucleotide_index(initial_state))
    pieces: list[str] = []
    zeros = 0
    inverse = _INVERSE
    for s in t.tolist():
        if s == 0:
            zeros += 1
            if zeros == 3:
                pieces.append(_PREFIX_BITS[2])
                zeros = 1
        else:
            pieces.append(inverse[(zeros, s)])
            zeros = 0
    if zeros:
        pieces.append(_PREFIX_BITS[zeros])
    bits = "".join(pieces)
    if source_len is None:
        source_len = len(bits)
    if len(bits) < source_len:
        bits += "0" * (source_len - len(bits))
    return as_bit_array(bits[:source_len])


def mvlrll_encode(parity, message_state: str) -> str:
    """Encode parity bits at exactly two bits per nucleotide.

    Bit pairs map to transition symbols (00->1, 01->2, 10->3, 11->0).
    After two consecutive zero emissions any pair starting with 1 emits
    symbol 3 and its second (fuzzy) bit is discarded, which caps runs at
    three even across the boundary with the preceding message strand.
    """
    arr = as_bit_array(parity)
    if arr.size % 2:
        raise CodingError("parity bitstream must have even length")
    start = nucleotide_index(message_state)
    transitions = np.empty(arr.size // 2, dtype=np.uint8)
    z = 0
    for i, (b1, b2) in enumerate(arr.reshape(-1, 2).tolist()):
        if b1 == 0:
            t = 1 if b2 == 0 else 2
        elif z == 2:
            t = 3
        else:
            t = 3 if b2 == 0 else 0
        z = z + 1 if t == 0 else 0
        transitions[i] = t
    return indices_to_dna(precode(transitions, start))


def mvlrll_demap_hard(dna: str, message_state: str) -> np.ndarray:
    """Hard symbol-wise inverse of mvlrll_encode.

    Each transition symbol maps back to two bits (1->00, 2->01, 0->11,
    3->10); the 3->10 branch is the majority resolution of the fuzzy bit.
    Output length is exactly twice the strand length.
    """
    t = deprecode(dna_to_indices(dna), nucleotide_index(message_state))
    out = np.empty(2 * t.size, dtype=np.uint8)
    out[0::2] = _DEMAP_B1[t]
    out[1::2] = _DEMAP_B2[t]
    return out


def interim_map(dna: str) -> np.ndarray:
    """Fixed 2-bit image of a strand (A->00, T->01, G->10, C->11)."""
    idx = dna_to_indices(dna)
    out = np.empty(2 * idx.size, dtype=np.uint8)
    out[0::2] = idx >> 1
    out[1::2] = idx & 1
    return out


def interim_unmap(bits) -> str:
    """Inverse of interim_map; requires an even-length bitstream."""
    arr = as_bit_array(bits)
    if arr.size % 2:
        raise CodingError("interim bitstream must have even length")
    pairs = arr.reshape(-1, 2)
    return indices_to_dna((pairs[:, 0] << 1) | pairs[:, 1])
