from fractions import Fraction

import numpy as np
import pytest

from dnafec import constrained as cc
from dnafec.constrained import (
    CodingError,
    MappingTable,
    STANDARD_WORDS,
    as_bit_array,
    coding_potential,
    deprecode,
    format_bits,
    fuzzy_bit_prob,
    interim_map,
    interim_unmap,
    max_homopolymer_run,
    mvlrll_demap_hard,
    mvlrll_encode,
    precode,
    vlrll_decode,
    vlrll_encode,
)


def oracle_encode(bits: str, initial: str) -> str:
    """Greedy longest-prefix table walk, independent of the streaming parser."""
    words = dict(STANDARD_WORDS)
    i = 0
    transitions = []
    while i < len(bits):
        for width in (2, 4, 5, 6):
            cand = bits[i : i + width]
            if cand in words:
                transitions.extend(words[cand])
                i += width
                break
        else:
            bits = bits + "0"  # pad and retry from the same position
    state = "ATGC".index(initial)
    out = []
    for t in transitions:
        state = (state + t) % 4
        out.append("ATGC"[state])
    return "".join(out)


class TestVlrllEncode:
    def test_worked_example(self):
        strand, pad = vlrll_encode("11101001110100111100", "A")
        assert strand == "ACGAAGCCCA"
        assert pad == 0

    def test_two_bit_word(self):
        assert vlrll_encode("00", "A") == ("T", 0)

    def test_empty(self):
        assert vlrll_encode("", "A") == ("", 0)

    def test_matches_table_walk_oracle(self):
        rng = np.random.default_rng(0)
        for _ in range(400):
            bits = format_bits(rng.integers(0, 2, int(rng.integers(1, 90)), dtype=np.uint8))
            strand, _ = vlrll_encode(bits, "G")
            assert strand == oracle_encode(bits, "G")

    @pytest.mark.parametrize(
        "bits,pad",
        [("0", 1), ("1", 1), ("11", 2), ("110", 1), ("111", 1), ("1111", 2), ("11110", 1)],
    )
    def test_pad_counts(self, bits, pad):
        _, got = vlrll_encode(bits, "A")
        assert got == pad

    def test_initial_state_matters(self):
        assert vlrll_encode("00", "C")[0] == "A"

    def test_rejects_non_bits(self):
        with pytest.raises(CodingError):
            vlrll_encode("012", "A")


class TestVlrllDecode:
    def test_worked_example(self):
        got = vlrll_decode("ACGAAGCCCA", "A", 20)
        assert format_bits(got) == "11101001110100111100"

    def test_single_symbol(self):
        assert format_bits(vlrll_decode("T", "A", 2)) == "00"

    def test_empty(self):
        assert vlrll_decode("", "A", 0).size == 0

    def test_roundtrip_random(self):
        rng = np.random.default_rng(1)
        for _ in range(3000):
            n = int(rng.integers(1, 160))
            bits = rng.integers(0, 2, n, dtype=np.uint8)
            strand, _ = vlrll_encode(bits, "T")
            assert np.array_equal(vlrll_decode(strand, "T", n), bits)

    def test_corrupted_never_aborts(self):
        rng = np.random.default_rng(2)
        for _ in range(500):
            n = int(rng.integers(1, 80))
            strand = "".join(rng.choice(list("ATGC"), n).tolist())
            out = vlrll_decode(strand, "A", 40)
            assert out.size == 40

    def test_long_homopolymer_input(self):
        # run of four repeats three zero transitions, which no word allows
        out = vlrll_decode("AAAA", "A", 8)
        assert format_bits(out) == "11111111"

    def test_trailing_zero_transitions(self):
        # strand ends mid-word: transitions 1, 0 with no terminator
        out = vlrll_decode("TT", "A", 4)
        assert format_bits(out) == "0011"

    def test_truncates_and_pads_to_length(self):
        strand, _ = vlrll_encode("0000", "A")
        assert vlrll_decode(strand, "A", 2).size == 2
        assert vlrll_decode(strand, "A", 10).size == 10


class TestRunLength:
    def test_encode_outputs_bounded(self):
        rng = np.random.default_rng(3)
        for _ in range(2000):
            bits = rng.integers(0, 2, int(rng.integers(1, 200)), dtype=np.uint8)
            strand, _ = vlrll_encode(bits, "A")
            assert max_homopolymer_run(strand) <= 3

    def test_word_boundary_breaks_run(self):
        rng = np.random.default_rng(4)
        for _ in range(2000):
            bits = rng.integers(0, 2, int(rng.integers(2, 120)), dtype=np.uint8)
            strand, _ = vlrll_encode(bits, "C")
            if len(strand) >= 2:
                assert strand[-1] != strand[-2]

    def test_concatenation_with_redundancy(self):
        rng = np.random.default_rng(5)
        for _ in range(2000):
            message = rng.integers(0, 2, int(rng.integers(1, 80)), dtype=np.uint8)
            parity = rng.integers(0, 2, 2 * int(rng.integers(1, 40)), dtype=np.uint8)
            head, _ = vlrll_encode(message, "A")
            tail = mvlrll_encode(parity, head[-1])
            assert max_homopolymer_run(head + tail) <= 3

    def test_max_homopolymer_run_cases(self):
        assert max_homopolymer_run("") == 0
        assert max_homopolymer_run("A") == 1
        assert max_homopolymer_run("ATGC") == 1
        assert max_homopolymer_run("AATTTG") == 3
        assert max_homopolymer_run("GGGG") == 4


class TestModifiedVlrll:
    def test_worked_example(self):
        assert mvlrll_encode("110100", "A") == "AGC"

    def test_fuzzy_bit_example(self):
        assert mvlrll_encode("111111", "T") == "TTA"

    def test_empty(self):
        assert mvlrll_encode("", "G") == ""

    def test_odd_length_rejected(self):
        with pytest.raises(CodingError):
            mvlrll_encode("101", "A")

    def test_rate_exactly_two_bits_per_nt(self):
        rng = np.random.default_rng(6)
        for _ in range(300):
            parity = rng.integers(0, 2, 2 * int(rng.integers(1, 60)), dtype=np.uint8)
            assert len(mvlrll_encode(parity, "C")) == parity.size // 2

    def test_demap_worked_examples(self):
        assert format_bits(mvlrll_demap_hard("AGC", "A")) == "110100"
        assert format_bits(mvlrll_demap_hard("TTA", "T")) == "111110"
        assert format_bits(mvlrll_demap_hard("", "C")) == ""

    def test_demap_length(self):
        assert mvlrll_demap_hard("ATGCT", "A").size == 10

    def test_roundtrip_disagrees_only_on_fuzzy_bits(self):
        rng = np.random.default_rng(7)
        for _ in range(1500):
            parity = rng.integers(0, 2, 2 * int(rng.integers(1, 50)), dtype=np.uint8)
            strand = mvlrll_encode(parity, "A")
            back = mvlrll_demap_hard(strand, "A")
            diffs = np.flatnonzero(back != parity)
            # a fuzzy position is the discarded second bit of a pair that
            # followed two consecutive zero emissions
            z = 0
            fuzzy = set()
            for i in range(0, parity.size, 2):
                b1, b2 = int(parity[i]), int(parity[i + 1])
                if z == 2 and b1 == 1:
                    fuzzy.add(i + 1)
                    z = 0
                elif b1 == 1 and b2 == 1:
                    z += 1
                else:
                    z = 0
            assert set(diffs.tolist()) <= fuzzy

    def test_fuzzy_zero_resolves_exactly(self):
        # pairs 11,11,10: the fuzzy bit is already 0, so the demap is exact
        strand = mvlrll_encode("111110", "T")
        assert format_bits(mvlrll_demap_hard(strand, "T")) == "111110"


class TestInterimMapping:
    def test_worked_example(self):
        assert format_bits(interim_map("ACGT")) == "00111001"

    def test_empty(self):
        assert interim_map("").size == 0
        assert interim_unmap("") == ""

    def test_inverse(self):
        assert interim_unmap("00111001") == "ACGT"
        rng = np.random.default_rng(8)
        for _ in range(200):
            strand = "".join(rng.choice(list("ATGC"), int(rng.integers(1, 60))).tolist())
            assert interim_unmap(interim_map(strand)) == strand

    def test_odd_length_rejected(self):
        with pytest.raises(CodingError):
            interim_unmap("011")


class TestCodingPotential:
    def test_standard_table_exact(self):
        value = coding_potential(MappingTable.standard())
        assert value == Fraction(83, 42)
        assert abs(float(value) - 1.97619) < 1e-5

    def test_single_entry(self):
        table = MappingTable((("00", (1,)),), "custom")
        assert coding_potential(table) == 2

    def test_modified_table(self):
        assert coding_potential(MappingTable.modified()) == 2

    def test_empty_table_rejected(self):
        with pytest.raises(CodingError):
            coding_potential(MappingTable((), "empty"))

    def test_prefix_free_validation(self):
        with pytest.raises(CodingError):
            MappingTable((("0", (1,)), ("01", (2,))), "bad")

    def test_fuzzy_entry_expansion_checked(self):
        with pytest.raises(CodingError):
            MappingTable((("111110", (1,)), ("11111X", (2,))), "bad")


class TestFuzzyBitProb:
    def test_exact_value(self):
        assert fuzzy_bit_prob() == Fraction(41, 42)

    def test_complement(self):
        assert 1 - fuzzy_bit_prob() == Fraction(1, 42)

    def test_dyadic_terms(self):
        num = Fraction(1, 4) + Fraction(1, 16) + Fraction(1, 128)
        den = Fraction(1, 4) + Fraction(1, 16) + Fraction(1, 64)
        assert float(num) == 0.3203125
        assert float(den) == 0.328125
        assert num / den == fuzzy_bit_prob()


class TestPrecoding:
    def test_roundtrip(self):
        rng = np.random.default_rng(9)
        for _ in range(300):
            t = rng.integers(0, 4, int(rng.integers(0, 50)), dtype=np.uint8)
            start = int(rng.integers(0, 4))
            assert np.array_equal(deprecode(precode(t, start), start), t)

    def test_zero_transition_repeats(self):
        assert np.array_equal(precode(np.array([0, 0, 1]), 2), np.array([2, 2, 3]))


class TestBitHelpers:
    def test_as_bit_array_accepts_strings_and_arrays(self):
        assert np.array_equal(as_bit_array("0110"), np.array([0, 1, 1, 0], dtype=np.uint8))
        assert np.array_equal(as_bit_array([1, 0]), np.array([1, 0], dtype=np.uint8))

    def test_format_roundtrip(self):
        assert format_bits(as_bit_array("10011")) == "10011"

    def test_invalid_nucleotide_rejected(self):
        with pytest.raises(CodingError):
            cc.dna_to_indices("ATXG")
