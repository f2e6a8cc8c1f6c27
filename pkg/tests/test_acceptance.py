"""Acceptance suite: one test per release criterion, each printing a
PASS line with the measured value when it holds."""

import math
from fractions import Fraction

import numpy as np
import pytest

from dnafec import cli
from dnafec.channel import nanopore, transmit
from dnafec.constrained import (
    MappingTable,
    coding_potential,
    fuzzy_bit_prob,
    max_homopolymer_run,
    mvlrll_encode,
    vlrll_decode,
    vlrll_encode,
)
from dnafec.ldpc import base_matrix, build_code, lift, rate_match
from dnafec.llr import pair_llrs
from dnafec.pipeline import decode_frame, encode_frame, get_code
from dnafec.sim import SimConfig, run as sim_run

from test_llr import enumeration_oracle, tc_pair_reference


@pytest.fixture(scope="module")
def nanopore_sweep():
    config = SimConfig(
        channel="nanopore",
        params=(0.03, 0.035, 0.04),
        info_bits=1000,
        rate="1/2",
        frames=1000,
        max_iter=200,
        seed=0,
    )
    return sim_run(config)


@pytest.fixture(scope="module")
def illumina_sweep():
    config = SimConfig(
        channel="illumina",
        params=(0.5e-3, 1.0e-3, 1.5e-3),
        info_bits=300,
        rate="4/5",
        frames=1000,
        max_iter=200,
        seed=0,
    )
    return sim_run(config)


def report(name, detail):
    print(f"ACCEPTANCE {name}: PASS ({detail})")


def test_coding_potential_exact():
    value = coding_potential(MappingTable.standard())
    assert value == Fraction(83, 42)
    assert abs(float(value) - 1.97619) <= 1e-5
    report("coding potential", f"{float(value):.6f} = 83/42")


def test_fuzzy_bit_probability_exact():
    assert fuzzy_bit_prob() == Fraction(41, 42)
    report("fuzzy bit weight", "41/42 exactly")


def test_overall_coding_potential_windows():
    from dnafec.sim import overall_coding_potential

    half = overall_coding_potential("1/2")
    high = overall_coding_potential("4/5")
    assert 1.987 <= half <= 1.989
    assert 1.980 <= high <= 1.982
    report("overall potential", f"1/2 -> {half:.6f}, 4/5 -> {high:.6f}")


def test_ldpc_dimensions():
    H = lift(base_matrix("4/5"), 38, 0)
    assert H.shape == (114, 418)
    matched = rate_match(build_code("4/5", 38, 0), 302)
    assert matched.H.shape == (113, 415)
    assert matched.k == 302
    report("LDPC dimensions", "114x418 lifted, 113x415 rate-matched")


def test_channel_average_error_anchor():
    alpha = 0.03
    model = nanopore(alpha)
    analytic = model.average_error()
    assert abs(analytic - (3 * alpha + 0.01)) < 1e-12
    rng = np.random.default_rng(2024)
    n = 1_000_000
    strand = "".join(rng.choice(list("ATGC"), n).tolist())
    received = transmit(model, strand, rng)
    a = np.frombuffer(strand.encode(), np.uint8)
    b = np.frombuffer(received.encode(), np.uint8)
    empirical = float(np.count_nonzero(a != b)) / n
    assert abs(empirical - analytic) <= 1e-3
    report("channel anchor", f"analytic {analytic:.4f}, empirical {empirical:.4f} at 1e6 nt")


def test_run_length_constraint_suite():
    rng = np.random.default_rng(7)
    checked = 0
    for parity_divisor in (1, 4):  # message-to-parity proportions of both presets
        for _ in range(100_000):
            m_len = int(rng.integers(16, 120))
            message = rng.integers(0, 2, m_len, dtype=np.uint8)
            head, _ = vlrll_encode(message, "A")
            parity_len = max(2, 2 * (len(head) // parity_divisor))
            parity = rng.integers(0, 2, parity_len, dtype=np.uint8)
            tail = mvlrll_encode(parity, head[-1])
            assert max_homopolymer_run(head + tail) <= 3
            checked += 1
    report("run-length constraint", f"{checked} random frames, zero violations")


def test_zero_noise_round_trip_suite():
    from dnafec.channel import illumina

    model = illumina(0.0)
    rng = np.random.default_rng(11)
    total = 0
    for rate, bits in (("1/2", 1000), ("4/5", 300)):
        for _ in range(1000):
            m = rng.integers(0, 2, bits, dtype=np.uint8)
            record = encode_frame(m, rate)
            _, decoder = get_code(rate, record.interim_bits.size)
            decoded = decode_frame(
                record.strand,
                code=record.code,
                boundary=record.boundary,
                source_len=bits,
                model=model,
                max_iter=50,
                decoder=decoder,
            )
            assert np.array_equal(decoded.source_bits, m)
            total += 1
    report("zero-noise round trip", f"{total} frames recovered exactly")


def test_pair_llr_oracle_equivalence():
    worst = 0.0
    for alpha in (0.01, 0.02, 0.03, 0.04, 0.05):
        model = nanopore(alpha)
        for prev in "ATGC":
            for curr in "ATGC":
                got = pair_llrs(model, prev, curr)
                want = enumeration_oracle(model, prev, curr)
                worst = max(worst, abs(got[0] - want[0]), abs(got[1] - want[1]))
        ref = tc_pair_reference(model)
        got_tc = pair_llrs(model, "T", "C")
        worst = max(worst, abs(got_tc[0] - ref[0]), abs(got_tc[1] - ref[1]))
    assert worst <= 1e-12
    report("pair LLR oracle", f"max deviation {worst:.2e} over 80 pair evaluations")


def test_waterfall_property(nanopore_sweep, illumina_sweep):
    nano_first = nanopore_sweep[0]
    assert 0.05 <= nano_first.ber_interim_raw <= 0.15
    detail = [f"nanopore raw {nano_first.ber_interim_raw:.4f}"]
    if nano_first.ber_interim_post <= 1e-4:
        detail.append(f"post {nano_first.ber_interim_post:.2e} <= 1e-4")
    else:
        reduction = nano_first.ber_interim_raw / nano_first.ber_interim_post
        assert reduction >= 100.0, (
            f"neither the 1e-4 target nor the 100x fallback holds: "
            f"post {nano_first.ber_interim_post:.2e}, reduction {reduction:.0f}x"
        )
        detail.append(
            f"post {nano_first.ber_interim_post:.2e} (fallback: {reduction:.0f}x reduction)"
        )

    illu_first = illumina_sweep[0]
    if illu_first.ber_interim_post <= 1e-4:
        detail.append(f"illumina post {illu_first.ber_interim_post:.2e} <= 1e-4")
    else:
        reduction = illu_first.ber_interim_raw / illu_first.ber_interim_post
        assert reduction >= 100.0
        detail.append(f"illumina fallback {reduction:.0f}x")

    for points in (nanopore_sweep, illumina_sweep):
        for a, b in zip(points, points[1:]):
            assert a.ber_interim_raw <= b.ber_interim_raw + 1e-12
            assert a.ber_interim_post <= b.ber_interim_post + 1e-12
        for p in points:
            assert p.ber_source_raw > p.ber_interim_raw > 0
    detail.append("monotone sweeps, raw source > raw interim everywhere")
    report("waterfall", "; ".join(detail))


def test_cli_determinism_across_threads(tmp_path, monkeypatch):
    args = [
        "sim",
        "--channel",
        "nanopore",
        "--param-list",
        "0.035",
        "--info-bits",
        "300",
        "--frames",
        "40",
        "--max-iter",
        "50",
        "--seed",
        "9",
    ]
    outputs = []
    for threads in ("1", "3", "1"):
        monkeypatch.setenv("DNAFEC_THREADS", threads)
        out = tmp_path / f"run_{len(outputs)}.csv"
        assert cli.main(args + ["--out", str(out)]) == 0
        outputs.append(out.read_bytes())
    assert outputs[0] == outputs[1] == outputs[2]
    report("determinism", f"byte-identical CSV over thread counts 1/3/1 ({len(outputs[0])} bytes)")
