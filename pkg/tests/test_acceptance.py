"""Exit criteria.  Each test is one criterion; the summary prints PASS/FAIL per test."""

import itertools
import random
import time
from dataclasses import replace
from fractions import Fraction

import pytest

from montpipe import (InvariantError, LatencyParams, classical_mmm, dependence_bound, dependence_degree,
                      drmmm_mul, latency_proposed, latency_serial, make_context, theorem1_constant)
from montpipe.cli import main
from montpipe.hw import (HwConfig, build_encoding_table, carry_bits, carry_lut_inits, compress_6to3,
                         compress_terms, cycle_report, encode_windows, hw_run, level_budget_report)

from conftest import odd_modulus

WIDTHS = (8, 16, 64, 256, 1024)
RADICES = (2, 4, 8, 16)
STAGES = (1, 2, 4, 6)


def test_criterion_1_oracle_equality():
    rng = random.Random(1)
    per_combo = 125
    cases = 0
    start = time.perf_counter()
    for bits, k, t in itertools.product(WIDTHS, RADICES, STAGES):
        for _ in range(per_combo):
            M = odd_modulus(rng, bits)
            ctx = make_context(M, k, t)
            A, B = rng.randrange(M), rng.randrange(M)
            want = A * B * pow(2 ** (k * ctx.d), -1, M) % M
            assert classical_mmm(ctx, A, B).output == want
            assert drmmm_mul(ctx, A, B)[0].output == want
            assert hw_run(ctx, A, B)[0].output == want
            cases += 1
    elapsed = time.perf_counter() - start
    assert cases >= 10_000
    assert elapsed < 300, f"took {elapsed:.0f}s"


def test_criterion_2_quotient_consistency():
    rng = random.Random(2)
    for _ in range(1000):
        bits = rng.choice(WIDTHS[:4])
        M = odd_modulus(rng, bits)
        A, B = rng.randrange(M), rng.randrange(M)
        const = A * B * (-pow(M, -1, 1 << bits)) % (1 << bits)
        sums = set()
        for k in RADICES:
            ctx = make_context(M, k)
            assert theorem1_constant(ctx, A, B) == const
            sums.add(classical_mmm(ctx, A, B).quotients.weighted_sum() % (1 << bits))
        assert sums == {const}


def test_criterion_3_shift_validity():
    rng = random.Random(3)
    for _ in range(300):
        M = odd_modulus(rng, rng.choice(WIDTHS[:4]))
        ctx = make_context(M, rng.choice(RADICES), rng.choice(STAGES))
        A, B = rng.randrange(M), rng.randrange(M)
        _, trace = drmmm_mul(ctx, A, B)
        prev = 0
        for s in trace.steps:
            acc = prev + s.a * B * ctx.r ** ctx.t + s.q_hat * M
            assert acc % ctx.r == 0
            prev = s.z
        # every hw step checks its low window before shifting
        hw_run(ctx, A, B)
    tripped_sw = tripped_hw = 0
    for _ in range(20):
        M = odd_modulus(rng, 128)
        ctx = make_context(M, 4, 2)
        bad = replace(ctx, M_prime_wide=ctx.M_prime_wide ^ (1 << 5))
        A, B = rng.randrange(1, M), rng.randrange(1, M)
        with pytest.raises(InvariantError):
            drmmm_mul(bad, A, B)
        tripped_sw += 1
        with pytest.raises(InvariantError):
            hw_run(bad, A, B)
        tripped_hw += 1
    assert tripped_sw == tripped_hw == 20


def test_criterion_4_carry_logic():
    start = time.perf_counter()
    for k in range(2, 9):
        mod = 1 << k
        for z0, z1 in itertools.product(range(mod), repeat=2):
            z2 = (-z0 - z1) % mod
            c_l, c_m = carry_bits(z0, z1, z2, k)
            assert c_l + c_m == (z0 + z1 + z2) >> k <= 2
    assert carry_lut_inits() == (0xFFFFFFFFFFFFFFFE, 0xFFFEFE80FE808000)
    assert time.perf_counter() - start < 1.0


def test_criterion_5_compressor():
    for bits in itertools.product((0, 1), repeat=6):
        o0, o1, o2 = compress_6to3(*bits)
        assert o0 + 2 * o1 + 4 * o2 == sum(bits)
    rng = random.Random(5)
    for _ in range(10_000):
        terms = [rng.getrandbits(rng.randint(1, 200)) for _ in range(rng.randint(1, 48))]
        target = rng.choice((2, 3))
        out, _ = compress_terms(terms, target)
        assert len(out) <= target and sum(out) == sum(terms)
    terms = [rng.getrandbits(1100) for _ in range(24)]
    out, levels = compress_terms(terms, 3)
    assert len(out) == 3 and levels == 3 and sum(out) == sum(terms)


def test_criterion_6_cycle_model():
    ctx = make_context((1 << 1023) | 1, 16, 4)
    assert ctx.d + ctx.t == 68
    rep = cycle_report(ctx, HwConfig(w=6, w_prime=6))
    assert rep.iterations == 68
    assert rep.epilogue_cycles == 6 and rep.total_cycles == 74
    assert rep.epilogue_fitted and any("fitted" in note for note in rep.notes)
    lv = level_budget_report(ctx, HwConfig(w=6, w_prime=6))
    assert lv.update_levels == 4
    assert all(s <= 4 for s in lv.stages)
    assert lv.iteration_levels == 4 and lv.ok


def test_criterion_7_analysis_formulas():
    rng = random.Random(7)
    for _ in range(100):
        tm, ta, tr = (Fraction(rng.randint(0, 1000), rng.randint(1, 97)) for _ in range(3))
        d, t = rng.randint(1, 1024), rng.randint(1, 16)
        p = LatencyParams(T_m=tm, T_a=ta, T_red=tr)
        t_c = 3 * tm + 2 * ta
        t_i = tm + 2 * ta
        assert latency_serial(p, d) == d * t_c + tr
        assert latency_proposed(p, d, t) == (d + t + 1) * t_i + tr
    for bits, k in itertools.product((64, 256, 1024, 1000), RADICES):
        ctx = make_context((1 << (bits - 1)) | 1, k)
        bound = dependence_bound(bits, k)
        assert bound == 1 - Fraction(1, -(-bits // k))
        for i in range(ctx.d):
            v = dependence_degree(i, ctx).value
            assert v == Fraction(i, i + 1) and v <= bound
        assert dependence_degree(ctx.d - 1, ctx).value == bound


def test_criterion_8_encoding_layers():
    rng = random.Random(8)
    for _ in range(500):
        M = odd_modulus(rng, rng.choice((64, 256, 1024)))
        k, t = rng.choice(RADICES), rng.choice(STAGES)
        ctx = make_context(M, k, t)
        w = rng.choice((4, 5, 6))
        terms = [rng.getrandbits(ctx.kt) for _ in range(3)]
        im = build_encoding_table(M, w, "iM")
        assert sum(pp.value for pp in encode_windows(terms, ctx.kt, im)) == sum(terms) * M
        imp = build_encoding_table(ctx.M_prime_wide, w, "iMprime", modulus_bits=ctx.kt)
        got = sum(pp.value for pp in encode_windows(terms, ctx.kt, imp)) % (1 << ctx.kt)
        assert got == sum(terms) * ctx.M_prime_wide % (1 << ctx.kt)
    for _ in range(20):
        M = odd_modulus(rng, 256)
        merged = build_encoding_table(M, 4, "merged", k=4)
        mp = make_context(M, 4, 1).M_prime_digit
        for x in range(16):
            q = x * mp % 16
            assert merged.entries[x] == q * M


def test_criterion_9_determinism(capsys):
    argv = ["--seed", "1", "verify", "--trials", "1000", "--widths", "256", "-k", "4,16", "-t", "2,4", "-v"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    assert first.strip().endswith("passed 1000/1000")
