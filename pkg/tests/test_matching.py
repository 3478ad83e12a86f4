"""Pair alphabet, matching analysis, and the exhaustive shift verifiers."""

from __future__ import annotations

import random
from fractions import Fraction
from math import gcd

import pytest

from gasket_spectrum.errors import DomainError
from gasket_spectrum.matching import (
    OMEGA2,
    analyze,
    b_blocks,
    block_word,
    e_seq,
    verify_block_concatenation,
    verify_bump_witnesses,
    verify_cross_scale,
    verify_shift_trichotomy,
    zip_seqs,
)
from gasket_spectrum.spectrum import zero_fraction
from gasket_spectrum.words import Seq, dec_last, inc_last, reflect, tm_block


def test_pair_alphabet_is_difference_set():
    expected = {(0, 0), (0, 1), (1, 0), (-1, 0), (-1, 1), (0, -1), (1, -1)}
    assert set(OMEGA2) == expected
    assert (1, 1) not in OMEGA2 and (-1, -1) not in OMEGA2


def test_zip_trivial():
    zeros = Seq((), (0,))
    assert zip_seqs(zeros, zeros) == Seq((), ((0, 0),))
    a, b = Seq((), (1, 0)), Seq((), (0, 1))
    assert zip_seqs(a, b) == Seq((), ((1, 0), (0, 1)))


def test_zip_period_lcm_and_preperiod_max():
    a = Seq((1,), (1, 0, -1, 0))
    b = Seq((), (0, 1, 0, -1, 1, 0))
    z = zip_seqs(a, b)
    # canonical form may shorten, but the raw pairing covers the lcm
    assert (len(a.period) * len(b.period)) // gcd(len(a.period), len(b.period)) == 12
    assert len(z.period) in (1, 2, 3, 4, 6, 12)
    for i in range(1, 30):
        assert z.digit(i) == (a.digit(i), b.digit(i))


def test_analyze_all_zero():
    rep = analyze(Seq((), ((0, 0),)))
    assert rep.matched and rep.zero_pair_in_period
    assert rep.zero_pair_density == 1


def test_analyze_immediate_violation():
    rep = analyze(Seq((), ((1, 1),)))
    assert not rep.matched
    assert rep.first_violation_index == 1


def test_analyze_hand_paired_example():
    # scale-1 period shifted by two against itself pairs to
    # ((-1,1),(0,0),(1,-1),(0,0)) repeating
    s = e_seq(1, 1, 2)
    assert s == Seq((), ((-1, 1), (0, 0), (1, -1), (0, 0)))
    rep = analyze(s)
    assert rep.matched and rep.zero_pair_density == Fraction(1, 2)


def test_analyze_rejects_bad_pairs():
    with pytest.raises(DomainError):
        analyze(Seq((), ((2, 0),)))


def test_e_seq_bounds():
    with pytest.raises(DomainError):
        e_seq(0, 1, 0)
    with pytest.raises(DomainError):
        e_seq(1, 1, 4)


def test_e_seq_half_shift_matched_with_zero_pairs():
    for n in range(1, 11):
        rep = analyze(e_seq(n, n, 2 ** n))
        assert rep.matched and rep.zero_pair_in_period


def test_e_seq_cross_scale_unmatched():
    for i in range(1, 4):
        assert not analyze(e_seq(1, 2, i)).matched


def test_trichotomy_small_scales():
    for n in (1, 2, 3):
        rep = verify_shift_trichotomy(n)
        assert rep.passed
        assert rep.stats["shifts_checked"] == 2 ** (n + 1) - 1


def test_trichotomy_larger_scale():
    assert verify_shift_trichotomy(10).passed


def test_bump_witnesses_minus_variant():
    rep = verify_bump_witnesses(3, "minus")
    assert rep.passed
    assert len(rep.witnesses) == 2 ** 4 - 1
    by_shift = {w["i"]: w for w in rep.witnesses}
    # half shift: first witness right after the excluded position, both digits -1
    assert by_shift[8]["u"] == 17 and by_shift[8]["term"] == [-1, -1]
    for w in rep.witnesses:
        assert 0 < w["u"] < 2 ** 5 and w["u"] != 2 ** 4


def test_bump_witnesses_plain_variant():
    assert verify_bump_witnesses(8, "plain").passed


def test_bump_witness_preconditions():
    with pytest.raises(DomainError):
        verify_bump_witnesses(2, "minus")
    with pytest.raises(DomainError):
        verify_bump_witnesses(3, "weird")


def test_cross_scale_reports():
    assert verify_cross_scale(2, 2).passed
    assert verify_cross_scale(1, 2).passed
    assert verify_cross_scale(3, 7).passed
    with pytest.raises(DomainError):
        verify_cross_scale(3, 2)


def test_b_blocks_small_case():
    b1, b2, b3, b4 = b_blocks(1)
    assert b1 == (1, 0, -1, 1, -1, 0, 1, -1)
    e = tm_block(1)
    assert b2 == e + inc_last(reflect(e)) + reflect(e) + e
    assert b3 == reflect(e) + dec_last(e) + e + inc_last(reflect(e))
    assert reflect(b1) == b3
    assert reflect(b2) == b4


def test_b_blocks_lengths_and_identity():
    for n in range(1, 9):
        blocks = b_blocks(n)
        assert all(len(b) == 2 ** (n + 2) for b in blocks)
        # the second block extends the calculus: it equals the block two scales up
        assert blocks[1] == tm_block(n + 2)
        assert blocks[0] == dec_last(tm_block(n + 2))


def test_block_concatenation_witnesses():
    rep = verify_block_concatenation(3, (1, 2))
    assert rep.passed
    assert rep.stats["inconclusive"] == 0
    by_shift = {w["i"]: w for w in rep.witnesses}
    assert 2 in by_shift


def test_block_concatenation_all_patterns():
    for x in range(1, 5):
        for y in range(1, 5):
            rep = verify_block_concatenation(4, (x, y))
            assert rep.passed
            assert rep.stats["inconclusive"] == 0
            assert len(rep.witnesses) + len(rep.stats["matched_exceptions"]) == 2 ** 5 - 1


def test_block_concatenation_rejects_bad_input():
    with pytest.raises(DomainError):
        verify_block_concatenation(2, (1, 2))
    with pytest.raises(DomainError):
        verify_block_concatenation(3, (1,))
    with pytest.raises(DomainError):
        verify_block_concatenation(3, (1, 5))


def test_reflection_symmetry_of_matching():
    rng = random.Random(17)
    for _ in range(40):
        pre_a = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(0, 2)))
        per_a = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 5)))
        per_b = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 5)))
        a, b = Seq(pre_a, per_a), Seq((), per_b)
        r = analyze(zip_seqs(a, b))
        r_reflected = analyze(zip_seqs(a.reflect(), b.reflect()))
        assert r.matched == r_reflected.matched
        assert r.zero_pair_density == r_reflected.zero_pair_density
        r_swapped = analyze(zip_seqs(b, a))
        assert r.matched == r_swapped.matched


def test_half_shift_density_equals_block_density():
    for n in range(1, 13):
        rep = analyze(e_seq(n, n, 2 ** n))
        assert rep.zero_pair_density == zero_fraction(tm_block(n))


def test_branch_against_raw_scan():
    # analyze must agree with a naive full-period scan
    rng = random.Random(23)
    for _ in range(30):
        per = tuple(
            (rng.choice((-1, 0, 1)), rng.choice((-1, 0, 1)))
            for _ in range(rng.randint(1, 8))
        )
        s = Seq((), per)
        rep = analyze(s)
        naive_matched = all(p not in ((1, 1), (-1, -1)) for p in s.period)
        assert rep.matched == naive_matched


def test_block_word_shape():
    for n in range(1, 8):
        w = block_word(n)
        assert len(w) == 2 ** (n + 1)
        assert w[: 2 ** n] == tm_block(n)
        assert w[2 ** n:] == reflect(tm_block(n))
