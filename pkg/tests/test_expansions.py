"""Evaluation, greedy expansion, quasi-greedy digits, and uniqueness."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from gasket_spectrum import bases, expansions
from gasket_spectrum.errors import DomainError
from gasket_spectrum.expansions import (
    KLTailDescriptor,
    catalogue_tail,
    evaluate,
    evaluate_exact,
    find_unique_with_tail,
    greedy_expand,
    is_unique_expansion,
    kl_tail,
    quasi_greedy_alpha,
    uniqueness_verdict,
)
from gasket_spectrum.words import Seq, reflect, tm_block

from helpers import (
    band_midpoint,
    lex_largest_prefix_bruteforce,
    partial_sum,
    residual_unique,
    seq_value,
)


def test_evaluate_trivial_values():
    q = Fraction(5, 2)
    assert evaluate_exact(Seq((), (0,)), q) == 0
    assert evaluate_exact(Seq((), (1,)), q) == Fraction(1) / (q - 1)
    assert evaluate_exact(Seq((), (-1,)), q) == -Fraction(1) / (q - 1)


def test_evaluate_matches_partial_summation():
    q = Fraction(5, 2)
    s = Seq((), (1, 0, -1, 0))
    closed = evaluate_exact(s, q)
    approx = partial_sum(s, q, 100)
    assert abs(float(closed) - float(approx)) < 1e-12
    assert closed == (q ** 3 - q) / (q ** 4 - 1)


def test_evaluate_random_against_summation():
    rng = random.Random(5)
    for _ in range(30):
        q = Fraction(rng.randint(2001, 2999), 1000)
        pre = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(0, 3)))
        per = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 5)))
        s = Seq(pre, per)
        exact = evaluate_exact(s, q)
        assert abs(exact - partial_sum(s, q, 200)) < Fraction(1, 10 ** 25)


def test_evaluate_float_wrapper():
    assert evaluate(Seq((), (0,)), "2.5") == 0.0
    with pytest.raises(DomainError):
        evaluate(Seq((), (1,)), "3.2")


def test_greedy_trivial_points():
    q = Fraction("2.5")
    assert greedy_expand(Fraction(0), q, 10) == (0,) * 10
    assert greedy_expand(Fraction(1) / (q - 1), q, 10) == (1,) * 10
    assert greedy_expand(-Fraction(1) / (q - 1), q, 10) == (-1,) * 10


def test_greedy_reproduces_periodic_example():
    q = Fraction("2.6")
    x = evaluate_exact(Seq((), (1, 0, -1, 0)), q)
    assert greedy_expand(x, q, 8) == (1, 0, -1, 0, 1, 0, -1, 0)


def test_greedy_is_lexicographically_largest():
    rng = random.Random(7)
    for _ in range(12):
        q = Fraction(rng.randint(21, 29), 10)
        bound = Fraction(1) / (q - 1)
        x = Fraction(rng.randint(-1000, 1000), 1017) * bound
        got = greedy_expand(x, q, 7)
        assert got == lex_largest_prefix_bruteforce(x, q, 7)


def test_greedy_truncation_bound_two_sided():
    # The deficit may take either sign for bases above 2; its magnitude is
    # bounded by the representable tail size.
    rng = random.Random(13)
    for _ in range(1000):
        q = Fraction(rng.randint(2001, 2999), 1000)
        bound = Fraction(1) / (q - 1)
        x = Fraction(rng.randint(-10 ** 6, 10 ** 6), 10 ** 6) * bound
        depth = rng.randint(1, 24)
        digits = greedy_expand(x, q, depth)
        partial = sum(d * q ** -(i + 1) for i, d in enumerate(digits))
        assert abs(x - partial) <= q ** -depth * bound


def test_greedy_domain_checks():
    q = Fraction("2.5")
    with pytest.raises(DomainError):
        greedy_expand(Fraction(9, 10), q, 4)  # outside the representable interval
    with pytest.raises(DomainError):
        greedy_expand(Fraction(0), q, -1)


def test_alpha_at_second_root_is_two_zero_cycle():
    alpha = quasi_greedy_alpha(bases.base_root(2), 8)
    assert alpha == (2, 0, 2, 0, 2, 0, 2, 0)


def test_alpha_leading_digit():
    assert quasi_greedy_alpha("2.9", 1) == (2,)
    assert quasi_greedy_alpha("2.05", 1) == (2,)


def test_alpha_sums_to_one():
    for q_text in ("2.3", "2.45", "2.8"):
        q = Fraction(q_text)
        digits = quasi_greedy_alpha(q, 60)
        total = sum(d * q ** -(i + 1) for i, d in enumerate(digits))
        assert 1 - 10 * q ** -60 < total <= 1


def test_alpha_at_kl_is_shifted_difference_sequence():
    from gasket_spectrum.words import tm_diff
    alpha = quasi_greedy_alpha(bases.kl_constant(), 32)
    assert alpha == tuple(tm_diff(i) + 1 for i in range(1, 33))


def test_alpha_increasing_in_q():
    a = quasi_greedy_alpha(Fraction("2.3"), 40)
    b = quasi_greedy_alpha(Fraction("2.6"), 40)
    assert a < b


def test_alpha_enclosure_gives_certified_digits_then_raises():
    from gasket_spectrum.errors import PrecisionError

    b = bases.BaseValue(Fraction("2.45"), Fraction("2.46"))
    lo = quasi_greedy_alpha(Fraction("2.45"), 64)
    hi = quasi_greedy_alpha(Fraction("2.46"), 64)
    agree = 0
    while agree < 64 and lo[agree] == hi[agree]:
        agree += 1
    assert 0 < agree < 64
    provider = expansions.alpha_digits(b)
    assert provider.word(agree) == lo[:agree]
    with pytest.raises(PrecisionError):
        provider.digit(agree + 1)


def test_uniqueness_at_tagged_ladder_point():
    # At the root itself the matching periodic tail ties with alpha exactly
    # (the equality branch of the comparison), so it is not yet unique; the
    # tail one scale down already is.
    q3 = bases.base_root(3)
    assert not is_unique_expansion(catalogue_tail(2), q3)
    assert is_unique_expansion(catalogue_tail(1), q3)


def test_uniqueness_constant_sequences():
    for q_text in ("2.05", "2.45", "2.9"):
        for per in ((1,), (-1,), (0,)):
            assert is_unique_expansion(Seq((), per), Fraction(q_text))


def test_uniqueness_tail_thresholds():
    # Periodic block tails switch on strictly above the ladder root two
    # scales up: at band midpoints the top catalogue entry is not yet unique.
    q_mid_2 = band_midpoint(2)  # between the 2nd and 3rd roots
    assert is_unique_expansion(catalogue_tail(1), q_mid_2)
    assert not is_unique_expansion(catalogue_tail(2), q_mid_2)
    assert not is_unique_expansion(catalogue_tail(3), q_mid_2)
    q_mid_3 = band_midpoint(3)
    assert is_unique_expansion(catalogue_tail(2), q_mid_3)
    assert not is_unique_expansion(catalogue_tail(3), q_mid_3)


def test_uniqueness_matches_residual_oracle_on_grid():
    rng = random.Random(20260808)
    qs = [Fraction("2.1"), Fraction("2.3"), Fraction(49, 20), Fraction("2.55"),
          Fraction("2.7"), Fraction("2.9")]
    seqs = [Seq((), (0,)), Seq((), (1,)), Seq((), (-1,))]
    for k in range(0, 4):
        e = tm_block(k)
        per = e + reflect(e)
        seqs.append(Seq((), per))
        seqs.append(Seq((0, 0, 0), per))
        seqs.append(Seq((1,), per))
        seqs.append(Seq((), per[2:] + per[:2]))
    for _ in range(40):
        pre = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(0, 3)))
        per = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 6)))
        seqs.append(Seq(pre, per))
    for q in qs:
        for s in seqs:
            assert is_unique_expansion(s, q) == residual_unique(s, q), (q, s)


def test_uniqueness_reflection_symmetric():
    rng = random.Random(99)
    for _ in range(40):
        q = Fraction(rng.randint(205, 295), 100)
        pre = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(0, 2)))
        per = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 5)))
        s = Seq(pre, per)
        assert is_unique_expansion(s, q) == is_unique_expansion(s.reflect(), q)


def test_uniqueness_monotone_in_base():
    qs = [Fraction("2.1"), Fraction("2.35"), Fraction("2.5"), Fraction("2.62"),
          Fraction("2.8"), Fraction("2.95")]
    rng = random.Random(41)
    seqs = [catalogue_tail(k) for k in range(0, 4)]
    for _ in range(25):
        per = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 5)))
        seqs.append(Seq((), per))
    for s in seqs:
        accepted = [is_unique_expansion(s, q) for q in qs]
        # once accepted, stays accepted for larger q
        assert accepted == sorted(accepted)


def test_uniqueness_verdict_reports_clause():
    v = uniqueness_verdict(Seq((), (1, 0, -1, 0)), Fraction(49, 20))
    assert not v.unique
    assert v.failing_index == 2
    assert v.clause == "reflected_tail"
    ok = uniqueness_verdict(Seq((), (0,)), Fraction(49, 20))
    assert ok.unique and ok.failing_index is None


def test_uniqueness_rejects_bad_digits():
    with pytest.raises(DomainError):
        is_unique_expansion(Seq((), (2,)), Fraction("2.5"))


def test_catalogue_tail_shapes():
    assert catalogue_tail(0) == Seq((), (0,))
    assert catalogue_tail(1) == Seq((), (1, -1))
    assert catalogue_tail(2) == Seq((), (1, 0, -1, 0))


def test_find_unique_with_tail():
    q = band_midpoint(3)
    assert find_unique_with_tail(catalogue_tail(2), q) is not None
    assert find_unique_with_tail(catalogue_tail(3), q, max_preperiod=12) is None


def test_kl_tail_examples():
    assert kl_tail(KLTailDescriptor((1,), (), truncate=2)) == (1, -1)
    got = kl_tail(KLTailDescriptor((0, 1), (1,), truncate=7))
    assert got == (1, -1, 0, 1, 0, -1, 0)
    plain = kl_tail(KLTailDescriptor((1,), (1,), truncate=32))
    flipped = kl_tail(KLTailDescriptor((1,), (1,), reflected=True, truncate=32))
    assert flipped == reflect(plain)


def test_kl_tail_validation():
    with pytest.raises(DomainError):
        KLTailDescriptor((-1,), (), truncate=4)
    with pytest.raises(DomainError):
        KLTailDescriptor((1,), (2,), truncate=4)
    with pytest.raises(DomainError):
        kl_tail(KLTailDescriptor((0,), (0,), truncate=4))


def test_seq_value_helper_agrees_with_library():
    # Guards the test oracles themselves against drift.
    q = Fraction("2.5")
    s = Seq((1,), (0, -1))
    assert seq_value(s, q) == evaluate_exact(s, q)


def test_alpha_digits_concurrent_access():
    # The digit cache must stay consistent under parallel readers.
    import threading

    q = Fraction("2.47")
    provider = expansions.alpha_digits(q)
    results = []

    def worker():
        results.append(provider.word(120))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(results)) == 1
    assert results[0] == quasi_greedy_alpha(q, 120)
