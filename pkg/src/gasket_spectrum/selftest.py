"""Built-in verification battery: one named item per structural claim.

The battery mirrors the package's acceptance checks so a fresh install can
certify itself. One deliberate difference is documented in the README: the
uniqueness-catalogue concordance here uses the corrected band indexing
(accept catalogue tails 0..m-1 in band m, reject from m up), which is what
the uniqueness oracle satisfies; see the README's "known discrepancy" note.
"""

from __future__ import annotations

import io
from fractions import Fraction

from . import bases, expansions, geometry, matching, spectrum, words
from .config import DEFAULT_CONFIG, RunConfig
from .errors import GasketError


def _residual_unique_oracle(seq: words.Seq, q: Fraction) -> bool:
    """Independent uniqueness decision: a second expansion exists exactly when
    some position admits a different digit whose residual stays representable."""
    bound = Fraction(1) / (q - 1)
    t = expansions.evaluate_exact(seq, q)
    for k in range(1, len(seq.preperiod) + len(seq.period) + 1):
        s_k = seq.digit(k)
        for d in (-1, 0, 1):
            if d != s_k and -bound <= q * t - d <= bound:
                return False
        t = q * t - s_k
    return True


def _band_midpoint(m: int, config: RunConfig) -> bases.BaseValue:
    lo = bases.base_root(m, config=config)
    hi = bases.base_root(m + 1, config=config)
    mid = (lo.hi + hi.lo) / 2
    return bases.BaseValue(mid, mid)


def _check_block_calculus(config: RunConfig) -> str:
    for n in range(0, 13):
        e = words.tm_block(n)
        e1 = words.tm_block(n + 1)
        assert e1 == e + words.inc_last(words.reflect(e)), f"recursion fails at {n}"
        assert e1[: len(e)] == e, f"prefix property fails at {n}"
        assert e[0] == 1
        assert e[-1] == (0 if n % 2 else 1), f"terminal parity fails at {n}"
        if n >= 1:
            assert 0 in e, f"no zero in block {n}"
        assert all(e[i] != 0 for i in range(0, len(e), 2)), f"odd-position zero at {n}"
        if n >= 3:
            assert any(e[i] != 0 for i in range(1, len(e) - 1, 2))
    for i in range(1, 1 << 10):
        assert words.tm_diff(i) == words.thue_morse_bit(i) - words.thue_morse_bit(i - 1)
    return "block recursion, parity, prefix, and difference identities for n <= 13"

def _check_block_density(config: RunConfig) -> str:
    rep = spectrum.block_density_check(16)
    assert rep.passed, rep.counterexamples
    return "zero densities equal the alternating closed form for n <= 16"

def _check_trichotomy(config: RunConfig) -> str:
    for n in range(1, 9):
        rep = matching.verify_shift_trichotomy(n)
        assert rep.passed, rep.counterexamples
    return "shift trichotomy for scales 1..8"

def _check_bump(config: RunConfig) -> str:
    for n in range(3, 9):
        for variant in ("minus", "plain"):
            rep = matching.verify_bump_witnesses(n, variant)
            assert rep.passed, rep.counterexamples
    return "bump-block witnesses for scales 3..8, both variants"

def _check_cross_scale(config: RunConfig) -> str:
    for n in range(1, 8):
        for m in range(n, 8):
            rep = matching.verify_cross_scale(n, m)
            assert rep.passed, rep.counterexamples
    return "cross-scale match certificates for 1 <= n <= m <= 7"

def _check_ladder(config: RunConfig) -> str:
    r1 = bases.base_root(1, config=config)
    assert r1.lo == r1.hi == 2
    r2 = bases.base_root(2, config=config)
    lo, hi = 2.0, 3.0
    for _ in range(80):  # independent float bisection on q^2 - 2q - 1
        mid = (lo + hi) / 2
        if mid * mid - 2 * mid - 1 < 0:
            lo = mid
        else:
            hi = mid
    assert abs(r2.value - (lo + hi) / 2) < 1e-12
    prev = r1
    for n in range(2, 13):
        rn = bases.base_root(n, config=config)
        assert prev.hi < rn.lo, f"enclosures {n - 1} and {n} overlap"
        prev = rn
    return "root enclosures exact at 1, match the quadratic at 2, disjoint through 12"

def _check_kl(config: RunConfig) -> str:
    kl = bases.kl_constant(1e-10, config=config)
    q8 = bases.base_root(8, config=config)
    assert q8.hi < kl.lo < kl.hi < 3
    kl6 = bases.kl_constant(1e-6, config=config)
    assert kl6.lo <= kl.lo and kl.hi <= kl6.hi
    return "limit enclosure sits above the 8th root and nests across tolerances"

def _check_spectra(config: RunConfig) -> str:
    import math
    s = spectrum.spectrum_of("2.2", config)
    assert s.regime.kind == "finite" and s.regime.m == 1 and s.family is None
    assert sorted(s.isolated) == sorted((0.0, math.log(3) / math.log(2.2)))
    s3 = spectrum.spectrum_of(bases.base_root(3, config=config), config)
    assert s3.regime.m == 2 and s3.family is not None
    assert s3.family.terms == (Fraction(1, 2),)
    kl = bases.kl_constant(config=config)
    skl = spectrum.spectrum_of(kl, config)
    assert len(skl.isolated) == 3 and skl.family is not None
    for k, t in enumerate(skl.family.terms, start=1):
        assert abs(t - Fraction(1, 3)) == Fraction(1, 3 * 2 ** k)
    si = spectrum.spectrum_of("2.9", config)
    assert si.interval is not None and 0 < si.interval.lo < si.interval.hi < si.log_ratio
    return "finite, limit, and interval spectra have the documented shapes"

def _check_sft(config: RunConfig) -> str:
    for qs in ("2.6", "2.75", "2.9"):
        spec = spectrum.sft_spec(qs, config)
        assert spec.n <= config.sft_max_n
        d1, d2 = spectrum.sft_densities(spec)
        assert d1 < d2
        for path in spectrum.U1_PATHS + spectrum.U2_PATHS:
            assert spectrum.sft_letter_path_allowed(path)
        wit = spectrum.interval_witness(spec, (d1 + d2) / 2, 10 ** 4)
        u1_len = 4 * 2 ** spec.n
        assert abs(wit.achieved - wit.target) <= Fraction(2, u1_len)
    return "subshift letters embed at 2.6/2.75/2.9 with ordered densities"

def _check_uniqueness_concordance(config: RunConfig) -> str:
    for m in range(1, 7):
        q = _band_midpoint(m, config)
        for n in range(0, m):
            found = expansions.find_unique_with_tail(
                expansions.catalogue_tail(n), q, max_preperiod=4, config=config)
            assert found is not None, (m, n)
        for n in (m, m + 1):
            assert expansions.find_unique_with_tail(
                expansions.catalogue_tail(n), q, max_preperiod=8, config=config) is None, (m, n)
    return "catalogue tails accepted below the band index and rejected from it up"

def _check_uniqueness_oracle(config: RunConfig) -> str:
    import random
    rng = random.Random(20260808)
    grid = [Fraction(21, 10), Fraction(49, 20), Fraction(13, 5), Fraction(29, 10)]
    seqs = [words.Seq((), (0,)), words.Seq((), (1,)), words.Seq((), (-1,))]
    for k in range(3):
        seqs.append(expansions.catalogue_tail(k + 1))
    for _ in range(25):
        per = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(1, 5)))
        pre = tuple(rng.choice((-1, 0, 1)) for _ in range(rng.randint(0, 3)))
        seqs.append(words.Seq(pre, per))
    for q in grid:
        for s in seqs:
            lex = expansions.is_unique_expansion(s, q, config)
            res = _residual_unique_oracle(s, q)
            assert lex == res, (q, s, lex, res)
    return "lexicographic and residual uniqueness decisions agree on the sample grid"

def _check_greedy(config: RunConfig) -> str:
    q = Fraction("2.6")
    target = expansions.evaluate_exact(words.Seq((), (1, 0, -1, 0)), q)
    got = expansions.greedy_expand(target, q, 8)
    assert got == (1, 0, -1, 0, 1, 0, -1, 0), got
    assert expansions.greedy_expand(Fraction(0), q, 6) == (0,) * 6
    assert expansions.greedy_expand(Fraction(1) / (q - 1), q, 6) == (1,) * 6
    return "greedy digits reproduce the periodic example and both endpoints"

def _check_geometry(config: RunConfig) -> str:
    t = matching.e_seq(1, 1, 2)
    cloud = geometry.build_intersection("2.5", t, 8, config)
    assert len(cloud.points) == 3 ** 4
    gasket = geometry.build_gasket("2.5", 5, config)
    assert len(gasket.points) == 3 ** 5 == len(set(gasket.points))
    import os
    import tempfile
    with tempfile.TemporaryDirectory() as tmp:
        p1, p2 = os.path.join(tmp, "a.svg"), os.path.join(tmp, "b.svg")
        geometry.emit_svg([gasket, cloud], p1)
        geometry.emit_svg([gasket, cloud], p2)
        with open(p1, "rb") as f1, open(p2, "rb") as f2:
            assert f1.read() == f2.read()
    return "counting law, distinct cylinder points, and byte-stable rendering"

def _check_kl_density(config: RunConfig) -> str:
    rep = spectrum.kl_density_check(2 ** 14, config=config)
    assert rep.passed, rep.counterexamples
    fam = {row["family"]: row for row in rep.stats["families"]}
    assert fam["j=1,l=1"]["abs_dev"] < Fraction(1, 384)
    return "block densities exact and tail frequency within 1/384 of one third"

def _check_determinism(config: RunConfig) -> str:
    from .cli import run
    out1, out2 = io.StringIO(), io.StringIO()
    argv = ["dq", "--q", "2.2", "--format", "json"]
    assert run(argv, out1) == 0 and run(argv, out2) == 0
    assert out1.getvalue() == out2.getvalue()
    return "identical argv yields byte-identical JSON"


CHECKS = (
    ("block-calculus", _check_block_calculus),
    ("block-density", _check_block_density),
    ("shift-trichotomy", _check_trichotomy),
    ("bump-witnesses", _check_bump),
    ("cross-scale", _check_cross_scale),
    ("ladder-roots", _check_ladder),
    ("kl-constant", _check_kl),
    ("spectra", _check_spectra),
    ("sft-embedding", _check_sft),
    ("uniqueness-concordance", _check_uniqueness_concordance),
    ("uniqueness-oracle", _check_uniqueness_oracle),
    ("greedy-expansion", _check_greedy),
    ("geometry", _check_geometry),
    ("kl-density", _check_kl_density),
    ("determinism", _check_determinism),
)


def run_selftest(config: RunConfig = DEFAULT_CONFIG) -> dict:
    items = []
    for name, fn in CHECKS:
        try:
            detail = fn(config)
            items.append({"name": name, "pass": True, "detail": detail})
        except (AssertionError, GasketError) as exc:
            items.append({"name": name, "pass": False, "detail": str(exc) or repr(exc)})
    return {"items": items, "all_pass": all(i["pass"] for i in items)}
