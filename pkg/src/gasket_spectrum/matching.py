"""Pair alphabet, pair matching of ternary sequences, and exhaustive shift verifiers.

A pair of ternary sequences is matched when no position pairs to (1,1) or
(-1,-1); those are exactly the digit pairs that cannot arise as a difference
of two gasket digits. All verifiers scan one full least common period, which
is a complete certificate for eventually periodic inputs.

The verifier wire names ("3.1", "3.2", "3.4", "blocks") are the check
identifiers used by the CLI and JSON reports.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import DomainError
from .words import Seq, Word, dec_last, inc_last, reflect, tm_block

OMEGA1 = ((0, 0), (0, 1), (1, 0))
OMEGA2 = frozenset(
    (a[0] - b[0], a[1] - b[1]) for a in OMEGA1 for b in OMEGA1
)
_FORBIDDEN = ((1, 1), (-1, -1))


@dataclass(frozen=True)
class MatchReport:
    matched: bool
    first_violation_index: int | None
    zero_pair_density: Fraction
    zero_pair_in_period: bool
    period_length: int

    def to_json_dict(self) -> dict:
        return {
            "matched": self.matched,
            "first_violation_index": self.first_violation_index,
            "zero_pair_density": self.zero_pair_density,
            "zero_pair_in_period": self.zero_pair_in_period,
            "period_length": self.period_length,
        }


def zip_seqs(a: Seq, b: Seq) -> Seq:
    """Positionwise pairing; preperiod = max of the inputs', period = lcm."""
    pre_len = max(len(a.preperiod), len(b.preperiod))
    per_len = (len(a.period) * len(b.period)) // gcd(len(a.period), len(b.period))
    pre = tuple((a.digit(i), b.digit(i)) for i in range(1, pre_len + 1))
    per = tuple(
        (a.digit(i), b.digit(i)) for i in range(pre_len + 1, pre_len + per_len + 1)
    )
    return Seq(pre, per)


def analyze(p: Seq) -> MatchReport:
    """Scan the preperiod and one full period of a pair sequence."""
    matched, first_violation = True, None
    zero_in_period = False
    zeros = 0
    pre, per = p.preperiod, p.period
    for idx, pair in enumerate(pre + per, start=1):
        if pair[0] not in (-1, 0, 1) or pair[1] not in (-1, 0, 1):
            raise DomainError(f"entry {pair!r} is not a pair of ternary digits")
        if matched and pair in _FORBIDDEN:
            matched, first_violation = False, idx
        if idx > len(pre) and pair == (0, 0):
            zero_in_period = True
            zeros += 1
    return MatchReport(
        matched=matched,
        first_violation_index=first_violation,
        zero_pair_density=Fraction(zeros, len(per)),
        zero_pair_in_period=zero_in_period,
        period_length=len(per),
    )


def block_word(n: int) -> Word:
    """The period block(n) + reflect(block(n)) of length 2^(n+1)."""
    e = tm_block(n)
    return e + reflect(e)


def e_seq(n: int, m: int, i: int) -> Seq:
    """Pair of the i-shifted block period at scale n against the period at scale m."""
    if n < 1 or m < 1:
        raise DomainError("scales must be >= 1")
    if not 0 <= i < 2 ** (n + 1):
        raise DomainError(f"shift {i} outside [0, {2 ** (n + 1)})")
    return zip_seqs(Seq((), block_word(n)).shift(i), Seq((), block_word(m)))


# ---------------------------------------------------------------------------
# Lemma-style verifier reports
# ---------------------------------------------------------------------------

@dataclass
class VerifierReport:
    check: str
    params: dict
    passed: bool
    witnesses: list = field(default_factory=list)
    counterexamples: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.check,
            "params": self.params,
            "pass": self.passed,
            "witnesses": self.witnesses,
            "counterexamples": self.counterexamples,
            "stats": self.stats,
        }


def _scan_pair(x: Word, y: Word, i: int) -> tuple[bool, bool]:
    """(matched, has_zero_pair) of (shift-by-i of x^inf, y^inf) over one lcm period."""
    lx, ly = len(x), len(y)
    period = lx * ly // gcd(lx, ly)
    matched = True
    haszero = False
    for u in range(period):
        a = x[(u + i) % lx]
        b = y[u % ly]
        if a == b and (a == 1 or a == -1):
            matched = False
            if haszero:
                break
        elif a == 0 and b == 0:
            haszero = True
            if not matched:
                break
    return matched, haszero


def verify_shift_trichotomy(n: int) -> VerifierReport:
    """Check "3.1": for every shift 0 < i < 2^(n+1) of the scale-n period
    against itself, exactly one of three outcomes holds: the half-period
    shift is matched with zero pairs inside the period, odd shifts have no
    zero pair at all, and the remaining even shifts are unmatched."""
    if n < 1:
        raise DomainError("scale must be >= 1")
    x = block_word(n)
    half = 2 ** n
    counterexamples = []
    for i in range(1, 2 ** (n + 1)):
        matched, haszero = _scan_pair(x, x, i)
        if i == half:
            ok = matched and haszero
            expected = "matched-with-zero-pair"
        elif i % 2 == 1:
            ok = not haszero
            expected = "no-zero-pair"
        else:
            ok = not matched
            expected = "unmatched"
        if not ok:
            counterexamples.append(
                {"i": i, "expected": expected, "matched": matched, "has_zero_pair": haszero}
            )
    return VerifierReport(
        check="3.1",
        params={"n": n},
        passed=not counterexamples,
        counterexamples=counterexamples,
        stats={"shifts_checked": 2 ** (n + 1) - 1},
    )


def _bump_word(n: int, variant: str) -> Word:
    e = tm_block(n)
    if variant == "minus":
        tail = dec_last(e)
    elif variant == "plain":
        tail = e
    else:
        raise DomainError(f"variant must be 'minus' or 'plain', not {variant!r}")
    return e + inc_last(reflect(e)) + reflect(e) + tail


def b_blocks(n: int) -> tuple[Word, Word, Word, Word]:
    """The four length-2^(n+2) concatenation blocks built from block(n)."""
    if n < 1:
        raise DomainError("scale must be >= 1")
    e = tm_block(n)
    eb_plus = inc_last(reflect(e))
    e_minus = dec_last(e)
    b1 = e + eb_plus + reflect(e) + e_minus
    b2 = e + eb_plus + reflect(e) + e
    b3 = reflect(e) + e_minus + e + eb_plus
    b4 = reflect(e) + e_minus + e + reflect(e)
    return b1, b2, b3, b4


def verify_bump_witnesses(n: int, variant: str = "minus") -> VerifierReport:
    """Check "3.2": pairing the shifted scale-n period against the bumped
    four-block period always shows (1,1) or (-1,-1) at some position
    u in (0, 2^(n+2)) other than 2^(n+1); at the half-period shift the
    witness sits at position 2^(n+1)+1 with term (-1,-1)."""
    if n < 3:
        raise DomainError("the bump check needs scale >= 3")
    x = block_word(n)
    y = _bump_word(n, variant)
    lx, ly = len(x), len(y)
    skip = 2 ** (n + 1)
    witnesses = []
    counterexamples = []
    for i in range(1, 2 ** (n + 1)):
        found = None
        for u in range(1, 2 ** (n + 2)):
            if u == skip:
                continue
            a = x[(u - 1 + i) % lx]
            b = y[(u - 1) % ly]
            if a == b and a != 0:
                found = {"i": i, "u": u, "term": [a, b]}
                break
        if found is None:
            counterexamples.append({"i": i, "reason": "no witness position"})
        else:
            witnesses.append(found)
    # Half-period shift: the position right after the skipped index pairs the
    # reflected block against itself, so its first term must be (-1,-1).
    i = 2 ** n
    u = skip + 1
    a = x[(u - 1 + i) % lx]
    b = y[(u - 1) % ly]
    if (a, b) != (-1, -1):
        counterexamples.append(
            {"i": i, "u": u, "term": [a, b], "reason": "half-shift witness wrong"}
        )
    return VerifierReport(
        check="3.2",
        params={"n": n, "variant": variant},
        passed=not counterexamples,
        witnesses=witnesses,
        counterexamples=counterexamples,
        stats={"shifts_checked": 2 ** (n + 1) - 1},
    )


def verify_cross_scale(n: int, m: int) -> VerifierReport:
    """Check "3.4": pairing scale n against scale m > n is unmatched for every
    shift; for m = n the half-period shift is matched with zero pairs."""
    if not 1 <= n <= m:
        raise DomainError("need 1 <= n <= m")
    x = block_word(n)
    y = block_word(m)
    witnesses = []
    counterexamples = []
    if n == m:
        matched, haszero = _scan_pair(x, y, 2 ** n)
        if matched and haszero:
            witnesses.append({"i": 2 ** n, "matched": True, "zero_pair": True})
        else:
            counterexamples.append({"i": 2 ** n, "matched": matched, "zero_pair": haszero})
    else:
        for i in range(1, 2 ** (n + 1)):
            matched, _ = _scan_pair(x, y, i)
            if matched:
                counterexamples.append({"i": i, "reason": "unexpectedly matched"})
    return VerifierReport(
        check="3.4",
        params={"n": n, "m": m},
        passed=not counterexamples,
        witnesses=witnesses,
        counterexamples=counterexamples,
        stats={"shifts_checked": 1 if n == m else 2 ** (n + 1) - 1},
    )


def verify_block_concatenation(n: int, pattern: tuple[int, ...],
                               max_shift: int | None = None) -> VerifierReport:
    """Check "blocks": shift a concatenation of B-blocks against itself and
    certify a (1,1)/(-1,-1) occurrence for every nonzero shift in range.

    A shift whose full period is matched is listed as an exception, not a
    failure; a window exhausted with neither outcome would be inconclusive,
    but full-period scans always decide.
    """
    if n < 3:
        raise DomainError("the block check needs scale >= 3")
    if len(pattern) < 2:
        raise DomainError("pattern must list at least two blocks")
    blocks = b_blocks(n)
    try:
        w = tuple(d for p in pattern for d in blocks[p - 1])
    except IndexError as exc:
        raise DomainError("pattern entries must be in {1, 2, 3, 4}") from exc
    limit = 2 ** (n + 1) if max_shift is None else max_shift
    witnesses = []
    matched_exceptions = []
    inconclusive = []
    lw = len(w)
    for i in range(1, limit):
        found = None
        for u in range(lw):
            a = w[(u + i) % lw]
            b = w[u]
            if a == b and a != 0:
                found = {"i": i, "u": u + 1, "term": [a, b]}
                break
        if found is not None:
            witnesses.append(found)
        else:
            matched_exceptions.append({"i": i, "reason": "fully matched period"})
    return VerifierReport(
        check="blocks",
        params={"n": n, "pattern": list(pattern), "max_shift": limit},
        passed=not inconclusive,
        witnesses=witnesses,
        counterexamples=inconclusive,
        stats={
            "shifts_checked": limit - 1,
            "matched_exceptions": matched_exceptions,
            "inconclusive": len(inconclusive),
        },
    )
