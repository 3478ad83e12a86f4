"""Zero densities, the dimension formula, and assembly of the dimension spectrum.

Densities are exact rationals end to end; floating point enters only in the
final multiplication by log 3 / log q. The spectrum has three shapes keyed by
the regime of q: a finite set in a ladder band, a countable set with one
accumulation point at the Komornik-Loreti base, and (above it) an interval
whose endpoints come from a small subshift of finite type inside the unique
expansion set. The interval is reported as contained in the spectrum, never
as all of it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .bases import BaseValue, RegimeLabel, as_base_value, classify
from .config import DEFAULT_CONFIG, RunConfig
from .errors import CapabilityError, DomainError, InternalConsistencyError
from .expansions import KLTailDescriptor, is_unique_expansion, kl_tail
from .matching import VerifierReport, analyze, b_blocks, zip_seqs
from .words import Seq, Word, reflect, tm_block

# Transition matrix of the unique-expansion subshift, letter order (a, b, abar, bbar):
# a -> {b, abar}, b -> {abar}, abar -> {a, bbar}, bbar -> {a}.
SFT_MATRIX = ((0, 1, 1, 0), (0, 0, 1, 0), (1, 0, 0, 1), (1, 0, 0, 0))
SFT_LETTER_ORDER = ("a", "b", "abar", "bbar")


def zero_fraction(word: Word) -> Fraction:
    """Zero-digit frequency of a nonempty word."""
    if not word:
        raise DomainError("word must be nonempty")
    return Fraction(sum(1 for d in word if d == 0), len(word))


def zero_fraction_seq(seq: Seq) -> Fraction:
    """Zero-digit frequency within one period; equals the liminf frequency."""
    return zero_fraction(seq.period)


def alternating_density(n: int) -> Fraction:
    """Closed form (1 - (-1/2)^n) / 3 for the zero density of the n-th block."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    return (1 - Fraction(-1, 2) ** n) / 3


def block_density_check(max_n: int) -> VerifierReport:
    """Exact equality of counted block zero densities with the closed form."""
    counterexamples = []
    for n in range(0, max_n + 1):
        counted = zero_fraction(tm_block(n))
        formula = alternating_density(n)
        if counted != formula:
            counterexamples.append({"n": n, "counted": counted, "formula": formula})
    return VerifierReport(
        check="2.2",
        params={"max_n": max_n},
        passed=not counterexamples,
        counterexamples=counterexamples,
        stats={"blocks_checked": max_n + 1},
    )


def dimension(q, density) -> float:
    """log 3 / log q times the zero-pair density."""
    b = as_base_value(q)
    if not (b.lo > 2 and b.hi < 3):
        raise DomainError("base must lie inside (2, 3)")
    d = float(density)
    if not 0 <= d <= 1:
        raise DomainError("density must lie in [0, 1]")
    return math.log(3) / math.log(b.value) * d


# ---------------------------------------------------------------------------
# Subshift letters and the two extremal pair words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SFTSpec:
    n: int
    letters: dict  # name -> Word, names per SFT_LETTER_ORDER
    transition: tuple = SFT_MATRIX
    base: BaseValue | None = None

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "letters": {k: list(v) for k, v in self.letters.items()},
            "transition": [list(r) for r in self.transition],
        }


def sft_letters(n: int) -> dict:
    """Four letters of length 2^n: 0 or -1 followed by the difference prefix."""
    if n < 1:
        raise DomainError("letter scale must be >= 1")
    prefix = tm_block(n)[:-1]
    a = (0,) + prefix
    b = (-1,) + prefix
    return {"a": a, "b": b, "abar": reflect(a), "bbar": reflect(b)}


def sft_letter_path_allowed(path: tuple[str, ...], cyclic: bool = True) -> bool:
    idx = {name: i for i, name in enumerate(SFT_LETTER_ORDER)}
    pairs = list(zip(path, path[1:]))
    if cyclic:
        pairs.append((path[-1], path[0]))
    return all(SFT_MATRIX[idx[u]][idx[v]] == 1 for u, v in pairs)


U1_PATHS = (("b", "abar", "bbar", "a"), ("bbar", "a", "b", "abar"))
U2_PATHS = (("abar", "a"), ("a", "abar"))


def _path_word(letters: dict, path: tuple[str, ...]) -> Word:
    return tuple(d for name in path for d in letters[name])


def sft_pair_words(spec: SFTSpec) -> tuple[Seq, Seq]:
    """The two periodic pair words whose zero-pair densities bound the interval."""
    letters = spec.letters
    u1 = zip_seqs(Seq((), _path_word(letters, U1_PATHS[0])),
                  Seq((), _path_word(letters, U1_PATHS[1])))
    u2 = zip_seqs(Seq((), _path_word(letters, U2_PATHS[0])),
                  Seq((), _path_word(letters, U2_PATHS[1])))
    return u1, u2


def sft_spec(q, config: RunConfig = DEFAULT_CONFIG) -> SFTSpec:
    """Smallest letter scale whose extremal cycles are unique expansions at q.

    Certified words: both coordinates of the two extremal cycles, plus the
    two interleaved cycles that witness the cross junctions used by the
    interval construction. The admissibility oracle is the uniqueness check
    itself; scales are not monotone (a scale can fail while a smaller and a
    larger one pass), so the search walks n = 1, 2, ... up to the cap.
    """
    b = as_base_value(q)
    label = classify(b, config)
    if label.kind != "interval":
        raise DomainError("the subshift construction applies above the Komornik-Loreti base")
    failures = []
    for n in range(1, config.sft_max_n + 1):
        letters = sft_letters(n)
        paths = list(U1_PATHS + U2_PATHS)
        paths.append(U1_PATHS[0] + U2_PATHS[0])
        paths.append(U1_PATHS[1] + U2_PATHS[1])
        words = [Seq((), _path_word(letters, p)) for p in paths]
        if all(is_unique_expansion(w, b, config) for w in words):
            return SFTSpec(n=n, letters=letters, base=b)
        failures.append(n)
    raise CapabilityError(
        f"no letter scale up to {config.sft_max_n} embeds in the unique-expansion "
        f"set at q ~ {b.value}; failed scales: {failures}")


def sft_densities(spec: SFTSpec) -> tuple[Fraction, Fraction]:
    """Exact zero-pair densities (d1, d2) of the two extremal words, d1 < d2."""
    u1, u2 = sft_pair_words(spec)
    r1, r2 = analyze(u1), analyze(u2)
    if not (r1.matched and r2.matched):
        raise InternalConsistencyError("extremal subshift words must be matched")
    d1, d2 = r1.zero_pair_density, r2.zero_pair_density
    if not d1 < d2:
        raise InternalConsistencyError("extremal densities out of order")
    return d1, d2


@dataclass(frozen=True)
class WitnessPrefix:
    pairs: tuple
    target: Fraction
    achieved: Fraction
    block_counts: tuple[int, int]  # how many u1 / u2 blocks were used

    def to_json_dict(self) -> dict:
        return {
            "length": len(self.pairs),
            "target": self.target,
            "achieved": self.achieved,
            "blocks_u1": self.block_counts[0],
            "blocks_u2": self.block_counts[1],
        }


def interval_witness(spec: SFTSpec, target, length: int) -> WitnessPrefix:
    """Greedy block concatenation whose running zero-pair frequency tracks target.

    Appends whichever extremal block moves the running frequency toward the
    target; the deviation at the end is at most one block's worth of digits
    over the total length.
    """
    d1, d2 = sft_densities(spec)
    t = Fraction(target)
    if not d1 <= t <= d2:
        raise DomainError(f"target {t} outside [{d1}, {d2}]")
    if length < 1:
        raise DomainError("length must be positive")
    u1, u2 = sft_pair_words(spec)
    w1, w2 = u1.period, u2.period
    z1 = sum(1 for p in w1 if p == (0, 0))
    z2 = sum(1 for p in w2 if p == (0, 0))
    pairs: list = []
    zeros = 0
    counts = [0, 0]
    while len(pairs) < length:
        f1 = Fraction(zeros + z1, len(pairs) + len(w1))
        f2 = Fraction(zeros + z2, len(pairs) + len(w2))
        if abs(f1 - t) <= abs(f2 - t):
            pairs.extend(w1)
            zeros += z1
            counts[0] += 1
        else:
            pairs.extend(w2)
            zeros += z2
            counts[1] += 1
    return WitnessPrefix(
        pairs=tuple(pairs),
        target=t,
        achieved=Fraction(zeros, len(pairs)),
        block_counts=(counts[0], counts[1]),
    )


# ---------------------------------------------------------------------------
# Density bounds for the aperiodic tails at the Komornik-Loreti base
# ---------------------------------------------------------------------------

def kl_density_check(horizon: int, scales: tuple[int, ...] = (1, 2, 3, 4, 5, 6),
                     config: RunConfig = DEFAULT_CONFIG) -> VerifierReport:
    """Zero-frequency checks for the aperiodic tail family.

    Confirms the exact block densities of the four concatenation blocks
    (1/3 -+ 1/(3*2^(n+1)) and 1/3 +- 1/(3*2^(n+2)), sign depending on scale
    parity) and measures the deviation |freq - 1/3| of sampled descriptor
    prefixes at the horizon.
    """
    if horizon < 16:
        raise DomainError("horizon too small to be informative")
    counterexamples = []
    block_rows = []
    for n in scales:
        b1, b2, b3, b4 = b_blocks(n)
        d = {k: zero_fraction(w) for k, w in (("B1", b1), ("B2", b2), ("B3", b3), ("B4", b4))}
        third = Fraction(1, 3)
        if n % 2 == 1:
            want = {"B1": third - Fraction(1, 3 * 2 ** (n + 1)),
                    "B2": third + Fraction(1, 3 * 2 ** (n + 2))}
        else:
            want = {"B1": third + Fraction(1, 3 * 2 ** (n + 1)),
                    "B2": third - Fraction(1, 3 * 2 ** (n + 2))}
        want["B3"] = want["B1"]
        want["B4"] = want["B2"]
        for k in ("B1", "B2", "B3", "B4"):
            if d[k] != want[k]:
                counterexamples.append({"n": n, "block": k, "counted": d[k], "formula": want[k]})
        block_rows.append({"n": n, **{k: d[k] for k in d}})
    families = [
        {"label": "j=1,l=1", "desc": KLTailDescriptor((1,), (1,), truncate=horizon)},
        {"label": "j=0,l=1", "desc": KLTailDescriptor((0,), (1,), truncate=horizon)},
        {"label": "j=2,l=01", "desc": KLTailDescriptor((2,), (0, 1), truncate=horizon)},
        {"label": "j=13,l=10", "desc": KLTailDescriptor((1, 3), (1, 0), truncate=horizon)},
    ]
    family_rows = []
    for fam in families:
        word = kl_tail(fam["desc"], config)
        freq = zero_fraction(word)
        dev = abs(freq - Fraction(1, 3))
        family_rows.append({"family": fam["label"], "freq": freq, "abs_dev": dev,
                            "horizon": horizon})
    return VerifierReport(
        check="kl-density",
        params={"horizon": horizon, "scales": list(scales)},
        passed=not counterexamples,
        counterexamples=counterexamples,
        stats={"blocks": block_rows, "families": family_rows},
    )


# ---------------------------------------------------------------------------
# The spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FamilyPart:
    terms: tuple  # Fractions, the densities
    accumulation_density: Fraction | None
    log_ratio: float

    def dims(self) -> tuple:
        return tuple(self.log_ratio * float(t) for t in self.terms)

    def to_json_dict(self) -> dict:
        d = {
            "terms": [{"density": t, "dim": self.log_ratio * float(t)} for t in self.terms],
        }
        if self.accumulation_density is not None:
            d["accumulation"] = {
                "density": self.accumulation_density,
                "dim": self.log_ratio * float(self.accumulation_density),
            }
        return d


@dataclass(frozen=True)
class IntervalPart:
    lo: float
    hi: float
    lo_density: Fraction
    hi_density: Fraction
    sft_n: int
    containment_only: bool = True

    def to_json_dict(self) -> dict:
        return {
            "lo": self.lo,
            "hi": self.hi,
            "lo_density": self.lo_density,
            "hi_density": self.hi_density,
            "sft_n": self.sft_n,
            "containment_only": self.containment_only,
        }


@dataclass(frozen=True)
class DimensionSpectrum:
    regime: RegimeLabel
    log_ratio: float
    isolated: tuple
    family: FamilyPart | None
    interval: IntervalPart | None

    def all_values(self) -> tuple:
        vals = list(self.isolated)
        if self.family is not None:
            vals.extend(self.family.dims())
        return tuple(sorted(set(vals)))

    def to_json_dict(self) -> dict:
        return {
            "regime": self.regime.to_json_dict(),
            "log_ratio": self.log_ratio,
            "isolated": list(self.isolated),
            "family": None if self.family is None else self.family.to_json_dict(),
            "interval": None if self.interval is None else self.interval.to_json_dict(),
        }


def spectrum_of(q, config: RunConfig = DEFAULT_CONFIG) -> DimensionSpectrum:
    """Dimension spectrum of gasket self-intersections at base q.

    Finite band m: {0, log3/logq} plus the family terms for scales 1..m-1.
    Komornik-Loreti: adds the accumulation point at one third of the maximum
    and the full (truncated) family. Above it: endpoints 0 and the maximum
    plus an interval certified as contained in the spectrum.
    """
    b = as_base_value(q)
    label = classify(b, config)
    log_ratio = math.log(3) / math.log(b.value)
    if label.kind == "finite":
        m = label.m
        terms = tuple(alternating_density(k) for k in range(1, m))
        family = FamilyPart(terms, None, log_ratio) if terms else None
        return DimensionSpectrum(
            regime=label,
            log_ratio=log_ratio,
            isolated=(0.0, log_ratio),
            family=family,
            interval=None,
        )
    if label.kind == "komornik_loreti":
        terms = tuple(alternating_density(k) for k in range(1, config.kl_terms + 1))
        family = FamilyPart(terms, Fraction(1, 3), log_ratio)
        return DimensionSpectrum(
            regime=label,
            log_ratio=log_ratio,
            isolated=(0.0, log_ratio, log_ratio / 3),
            family=family,
            interval=None,
        )
    spec = sft_spec(b, config)
    d1, d2 = sft_densities(spec)
    interval = IntervalPart(
        lo=log_ratio * float(d1),
        hi=log_ratio * float(d2),
        lo_density=d1,
        hi_density=d2,
        sft_n=spec.n,
    )
    return DimensionSpectrum(
        regime=label,
        log_ratio=log_ratio,
        isolated=(0.0, log_ratio),
        family=None,
        interval=interval,
    )
