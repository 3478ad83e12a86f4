"""The base ladder, its roots, the Komornik-Loreti constant, and regime classification.

Every numeric base is carried as a BaseValue: an exact rational enclosure
[lo, hi] certified by a sign change, optionally tagged with its provenance
(ladder index n, or the Komornik-Loreti limit). Tags are what make the
right-closed band boundaries decidable; bare numerics can never certify
equality with an irrational ladder point.

Root finding is plain bisection. The ladder value function
V_n(q) = sum_i w_n[i] q^-i is evaluated in O(n) Decimal operations through
the doubling identity

    V_{k+1} = V_k (1 - u_k) + 2 u_k (1 - u_k) / (q - 1) + u_k^2,
    u_k = q^(-2^(k-1)),  u_{k+1} = u_k^2,  V_1 = 2/q,

which lets the enclosure widths scale to the 400+ digit separations the
deeper ladder roots require. Signs are certified with a 30-digit guard
margin; if an evaluation lands inside the noise band the precision is raised
until the sign is certain (midpoints are rational, roots are irrational for
n >= 2, so this terminates).
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .config import DEFAULT_CONFIG, RunConfig
from .errors import (
    AmbiguousClassificationError,
    DomainError,
    PrecisionError,
)
from .words import Word, inc_last, reflect2, tm_diff


@dataclass(frozen=True)
class LadderWord:
    n: int
    word: Word


@dataclass(frozen=True)
class BaseValue:
    lo: Fraction
    hi: Fraction
    ladder_index: int | None = None
    is_kl: bool = False

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise DomainError("enclosure endpoints out of order")

    @property
    def value(self) -> float:
        return float((self.lo + self.hi) / 2)

    @property
    def radius(self) -> float:
        return float((self.hi - self.lo) / 2)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def to_json_dict(self) -> dict:
        d = {"lo": str(self.lo), "hi": str(self.hi), "value": self.value}
        if self.ladder_index is not None:
            d["ladder_index"] = self.ladder_index
        if self.is_kl:
            d["is_kl"] = True
        return d


@dataclass(frozen=True)
class RegimeLabel:
    kind: str  # "finite" | "komornik_loreti" | "interval"
    m: int | None = None

    def to_json_dict(self) -> dict:
        d = {"kind": self.kind}
        if self.m is not None:
            d["m"] = self.m
        return d


def as_base_value(q) -> BaseValue:
    """Coerce a float, Fraction, decimal string, or BaseValue to a point enclosure."""
    if isinstance(q, BaseValue):
        return q
    if isinstance(q, Fraction):
        x = q
    elif isinstance(q, int):
        x = Fraction(q)
    elif isinstance(q, float):
        x = Fraction(q)  # exact binary value
    elif isinstance(q, str):
        try:
            x = Fraction(q) if "/" in q else Fraction(Decimal(q))
        except (ValueError, ArithmeticError) as exc:
            raise DomainError(f"cannot parse base {q!r}") from exc
    else:
        raise DomainError(f"cannot interpret {q!r} as a base")
    return BaseValue(x, x)


def require_working_base(b: BaseValue) -> BaseValue:
    if not (b.lo > 2 and b.hi < 3):
        raise DomainError(f"base enclosure [{float(b.lo)}, {float(b.hi)}] is not inside (2, 3)")
    return b


# ---------------------------------------------------------------------------
# Ladder words
# ---------------------------------------------------------------------------

_ladder_cache: dict[int, Word] = {}
_ladder_lock = threading.Lock()


def ladder_word(n: int, max_index: int | None = None) -> LadderWord:
    """n-th ladder word over {0,1,2}: start at "2", append the {0,1,2}-reflection,
    increment the last digit. Length 2^(n-1)."""
    cap = DEFAULT_CONFIG.max_ladder_index if max_index is None else max_index
    if n < 1:
        raise DomainError("ladder index must be >= 1")
    if n > cap:
        raise PrecisionError(f"ladder index {n} exceeds cap {cap}")
    with _ladder_lock:
        if n not in _ladder_cache:
            hi = max(_ladder_cache) if _ladder_cache else 0
            w = _ladder_cache.get(hi, (2,))
            for k in range(max(hi, 1), n):
                w = inc_last(w + reflect2(w), alphabet_max=2)
                _ladder_cache[k + 1] = w
            _ladder_cache.setdefault(1, (2,))
        return LadderWord(n, _ladder_cache[n])


# ---------------------------------------------------------------------------
# Certified bisection
# ---------------------------------------------------------------------------

def _ladder_value_dec(q: Decimal, n: int) -> Decimal:
    """V_n(q) by the doubling identity; O(n) multiplications."""
    one = Decimal(1)
    v = 2 / q
    if n == 1:
        return v
    u = 1 / q
    g = 1 / (q - 1)
    for _ in range(1, n):
        one_minus = one - u
        v = v * one_minus + 2 * u * one_minus * g + u * u
        u = u * u
    return v


def _ladder_value_exact(q: Fraction, n: int) -> Fraction:
    """Direct Horner evaluation of sum_i w_n[i] q^-i; used as an independent check."""
    s = Fraction(0)
    for d in reversed(ladder_word(n).word):
        s = (s + d) / q
    return s


def _width_digits(n: int, tolerance: float, cap: int) -> int:
    from math import ceil, log10
    tol_digits = 15 if tolerance <= 0 else max(1, int(ceil(-log10(tolerance))))
    sep_digits = int(ceil(0.404 * (2 ** (n - 1)))) + 30
    return min(max(tol_digits, sep_digits, 40), cap)


def _certified_sign(valfn, mid: Decimal, prec: int) -> int:
    """Sign of valfn(mid) - 1, raising precision until outside the noise band."""
    p = prec
    for _ in range(8):
        with localcontext() as ctx:
            ctx.prec = p
            v = valfn(Decimal(mid))
            noise = Decimal(10) ** (8 - p)
            if v - 1 > noise:
                return 1
            if v - 1 < -noise:
                return -1
        p = p * 2
    raise PrecisionError("sign of ladder value could not be certified")


_root_cache: dict[tuple[int, int], BaseValue] = {}
_root_lock = threading.Lock()


def base_root(n: int, tolerance: float | None = None,
              config: RunConfig = DEFAULT_CONFIG) -> BaseValue:
    """Unique root in [2, 3) of 1 = V_n(q), as a certified rational enclosure.

    The enclosure width is min(tolerance, adaptive separation width); the
    adaptive schedule keeps consecutive roots' enclosures disjoint through
    n = 12 under the default digit cap.
    """
    if n < 1:
        raise DomainError("ladder index must be >= 1")
    ladder_word(n, max_index=config.max_ladder_index)  # enforce the cap
    if n == 1:
        return BaseValue(Fraction(2), Fraction(2), ladder_index=1)
    tol = config.tolerance if tolerance is None else tolerance
    digits = _width_digits(n, tol, config.ladder_digits_cap)
    key = (n, digits)
    with _root_lock:
        if key in _root_cache:
            return _root_cache[key]
    prec = digits + 30
    target = Decimal(10) ** (-digits)
    lo, hi = Decimal(2), Decimal(3)
    valfn = lambda q: _ladder_value_dec(q, n)
    with localcontext() as ctx:
        ctx.prec = prec + 10
        while hi - lo > target:
            mid = (lo + hi) / 2
            if _certified_sign(valfn, mid, prec) > 0:  # V > 1: left of root
                lo = mid
            else:
                hi = mid
    out = BaseValue(Fraction(lo), Fraction(hi), ladder_index=n)
    with _root_lock:
        _root_cache[key] = out
    return out


# ---------------------------------------------------------------------------
# Komornik-Loreti constant
# ---------------------------------------------------------------------------

_KL_INTERNAL_DIGITS = 80


def _limit_word_sign(q: Decimal, prec: int) -> int:
    """Sign of (sum_i (lambda_i + 1) q^-i) - 1 with an exact truncation tail bound."""
    terms = int(prec * 2.5) + 48
    p = prec
    for _ in range(6):
        with localcontext() as ctx:
            ctx.prec = p
            x = 1 / Decimal(q)
            acc = Decimal(0)
            for i in range(terms, 0, -1):
                acc = (acc + (tm_diff(i) + 1)) * x
            tail_max = 2 * x ** terms / (q - 1)
            noise = Decimal(10) ** (8 - p)
            if acc - 1 > noise:
                return 1
            if acc + tail_max - 1 < -noise:
                return -1
        p *= 2
        terms *= 2
    raise PrecisionError("Komornik-Loreti sign could not be certified")


_kl_cache: dict[int, BaseValue] = {}
_kl_lock = threading.Lock()


def kl_constant(tolerance: float | None = None,
                config: RunConfig = DEFAULT_CONFIG) -> BaseValue:
    """Certified enclosure of the Komornik-Loreti constant for alphabet {0,1,2}.

    Bisects on the value of the full limit word directly (exact tail bounds),
    so the enclosure is certified rather than extrapolated. The internal width
    is at most 1e-80 even for loose tolerances; the ladder roots crowd the
    limit at double-exponential speed, so anything wider would not even sit
    above the n = 8 root.
    """
    tol = config.tolerance if tolerance is None else tolerance
    tol = Fraction(tol)
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    tol_digits = 1
    step = Fraction(1, 10)
    while step > tol and tol_digits <= config.ladder_digits_cap:
        step /= 10
        tol_digits += 1
    digits = max(tol_digits, _KL_INTERNAL_DIGITS)
    if digits > config.ladder_digits_cap:
        raise PrecisionError(
            f"tolerance {float(tol)} needs {digits} digits, beyond cap "
            f"{config.ladder_digits_cap}")
    with _kl_lock:
        if digits in _kl_cache:
            return _kl_cache[digits]
    prec = digits + 30
    target = Decimal(10) ** (-digits)
    lo, hi = Decimal("2.5"), Decimal("2.6")
    with localcontext() as ctx:
        ctx.prec = prec + 10
        while hi - lo > target:
            mid = (lo + hi) / 2
            if _limit_word_sign(mid, prec) > 0:
                lo = mid
            else:
                hi = mid
    out = BaseValue(Fraction(lo), Fraction(hi), is_kl=True)
    with _kl_lock:
        _kl_cache[digits] = out
    return out


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------

def classify(q, config: RunConfig = DEFAULT_CONFIG) -> RegimeLabel:
    """Regime of a base: finite band (q_m, q_{m+1}], the Komornik-Loreti point,
    or the interval regime above it.

    Tagged inputs classify exactly (band intervals are right-closed). Untagged
    enclosures are compared against certified ladder enclosures; a straddle
    raises AmbiguousClassificationError rather than guessing.
    """
    b = as_base_value(q)
    if b.ladder_index is not None:
        if b.ladder_index == 1:
            raise DomainError("q = 2 is not a working base")
        return RegimeLabel("finite", b.ladder_index - 1)
    if b.is_kl:
        return RegimeLabel("komornik_loreti")
    require_working_base(b)
    kl = kl_constant(config=config)
    if b.lo > kl.hi:
        return RegimeLabel("interval")
    if b.hi >= kl.lo:
        if b.is_point:
            # A rational point strictly below the KL enclosure's center may
            # still sit inside the coarse enclosure; refine by band search.
            pass
        else:
            return RegimeLabel("komornik_loreti")
    prev = base_root(1, config=config)
    for n in range(2, config.max_ladder_index + 1):
        qn = base_root(n, config=config)
        if qn.lo > b.hi:
            if prev.hi < b.lo:
                return RegimeLabel("finite", n - 1)
            raise AmbiguousClassificationError(
                f"enclosure straddles ladder point {n - 1}")
        if qn.hi >= b.lo and qn.lo <= b.hi:
            raise AmbiguousClassificationError(
                f"enclosure straddles ladder point {n}")
        prev = qn
    raise PrecisionError(
        f"no band found below the ladder cap {config.max_ladder_index}; "
        "the base is too close to the Komornik-Loreti constant")
