"""Ternary words, eventually periodic sequences, and the Thue-Morse difference blocks.

Words are plain tuples of digits. The ternary alphabet is {-1, 0, 1}; ladder
words elsewhere use {0, 1, 2}. Eventually periodic sequences are represented
canonically (primitive period, minimal preperiod) so equality and hashing are
decidable.
"""

from __future__ import annotations

import threading
from typing import Callable, Iterable

from .config import DEFAULT_CONFIG
from .errors import DomainError, ResourceLimitError

Word = tuple  # tuple of digits

OMEGA3 = (-1, 0, 1)


def thue_morse_bit(i: int) -> int:
    """Parity-of-ones bit sequence: position 0 is 0, doubling fixes, doubling+1 flips."""
    if i < 0:
        raise DomainError("index must be nonnegative")
    bit = 0
    while i:
        bit ^= i & 1
        i >>= 1
    return bit


def tm_diff(i: int) -> int:
    """First difference of the parity bit sequence at position i >= 1; values in {-1,0,1}."""
    if i < 1:
        raise DomainError("index must be positive")
    return thue_morse_bit(i) - thue_morse_bit(i - 1)


_block_cache: dict[int, Word] = {}
_block_lock = threading.Lock()


def tm_block(n: int, max_exponent: int | None = None) -> Word:
    """Length-2^n prefix of the difference sequence.

    Built by the doubling rule: block(0) = (1,), block(n+1) = block(n)
    followed by its reflection with the final digit incremented.
    """
    cap = DEFAULT_CONFIG.max_block_exponent if max_exponent is None else max_exponent
    if n < 0:
        raise DomainError("block exponent must be nonnegative")
    if n > cap:
        raise ResourceLimitError(f"block exponent {n} exceeds cap {cap}")
    with _block_lock:
        if n in _block_cache:
            return _block_cache[n]
        hi = max(_block_cache) if _block_cache else -1
        w = _block_cache.get(hi, (1,)) if hi >= 0 else (1,)
        for k in range(hi + 1, n + 1):
            if k == 0:
                w = (1,)
            else:
                w = w + inc_last(reflect(w))
            _block_cache[k] = w
        return _block_cache[n]


def reflect(word: Word) -> Word:
    """Digitwise negation (reflection of the symmetric ternary alphabet)."""
    return tuple(-d for d in word)


def reflect2(word: Word) -> Word:
    """Reflection of a word over {0, 1, 2}: digit d maps to 2 - d."""
    return tuple(2 - d for d in word)


def inc_last(word: Word, alphabet_max: int = 1) -> Word:
    """Increment the final digit; the result must stay inside the alphabet."""
    if not word:
        raise DomainError("cannot increment the last digit of an empty word")
    if word[-1] >= alphabet_max:
        raise DomainError(f"last digit {word[-1]} is already the largest letter")
    return word[:-1] + (word[-1] + 1,)


def dec_last(word: Word, alphabet_min: int = -1) -> Word:
    """Decrement the final digit; the result must stay inside the alphabet."""
    if not word:
        raise DomainError("cannot decrement the last digit of an empty word")
    if word[-1] <= alphabet_min:
        raise DomainError(f"last digit {word[-1]} is already the smallest letter")
    return word[:-1] + (word[-1] - 1,)


def _primitive_period(period: Word) -> Word:
    n = len(period)
    for d in range(1, n + 1):
        if n % d == 0 and period == period[:d] * (n // d):
            return period[:d]
    return period


class Seq:
    """Eventually periodic sequence preperiod . period^inf over arbitrary digits.

    The constructor canonicalizes: the period is reduced to its primitive
    length, then the preperiod is shortened by rotating the period right while
    its last digit matches the preperiod's last digit. Two constructions of
    the same sequence therefore compare (and hash) equal.
    """

    __slots__ = ("preperiod", "period")

    def __init__(self, preperiod: Iterable, period: Iterable):
        pre = tuple(preperiod)
        per = _primitive_period(tuple(period))
        if not per:
            raise DomainError("period must be nonempty")
        while pre and pre[-1] == per[-1]:
            pre = pre[:-1]
            per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", pre)
        object.__setattr__(self, "period", per)

    def __setattr__(self, name, value):
        raise AttributeError("Seq is immutable")

    def __eq__(self, other):
        return (
            isinstance(other, Seq)
            and self.preperiod == other.preperiod
            and self.period == other.period
        )

    def __hash__(self):
        return hash((self.preperiod, self.period))

    def __repr__(self):
        return f"Seq({self.preperiod!r}, {self.period!r})"

    def digit(self, i: int):
        """1-based digit access."""
        if i < 1:
            raise DomainError("positions are 1-based")
        if i <= len(self.preperiod):
            return self.preperiod[i - 1]
        return self.period[(i - 1 - len(self.preperiod)) % len(self.period)]

    def prefix(self, n: int) -> Word:
        out = list(self.preperiod[:n])
        while len(out) < n:
            take = min(n - len(out), len(self.period))
            out.extend(self.period[:take])
        return tuple(out)

    def shift(self, i: int) -> "Seq":
        """Drop the first i digits and recanonicalize."""
        if i < 0:
            raise DomainError("shift must be nonnegative")
        if i <= len(self.preperiod):
            return Seq(self.preperiod[i:], self.period)
        k = (i - len(self.preperiod)) % len(self.period)
        return Seq((), self.period[k:] + self.period[:k])

    def map(self, fn: Callable) -> "Seq":
        return Seq(tuple(map(fn, self.preperiod)), tuple(map(fn, self.period)))

    def reflect(self) -> "Seq":
        return self.map(lambda d: -d)


def ternary_seq(preperiod: Iterable[int], period: Iterable[int]) -> Seq:
    """Seq over {-1, 0, 1} with digit validation."""
    s = Seq(preperiod, period)
    for d in s.preperiod + s.period:
        if d not in (-1, 0, 1):
            raise DomainError(f"digit {d!r} is not in the ternary alphabet")
    return s


def pair_seq(preperiod: Iterable, period: Iterable) -> Seq:
    """Seq over raw digit pairs: both coordinates ternary, pairs unrestricted."""
    s = Seq(preperiod, period)
    for p in s.preperiod + s.period:
        if (
            not isinstance(p, tuple)
            or len(p) != 2
            or p[0] not in (-1, 0, 1)
            or p[1] not in (-1, 0, 1)
        ):
            raise DomainError(f"entry {p!r} is not a pair of ternary digits")
    return s


# ---------------------------------------------------------------------------
# Serialization. Grammar (documented for the CLI and JSON reports):
#
#   sequence  :=  [word] ";" word "^inf"   |   word "^inf"
#   word      :=  compact | commalist
#   compact   :=  ("+" | "-" | "0")*          one character per digit
#   commalist :=  digit ("," digit)*           digits in {-1, 0, 1}
#
# The part before ";" is the preperiod (may be empty), the part before
# "^inf" is the period. Formatting always emits the compact form.
# ---------------------------------------------------------------------------

_COMPACT = {1: "+", 0: "0", -1: "-"}
_PARSE = {"+": 1, "0": 0, "-": -1}


def format_word(word: Word) -> str:
    try:
        return "".join(_COMPACT[d] for d in word)
    except KeyError as exc:
        raise DomainError(f"cannot format non-ternary digit {exc.args[0]!r}") from exc


def parse_word(text: str) -> Word:
    text = text.strip()
    if text == "":
        return ()
    if "," in text:
        digits = []
        for part in (p.strip() for p in text.split(",")):
            if part not in ("-1", "0", "1"):
                raise DomainError(f"bad ternary digit {part!r}")
            digits.append(int(part))
        return tuple(digits)
    if all(ch in _PARSE for ch in text):
        return tuple(_PARSE[ch] for ch in text)
    if all(ch in "01" for ch in text):
        return tuple(int(ch) for ch in text)
    raise DomainError(f"cannot parse word {text!r}")


def format_seq(seq: Seq) -> str:
    pre = format_word(seq.preperiod)
    per = format_word(seq.period)
    return (pre + ";" if pre else "") + per + "^inf"


def parse_seq(text: str) -> Seq:
    text = text.strip()
    if not text.endswith("^inf"):
        raise DomainError("sequence literal must end with '^inf'")
    body = text[: -len("^inf")]
    if ";" in body:
        pre_text, per_text = body.split(";", 1)
    else:
        pre_text, per_text = "", body
    per = parse_word(per_text)
    if not per:
        raise DomainError("period must be nonempty")
    return ternary_seq(parse_word(pre_text), per)
