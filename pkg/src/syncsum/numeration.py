"""Numeration systems: base-k (msd or lsd) and Zeckendorf.

Digit words are always stored most-significant-digit first. An ``lsd``
system only changes how words are written out and how automata read them.
The empty word is the canonical representation of zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence


class NumerationError(ValueError):
    pass


@dataclass(frozen=True)
class NumerationSystem:
    kind: str  # "base" or "fib"
    k: int = 2
    order: str = "msd"

    def __post_init__(self):
        if self.kind == "base":
            if self.k < 2:
                raise NumerationError(f"base must be >= 2, got {self.k}")
            if self.order not in ("msd", "lsd"):
                raise NumerationError(f"unknown digit order {self.order!r}")
        elif self.kind == "fib":
            if self.order != "msd" or self.k != 2:
                raise NumerationError("fibonacci system is msd with digits {0, 1}")
        else:
            raise NumerationError(f"unknown numeration kind {self.kind!r}")

    @property
    def is_fib(self) -> bool:
        return self.kind == "fib"

    @property
    def is_lsd(self) -> bool:
        return self.order == "lsd"

    @property
    def radix(self) -> int:
        """Size of the digit alphabet."""
        return self.k

    @property
    def digits(self) -> range:
        return range(self.k)

    @property
    def tag(self) -> str:
        if self.is_fib:
            return "fib"
        return f"{self.order}_{self.k}"

    def __str__(self):
        return self.tag

    def msd(self) -> "NumerationSystem":
        """The same system read most significant digit first."""
        if self.is_fib or not self.is_lsd:
            return self
        return NumerationSystem("base", self.k, "msd")


def base(k: int, order: str = "msd") -> NumerationSystem:
    return NumerationSystem("base", k, order)


FIB = NumerationSystem("fib")
MSD2 = base(2)
MSD3 = base(3)
LSD2 = base(2, "lsd")

_TAG = re.compile(r"^(msd|lsd)_(\d+)$")


def parse_system(tag: str) -> NumerationSystem:
    tag = tag.strip()
    if tag in ("fib", "msd_fib"):
        return FIB
    m = _TAG.match(tag)
    if not m:
        raise NumerationError(f"bad numeration tag {tag!r}")
    return base(int(m.group(2)), m.group(1))


@lru_cache(maxsize=None)
def _fib_weights(count: int) -> tuple[int, ...]:
    # F_2, F_3, ... : 1, 2, 3, 5, 8, ...
    ws = [1, 2]
    while len(ws) < count:
        ws.append(ws[-1] + ws[-2])
    return tuple(ws[:count])


def fib_weights(count: int) -> tuple[int, ...]:
    """Digit weights of a Zeckendorf word of length ``count``, lowest position first."""
    return _fib_weights(max(count, 2))[:count]


@dataclass(frozen=True)
class Numeral:
    system: NumerationSystem
    digits: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "digits", tuple(self.digits))
        _check_digits(self.digits, self.system, allow_noncanonical=True)

    def __len__(self):
        return len(self.digits)

    @property
    def value(self) -> int:
        return from_digits(self, allow_noncanonical=True)

    def canonical(self) -> "Numeral":
        i = 0
        while i < len(self.digits) and self.digits[i] == 0:
            i += 1
        return Numeral(self.system, self.digits[i:])

    def reading_order(self) -> tuple[int, ...]:
        """Digits in the order an automaton for this system consumes them."""
        return self.digits[::-1] if self.system.is_lsd else self.digits

    def __str__(self):
        return format_numeral(self)


def _check_digits(digits: Sequence[int], system: NumerationSystem, allow_noncanonical: bool):
    for d in digits:
        if not 0 <= d < system.radix:
            raise NumerationError(f"digit {d} out of range for {system.tag}")
    if system.is_fib and not allow_noncanonical:
        for a, b in zip(digits, digits[1:]):
            if a == 1 and b == 1:
                raise NumerationError(f"non-canonical Zeckendorf word {list(digits)}")


def to_digits(n: int, system: NumerationSystem) -> Numeral:
    """Canonical numeral of ``n`` (greedy Zeckendorf for the fibonacci system)."""
    if n < 0:
        raise NumerationError("negative integers are not representable")
    if n == 0:
        return Numeral(system, ())
    if system.is_fib:
        ws = [1, 2]
        while ws[-1] <= n:
            ws.append(ws[-1] + ws[-2])
        out = []
        for w in reversed(ws[:-1]):
            if w <= n:
                out.append(1)
                n -= w
            else:
                out.append(0)
        # the largest weight <= n always fires, so there is no leading zero
        return Numeral(system, tuple(out))
    k = system.k
    out = []
    while n:
        n, d = divmod(n, k)
        out.append(d)
    return Numeral(system, tuple(reversed(out)))


def from_digits(w: Numeral | Sequence[int], system: NumerationSystem | None = None,
                allow_noncanonical: bool = False) -> int:
    """Value of a digit word. Leading zeros are permitted."""
    if isinstance(w, Numeral):
        system = w.system if system is None else system
        digits = w.digits
    else:
        if system is None:
            raise NumerationError("system required for a bare digit list")
        digits = tuple(w)
    _check_digits(digits, system, allow_noncanonical)
    if system.is_fib:
        ws = fib_weights(len(digits))
        return sum(ws[i] for i, d in enumerate(reversed(digits)) if d)
    k = system.k
    v = 0
    for d in digits:
        v = v * k + d
    return v


def pad(digits: Sequence[int], length: int) -> tuple[int, ...]:
    if len(digits) > length:
        raise NumerationError(f"word of length {len(digits)} does not fit in {length}")
    return (0,) * (length - len(digits)) + tuple(digits)


@dataclass(frozen=True)
class Alignment:
    words: tuple[tuple[int, ...], ...]
    orders: tuple[str, ...]

    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)

    def __getitem__(self, i):
        return self.words[i]

    def columns(self) -> list[tuple[int, ...]]:
        return list(zip(*self.words))


def align(words: Iterable[Numeral | Sequence[int]]) -> Alignment:
    """Zero-pad words at the most significant end to a common length.

    Numerals are stored msd-first already, so lsd systems need no reversal
    here; their original order is kept in ``Alignment.orders``.
    """
    seqs, orders = [], []
    for w in words:
        if isinstance(w, Numeral):
            seqs.append(w.digits)
            orders.append(w.system.order)
        else:
            seqs.append(tuple(w))
            orders.append("msd")
    length = max((len(s) for s in seqs), default=0)
    return Alignment(tuple(pad(s, length) for s in seqs), tuple(orders))


@dataclass(frozen=True)
class PatternNumeral:
    """The word family prefix . block^r . suffix."""

    system: NumerationSystem
    block: tuple[int, ...]
    prefix: tuple[int, ...] = ()
    suffix: tuple[int, ...] = ()
    param: str = "r"

    def __post_init__(self):
        for name in ("block", "prefix", "suffix"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if not self.block:
            raise NumerationError("pattern block must be non-empty")
        for part in (self.prefix, self.block, self.suffix):
            _check_digits(part, self.system, allow_noncanonical=True)

    def word(self, r: int) -> tuple[int, ...]:
        if r < 0:
            raise NumerationError("pattern exponent must be non-negative")
        return self.prefix + self.block * r + self.suffix

    def __str__(self):
        return format_pattern(self)


def expand_pattern(p: PatternNumeral, r: int, allow_noncanonical: bool = False) -> Numeral:
    digits = p.word(r)
    _check_digits(digits, p.system, allow_noncanonical)
    return Numeral(p.system, digits)


def pattern_value(p: PatternNumeral, r: int) -> int:
    return from_digits(expand_pattern(p, r))


# -- text forms -------------------------------------------------------------

def _digits_text(digits: Sequence[int], system: NumerationSystem) -> str:
    if system.radix > 10:
        return "_".join(str(d) for d in digits)
    return "".join(str(d) for d in digits)


def _parse_digit_text(text: str, system: NumerationSystem) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    if system.radix > 10:
        parts = text.split("_")
    else:
        parts = list(text.replace("_", ""))
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise NumerationError(f"bad digit text {text!r}") from None


def format_numeral(w: Numeral) -> str:
    return f"{w.system.tag}:{_digits_text(w.reading_order(), w.system)}"


def parse_numeral(text: str, allow_noncanonical: bool = False) -> Numeral:
    tag, sep, body = text.partition(":")
    if not sep:
        raise NumerationError(f"missing system tag in {text!r}")
    system = parse_system(tag)
    digits = _parse_digit_text(body, system)
    if system.is_lsd:
        digits = digits[::-1]
    _check_digits(digits, system, allow_noncanonical)
    return Numeral(system, digits)


_PATTERN = re.compile(r"^\s*(?P<pre>[0-9_\s]*?)\s*\((?P<block>[0-9_\s]+)\)\s*\^\s*(?P<param>[a-z]\w*)\s*(?P<suf>[0-9_\s]*)$")


def parse_pattern(text: str, system: NumerationSystem) -> PatternNumeral:
    """Parse ``prefix (block)^r suffix``; digits in base > 10 are underscore separated."""
    m = _PATTERN.match(text)
    if not m:
        raise NumerationError(f"bad pattern {text!r}")

    def part(s):
        s = s.strip()
        if system.radix > 10:
            return _parse_digit_text("_".join(s.replace("_", " ").split()), system)
        return _parse_digit_text(s.replace(" ", ""), system)

    return PatternNumeral(system, part(m.group("block")), part(m.group("pre")),
                          part(m.group("suf")), m.group("param"))


def format_pattern(p: PatternNumeral) -> str:
    sep = "_" if p.system.radix > 10 else ""
    bits = []
    if p.prefix:
        bits.append(sep.join(map(str, p.prefix)))
    bits.append(f"({sep.join(map(str, p.block))})^{p.param}")
    if p.suffix:
        bits.append(sep.join(map(str, p.suffix)))
    return " ".join(bits)
