"""Automatic sequences as DFAOs, with a catalog and definitional oracles.

The catalog automata are written out by hand in the shared automaton text
format. The oracles compute each sequence straight from its definition and
share no code with the automata, so agreement between the two is a real
check.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import automata
from .numeration import FIB, NumerationSystem, base, to_digits


class SequenceError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dfao:
    system: NumerationSystem
    delta: tuple  # delta[state][digit]
    output: tuple
    initial: int = 0

    def __post_init__(self):
        object.__setattr__(self, "delta", tuple(tuple(r) for r in self.delta))
        object.__setattr__(self, "output", tuple(self.output))
        if len(self.output) != len(self.delta):
            raise SequenceError("one output per state required")
        for row in self.delta:
            if len(row) != self.system.radix:
                raise SequenceError("transition table is not total")
            for t in row:
                if not 0 <= t < len(self.delta):
                    raise SequenceError(f"transition target {t} out of range")

    @property
    def n_states(self) -> int:
        return len(self.delta)

    @property
    def outputs(self) -> tuple:
        return tuple(sorted(set(self.output)))

    def state_of(self, n: int) -> int:
        q = self.initial
        for d in to_digits(n, self.system).reading_order():
            q = self.delta[q][d]
        return q

    def __call__(self, n: int) -> int:
        return self.output[self.state_of(n)]

    def run_digits(self, digits: Sequence[int]) -> int:
        """Output after reading ``digits`` in this automaton's reading order."""
        q = self.initial
        for d in digits:
            q = self.delta[q][d]
        return self.output[q]

    def to_msd(self) -> "Dfao":
        """Equivalent msd DFAO for an lsd one (identity otherwise).

        A state of the result is the map q -> delta*(q, reversed prefix);
        appending a digit d composes it with delta(., d) on the inside.
        """
        if not self.system.is_lsd:
            return self
        ident = tuple(range(self.n_states))
        maps, rows = _explore(ident, self.system.k,
                              lambda f, d: tuple(f[self.delta[q][d]] for q in range(self.n_states)))
        out = [self.output[f[self.initial]] for f in maps]
        return minimize_dfao(Dfao(self.system.msd(), rows, out, 0))

    def as_dfa(self, value: int) -> automata.Dfa:
        """One-track relation automaton (1-tuple symbols) accepting n with self(n) == value."""
        d = self.to_msd()
        alphabet = tuple((x,) for x in d.system.digits)
        acc = {q for q in range(d.n_states) if d.output[q] == value}
        dfa = automata.Dfa(alphabet, d.delta, d.initial, acc)
        if d.system.is_fib:
            dfa = automata.product(dfa, automata.fib_valid([FIB]))
        return automata.minimize(dfa)

    def __repr__(self):
        return f"Dfao({self.system.tag}, states={self.n_states})"


def eval_dfao(d: Dfao, n: int) -> int:
    if n < 0:
        raise SequenceError("n must be non-negative")
    return d(n)


def _explore(start, k: int, succ):
    """Breadth-first discovery of states; returns (states, rows of successor ids)."""
    order, pos, rows = [start], {start: 0}, []
    i = 0
    while i < len(order):
        row = []
        for d in range(k):
            t = succ(order[i], d)
            if t not in pos:
                pos[t] = len(order)
                order.append(t)
            row.append(pos[t])
        rows.append(row)
        i += 1
    return order, rows


def minimize_dfao(d: Dfao) -> Dfao:
    """Moore refinement on outputs, then breadth-first renumbering."""
    k = d.system.radix
    states, rows = _explore(d.initial, k, lambda q, i: d.delta[q][i])
    out = [d.output[q] for q in states]
    labels = sorted(set(out))
    block = [labels.index(o) for o in out]
    count = len(labels)
    while True:
        sigs = {}
        new = [sigs.setdefault((block[q],) + tuple(block[t] for t in rows[q]), len(sigs))
               for q in range(len(states))]
        if len(sigs) == count:
            break
        block, count = new, len(sigs)
    reps = {}
    for q in range(len(states)):
        reps.setdefault(block[q], q)
    blocks, qrows = _explore(block[0], k, lambda b, i: block[rows[reps[b]][i]])
    return Dfao(d.system, qrows, [out[reps[b]] for b in blocks], 0)


def isomorphic(a: Dfao, b: Dfao) -> bool:
    a, b = minimize_dfao(a), minimize_dfao(b)
    return a.system == b.system and a.delta == b.delta and a.output == b.output


@dataclass(frozen=True)
class Morphism:
    images: dict  # letter -> tuple of letters, all the same length
    coding: dict | None = None

    def __post_init__(self):
        lengths = {len(v) for v in self.images.values()}
        if len(lengths) != 1:
            raise SequenceError("morphism is not uniform")
        for img in self.images.values():
            for x in img:
                if x not in self.images:
                    raise SequenceError(f"image letter {x!r} not in alphabet")

    @property
    def k(self) -> int:
        return len(next(iter(self.images.values())))


def dfao_from_morphism(m: Morphism, start) -> Dfao:
    if m.images[start][0] != start:
        raise SequenceError(f"morphism is not prolongable on {start!r}")
    k = m.k
    if k < 2:
        raise SequenceError("uniform morphism must have length >= 2")
    letters = [start] + sorted((x for x in m.images if x != start), key=repr)
    pos = {x: i for i, x in enumerate(letters)}
    delta = [[pos[m.images[x][d]] for d in range(k)] for x in letters]
    coding = m.coding or {x: x for x in letters}
    return Dfao(base(k), delta, [coding[x] for x in letters], 0)


def dfao_from_text(text: str) -> Dfao:
    p = automata.parse_automaton(text, single_track_ints=True)
    return Dfao(p.systems[0], p.dfa.delta, p.labels, 0)


def dfao_to_text(d: Dfao) -> str:
    dfa = automata.Dfa(tuple(d.system.digits), d.delta, d.initial, set())
    return automata.dump_automaton(dfa, [d.system], outputs=d.output)


# -- catalog ----------------------------------------------------------------

THUE_MORSE = Morphism({0: (0, 1), 1: (1, 0)})
LEECH = Morphism({
    0: (0, 1, 2, 1, 0, 2, 1, 2, 0, 1, 2, 1, 0),
    1: (1, 2, 0, 2, 1, 0, 2, 0, 1, 2, 0, 2, 1),
    2: (2, 0, 1, 0, 2, 1, 0, 1, 2, 0, 1, 0, 2),
})


def _leech_text() -> str:
    return dfao_to_text(dfao_from_morphism(LEECH, 0))


_CATALOG_TEXT = {
    # parity of the number of 1 digits
    "T": """tracks: msd_2
state 0 0
state 1 1
0 0 0
0 1 1
1 0 1
1 1 0
""",
    # 1 while only digits 0 and 2 have been seen
    "CA": """tracks: msd_3
state 0 1
state 1 0
0 0 0
0 1 1
0 2 0
1 0 1
1 1 1
1 2 1
""",
    # 0: leading zeros, 1: after the leading 1, 2/3: second digit was 0/1
    "sb": """tracks: msd_2
state 0 0
state 1 0
state 2 0
state 3 1
0 0 0
0 1 1
1 0 2
1 1 3
2 0 2
2 1 2
3 0 3
3 1 3
""",
    # 0: leading zeros, 1/2: even/odd number of 0 digits so far
    "ttm": """tracks: msd_2
state 0 0
state 1 0
state 2 1
0 0 0
0 1 1
1 0 2
1 1 1
2 0 1
2 1 2
""",
    # least significant digit first; output (n + popcount(n)) mod 2
    # 0: start, 1: n even so far with even popcount, 2: even/odd,
    # 3: n odd/odd popcount, 4: n odd/even popcount
    "gamma": """tracks: lsd_2
state 0 0
state 1 0
state 2 1
state 3 0
state 4 1
0 0 1
0 1 3
1 0 1
1 1 2
2 0 2
2 1 1
3 0 3
3 1 4
4 0 4
4 1 3
""",
    # 1 iff the run of trailing 1 digits has even length
    "pd": """tracks: msd_2
state 0 1
state 1 0
0 0 0
0 1 1
1 0 0
1 1 0
""",
    # parity of the number of 2 digits
    "mw": """tracks: msd_3
state 0 0
state 1 1
0 0 0
0 1 0
0 2 1
1 0 1
1 1 1
1 2 0
""",
    # state (last digit, digit preceding the last 0); output the latter
    "pf": """tracks: msd_2
state 0 0
state 1 0
state 2 1
state 3 1
0 0 0
0 1 1
1 0 2
1 1 1
2 0 0
2 1 3
3 0 2
3 1 3
""",
    # 0: leading zeros, 1: no odd zero-block, 2: inside an odd zero-block, 3: dead
    "bs": """tracks: msd_2
state 0 1
state 1 1
state 2 0
state 3 0
0 0 0
0 1 1
1 0 2
1 1 1
2 0 1
2 1 3
3 0 3
3 1 3
""",
    # last digit other than 1 (none counts as 0): 0 -> 0, 2 -> 1
    "sc": """tracks: msd_3
state 0 0
state 1 1
0 0 0
0 1 0
0 2 1
1 0 0
1 1 1
1 2 1
""",
    # (last digit, parity of "11" factors)
    "rs": """tracks: msd_2
state 0 0
state 1 0
state 2 1
state 3 1
0 0 0
0 1 1
1 0 0
1 1 2
2 0 3
2 1 1
3 0 3
3 1 2
""",
    # parity of the number of 1 digits in the Zeckendorf word
    "ftm": """tracks: fib
state 0 0
state 1 1
0 0 0
0 1 1
1 0 1
1 1 0
""",
}

NAMES = ("T", "CA", "sb", "ttm", "gamma", "pd", "mw", "pf", "LE", "bs", "sc", "rs", "ftm")
_ALIASES = {n.lower(): n for n in NAMES}
_ALIASES.update({"γ̄": "gamma", "gammabar": "gamma", "γ": "gamma", "tm": "T", "le": "LE", "ca": "CA"})


def canonical_name(name: str) -> str:
    key = name.strip()
    if key in NAMES:
        return key
    try:
        return _ALIASES[key.lower()]
    except KeyError:
        raise SequenceError(f"unknown sequence {name!r}; known: {', '.join(NAMES)}") from None


@lru_cache(maxsize=None)
def catalog(name: str) -> Dfao:
    name = canonical_name(name)
    if name == "LE":
        return dfao_from_text(_leech_text())
    return dfao_from_text(_CATALOG_TEXT[name])


def catalog_text(name: str) -> str:
    return dfao_to_text(catalog(name))


# -- oracles ----------------------------------------------------------------

def _base_str(n: int, k: int) -> str:
    if n == 0:
        return ""
    out = []
    while n:
        n, d = divmod(n, k)
        out.append("0123456789abc"[d])
    return "".join(reversed(out))


def _zeckendorf_ones(n: int) -> int:
    fibs = [1, 2]
    while fibs[-1] <= n:
        fibs.append(fibs[-1] + fibs[-2])
    ones = 0
    for f in reversed(fibs):
        if f <= n:
            n -= f
            ones += 1
    return ones


def _legendre_v2_factorial(n: int) -> int:
    total, p = 0, 2
    while p <= n:
        total += n // p
        p *= 2
    return total


_ODD_ZERO_BLOCK = re.compile(r"(?<!0)(?:00)*0(?!0)")


@lru_cache(maxsize=None)
def _pd(n: int) -> int:
    if n % 2 == 0:
        return 1
    if n % 4 == 1:
        return 0
    return _pd((n - 3) // 4)


@lru_cache(maxsize=None)
def _pf(n: int) -> int:
    if n % 2 == 1:
        return _pf((n - 1) // 2)
    return 0 if n % 4 == 0 else 1


@lru_cache(maxsize=None)
def _sc(n: int) -> int:
    if n % 3 == 0:
        return 0
    if n % 3 == 2:
        return 1
    return _sc((n - 1) // 3)


@lru_cache(maxsize=None)
def _rs(n: int) -> int:
    if n <= 1:
        return 0
    if n % 2 == 0:
        return _rs(n // 2)
    if n % 4 == 1:
        return _rs((n - 1) // 4)
    return 1 - _rs((n - 3) // 4 * 2 + 1)


class _LeechPrefix:
    """Fixed point of the Leech morphism, grown by iterating the morphism."""

    def __init__(self):
        self.word = [0]

    def __call__(self, n: int) -> int:
        if n >= 13 ** 7:
            # beyond the cached prefix use the self-similarity of the fixed point
            return LEECH.images[self(n // 13)][n % 13]
        while len(self.word) <= n:
            self.word = [x for a in self.word for x in LEECH.images[a]]
        return self.word[n]


_leech = _LeechPrefix()

_ORACLES = {
    "T": lambda n: bin(n).count("1") % 2,
    "CA": lambda n: int("1" not in _base_str(n, 3)),
    "sb": lambda n: int(bin(n)[3]) if n >= 2 else 0,
    "ttm": lambda n: _base_str(n, 2).count("0") % 2,
    "gamma": lambda n: _legendre_v2_factorial(n) % 2,
    "pd": _pd,
    "mw": lambda n: _base_str(n, 3).count("2") % 2,
    "pf": _pf,
    "LE": _leech,
    "bs": lambda n: 0 if _ODD_ZERO_BLOCK.search(_base_str(n, 2)) else 1,
    "sc": _sc,
    "rs": _rs,
    "ftm": lambda n: _zeckendorf_ones(n) % 2,
}


def oracle(name: str, n: int) -> int:
    if n < 0:
        raise SequenceError("n must be non-negative")
    return _ORACLES[canonical_name(name)](n)


def oracle_values(name: str, count: int) -> list[int]:
    f = _ORACLES[canonical_name(name)]
    return [f(n) for n in range(count)]


def running_sum_oracle(name: str, n: int) -> int:
    f = _ORACLES[canonical_name(name)]
    return sum(f(i) for i in range(n + 1))


def running_sums(name: str, count: int) -> list[int]:
    """Running sums f(0), ..., f(count - 1) by a linear scan of the oracle."""
    return list(itertools.accumulate(oracle_values(name, count)))


def dfao_values(d: Dfao, count: int) -> np.ndarray:
    """Outputs for n = 0 .. count-1, computed by dynamic programming over prefixes."""
    if count <= 0:
        return np.zeros(0, dtype=np.int64)
    if d.system.is_lsd:
        d = d.to_msd()
    delta = np.array(d.delta, dtype=np.int64)
    out = np.array(d.output, dtype=np.int64)
    if d.system.is_fib:
        states = np.empty(count, dtype=np.int64)
        for n in range(count):
            states[n] = d.state_of(n)
        return out[states]
    k = d.system.k
    n = np.arange(count)
    states = np.empty(count, dtype=np.int64)
    states[0] = d.initial
    # state(n) = delta(state(n // k), n % k); parents always precede children
    lo = 1
    while lo < count:
        hi = min(count, lo * k)
        idx = n[lo:hi]
        states[lo:hi] = delta[states[idx // k], idx % k]
        lo = hi
    return out[states]


def ind_oracle(name: str, count: int) -> list[int]:
    """Positions of the first ``count`` ones (0-based: ind(0) is the first)."""
    f = _ORACLES[canonical_name(name)]
    out, n = [], 0
    while len(out) < count:
        if f(n) == 1:
            out.append(n)
        n += 1
    return out
