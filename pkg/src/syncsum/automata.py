"""Finite automata over arbitrary finite alphabets, plus arithmetic relations.

Relation automata read aligned tuples of digits, most significant column
first. Symbols of a k-track automaton are k-tuples of digits; a one-track
relation still uses 1-tuples so that every relation composes the same way.

All automata are immutable. ``Dfa.delta`` is total: ``delta[q][i]`` is the
successor of ``q`` on ``alphabet[i]``, and dead states are kept explicit.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Sequence

from .numeration import FIB, NumerationSystem, parse_system

Symbol = Hashable


class AutomatonError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Dfa:
    alphabet: tuple
    delta: tuple  # tuple[tuple[int, ...], ...]
    initial: int
    accepting: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "delta", tuple(tuple(row) for row in self.delta))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        n = len(self.delta)
        if not 0 <= self.initial < max(n, 1) or n == 0:
            raise AutomatonError("initial state out of range")
        width = len(self.alphabet)
        for row in self.delta:
            if len(row) != width:
                raise AutomatonError("transition table is not total")
            for t in row:
                if not 0 <= t < n:
                    raise AutomatonError(f"transition target {t} out of range")
        object.__setattr__(self, "_index", {a: i for i, a in enumerate(self.alphabet)})

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def index(self, symbol) -> int:
        try:
            return self._index[symbol]
        except KeyError:
            raise AutomatonError(f"symbol {symbol!r} not in alphabet") from None

    def step(self, q: int, symbol) -> int:
        return self.delta[q][self.index(symbol)]

    def run(self, word: Iterable, start: int | None = None) -> int:
        q = self.initial if start is None else start
        idx = self._index
        delta = self.delta
        for a in word:
            q = delta[q][idx[a]]
        return q

    def accepts(self, word: Iterable) -> bool:
        return self.run(word) in self.accepting

    __contains__ = accepts

    def __repr__(self):
        return f"Dfa(states={self.n_states}, alphabet={len(self.alphabet)}, accepting={len(self.accepting)})"


@dataclass(frozen=True, eq=False)
class Nfa:
    """Epsilon-free NFA; ``delta[q]`` maps a symbol index to a frozenset of states."""

    alphabet: tuple
    delta: tuple  # tuple[dict[int, frozenset[int]], ...]
    initials: frozenset
    accepting: frozenset

    @property
    def n_states(self) -> int:
        return len(self.delta)

    def accepts(self, word: Iterable) -> bool:
        idx = {a: i for i, a in enumerate(self.alphabet)}
        cur = set(self.initials)
        for a in word:
            i = idx[a]
            nxt = set()
            for q in cur:
                nxt |= self.delta[q].get(i, frozenset())
            cur = nxt
        return bool(cur & self.accepting)


# -- basic constructions ----------------------------------------------------

def universal(alphabet: Sequence) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(alphabet),), 0, {0})


def empty(alphabet: Sequence) -> Dfa:
    return Dfa(tuple(alphabet), ((0,) * len(alphabet),), 0, set())


def explore(alphabet: Sequence, start, successor: Callable, accept: Callable) -> Dfa:
    """Build a DFA by breadth-first exploration of hashable states.

    ``successor(state, symbol_index)`` returns the next state. Only states
    reachable from ``start`` are created.
    """
    alphabet = tuple(alphabet)
    ids = {start: 0}
    order = [start]
    rows = []
    i = 0
    while i < len(order):
        s = order[i]
        row = []
        for a in range(len(alphabet)):
            t = successor(s, a)
            j = ids.get(t)
            if j is None:
                j = ids[t] = len(order)
                order.append(t)
            row.append(j)
        rows.append(row)
        i += 1
    return Dfa(alphabet, rows, 0, {ids[s] for s in order if accept(s)})


def product(a: Dfa, b: Dfa, mode: str = "and") -> Dfa:
    if a.alphabet != b.alphabet:
        raise AutomatonError("product of automata over different alphabets")
    if mode == "and":
        acc = lambda s: s[0] in a.accepting and s[1] in b.accepting
    elif mode == "or":
        acc = lambda s: s[0] in a.accepting or s[1] in b.accepting
    elif mode == "xor":
        acc = lambda s: (s[0] in a.accepting) != (s[1] in b.accepting)
    else:
        raise AutomatonError(f"unknown product mode {mode!r}")
    da, db = a.delta, b.delta
    return explore(a.alphabet, (a.initial, b.initial),
                   lambda s, i: (da[s[0]][i], db[s[1]][i]), acc)


def complement(a: Dfa) -> Dfa:
    return Dfa(a.alphabet, a.delta, a.initial, set(range(a.n_states)) - a.accepting)


def determinize(n: Nfa) -> Dfa:
    delta = n.delta
    empty_set = frozenset()

    def succ(s, i):
        out = set()
        for q in s:
            out |= delta[q].get(i, empty_set)
        return frozenset(out)

    return explore(n.alphabet, frozenset(n.initials), succ, lambda s: bool(s & n.accepting))


def reachable(a: Dfa) -> Dfa:
    return explore(a.alphabet, a.initial, lambda q, i: a.delta[q][i], lambda q: q in a.accepting)


def refine(delta: Sequence[Sequence[int]], labels: Sequence) -> list[int]:
    """Coarsest partition compatible with ``labels`` and the transitions (Moore)."""
    n = len(delta)
    names = {}
    block = [names.setdefault(lab, len(names)) for lab in labels]
    count = len(names)
    while True:
        sigs = {}
        new = [sigs.setdefault((block[q],) + tuple(block[t] for t in delta[q]), len(sigs))
               for q in range(n)]
        if len(sigs) == count:
            return block
        block, count = new, len(sigs)


def quotient(a: Dfa, block: Sequence[int]) -> tuple[Dfa, list[int]]:
    """Collapse ``a`` along ``block``; also returns a representative state per new state."""
    reps = {}
    for q in range(a.n_states):
        reps.setdefault(block[q], q)
    order = [block[a.initial]]
    pos = {order[0]: 0}
    rows = []
    i = 0
    while i < len(order):
        row = []
        for t in a.delta[reps[order[i]]]:
            b = block[t]
            if b not in pos:
                pos[b] = len(order)
                order.append(b)
            row.append(pos[b])
        rows.append(row)
        i += 1
    rep_states = [reps[b] for b in order]
    acc = {i for i, q in enumerate(rep_states) if q in a.accepting}
    return Dfa(a.alphabet, rows, 0, acc), rep_states


def minimize(a: Dfa) -> Dfa:
    """Minimal equivalent DFA, states numbered in breadth-first discovery order."""
    a = reachable(a)
    block = refine(a.delta, [q in a.accepting for q in range(a.n_states)])
    return quotient(a, block)[0]


def minimize_labeled(a: Dfa, labels: Sequence) -> tuple[Dfa, list]:
    """Minimise a DFA whose states carry arbitrary labels; returns the new labels too."""
    r = explore(a.alphabet, a.initial, lambda q, i: a.delta[q][i], lambda q: False)
    old = [a.initial]
    seen = {a.initial}
    i = 0
    while i < len(old):
        for t in a.delta[old[i]]:
            if t not in seen:
                seen.add(t)
                old.append(t)
        i += 1
    labs = [labels[q] for q in old]
    block = refine(r.delta, labs)
    m, reps = quotient(r, block)
    return m, [labs[q] for q in reps]


def find_word(a: Dfa) -> tuple | None:
    """Shortlex-least accepted word, or None when the language is empty."""
    parent = {a.initial: None}
    queue = deque([a.initial])
    while queue:
        q = queue.popleft()
        if q in a.accepting:
            word = []
            while parent[q] is not None:
                q, sym = parent[q]
                word.append(sym)
            return tuple(reversed(word))
        for i, t in enumerate(a.delta[q]):
            if t not in parent:
                parent[t] = (q, a.alphabet[i])
                queue.append(t)
    return None


def is_empty(a: Dfa) -> bool:
    return find_word(a) is None


def distinguishing_word(a: Dfa, b: Dfa) -> tuple | None:
    return find_word(product(a, b, "xor"))


def equivalent(a: Dfa, b: Dfa) -> bool:
    return distinguishing_word(a, b) is None


def reverse(a: Dfa) -> Nfa:
    rows = [dict() for _ in range(a.n_states)]
    for q, row in enumerate(a.delta):
        for i, t in enumerate(row):
            rows[t].setdefault(i, set()).add(q)
    rows = tuple({i: frozenset(s) for i, s in r.items()} for r in rows)
    return Nfa(a.alphabet, rows, frozenset(a.accepting), frozenset({a.initial}))


def as_nfa(a: Dfa) -> Nfa:
    rows = tuple({i: frozenset({t}) for i, t in enumerate(row)} for row in a.delta)
    return Nfa(a.alphabet, rows, frozenset({a.initial}), a.accepting)


def relabel(a: Dfa, alphabet: Sequence, mapping: Callable) -> Nfa:
    """Rename symbols through ``mapping`` (old symbol -> new symbol); merging makes an NFA."""
    alphabet = tuple(alphabet)
    idx = {s: i for i, s in enumerate(alphabet)}
    image = [idx[mapping(s)] for s in a.alphabet]
    rows = []
    for row in a.delta:
        d = {}
        for i, t in enumerate(row):
            d.setdefault(image[i], set()).add(t)
        rows.append({j: frozenset(s) for j, s in d.items()})
    return Nfa(alphabet, tuple(rows), frozenset({a.initial}), a.accepting)


def reindex(a: Dfa, alphabet: Sequence, mapping: Callable) -> Dfa:
    """Pull a DFA back along ``mapping`` (new symbol -> old symbol); stays deterministic."""
    alphabet = tuple(alphabet)
    pos = [a.index(mapping(s)) for s in alphabet]
    rows = [[row[p] for p in pos] for row in a.delta]
    return Dfa(alphabet, rows, a.initial, a.accepting)


def zero_closure(n: Nfa, zero) -> Nfa:
    """Replace the initial set by everything reachable from it on ``zero*``."""
    zi = n.alphabet.index(zero)
    seen = set(n.initials)
    stack = list(seen)
    while stack:
        q = stack.pop()
        for t in n.delta[q].get(zi, ()):
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return Nfa(n.alphabet, n.delta, frozenset(seen), n.accepting)


def words(alphabet: Sequence, length: int):
    return itertools.product(alphabet, repeat=length)


# -- arithmetic relations ---------------------------------------------------

def tuple_alphabet(systems: Sequence[NumerationSystem]) -> tuple:
    return tuple(itertools.product(*(s.digits for s in systems)))


def fib_valid(systems: Sequence[NumerationSystem]) -> Dfa:
    """Accept words whose fibonacci tracks contain no "11"; other tracks are free."""
    alphabet = tuple_alphabet(systems)
    fib_tracks = [i for i, s in enumerate(systems) if s.is_fib]
    dead = "dead"

    def succ(state, i):
        if state == dead:
            return dead
        sym = alphabet[i]
        new = []
        for j, t in enumerate(fib_tracks):
            if state[j] == 1 and sym[t] == 1:
                return dead
            new.append(sym[t])
        return tuple(new)

    return explore(alphabet, tuple(0 for _ in fib_tracks), succ, lambda s: s != dead)


def _compare(sys: NumerationSystem, accept: Callable[[str], bool]) -> Dfa:
    # msd lexicographic comparison: states "eq", "lt", "gt"
    alphabet = tuple_alphabet([sys, sys])

    def succ(s, i):
        if s != "eq":
            return s
        x, y = alphabet[i]
        return "eq" if x == y else ("lt" if x < y else "gt")

    d = explore(alphabet, "eq", succ, accept)
    if sys.is_fib:
        d = product(d, fib_valid([sys, sys]))
    return minimize(d)


def rel_eq(sys: NumerationSystem) -> Dfa:
    return _compare(sys, lambda s: s == "eq")


def rel_lt(sys: NumerationSystem) -> Dfa:
    return _compare(sys, lambda s: s == "lt")


def rel_leq(sys: NumerationSystem) -> Dfa:
    return _compare(sys, lambda s: s != "gt")


def rel_add(k: int | NumerationSystem) -> Dfa:
    """Triples (x, y, z) with x + y = z in base k, msd first.

    The state is c = val(z) - val(x) - val(y) on the prefix read so far;
    only c in {0, 1} can still end at 0, anything else is dead.
    """
    if isinstance(k, NumerationSystem):
        if k.is_fib:
            raise AutomatonError("no adder for the fibonacci system")
        k = k.k
    digits = range(k)
    alphabet = tuple(itertools.product(digits, digits, digits))

    def succ(c, i):
        if c is None:
            return None
        x, y, z = alphabet[i]
        c2 = k * c + z - x - y
        return c2 if c2 in (0, 1) else None

    return minimize(explore(alphabet, 0, succ, lambda c: c == 0))


def rel_const(c: int, sys: NumerationSystem) -> Dfa:
    """One track: exactly the zero-padded representations of ``c``."""
    from .numeration import to_digits
    target = to_digits(c, sys).digits
    alphabet = tuple((d,) for d in sys.digits)
    # state = number of digits of target matched; -1 dead
    m = len(target)

    def succ(s, i):
        if s == -1:
            return -1
        d = alphabet[i][0]
        if s == 0 and d == 0:
            return 0
        if s < m and d == target[s]:
            return s + 1
        return -1

    return minimize(explore(alphabet, 0, succ, lambda s: s == m))


def rel_succ(sys: NumerationSystem) -> Dfa:
    """Pairs (x, y) with y = x + 1."""
    if sys.is_fib:
        raise AutomatonError("no successor automaton for the fibonacci system")
    add = rel_add(sys.k)
    one = rel_const(1, sys)
    pair = tuple_alphabet([sys, sys])
    # triples (x, y, z) with y fixed to 1, then y projected away
    constrained = explore(add.alphabet, (add.initial, one.initial),
                          lambda s, i: (add.delta[s[0]][i], one.step(s[1], (add.alphabet[i][1],))),
                          lambda s: s[0] in add.accepting and s[1] in one.accepting)
    nfa = relabel(constrained, pair, lambda t: (t[0], t[2]))
    return minimize(determinize(nfa))


# -- text format ------------------------------------------------------------

def _symbol_text(sym) -> str:
    if isinstance(sym, tuple):
        return ",".join(str(d) for d in sym)
    return str(sym)


def dump_automaton(a: Dfa, systems: Sequence[NumerationSystem], outputs: Sequence[int] | None = None) -> str:
    """Serialise in the shared ``tracks:`` / ``state`` / transition text format.

    States are renumbered so the initial state is listed first. With
    ``outputs`` the state lines carry an output value instead of 0/1.
    """
    order = [a.initial] + [q for q in range(a.n_states) if q != a.initial]
    new = {q: i for i, q in enumerate(order)}
    lines = ["tracks: " + " ".join(s.tag for s in systems)]
    for q in order:
        label = outputs[q] if outputs is not None else int(q in a.accepting)
        lines.append(f"state {new[q]} {label}")
    syms = sorted(range(len(a.alphabet)), key=lambda i: a.alphabet[i])
    for q in order:
        for i in syms:
            lines.append(f"{new[q]} {_symbol_text(a.alphabet[i])} {new[a.delta[q][i]]}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ParsedAutomaton:
    systems: tuple
    dfa: Dfa
    labels: tuple  # per-state label from the ``state`` lines


def parse_automaton(text: str, single_track_ints: bool = False) -> ParsedAutomaton:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    if not lines or not lines[0].startswith("tracks:"):
        raise AutomatonError("automaton text must start with a tracks: line")
    systems = tuple(parse_system(t) for t in lines[0][len("tracks:"):].split())
    if not systems:
        raise AutomatonError("no tracks declared")
    ids, labels, trans = {}, [], []
    for ln in lines[1:]:
        parts = ln.split()
        if parts[0] == "state":
            if len(parts) != 3:
                raise AutomatonError(f"bad state line {ln!r}")
            ids[parts[1]] = len(ids)
            labels.append(int(parts[2]))
        else:
            if len(parts) != 3:
                raise AutomatonError(f"bad transition line {ln!r}")
            trans.append(parts)
    if single_track_ints:
        if len(systems) != 1:
            raise AutomatonError("integer symbols need exactly one track")
        alphabet = tuple(systems[0].digits)
        parse_sym = int
    else:
        alphabet = tuple_alphabet(systems)
        parse_sym = lambda s: tuple(int(x) for x in s.split(","))
    idx = {a: i for i, a in enumerate(alphabet)}
    rows = [[None] * len(alphabet) for _ in ids]
    for src, sym, dst in trans:
        try:
            rows[ids[src]][idx[parse_sym(sym)]] = ids[dst]
        except (KeyError, ValueError):
            raise AutomatonError(f"bad transition {src} {sym} {dst}") from None
    for r in rows:
        if None in r:
            raise AutomatonError("transition table is not total")
    accepting = {i for i, lab in enumerate(labels) if lab}
    return ParsedAutomaton(systems, Dfa(alphabet, rows, 0, accepting), tuple(labels))


__all__ = [
    "AutomatonError", "Dfa", "Nfa", "FIB", "universal", "empty", "explore", "product", "complement",
    "determinize", "reachable", "refine", "quotient", "minimize", "minimize_labeled", "find_word", "is_empty", "distinguishing_word", "equivalent",
    "reverse", "as_nfa", "relabel", "reindex", "zero_closure", "tuple_alphabet", "fib_valid", "rel_eq",
    "rel_lt", "rel_leq", "rel_add", "rel_const", "rel_succ", "dump_automaton", "parse_automaton",
]
