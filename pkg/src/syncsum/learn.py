"""Guess a synchronising automaton by active learning, then verify it.

The learner asks membership questions "is s the running sum at n?" through
a linear representation, builds an observation table, and proposes a
hypothesis automaton once the table is closed. Equivalence is approximated
by testing; the actual guarantee comes afterwards from the automaton-level
checks in ``logic``. Whenever one of those checks fails, its witness is
turned into a word on which the hypothesis and the oracle genuinely differ,
and learning continues.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import automata as A
from . import logic as G
from .linrep import LinRep, derive_running_sum
from .numeration import NumerationSystem, align, from_digits, to_digits
from .sequences import Dfao, canonical_name, catalog


class LearnError(ValueError):
    pass


@dataclass
class MembershipOracle:
    """(n, s) is in the relation iff s = f(n), with f given by a linear representation."""

    f: LinRep
    systems: tuple  # (n system, s system), both msd
    name: str = "f"
    queries: int = 0
    _values: dict = field(default_factory=dict, repr=False)
    _answers: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self.systems = tuple(s.msd() for s in self.systems)
        if len(self.systems) != 2:
            raise LearnError("membership oracle needs exactly two tracks")
        if self.f.system.msd() != self.systems[0]:
            raise LearnError(f"representation is {self.f.system.tag}, n-track is {self.systems[0].tag}")

    @property
    def alphabet(self) -> tuple:
        return A.tuple_alphabet(self.systems)

    def value(self, n: int) -> int:
        v = self._values.get(n)
        if v is None:
            v = self.f.value_of_digits(to_digits(n, self.f.system).digits)
            self._values[n] = v
        return v

    def decode(self, word: Sequence[tuple]) -> tuple | None:
        """Decoded (n, s), or None for a word with a "11" on a fibonacci track."""
        out = []
        for i, s in enumerate(self.systems):
            ds = [c[i] for c in word]
            if s.is_fib and any(a == 1 == b for a, b in zip(ds, ds[1:])):
                return None
            out.append(from_digits(ds, s, allow_noncanonical=True))
        return tuple(out)

    def encode(self, n: int, s: int) -> tuple:
        return tuple(align([to_digits(n, self.systems[0]), to_digits(s, self.systems[1])]).columns())

    def __call__(self, word: Sequence[tuple]) -> bool:
        word = tuple(word)
        ans = self._answers.get(word)
        if ans is None:
            self.queries += 1
            ns = self.decode(word)
            ans = ns is not None and self.value(ns[0]) == ns[1]
            self._answers[word] = ans
        return ans

    def holds(self, n: int, s: int) -> bool:
        return self.value(n) == s


def oracle_for(name: str, s_system: NumerationSystem | None = None) -> tuple[MembershipOracle, Dfao]:
    """Membership oracle for the running sum of a catalog sequence, plus the msd DFAO."""
    d = catalog(canonical_name(name)).to_msd()
    f = derive_running_sum(d)
    ssys = s_system or d.system
    return MembershipOracle(f, (d.system, ssys), f"{canonical_name(name)}sum"), d


@dataclass
class LearnResult:
    outcome: str  # proved | evaluation-verified | candidate_failed | diverged
    predicate: G.Predicate | None
    hypothesis: A.Dfa | None
    reports: list
    stats: dict
    transcript: list
    last_counterexample: tuple | None = None
    oracle: MembershipOracle | None = field(default=None, repr=False)

    @property
    def proved(self) -> bool:
        return self.outcome == "proved"

    def transcript_text(self) -> str:
        return "\n".join(self.transcript) + "\n"


class _Table:
    """Observation table with suffix-closed experiments (all suffixes of each counterexample)."""

    def __init__(self, oracle: MembershipOracle):
        self.mq = oracle
        self.sigma = oracle.alphabet
        self.S = [()]
        self.E = [()]
        self._rows: dict = {}

    def row(self, u: tuple) -> tuple:
        r = self._rows.get(u)
        if r is None or len(r) < len(self.E):
            r = tuple(self.mq(u + e) for e in self.E)
            self._rows[u] = r
        return r

    def add_suffixes(self, word: tuple) -> bool:
        seen = set(self.E)
        added = False
        for i in range(len(word) + 1):
            e = word[i:]
            if e not in seen:
                self.E.append(e)
                seen.add(e)
                added = True
        return added

    def close(self, limit: int) -> bool:
        """Make the table closed; False once more than ``limit`` rows are distinct."""
        while True:
            reps = {self.row(u) for u in self.S}
            if len(reps) > limit:
                return False
            missing = None
            for u in self.S:
                for a in self.sigma:
                    if self.row(u + (a,)) not in reps:
                        missing = u + (a,)
                        break
                if missing:
                    break
            if missing is None:
                return True
            self.S.append(missing)

    def hypothesis(self) -> A.Dfa:
        index, order = {}, []
        for u in self.S:
            r = self.row(u)
            if r not in index:
                index[r] = len(order)
                order.append(u)
        delta = [[index[self.row(u + (a,))] for a in self.sigma] for u in order]
        acc = {i for i, u in enumerate(order) if self.row(u)[0]}
        return A.Dfa(self.sigma, delta, index[self.row(())], acc)


def _test_words(oracle: MembershipOracle, test_len: int, rng: random.Random, count: int):
    sigma = oracle.alphabet
    for L in range(test_len + 1):
        yield from itertools.product(sigma, repeat=L)
    nsys = oracle.systems[0]
    for j in range(count):
        if j % 2 == 0:
            L = rng.randint(1, 4 * test_len)
            yield tuple(rng.choice(sigma) for _ in range(L))
        else:
            # near-true pairs: exact or off by a little, with some padding
            digits = rng.randint(1, 4 * test_len)
            n = rng.randrange(nsys.k ** digits if not nsys.is_fib else 2 ** digits)
            s = max(oracle.value(n) + rng.choice((0, 0, 0, -1, 1, 2, -2)), 0)
            yield ((0, 0),) * rng.randint(0, 2) + oracle.encode(n, s)


def _find_disagreement(h: A.Dfa, oracle: MembershipOracle, test_len: int, rng: random.Random,
                       count: int) -> tuple | None:
    for w in _test_words(oracle, test_len, rng, count):
        if h.accepts(w) != oracle(w):
            return w
    return None


def _padding_counterexample(h: A.Dfa, oracle: MembershipOracle) -> tuple | None:
    zero = tuple(0 for _ in oracle.systems)
    shifted = A.Dfa(h.alphabet, h.delta, h.step(h.initial, zero), h.accepting)
    w = A.distinguishing_word(h, shifted)
    if w is None:
        return None
    w = tuple(w)
    # oracle(w) == oracle(0w), so one of them is misclassified
    return w if h.accepts(w) != oracle(w) else (zero,) + w


def _evidence_from_report(rep: G.VerificationReport, oracle: MembershipOracle, h: A.Dfa,
                          d: Dfao) -> tuple | None:
    """Turn a failed check into a word the hypothesis gets wrong."""
    cex = rep.counterexample
    cands = []
    if rep.query == "functional":
        n, s, t = cex
        cands = [(n, s), (n, t)]
    elif rep.query == "total":
        (n,) = cex
        cands = [(n, oracle.value(n))]
    elif rep.query == "inductive":
        n, s, u = cex
        if u is None:
            cands = [(0, d(0))]
        else:
            cands = [(n, s), (n + 1, s + u)]
    for n, s in cands:
        w = oracle.encode(n, s)
        if h.accepts(w) != oracle(w):
            return w
    return None


def learn_sync(oracle: MembershipOracle, d: Dfao | None = None, max_states: int = 64, test_len: int = 6,
               seed: int = 0, random_words: int = 10_000, fib_check: int = 100_000,
               log: Callable[[str], None] | None = None) -> LearnResult:
    """Learn and verify an automaton for the graph of f; ``d`` is the summed 0/1 sequence."""
    if max_states < 1 or test_len < 1:
        raise LearnError("max_states and test_len must be positive")
    t0 = time.perf_counter()
    rng = random.Random(seed)
    table = _Table(oracle)
    transcript: list[str] = []
    stats = {"rounds": 0, "max_states": max_states, "test_len": test_len, "seed": seed, "states_per_round": []}
    names = (("n", oracle.systems[0]), ("s", oracle.systems[1]))
    fib = any(s.is_fib for s in oracle.systems)
    h = None
    reports: list = []
    last = None

    def note(msg):
        transcript.append(msg)
        if log:
            log(msg)

    def finish(outcome, pred=None):
        stats["queries"] = oracle.queries
        stats["states"] = h.n_states if h is not None else 0
        stats["seconds"] = round(time.perf_counter() - t0, 3)
        note(f"outcome {outcome}")
        return LearnResult(outcome, pred, h, reports, stats, transcript, last, oracle)

    while True:
        stats["rounds"] += 1
        rnd = stats["rounds"]
        if not table.close(max_states):
            note(f"round {rnd}: more than {max_states} distinct rows")
            return finish("diverged")
        h = A.minimize(table.hypothesis())
        stats["states_per_round"].append(h.n_states)
        note(f"round {rnd}: hypothesis with {h.n_states} states, {len(table.E)} experiments")
        cex = _padding_counterexample(h, oracle)
        source = "padding"
        if cex is None:
            cex = _find_disagreement(h, oracle, test_len, rng, random_words)
            source = "testing"
        if cex is None:
            pred = G._make(names, h, None, oracle.name)
            reports = [G.verify_functional(pred), G.verify_total(pred)]
            if fib:
                if all(r.verdict for r in reports):
                    bad = next((n for n in range(fib_check + 1) if not pred(n, oracle.value(n))), None)
                    if bad is None:
                        note(f"round {rnd}: functional and total proved; values checked for n <= {fib_check}")
                        return finish("evaluation-verified", pred)
                    cex = oracle.encode(bad, oracle.value(bad))
                    source = "value check"
            else:
                if d is None:
                    raise LearnError("the inductive check needs the summed sequence")
                if all(r.verdict for r in reports):
                    reports.append(G.verify_inductive(pred, d))
                failed = next((r for r in reports if not r.verdict), None)
                if failed is None:
                    note(f"round {rnd}: functional, total and inductive checks all TRUE")
                    return finish("proved", pred)
                cex = _evidence_from_report(failed, oracle, h, d)
                source = f"{failed.query} check"
                if cex is None:
                    note(f"round {rnd}: {failed} but no disagreeing word found")
                    return finish("candidate_failed", pred)
        last = cex
        note(f"round {rnd}: counterexample from {source}: {oracle.decode(cex)} "
             f"(oracle {oracle(cex)}, hypothesis {h.accepts(cex)})")
        table.add_suffixes(tuple(cex))


@dataclass
class Trace:
    word: tuple
    decoded: tuple | None
    oracle: bool
    hypothesis: bool

    @property
    def agree(self) -> bool:
        return self.oracle == self.hypothesis

    def __str__(self):
        tag = "agree" if self.agree else "DISAGREE"
        return f"{self.decoded}: oracle {self.oracle}, hypothesis {self.hypothesis} ({tag})"


def counterexample_trace(result: LearnResult | A.Dfa, word, oracle: MembershipOracle | None = None) -> Trace:
    """Oracle and hypothesis verdicts on one word, or on a pair (n, s)."""
    h = result if isinstance(result, A.Dfa) else result.hypothesis
    oracle = oracle or getattr(result, "oracle", None)
    if h is None or oracle is None:
        raise LearnError("trace needs a hypothesis and an oracle")
    if len(word) == 2 and all(isinstance(x, int) for x in word):
        word = oracle.encode(*word)
    word = tuple(word)
    return Trace(word, oracle.decode(word), oracle(word), h.accepts(word))


# Sequences whose running sums the learner is expected to handle, with the
# s-track system when it differs from the n-track.
LEARNABLE = {"T": None, "CA": "msd_2", "sb": None, "ttm": None, "gamma": None}


def learn_catalog(name: str, **kw) -> LearnResult:
    from .numeration import parse_system
    name = canonical_name(name)
    ssys = LEARNABLE.get(name)
    oracle, d = oracle_for(name, parse_system(ssys) if ssys else None)
    return learn_sync(oracle, d, **kw)
