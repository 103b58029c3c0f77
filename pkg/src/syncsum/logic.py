"""First-order predicates over multi-track automata.

A predicate names its tracks, reads all of them most significant digit
first in lock step, and accepts a tuple of integers when it accepts their
zero-padded numerals. Every construction keeps two invariants: acceptance
does not depend on how much zero padding is used, and fibonacci tracks only
accept words without "11".

Each predicate also carries a plain Python evaluation of the formula it was
built from (``semantics``), so the automaton can be replayed against direct
arithmetic on small values.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

from . import automata as A
from .numeration import NumerationSystem, align, from_digits, parse_system, to_digits
from .sequences import Dfao


class LogicError(ValueError):
    pass


Semantics = Callable[[Mapping[str, int]], bool]


@dataclass(frozen=True, eq=False)
class Predicate:
    tracks: tuple  # ((name, NumerationSystem), ...)
    dfa: A.Dfa
    semantics: Semantics | None = None
    expr: str = "?"

    def __post_init__(self):
        object.__setattr__(self, "tracks", tuple((str(n), s) for n, s in self.tracks))
        names = self.names
        if len(set(names)) != len(names):
            raise LogicError(f"duplicate track names {names}")
        for _, s in self.tracks:
            if s.is_lsd:
                raise LogicError("predicate tracks are read msd first; convert lsd inputs first")
        if self.dfa.alphabet != A.tuple_alphabet(self.systems):
            raise LogicError("automaton alphabet does not match the track systems")

    @property
    def names(self) -> tuple:
        return tuple(n for n, _ in self.tracks)

    @property
    def systems(self) -> tuple:
        return tuple(s for _, s in self.tracks)

    @property
    def arity(self) -> int:
        return len(self.tracks)

    def system_of(self, name: str) -> NumerationSystem:
        for n, s in self.tracks:
            if n == name:
                return s
        raise LogicError(f"no track named {name!r}")

    def encode(self, values: Sequence[int], pad: int = 0) -> tuple:
        if len(values) != self.arity:
            raise LogicError(f"expected {self.arity} values, got {len(values)}")
        al = align([to_digits(v, s) for v, s in zip(values, self.systems)])
        cols = al.columns()
        return ((0,) * self.arity,) * pad + tuple(cols)

    def decode(self, word: Sequence[tuple]) -> tuple:
        word = list(word)
        return tuple(from_digits([c[i] for c in word], s, allow_noncanonical=True)
                     for i, s in enumerate(self.systems))

    def __call__(self, *values: int) -> bool:
        return self.dfa.accepts(self.encode(values))

    def holds(self, env: Mapping[str, int]) -> bool:
        return self(*(env[n] for n in self.names))

    def truth(self, env: Mapping[str, int]) -> bool:
        """Direct evaluation of the recorded formula (no automaton)."""
        if self.semantics is None:
            raise LogicError("predicate carries no formula semantics")
        return self.semantics(env)

    @property
    def n_states(self) -> int:
        return self.dfa.n_states

    def __repr__(self):
        tr = ", ".join(f"{n}:{s.tag}" for n, s in self.tracks)
        return f"Predicate({tr}; {self.dfa.n_states} states; {self.expr})"


def _make(tracks, dfa: A.Dfa, semantics, expr) -> Predicate:
    systems = [s for _, s in tracks]
    if any(s.is_fib for s in systems):
        dfa = A.product(dfa, A.fib_valid(systems))
    return Predicate(tuple(tracks), A.minimize(dfa), semantics, expr)


def _msd_tracks(tracks) -> tuple:
    out = []
    for t in tracks:
        if isinstance(t, str):
            raise LogicError("tracks are (name, system) pairs")
        name, s = t
        s = parse_system(s) if isinstance(s, str) else s
        out.append((name, s.msd()))
    return tuple(out)


# -- atoms ------------------------------------------------------------------

def from_rel(r: A.Dfa, tracks, semantics: Callable[..., bool] | None = None, expr: str = "rel") -> Predicate:
    """Wrap a relation automaton; ``semantics`` takes the track values positionally."""
    tracks = _msd_tracks(tracks)
    alphabet = A.tuple_alphabet([s for _, s in tracks])
    if tuple(r.alphabet) != alphabet:
        raise LogicError("relation automaton alphabet does not match the track systems")
    names = [n for n, _ in tracks]
    sem = None if semantics is None else (lambda env: bool(semantics(*(env[n] for n in names))))
    return _make(tracks, r, sem, expr)


def lift(d: Dfao, value: int, track: str = "n", truth: Callable[[int], int] | None = None) -> Predicate:
    """One track: n with d(n) = value. ``truth`` supplies an independent evaluator for replay."""
    sysm = d.system.msd()
    ev = truth or d
    return _make(((track, sysm),), d.as_dfa(value), lambda env: ev(env[track]) == value,
                 f"d({track})={value}")


def p_true(tracks=()) -> Predicate:
    tracks = _msd_tracks(tracks)
    return Predicate(tracks, A.universal(A.tuple_alphabet([s for _, s in tracks])) if not any(
        s.is_fib for _, s in tracks) else A.minimize(A.fib_valid([s for _, s in tracks])),
        lambda env: True, "true")


def p_false(tracks=()) -> Predicate:
    tracks = _msd_tracks(tracks)
    return Predicate(tracks, A.empty(A.tuple_alphabet([s for _, s in tracks])), lambda env: False, "false")


def p_eq(x: str, y: str, sys: NumerationSystem) -> Predicate:
    return from_rel(A.rel_eq(sys), ((x, sys), (y, sys)), lambda a, b: a == b, f"{x}={y}")


def p_lt(x: str, y: str, sys: NumerationSystem) -> Predicate:
    return from_rel(A.rel_lt(sys), ((x, sys), (y, sys)), lambda a, b: a < b, f"{x}<{y}")


def p_leq(x: str, y: str, sys: NumerationSystem) -> Predicate:
    return from_rel(A.rel_leq(sys), ((x, sys), (y, sys)), lambda a, b: a <= b, f"{x}<={y}")


def p_add(x: str, y: str, z: str, sys: NumerationSystem) -> Predicate:
    return from_rel(A.rel_add(sys), ((x, sys), (y, sys), (z, sys)), lambda a, b, c: a + b == c, f"{x}+{y}={z}")


def p_const(x: str, c: int, sys: NumerationSystem) -> Predicate:
    return from_rel(A.rel_const(c, sys), ((x, sys),), lambda a: a == c, f"{x}={c}")


def p_succ(x: str, y: str, sys: NumerationSystem) -> Predicate:
    return from_rel(A.rel_succ(sys), ((x, sys), (y, sys)), lambda a, b: b == a + 1, f"{y}={x}+1")


def p_plus_const(x: str, y: str, c: int, sys: NumerationSystem) -> Predicate:
    """y = x + c."""
    if c == 0:
        return rename(p_eq(x, y, sys), {}, expr=f"{y}={x}")
    if c == 1:
        return p_succ(x, y, sys)
    tmp = _fresh("c", (x, y))
    return p_exists(p_and(p_add(x, tmp, y, sys), p_const(tmp, c, sys)), tmp,
                    bound=lambda env: c + 1)


def _fresh(stem: str, taken) -> str:
    taken = set(taken)
    for i in itertools.count():
        name = f"_{stem}{i}"
        if name not in taken:
            return name


# -- track bookkeeping -------------------------------------------------------

def _cylinder(p: Predicate, tracks: tuple) -> A.Dfa:
    """p's automaton read over a larger track list (extra tracks unconstrained)."""
    pos = [next(i for i, (n, _) in enumerate(tracks) if n == name) for name in p.names]
    alphabet = A.tuple_alphabet([s for _, s in tracks])
    return A.reindex(p.dfa, alphabet, lambda sym: tuple(sym[i] for i in pos))


def _merge_tracks(ps: Sequence[Predicate]) -> tuple:
    out, seen = [], {}
    for p in ps:
        for n, s in p.tracks:
            if n in seen:
                if seen[n] != s:
                    raise LogicError(f"track {n!r} used with systems {seen[n].tag} and {s.tag}")
                continue
            seen[n] = s
            out.append((n, s))
    return tuple(out)


def _combine(ps: Sequence[Predicate], mode: str) -> Predicate:
    if not ps:
        raise LogicError("need at least one predicate")
    tracks = _merge_tracks(ps)
    dfa = _cylinder(ps[0], tracks)
    for p in ps[1:]:
        dfa = A.minimize(A.product(dfa, _cylinder(p, tracks), mode))
    sems = [p.semantics for p in ps]
    if any(s is None for s in sems):
        sem = None
    elif mode == "and":
        sem = lambda env: all(s(env) for s in sems)  # noqa: E731
    else:
        sem = lambda env: any(s(env) for s in sems)  # noqa: E731
    joiner = " & " if mode == "and" else " | "
    return _make(tracks, dfa, sem, "(" + joiner.join(p.expr for p in ps) + ")")


def p_and(*ps: Predicate) -> Predicate:
    return _combine(ps, "and")


def p_or(*ps: Predicate) -> Predicate:
    return _combine(ps, "or")


def p_not(p: Predicate) -> Predicate:
    sem = None if p.semantics is None else (lambda env: not p.semantics(env))
    return _make(p.tracks, A.complement(p.dfa), sem, f"~{p.expr}")


def p_implies(a: Predicate, b: Predicate) -> Predicate:
    return p_or(p_not(a), b)


def _default_bound(env: Mapping[str, int]) -> int:
    return 2 * max(env.values(), default=0) + 2


def p_exists(p: Predicate, track: str, bound: Callable[[Mapping[str, int]], int] | None = None) -> Predicate:
    """Project ``track`` away, then determinize, saturate padding and minimize.

    ``bound`` only matters for replaying the formula: witnesses are searched
    below bound(env). The default 2 * max(free values) + 2 suits the
    constructions in this module, whose witnesses are sums, successors or
    indices no larger than the free variables plus one.
    """
    if track not in p.names:
        raise LogicError(f"cannot quantify missing track {track!r}")
    keep = [i for i, n in enumerate(p.names) if n != track]
    tracks = tuple(p.tracks[i] for i in keep)
    alphabet = A.tuple_alphabet([s for _, s in tracks])
    nfa = A.relabel(p.dfa, alphabet, lambda sym: tuple(sym[i] for i in keep))
    nfa = A.zero_closure(nfa, tuple(0 for _ in keep))
    dfa = A.determinize(nfa)
    sem = None
    if p.semantics is not None:
        inner = p.semantics
        bnd = bound or _default_bound

        def sem(env):
            return any(inner({**env, track: v}) for v in range(bnd(env)))
    return _make(tracks, dfa, sem, f"E{track}.{p.expr}")


def p_forall(p: Predicate, track: str, bound=None) -> Predicate:
    return p_not(p_exists(p_not(p), track, bound))


def rename(p: Predicate, mapping: Mapping[str, str], expr: str | None = None) -> Predicate:
    new = tuple((mapping.get(n, n), s) for n, s in p.tracks)
    sem = None
    if p.semantics is not None:
        inner = p.semantics
        back = {mapping.get(n, n): n for n in p.names}

        def sem(env):
            return inner({back[k]: v for k, v in env.items() if k in back})
    return Predicate(new, p.dfa, sem, expr or p.expr)


def reorder(p: Predicate, names: Sequence[str]) -> Predicate:
    names = tuple(names)
    if sorted(names) != sorted(p.names):
        raise LogicError(f"reorder needs a permutation of {p.names}")
    tracks = tuple((n, p.system_of(n)) for n in names)
    return Predicate(tracks, A.minimize(_cylinder(p, tracks)), p.semantics, p.expr)


def equivalent(a: Predicate, b: Predicate) -> bool:
    if a.tracks != b.tracks:
        b = reorder(b, a.names) if sorted(a.names) == sorted(b.names) else b
        if a.tracks != b.tracks:
            return False
    return A.equivalent(a.dfa, b.dfa)


def witness(p: Predicate) -> tuple | None:
    """Shortest accepted tuple (shortlex on the padded word), decoded."""
    w = A.find_word(p.dfa)
    return None if w is None else p.decode(w)


# -- checks -------------------------------------------------------------------

def padding_invariant(p: Predicate) -> bool:
    """Reading a zero column first leaves the accepted language unchanged."""
    zero = tuple(0 for _ in p.tracks)
    shifted = A.Dfa(p.dfa.alphabet, p.dfa.delta, p.dfa.step(p.dfa.initial, zero), p.dfa.accepting)
    return A.equivalent(p.dfa, shifted)


def semantic_mismatches(p: Predicate, bound: int, limit: int = 10) -> list:
    """Tuples below ``bound`` where the automaton and the recorded formula disagree."""
    bad = []
    for vals in itertools.product(range(bound), repeat=p.arity):
        env = dict(zip(p.names, vals))
        if p.holds(env) != p.truth(env):
            bad.append(vals)
            if len(bad) >= limit:
                break
    return bad


# -- verification queries ---------------------------------------------------

@dataclass
class VerificationReport:
    query: str
    verdict: bool
    counterexample: tuple | None = None
    states: dict = field(default_factory=dict)
    seconds: float = 0.0
    note: str = ""

    def __post_init__(self):
        if self.verdict == (self.counterexample is not None):
            raise LogicError("counterexample must be present exactly when the verdict is false")

    def __str__(self):
        v = "TRUE" if self.verdict else f"FALSE counterexample={self.counterexample}"
        return f"{self.query}: {v}"

    def as_dict(self) -> dict:
        return {"query": self.query, "verdict": self.verdict,
                "counterexample": None if self.counterexample is None else list(self.counterexample),
                "states": self.states, "seconds": round(self.seconds, 4), "note": self.note}


def _pair(p: Predicate) -> tuple:
    if p.arity != 2:
        raise LogicError(f"expected a two-track predicate (n, s), got {p.names}")
    return p.names


def verify_functional(p: Predicate) -> VerificationReport:
    """For all n, s, t: p(n, s) and p(n, t) imply s = t."""
    t0 = time.perf_counter()
    n, s = _pair(p)
    t = _fresh("t", p.names)
    two = p_and(p, rename(p, {s: t}))
    bad = p_and(two, p_not(p_eq(s, t, p.system_of(s))))
    w = witness(bad)
    return VerificationReport("functional", w is None, w,
                              {"predicate": p.n_states, "pair": two.n_states, "violations": bad.n_states},
                              time.perf_counter() - t0)


def verify_total(p: Predicate) -> VerificationReport:
    """For all n there is an s with p(n, s)."""
    t0 = time.perf_counter()
    n, s = _pair(p)
    missing = p_not(p_exists(p, s))
    w = witness(missing)
    return VerificationReport("total", w is None, w,
                              {"predicate": p.n_states, "missing": missing.n_states},
                              time.perf_counter() - t0)


def verify_inductive(p: Predicate, d: Dfao) -> VerificationReport:
    """p(0, d(0)) and for all n, s, u: p(n, s) and d(n+1) = u imply p(n+1, s+u).

    u ranges over the finitely many outputs of d, one automaton per value.
    The counterexample is (n, s, u), or (0, d(0), None) for the base case.
    """
    t0 = time.perf_counter()
    n, s = _pair(p)
    ns, ss = p.system_of(n), p.system_of(s)
    if ns.is_fib or ss.is_fib:
        raise LogicError("unsupported: no fibonacci adder, inductive check needs base-k tracks")
    if d.system.msd() != ns:
        raise LogicError(f"sequence is {d.system.tag} but the n-track is {ns.tag}")
    if not set(d.outputs) <= {0, 1}:
        raise LogicError("inductive check expects a 0/1 sequence")
    states = {"predicate": p.n_states}
    base = d(0)
    if not p(0, base):
        return VerificationReport("inductive", False, (0, base, None), states, time.perf_counter() - t0,
                                  "base case fails")
    m, t = _fresh("m", p.names), _fresh("t", p.names)
    step_pred = rename(p, {n: m, s: t})
    succ = p_succ(n, m, ns)
    for u in d.outputs:
        # p(n, s) and m = n+1 and d(m) = u and t = s+u and not p(m, t)
        bad = p_and(p, succ, lift(d, u, m), p_plus_const(s, t, u, ss), p_not(step_pred))
        bad = p_exists(p_exists(bad, m), t)
        states[f"violations_u{u}"] = bad.n_states
        w = witness(bad)
        if w is not None:
            return VerificationReport("inductive", False, w + (u,), states, time.perf_counter() - t0)
    return VerificationReport("inductive", True, None, states, time.perf_counter() - t0)


def verify_all(p: Predicate, d: Dfao | None = None) -> list[VerificationReport]:
    out = [verify_functional(p), verify_total(p)]
    if d is not None:
        out.append(verify_inductive(p, d))
    return out


# -- index / running-sum constructions ----------------------------------------

def index_from_sum(B: Predicate, d: Dfao, check: bool = True) -> Predicate:
    """From B(k, s) (running sum up to k is s) build A(n, k): the n-th 1 of d sits at k.

    Counting from n = 0: A(n, k) := d(k) = 1 and B(k, n + 1).
    """
    k, s = _pair(B)
    if check:
        for rep in (verify_functional(B), verify_total(B)):
            if not rep.verdict:
                raise LogicError(f"sum predicate fails {rep.query} check: {rep.counterexample}")
    n, m = _fresh("n", B.names), _fresh("m", B.names)
    ssys = B.system_of(s)
    body = p_and(p_succ(n, m, ssys), rename(B, {s: m}), lift(d, 1, k))
    body = rename(p_exists(body, m, bound=lambda env: env[n] + 2), {n: "n", k: "k"}, expr=f"ind({B.expr})")
    return reorder(body, ["n", "k"])


def sum_from_index(A_: Predicate, d: Dfao) -> Predicate:
    """From A(n, k) build B(k, s): exactly s of d(0), ..., d(k) are 1.

    s >= 1: the (s-1)-th 1 sits at some r <= k and no 1 lies in (r, k].
    s = 0: no 1 at all in [0, k].
    """
    n, k = _pair(A_)
    ksys, nsys = A_.system_of(k), A_.system_of(n)
    r, i, s, p = "_r", "_i", "_s", "_p"
    one_at_i = lift(d, 1, i)
    ones_after_r = p_exists(p_and(p_lt(r, i, ksys), p_leq(i, k, ksys), one_at_i), i,
                            bound=lambda env: env[k] + 1)
    last = p_and(rename(A_, {n: p, k: r}), p_leq(r, k, ksys), p_not(ones_after_r))
    last = p_exists(last, r, bound=lambda env: env[k] + 1)
    positive = p_exists(p_and(p_succ(p, s, nsys), last), p, bound=lambda env: env[s] + 1)
    none = p_and(p_const(s, 0, nsys),
                 p_not(p_exists(p_and(p_leq(i, k, ksys), one_at_i), i, bound=lambda env: env[k] + 1)))
    B = p_or(positive, none)
    B = rename(B, {k: "k", s: "s"}, expr=f"sum({A_.expr})")
    return reorder(B, ["k", "s"])


# -- text I/O -----------------------------------------------------------------

def dump_predicate(p: Predicate) -> str:
    body = A.dump_automaton(p.dfa, p.systems)
    return f"# names: {' '.join(p.names)}\n" + body


def parse_predicate(text: str, names: Sequence[str] | None = None) -> Predicate:
    parsed = A.parse_automaton(text)
    if names is None:
        for ln in text.splitlines():
            if ln.strip().startswith("# names:"):
                names = ln.split(":", 1)[1].split()
                break
    if names is None:
        names = ["n", "s", "t", "u"][:len(parsed.systems)] if len(parsed.systems) <= 4 else [
            f"x{i}" for i in range(len(parsed.systems))]
    if len(names) != len(parsed.systems):
        raise LogicError("track names do not match the tracks line")
    return _make(tuple(zip(names, parsed.systems)), parsed.dfa, None, "parsed")
