"""Exact linear representations f(n) = v . M[d_1] ... M[d_k] . w.

Entries are Python ints or ``fractions.Fraction``; both are exact, and a
Fraction with denominator 1 is folded back to int so derived matrices stay
integer.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from numbers import Rational
from typing import Mapping, Sequence

from . import automata
from .numeration import (NumerationSystem, PatternNumeral, expand_pattern, from_digits, parse_system,
                         to_digits)
from .sequences import Dfao

Matrix = tuple  # tuple of row tuples
Vector = tuple


class LinRepError(ValueError):
    pass


def exact(x) -> int | Fraction:
    if isinstance(x, bool):
        return int(x)
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        x = Fraction(x)
    elif not isinstance(x, Rational):
        raise LinRepError(f"inexact entry {x!r}")
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


# -- small dense matrix kit -------------------------------------------------

def as_matrix(rows) -> Matrix:
    return tuple(tuple(exact(x) for x in r) for r in rows)


def as_vector(xs) -> Vector:
    return tuple(exact(x) for x in xs)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(r: int, c: int) -> Matrix:
    return tuple((0,) * c for _ in range(r))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(exact(sum(x * y for x, y in zip(row, col) if x and y)) for col in cols) for row in a)


def matadd(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(exact(x + y) for x, y in zip(r, s)) for r, s in zip(a, b))


def matscale(c, a: Matrix) -> Matrix:
    return tuple(tuple(exact(c * x) for x in r) for r in a)


def matpow(a: Matrix, e: int) -> Matrix:
    result = identity(len(a))
    while e:
        if e & 1:
            result = matmul(result, a)
        e >>= 1
        if e:
            a = matmul(a, a)
    return result


def vecmat(v: Vector, a: Matrix) -> Vector:
    out = [0] * (len(a[0]) if a else 0)
    for x, row in zip(v, a):
        if x:
            for j, y in enumerate(row):
                if y:
                    out[j] += x * y
    return tuple(exact(x) for x in out)


def matvec(a: Matrix, w: Vector) -> Vector:
    return tuple(exact(sum(x * y for x, y in zip(row, w) if x and y)) for row in a)


def dot(v: Vector, w: Vector):
    return exact(sum(x * y for x, y in zip(v, w) if x and y))


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b)
    top = tuple(tuple(r) + (0,) * m for r in a)
    bottom = tuple((0,) * n + tuple(r) for r in b)
    return top + bottom


# -- linear representations -------------------------------------------------

@dataclass(frozen=True, eq=False)
class LinRep:
    system: NumerationSystem
    v: Vector
    mats: Mapping[int, Matrix]
    w: Vector
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "v", as_vector(self.v))
        object.__setattr__(self, "w", as_vector(self.w))
        object.__setattr__(self, "mats", {int(d): as_matrix(m) for d, m in self.mats.items()})
        dim = len(self.v)
        if len(self.w) != dim:
            raise LinRepError("v and w have different lengths")
        for d, m in self.mats.items():
            if not 0 <= d < self.system.radix:
                raise LinRepError(f"digit {d} out of range for {self.system.tag}")
            if len(m) != dim or any(len(r) != dim for r in m):
                raise LinRepError(f"matrix for digit {d} is not {dim}x{dim}")
        object.__setattr__(self, "_sparse", {
            d: [[(j, x) for j, x in enumerate(row) if x] for row in m] for d, m in self.mats.items()})

    @property
    def dim(self) -> int:
        return len(self.v)

    @property
    def complete(self) -> bool:
        return set(self.mats) == set(self.system.digits)

    def matrix(self, d: int) -> Matrix:
        try:
            return self.mats[d]
        except KeyError:
            raise LinRepError(f"no matrix for digit {d}") from None

    def step(self, vec: Sequence, d: int) -> list:
        """Row vector times the digit matrix, on the sparse form."""
        try:
            rows = self._sparse[d]
        except KeyError:
            raise LinRepError(f"no matrix for digit {d}") from None
        out = [0] * self.dim
        for x, row in zip(vec, rows):
            if x:
                for j, y in row:
                    out[j] += x * y
        return out

    def prefix_vector(self, digits: Sequence[int]) -> list:
        vec = list(self.v)
        for d in digits:
            vec = self.step(vec, d)
        return vec

    def value_of_digits(self, digits: Sequence[int]):
        return exact(sum(x * y for x, y in zip(self.prefix_vector(digits), self.w) if x and y))

    def __call__(self, n: int) -> int:
        return eval_linrep(self, n)


def eval_linrep(lr: LinRep, n: int) -> int:
    """Evaluate on the canonical (unpadded) numeral of ``n``; n = 0 gives v . w."""
    if n < 0:
        raise LinRepError("n must be non-negative")
    value = lr.value_of_digits(to_digits(n, lr.system).digits)
    if not isinstance(value, int):
        raise AssertionError(f"linear representation produced non-integer {value} at n={n}")
    return value


def eval_linrep_range(lr: LinRep, count: int) -> list[int]:
    """Values at n = 0 .. count-1, sharing prefix vectors between numerals.

    The numeral of n minus its last digit is the numeral of a smaller number
    (n // k in base k; likewise for Zeckendorf words), so each prefix vector
    is one step from an earlier one.
    """
    out = []
    vecs: dict[tuple, list] = {(): list(lr.v)}
    w = lr.w
    k = lr.system.k
    base_sys = not lr.system.is_fib
    by_n: list = []
    for n in range(count):
        if n == 0:
            vec = vecs[()]
        elif base_sys:
            vec = lr.step(by_n[n // k], n % k)
        else:
            digits = to_digits(n, lr.system).digits
            vec = vecs.get(digits)
            if vec is None:
                vec = lr.step(vecs[digits[:-1]], digits[-1])
                vecs[digits] = vec
        if base_sys:
            by_n.append(vec)
        value = exact(sum(x * y for x, y in zip(vec, w) if x and y))
        if not isinstance(value, int):
            raise AssertionError(f"linear representation produced non-integer {value} at n={n}")
        out.append(value)
    return out


# -- derivation from a DFAO -------------------------------------------------

@dataclass(frozen=True)
class SumSkeleton:
    """Path-counting matrices for j <= n with a per-state output label on j."""

    system: NumerationSystem
    v: Vector
    mats: dict
    labels: tuple  # output of the j-track DFAO, or None where j <= n fails

    def linrep(self, target: int) -> LinRep:
        w = tuple(int(lab == target) for lab in self.labels)
        return LinRep(self.system, self.v, self.mats, w, {"target": target})


def sum_skeleton(d: Dfao) -> SumSkeleton:
    """Two-track automaton for (n, j) with j <= n, labelled by d(j), j projected away.

    The (n, j) automaton is deterministic, so each j <= n is one path on the
    word of n; counting projected transitions (never determinising) keeps
    that multiplicity.
    """
    d = d.to_msd()
    sys = d.system
    if sys.is_lsd:
        raise LinRepError(f"unsupported system {sys.tag}")
    leq = automata.rel_leq(sys)  # (x, y) with x <= y; we feed (j, n)
    alphabet = automata.tuple_alphabet([sys, sys])  # (n_digit, j_digit)
    valid = automata.fib_valid([sys, sys]) if sys.is_fib else None

    def succ(s, i):
        n_d, j_d = alphabet[i]
        nxt = (leq.step(s[0], (j_d, n_d)), d.delta[s[1]][j_d])
        if valid is not None:
            nxt += (valid.delta[s[2]][i],)
        return nxt

    start = (leq.initial, d.initial) + ((valid.initial,) if valid is not None else ())

    def label(s):
        ok = s[0] in leq.accepting and (valid is None or s[2] in valid.accepting)
        return d.output[s[1]] if ok else None

    raw = automata.explore(alphabet, start, succ, lambda s: False)
    states = _bfs_states(alphabet, start, succ)
    dfa, labels = automata.minimize_labeled(raw, [label(s) for s in states])

    # drop states from which no labelled state is reachable
    live = {q for q, lab in enumerate(labels) if lab is not None}
    changed = True
    while changed:
        changed = False
        for q in range(dfa.n_states):
            if q not in live and any(t in live for t in dfa.delta[q]):
                live.add(q)
                changed = True
    keep = [q for q in range(dfa.n_states) if q in live]
    pos = {q: i for i, q in enumerate(keep)}
    dim = len(keep)
    mats = {}
    for n_d in sys.digits:
        m = [[0] * dim for _ in range(dim)]
        for q in keep:
            for i, (a, _) in enumerate(alphabet):
                if a == n_d:
                    t = dfa.delta[q][i]
                    if t in pos:
                        m[pos[q]][pos[t]] += 1
        mats[n_d] = m
    if dfa.initial not in pos:
        # nothing is ever counted
        return SumSkeleton(sys, (0,), {n_d: [[0]] for n_d in sys.digits}, (None,))
    v = tuple(int(i == pos[dfa.initial]) for i in range(dim))
    return SumSkeleton(sys, v, mats, tuple(labels[q] for q in keep))


def _bfs_states(alphabet, start, succ) -> list:
    order, seen = [start], {start}
    i = 0
    while i < len(order):
        for a in range(len(alphabet)):
            t = succ(order[i], a)
            if t not in seen:
                seen.add(t)
                order.append(t)
        i += 1
    return order


def derive_sum_linrep(d: Dfao, target: int) -> LinRep:
    """Linear representation of n -> #{j <= n : d(j) = target}."""
    return sum_skeleton(d).linrep(target)


def derive_running_sum(d: Dfao) -> LinRep:
    """Linear representation of the running sum sum_{j <= n} d(j)."""
    sk = sum_skeleton(d)
    w = tuple(lab if lab else 0 for lab in sk.labels)
    return LinRep(sk.system, sk.v, sk.mats, w, {"target": "sum"})


def combine(lr1: LinRep, lr2: LinRep, c1=1, c2=1) -> LinRep:
    """Representation of c1 * lr1 + c2 * lr2."""
    if lr1.system != lr2.system:
        raise LinRepError("cannot combine representations over different systems")
    c1, c2 = exact(c1), exact(c2)
    if lr1.v == lr2.v and lr1.mats == lr2.mats:
        w = tuple(exact(c1 * x + c2 * y) for x, y in zip(lr1.w, lr2.w))
        return LinRep(lr1.system, lr1.v, lr1.mats, w)
    digits = sorted(set(lr1.mats) & set(lr2.mats))
    mats = {d: block_diag(lr1.mats[d], lr2.mats[d]) for d in digits}
    v = lr1.v + lr2.v
    w = tuple(exact(c1 * x) for x in lr1.w) + tuple(exact(c2 * x) for x in lr2.w)
    return LinRep(lr1.system, v, mats, w)


def zero_linrep(system: NumerationSystem) -> LinRep:
    return LinRep(system, (0,), {d: ((0,),) for d in system.digits}, (0,))


def value_linrep(system: NumerationSystem) -> LinRep:
    """n -> n itself, as a linear representation (works for padded words too).

    Base k keeps (value, 1). Zeckendorf keeps (V, V', 1) where V' is the
    value with every weight shifted one Fibonacci number up:
    V(wd) = V'(w) + d and V'(wd) = V(w) + V'(w) + 2d.
    """
    if system.is_fib:
        mats = {d: ((0, 1, 0), (1, 1, 0), (d, 2 * d, 1)) for d in (0, 1)}
        return LinRep(system, (0, 0, 1), mats, (1, 0, 0))
    k = system.k
    mats = {d: ((k, 0), (d, 1)) for d in system.digits}
    return LinRep(system, (0, 1), mats, (1, 0))


# -- pattern families -------------------------------------------------------

@dataclass(frozen=True)
class PatternMatrices:
    left: Vector    # v . M[prefix]
    block: Matrix   # M[block]
    right: Vector   # M[suffix] . w

    def value(self, r: int):
        vec = self.left
        # repeated vector-matrix products beat matrix powers at these sizes
        for _ in range(r):
            vec = vecmat(vec, self.block)
        return dot(vec, self.right)


def word_matrix(lr: LinRep, digits: Sequence[int]) -> Matrix:
    return reduce(matmul, (lr.matrix(d) for d in digits), identity(lr.dim))


def pattern_matrix(lr: LinRep, p: PatternNumeral, check: int = 12) -> PatternMatrices:
    if p.system != lr.system:
        raise LinRepError("pattern and representation use different systems")
    pm = PatternMatrices(vecmat(lr.v, word_matrix(lr, p.prefix)), word_matrix(lr, p.block),
                         matvec(word_matrix(lr, p.suffix), lr.w))
    if lr.complete:
        for r in range(check + 1):
            expected = lr.value_of_digits(to_digits(from_digits(expand_pattern(p, r)), lr.system).digits)
            if pm.value(r) != expected:
                raise LinRepError(f"pattern evaluation disagrees with the numeral at r={r}")
    return pm


def pattern_values(lr: LinRep, p: PatternNumeral, r: int):
    return pattern_matrix(lr, p, check=0).value(r)


# -- JSON -------------------------------------------------------------------

def _num_text(x) -> str:
    return str(exact(x))


def linrep_to_json(lr: LinRep) -> str:
    doc = {k: v for k, v in lr.meta.items() if k not in ("system", "v", "mats", "w")}
    doc.update({
        "system": lr.system.tag,
        "v": [_num_text(x) for x in lr.v],
        "mats": {str(d): [[_num_text(x) for x in r] for r in m] for d, m in sorted(lr.mats.items())},
        "w": [_num_text(x) for x in lr.w],
    })
    return json.dumps(doc, indent=1) + "\n"


def linrep_from_json(text: str | dict) -> LinRep:
    doc = json.loads(text) if isinstance(text, str) else text
    try:
        system = parse_system(doc["system"])
        mats = {int(d): [[exact(str(x)) for x in r] for r in m] for d, m in doc["mats"].items()}
        v = [exact(str(x)) for x in doc["v"]]
        w = [exact(str(x)) for x in doc["w"]]
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise LinRepError(f"malformed linear representation: {exc}") from None
    meta = {k: doc[k] for k in doc if k not in ("system", "v", "mats", "w")}
    return LinRep(system, v, mats, w, meta)


# -- shipped fixtures -------------------------------------------------------

FIXTURES = ("tmsum", "pd", "mw", "pf", "le", "bs", "sc", "rs", "ftm")


def load_fixture(name: str) -> LinRep:
    """A transcribed published representation (some list only a subset of matrices)."""
    from importlib import resources
    if name not in FIXTURES:
        raise LinRepError(f"no fixture {name!r}; available: {', '.join(FIXTURES)}")
    text = resources.files("syncsum").joinpath("data", "fixtures", f"{name}.json").read_text()
    return linrep_from_json(text)
