import itertools
import random

import pytest

from syncsum import automata as A
from syncsum.numeration import FIB, MSD2, MSD3, from_digits


def decode(word, systems):
    return tuple(from_digits([c[i] for c in word], s, allow_noncanonical=True) for i, s in enumerate(systems))


def fib_ok(word, systems):
    for i, s in enumerate(systems):
        if s.is_fib and "11" in "".join(str(c[i]) for c in word):
            return False
    return True


def all_words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


@pytest.mark.parametrize("sysm", [MSD2, MSD3, FIB])
@pytest.mark.parametrize("rel,op", [(A.rel_eq, lambda x, y: x == y), (A.rel_lt, lambda x, y: x < y),
                                    (A.rel_leq, lambda x, y: x <= y)])
def test_comparisons_match_arithmetic(sysm, rel, op):
    d = rel(sysm)
    systems = [sysm, sysm]
    for w in all_words(d.alphabet, 5 if sysm.k == 2 else 3):
        expect = fib_ok(w, systems) and op(*decode(w, systems))
        assert d.accepts(w) == expect


@pytest.mark.parametrize("k", [2, 3])
def test_adder(k):
    d = A.rel_add(k)
    sysm = MSD2 if k == 2 else MSD3
    for w in all_words(d.alphabet, 4 if k == 2 else 3):
        x, y, z = decode(w, [sysm] * 3)
        assert d.accepts(w) == (x + y == z)


def test_successor_and_constant():
    s = A.rel_succ(MSD2)
    for w in all_words(s.alphabet, 6):
        x, y = decode(w, [MSD2, MSD2])
        assert s.accepts(w) == (y == x + 1)
    c = A.rel_const(5, MSD2)
    accepted = {from_digits([x[0] for x in w], MSD2) for w in all_words(c.alphabet, 6) if c.accepts(w)}
    assert accepted == {5}


def test_no_fibonacci_adder():
    with pytest.raises(A.AutomatonError):
        A.rel_add(FIB)


def random_dfa(rng, alphabet, n):
    delta = [[rng.randrange(n) for _ in alphabet] for _ in range(n)]
    acc = {q for q in range(n) if rng.random() < 0.4}
    return A.Dfa(alphabet, delta, 0, acc)


def test_minimize_preserves_language_and_is_canonical():
    rng = random.Random(1)
    alphabet = ("a", "b")
    for _ in range(40):
        d = random_dfa(rng, alphabet, rng.randint(1, 7))
        m = A.minimize(d)
        assert m.n_states <= d.n_states
        for w in all_words(alphabet, 7):
            assert m.accepts(w) == d.accepts(w)
        # a renamed copy minimizes to the identical table
        perm = list(range(d.n_states))
        rng.shuffle(perm)
        inv = {p: i for i, p in enumerate(perm)}
        shuffled = A.Dfa(alphabet, [[inv[d.delta[perm[i]][j]] for j in range(2)] for i in range(d.n_states)],
                         inv[d.initial], {inv[q] for q in d.accepting})
        assert A.minimize(shuffled).delta == m.delta


def test_boolean_operations_and_equivalence():
    rng = random.Random(2)
    alphabet = (0, 1)
    for _ in range(25):
        a = random_dfa(rng, alphabet, 4)
        b = random_dfa(rng, alphabet, 3)
        for mode, op in (("and", all), ("or", any)):
            p = A.product(a, b, mode)
            for w in all_words(alphabet, 6):
                assert p.accepts(w) == op([a.accepts(w), b.accepts(w)])
        c = A.complement(a)
        assert A.is_empty(A.product(a, c, "and"))
        w = A.distinguishing_word(a, b)
        if w is None:
            assert A.equivalent(a, b)
        else:
            assert a.accepts(w) != b.accepts(w)


def test_shortlex_witness():
    d = A.rel_lt(MSD2)
    # shortest: x = 0, y = 1 -> single column (0, 1)
    assert A.find_word(d) == ((0, 1),)
    assert A.find_word(A.empty((0, 1))) is None


def test_reverse_and_determinize():
    rng = random.Random(3)
    for _ in range(20):
        d = random_dfa(rng, (0, 1), 5)
        r = A.minimize(A.determinize(A.reverse(d)))
        for w in all_words((0, 1), 6):
            assert r.accepts(w) == d.accepts(tuple(reversed(w)))


def test_text_format_roundtrip():
    d = A.rel_add(2)
    text = A.dump_automaton(d, [MSD2] * 3)
    parsed = A.parse_automaton(text)
    assert A.equivalent(parsed.dfa, d)
    assert [s.tag for s in parsed.systems] == ["msd_2"] * 3
    with pytest.raises(A.AutomatonError):
        A.parse_automaton("state 0 1\n")
