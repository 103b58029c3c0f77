import dataclasses
import random
from functools import lru_cache

import pytest

from syncsum import logic as G
from syncsum.learn import learn_catalog
from syncsum.numeration import FIB, MSD2, MSD3
from syncsum.sequences import Dfao, catalog, ind_oracle, oracle, running_sum_oracle, running_sums

T = catalog("T")


@lru_cache(maxsize=None)
def tmsum():
    res = learn_catalog("T")
    assert res.proved
    # attach the definition so constructions on top of it can be replayed
    return dataclasses.replace(res.predicate, semantics=lambda env: env["s"] == running_sum_oracle("T", env["n"]),
                               expr="tmsum")


def test_lift():
    p = G.lift(T, 1)
    assert [n for n in range(8) if p(n)] == [1, 2, 4, 7]
    zero = Dfao(MSD2, ((0, 0),), (0,))
    assert G.witness(G.lift(zero, 1)) is None


def test_from_rel_and_conjunction():
    lt = G.p_lt("n", "m", MSD2)
    assert lt(3, 5) and not lt(5, 3)
    both = G.p_and(G.lift(T, 1), lt)
    assert both.names == ("n", "m")
    assert both(1, 2)
    assert not both(3, 4)  # T(3) = 0


def test_exists_and_not():
    eq = G.p_eq("n", "s", MSD2)
    every = G.p_exists(eq, "s")
    assert all(every(n) for n in range(100))
    nothing = G.p_false([("n", MSD2)])
    everything = G.p_not(nothing)
    assert everything(0) and everything(12345)
    with pytest.raises(G.LogicError):
        G.p_exists(eq, "zz")


def test_mismatched_track_systems_rejected():
    with pytest.raises(G.LogicError):
        G.p_and(G.p_eq("n", "s", MSD2), G.p_eq("n", "s", MSD3))


@pytest.mark.parametrize("build", [
    lambda: G.p_eq("x", "y", MSD2),
    lambda: G.p_lt("x", "y", MSD3),
    lambda: G.p_succ("x", "y", MSD2),
    lambda: G.p_plus_const("x", "y", 3, MSD2),
    lambda: G.p_leq("x", "y", FIB),
    lambda: G.p_exists(G.p_and(G.p_lt("x", "z", MSD2), G.lift(T, 1, "z")), "z"),
    lambda: G.p_forall(G.p_or(G.p_leq("z", "x", MSD2), G.p_lt("y", "z", MSD2)), "z"),
])
def test_semantic_replay(build):
    p = build()
    assert G.semantic_mismatches(p, 96 if p.arity == 2 else 512) == []


def test_semantic_replay_one_track_512():
    p = G.p_and(G.lift(T, 1), G.p_not(G.lift(catalog("pd"), 0)))
    assert G.semantic_mismatches(p, 512) == []


def test_padding_invariance_of_learned_predicate():
    p = tmsum()
    assert G.padding_invariant(p)
    sums = running_sums("T", 1 << 16)
    rng = random.Random(0)
    for _ in range(10_000):
        n = rng.randrange(1 << 16)
        s = sums[n] + rng.choice((0, 0, 1, -1))
        s = max(s, 0)
        verdict = p(n, s)
        assert p.dfa.accepts(p.encode((n, s), pad=rng.randint(1, 4))) == verdict


def test_de_morgan():
    a = G.lift(T, 1)
    b = G.p_lt("n", "m", MSD2)
    left = G.p_not(G.p_and(a, b))
    right = G.p_or(G.p_not(a), G.p_not(b))
    assert G.equivalent(left, right)


def test_verify_functional():
    assert G.verify_functional(tmsum()).verdict
    leq = G.reorder(G.p_leq("s", "n", MSD2), ["n", "s"])
    rep = G.verify_functional(leq)
    assert not rep.verdict
    assert rep.counterexample == (1, 0, 1)
    assert G.verify_functional(G.p_eq("n", "s", MSD2)).verdict


def test_verify_total():
    assert G.verify_total(tmsum()).verdict
    rep = G.verify_total(G.p_false([("n", MSD2), ("s", MSD2)]))
    assert not rep.verdict and rep.counterexample == (0,)
    assert G.verify_total(G.p_eq("n", "s", MSD2)).verdict


def test_verify_inductive():
    assert G.verify_inductive(tmsum(), T).verdict
    rep = G.verify_inductive(G.p_eq("n", "s", MSD2), T)
    assert not rep.verdict
    n, s, u = rep.counterexample
    # the engine's witness is a genuine failure of the step
    assert s == n and oracle("T", n + 1) == u and (s + u) != n + 1


def test_verify_inductive_rejects_fibonacci():
    p = G.p_eq("n", "s", FIB)
    with pytest.raises(G.LogicError, match="fibonacci"):
        G.verify_inductive(p, catalog("ftm"))


def test_cansum_inductive():
    res = learn_catalog("CA")
    assert res.proved
    assert [s.tag for s in res.predicate.systems] == ["msd_3", "msd_2"]
    assert G.verify_inductive(res.predicate, catalog("CA")).verdict


def test_index_from_sum():
    A = G.index_from_sum(tmsum(), T)
    assert A(0, 1) and A(1, 2) and A(2, 4) and A(3, 7)
    assert not A(0, 2)
    ind = ind_oracle("T", 1000)
    for n in range(0, 1000, 7):
        assert A(n, ind[n])
        assert not A(n, ind[n] + 1)


def test_index_of_zero_sequence_is_empty():
    zero = Dfao(MSD2, ((0, 0),), (0,))
    B = G.p_and(G.p_const("s", 0, MSD2), G.p_true([("n", MSD2)]))
    B = G.reorder(B, ["n", "s"])
    assert G.witness(G.index_from_sum(B, zero)) is None


def test_sum_from_index_and_roundtrip():
    A = G.index_from_sum(tmsum(), T)
    B = G.sum_from_index(A, T)
    assert B(8, 5)
    assert B(0, 0)
    for k in range(300):
        assert B(k, running_sum_oracle("T", k))
    assert G.equivalent(G.index_from_sum(B, T), A)


def test_index_sum_constructions_replay():
    A = G.index_from_sum(tmsum(), T)
    assert G.semantic_mismatches(A, 40) == []
    B = G.sum_from_index(A, T)
    assert G.semantic_mismatches(B, 24) == []


def test_sum_from_index_before_first_one():
    # d(0) = 0 so (0, 0) is accepted; the sum stays 0 until the first 1
    A = G.index_from_sum(tmsum(), T)
    B = G.sum_from_index(A, T)
    assert B(0, 0) and not B(0, 1)


def test_predicate_text_roundtrip(tmp_path):
    p = tmsum()
    text = G.dump_predicate(p)
    q = G.parse_predicate(text)
    assert q.names == ("n", "s")
    assert G.equivalent(p, q)
