import numpy as np
import pytest

from syncsum import learn as Ln
from syncsum.logic import verify_functional
from syncsum.sequences import catalog, oracle_values


def brute_sums(name, count):
    return np.cumsum(np.array(oracle_values(name, count), dtype=np.int64))


def test_tmsum_is_proved():
    res = Ln.learn_catalog("T")
    assert res.outcome == "proved"
    assert res.predicate(8, 5)
    assert [r.verdict for r in res.reports] == [True, True, True]


@pytest.mark.parametrize("name", ["CA", "sb", "ttm", "gamma"])
def test_other_section_four_sums_are_proved(name):
    assert Ln.learn_catalog(name).proved


@pytest.mark.parametrize("name", ["T", "gamma"])
def test_soundness_replay(name):
    res = Ln.learn_catalog(name)
    sums = brute_sums(name, 1 << 16)
    p = res.predicate
    for n in range(1 << 16):
        assert p(n, int(sums[n]))


def test_monotone_state_counts_and_reproducible_transcript():
    a = Ln.learn_catalog("ttm", seed=5)
    b = Ln.learn_catalog("ttm", seed=5)
    assert a.transcript_text() == b.transcript_text()
    counts = a.stats["states_per_round"]
    assert counts == sorted(counts)


def test_rudin_shapiro_diverges():
    oracle, d = Ln.oracle_for("rs")
    res = Ln.learn_sync(oracle, d, max_states=64)
    assert res.outcome == "diverged"
    tr = Ln.counterexample_trace(res, res.last_counterexample)
    assert not tr.agree


def test_counterexample_trace():
    oracle, d = Ln.oracle_for("T")
    # a one-state hypothesis accepting everything is wrong on (2, 1)
    from syncsum import automata as A
    h = A.universal(oracle.alphabet)
    tr = Ln.counterexample_trace(h, (2, 1), oracle)
    assert tr.decoded == (2, 1) and tr.oracle is False and tr.hypothesis is True
    res = Ln.learn_catalog("T")
    for n in range(64):
        assert Ln.counterexample_trace(res, (n, oracle.value(n))).agree


def test_fibonacci_sum_is_not_claimed_proved():
    oracle, d = Ln.oracle_for("ftm")
    res = Ln.learn_sync(oracle, d, max_states=64)
    assert res.outcome in ("diverged", "evaluation-verified")
    assert res.outcome != "proved"


def test_membership_oracle():
    oracle, _ = Ln.oracle_for("T")
    assert oracle(oracle.encode(8, 5))
    assert not oracle(oracle.encode(8, 4))
    assert oracle(((0, 0),) + oracle.encode(8, 5))
    with pytest.raises(Ln.LearnError):
        Ln.MembershipOracle(oracle.f, (catalog("CA").system, catalog("CA").system))
    with pytest.raises(Ln.LearnError):
        Ln.learn_sync(oracle, None, max_states=0)


def test_candidate_check_uses_verification():
    res = Ln.learn_catalog("sb")
    assert verify_functional(res.predicate).verdict
