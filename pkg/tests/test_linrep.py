import itertools

import pytest
from hypothesis import given, settings, strategies as st

from syncsum import linrep as L
from syncsum.numeration import FIB, MSD2, base, from_digits, parse_pattern, pattern_value
from syncsum.sequences import NAMES, catalog, oracle_values, running_sums


@pytest.mark.parametrize("name", NAMES)
def test_derived_running_sum_matches_brute_force(name):
    lr = L.derive_running_sum(catalog(name).to_msd())
    assert L.eval_linrep_range(lr, 2000) == running_sums(name, 2000)


@pytest.mark.parametrize("name", ["T", "pd", "bs", "LE", "ftm"])
def test_counting_one_value(name):
    d = catalog(name).to_msd()
    vals = oracle_values(name, 800)
    target = 1
    lr = L.derive_sum_linrep(d, target)
    counts = list(itertools.accumulate(int(v == target) for v in vals))
    assert [L.eval_linrep(lr, n) for n in range(800)] == counts


def test_padding_does_not_change_value():
    lr = L.derive_running_sum(catalog("T"))
    for n in range(200):
        digits = tuple(int(c) for c in bin(n)[2:]) if n else ()
        assert lr.value_of_digits((0, 0, 0) + digits) == lr.value_of_digits(digits)


@pytest.mark.parametrize("name", ["tmsum", "pd", "mw", "pf", "bs", "rs", "ftm"])
def test_complete_fixtures_match_brute_force(name):
    lr = L.load_fixture(name)
    seq = lr.meta["sequence"]
    assert lr.complete
    assert L.eval_linrep_range(lr, 1500) == running_sums(seq, 1500)


@pytest.mark.parametrize("name", ["le", "sc"])
def test_partial_fixtures_on_their_digits(name):
    lr = L.load_fixture(name)
    seq = lr.meta["sequence"]
    derived = L.derive_running_sum(catalog(seq))
    assert not lr.complete
    for length in range(7):
        digits = (1,) * length
        assert lr.value_of_digits(digits) == derived.value_of_digits(digits)


def test_tmsum_fixture_value():
    # running sum of Thue-Morse at 8 is 5
    assert L.eval_linrep(L.load_fixture("tmsum"), 8) == 5


@given(st.integers(0, 10 ** 40))
@settings(max_examples=50)
def test_value_linrep(n):
    assert L.eval_linrep(L.value_linrep(MSD2), n) == n
    assert L.eval_linrep(L.value_linrep(base(13)), n) == n
    assert L.eval_linrep(L.value_linrep(FIB), n) == n


def test_combine():
    a = L.derive_running_sum(catalog("T"))
    v = L.value_linrep(MSD2)
    diff = L.combine(v, a, 1, -1)
    for n in range(300):
        assert L.eval_linrep(diff, n) == n - L.eval_linrep(a, n)


def test_pattern_matrices():
    lr = L.derive_running_sum(catalog("pd"))
    p = parse_pattern("(10)^r 1", MSD2)
    pm = L.pattern_matrix(lr, p)
    for r in range(10):
        assert pm.value(r) == running_sums("pd", pattern_value(p, r) + 1)[-1]


def test_json_roundtrip_and_errors():
    lr = L.derive_running_sum(catalog("mw"))
    again = L.linrep_from_json(L.linrep_to_json(lr))
    assert all(L.eval_linrep(again, n) == L.eval_linrep(lr, n) for n in range(200))
    with pytest.raises(L.LinRepError):
        L.linrep_from_json('{"system": "msd_2"}')


def test_exact_rejects_floats():
    with pytest.raises(L.LinRepError):
        L.exact(0.5)
    assert from_digits((1, 0), MSD2) == 2
