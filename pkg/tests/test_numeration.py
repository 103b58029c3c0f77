import itertools

import pytest
from hypothesis import given, strategies as st

from syncsum.numeration import (FIB, LSD2, MSD2, MSD3, NumerationError, Numeral, align, base, expand_pattern,
                                format_numeral, format_pattern, from_digits, parse_numeral, parse_pattern,
                                parse_system, pattern_value, to_digits)


def zeckendorf_by_enumeration(limit):
    """Canonical Zeckendorf words listed in shortlex order: the i-th one represents i."""
    out = [()]
    length = 1
    while len(out) < limit:
        for w in itertools.product((0, 1), repeat=length):
            if w[0] == 1 and "11" not in "".join(map(str, w)):
                out.append(w)
        length += 1
    return out[:limit]


def test_zeckendorf_matches_enumeration():
    for n, w in enumerate(zeckendorf_by_enumeration(600)):
        assert to_digits(n, FIB).digits == w


def test_small_values():
    assert to_digits(0, MSD2).digits == ()
    assert to_digits(6, MSD2).digits == (1, 1, 0)
    assert to_digits(16, FIB).digits == (1, 0, 0, 1, 0, 0)  # 13 + 3
    assert from_digits((0, 0, 1, 0, 1), MSD2) == 5


@given(st.integers(0, 10 ** 30), st.sampled_from([MSD2, MSD3, base(13), FIB, LSD2]))
def test_roundtrip(n, sysm):
    w = to_digits(n, sysm)
    assert from_digits(w) == n
    assert parse_numeral(format_numeral(w)) == w


@given(st.integers(0, 10 ** 12), st.integers(0, 5))
def test_leading_zeros_do_not_change_value(n, k):
    w = to_digits(n, FIB).digits
    assert from_digits((0,) * k + w, FIB) == n


def test_noncanonical_fibonacci_rejected():
    with pytest.raises(NumerationError):
        from_digits((1, 1), FIB)
    assert from_digits((1, 1), FIB, allow_noncanonical=True) == 3


def test_text_forms():
    assert parse_numeral("msd_2:10101").value == 21
    assert parse_numeral("msd_13:1_12_0").value == 13 * 13 + 12 * 13
    assert format_numeral(to_digits(6, LSD2)) == "lsd_2:011"
    assert parse_numeral("fib:").value == 0
    assert parse_system("fib") == FIB
    with pytest.raises(NumerationError):
        parse_system("msd_1")
    with pytest.raises(NumerationError):
        parse_numeral("msd_2:102")


def test_align_pads_at_the_msd_end():
    al = align([to_digits(5, MSD2), to_digits(1, MSD2)])
    assert al.words == ((1, 0, 1), (0, 0, 1))
    assert al.columns() == [(1, 0), (0, 0), (1, 1)]


def test_patterns():
    p = parse_pattern("(10)^r 1", MSD2)
    assert [pattern_value(p, r) for r in range(4)] == [1, 5, 21, 85]
    assert format_pattern(p) == "(10)^r 1"
    le = parse_pattern("(1_1_1)^r", base(13))
    assert pattern_value(le, 1) == (13 ** 3 - 1) // 12
    ftm = parse_pattern("(100100)^r", FIB)
    assert pattern_value(ftm, 1) == 16
    with pytest.raises(NumerationError):
        expand_pattern(parse_pattern("(11)^r", FIB), 1)
    with pytest.raises(NumerationError):
        parse_pattern("10", MSD2)


def test_numeral_canonical():
    assert Numeral(MSD2, (0, 0, 1)).canonical().digits == (1,)
