import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from syncsum import analysis as An
from syncsum import linrep as L
from syncsum.numeration import MSD2, parse_pattern, pattern_value
from syncsum.sequences import catalog, running_sum_oracle, running_sums

P = An.Polynomial
x = P.x()


def fixture_block(name, word):
    lr = L.load_fixture(name)
    return L.word_matrix(lr, parse_pattern(f"({word})^r", lr.system).block)


# -- polynomials ------------------------------------------------------------

def test_polynomial_text_and_arithmetic():
    p = x * (x - 4) * (x - 1) ** 2
    assert str(p) == "x^4 - 6x^3 + 9x^2 - 4x"
    assert str(P([Fraction(1, 2), 0, -1])) == "-x^2 + 1/2"
    assert p.multiplicity(1) == 2 and p.multiplicity(4) == 1 and p.multiplicity(2) == 0
    assert p.derivative() == 4 * x ** 3 - 18 * x ** 2 + 18 * x - 4
    assert An.poly_gcd(p, p.derivative()) == x - 1


polys = st.lists(st.integers(-9, 9), min_size=1, max_size=6).map(P)


@given(polys, polys.filter(lambda q: not q.is_zero()))
@settings(max_examples=80)
def test_divmod_identity(a, b):
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(polys, st.integers(-5, 5))
@settings(max_examples=50)
def test_shift(p, k):
    for t in range(-3, 4):
        assert p.shift(k)(t) == p(t + k)


# -- minimal polynomials -----------------------------------------------------

def test_minimal_polynomials_of_fixtures():
    assert str(An.minimal_polynomial(fixture_block("pd", "10"))) == "x^4 - 6x^3 + 9x^2 - 4x"
    assert str(An.minimal_polynomial(fixture_block("sc", "1"))) == "x^3 - 5x^2 + 7x - 3"
    assert An.minimal_polynomial(L.identity(3)) == x - 1


@given(st.lists(st.integers(-3, 3), min_size=9, max_size=9))
@settings(max_examples=60)
def test_minimal_polynomial_is_minimal(entries):
    m = (tuple(entries[0:3]), tuple(entries[3:6]), tuple(entries[6:9]))
    p = An.minimal_polynomial(m)
    assert p.lead == 1 and p.annihilates(m)
    # removing any rational root breaks annihilation
    for r in range(-12, 13):
        if p.multiplicity(r):
            assert not (p // (x - r)).annihilates(m)
    # and it divides the characteristic polynomial, computed independently with numpy
    char = np.poly(np.array(m, dtype=float))
    charp = P([round(c) for c in reversed(char)])
    assert An.poly_divides(p, charp)


def test_repeated_root():
    assert An.repeated_nonzero_root(x ** 4 - 6 * x ** 3 + 9 * x ** 2 - 4 * x) == x - 1
    assert An.repeated_nonzero_root(x ** 2 - 2) is None
    mw = An.minimal_polynomial(L.matpow(L.load_fixture("mw").mats[1], 2))
    assert An.repeated_nonzero_root(mw) == x - 1
    assert An.repeated_nonzero_root(x ** 3) is None


# -- recurrences and closed forms ----------------------------------------------

def test_verify_recurrence():
    lr = L.derive_running_sum(catalog("pd"))
    pm = L.pattern_matrix(lr, parse_pattern("(10)^r 1", MSD2))
    p = An.minimal_polynomial(pm.block)
    assert An.verify_recurrence(pm.value, p, 30)
    assert not An.verify_recurrence(lambda r: r * r, (x - 1) ** 2, 10)
    assert An.verify_recurrence(lambda r: r * r, (x - 1) ** 3, 10)
    assert An.verify_recurrence(An.fib, An.GOLDEN, 200)


def brute_sum_along(name, pattern_text, system, r):
    return running_sum_oracle(name, pattern_value(parse_pattern(pattern_text, system), r))


@pytest.mark.parametrize("name", ["pd", "mw", "pf", "sc", "LE"])
def test_pattern_closed_forms(name):
    t, spots = An.certify_pattern_form(name)
    assert t.ok and t.replay()
    assert spots[-1][0] == 50
    # the first values also agree with brute-force sums
    pat, cf, start = An.PATTERN_FORMS[name]
    lr = An.running_sum_linrep(name)
    for r in range(start, start + 3):
        if pattern_value(parse_pattern(pat, lr.system), r) > 10 ** 6:
            break
        assert cf(r) == brute_sum_along(name, pat, lr.system, r)


def test_pd_closed_form_in_terms_of_r():
    for r in range(20):
        assert An.PATTERN_FORMS["pd"][1](r) == Fraction(2 * 4 ** (r + 1) + 3 * r + 1, 9)


def test_closed_form_preconditions_and_mismatch():
    g = lambda r: 3 ** r  # noqa: E731
    with pytest.raises(An.PreconditionError):
        An.certify_closed_form(g, An.ClosedForm([([1, 1], 3)]), x - 3)  # r*3^r needs (x-3)^2
    t = An.certify_closed_form(g, An.ClosedForm([([2], 3)]), x - 3)
    assert not t.ok and t.reason == "initial values differ"
    with pytest.raises(An.PreconditionError):
        An.certify_closed_form(lambda r: r * r, An.ClosedForm([([0], 1)]), x - 1)


def test_transcript_replay_detects_tampering():
    t, _ = An.certify_pattern_form("mw")
    assert t.replay()
    t.values[1] = (1, t.values[1][1] + 1, t.values[1][2])
    assert not t.replay()


def test_ftm_pattern_form():
    t, spots = An.certify_ftm()
    assert t.ok
    assert An.ftm_a(1) == 5 and An.ftm_b(1) == 2
    assert running_sum_oracle("ftm", 16) == 7


# -- integer formulas -----------------------------------------------------------

def test_rs_formula():
    assert An.rs_pow2_formula(4) == 6 == running_sum_oracle("rs", 15)
    assert An.verify_integer_formula("rs_pow2")


def test_bs_formula():
    rep = An.verify_integer_formula("bs_pow2")
    assert rep.ok
    sums = running_sums("bs", 2 ** 12 + 1)
    for k in range(13):
        assert An.bs_pow2_formula(k) == sums[2 ** k]
    # the closed form with phi and psi, in floating point, as a cross-check
    phi, psi, s5 = (1 + 5 ** 0.5) / 2, (1 - 5 ** 0.5) / 2, 5 ** 0.5
    for k in range(30):
        val = 0.5 + (-1) ** k / 2 + (3 * s5 / 10 + 0.5) * phi ** k + (0.5 - 3 * s5 / 10) * psi ** k
        assert math.isclose(val, An.bs_pow2_formula(k), rel_tol=1e-12)


def test_le_and_ftm_formulas():
    assert An.verify_integer_formula("le_pattern")
    assert An.verify_integer_formula("ftm_pattern")
    with pytest.raises(An.AnalysisError):
        An.verify_integer_formula("nope")


def test_fibonacci_identities():
    i = [(1, 14), (-18, 8), (1, 2)]
    ii = [(1, 14), (-6, 8), (-16, 7), (-16, 4), (5, 2)]
    assert An.fib_identity(i, 200) and An.fib_identity(ii, 200)
    assert An.poly_divides(An.GOLDEN, x ** 12 - 18 * x ** 6 + 1)
    assert An.shift_polynomial(ii) == x ** 12 - 6 * x ** 6 - 16 * x ** 5 - 16 * x ** 2 + 5
    assert not An.fib_identity([(1, 14), (-17, 8), (1, 2)], 5)


# -- certificates -------------------------------------------------------------

@pytest.mark.parametrize("name,slope", [("pd", Fraction(1, 3)), ("mw", 1), ("pf", 1), ("LE", 3),
                                        ("sc", Fraction(1, 2)), ("ftm", 1)])
def test_certificates(name, slope):
    c = An.standard_certificate(name)
    assert c.residual[1] == slope
    assert c.recheck()
    assert "not synchronised" in c.narrative
    doc = json.loads(c.to_json())
    assert doc["method"] == "affine-residual"
    # residual re-derived by brute force for small r
    for r, val in c.spot_checks[:4]:
        n = pattern_value(parse_pattern(c.pattern, An.running_sum_linrep(name).system), r)
        if n > 10 ** 6:
            break
        assert val == c.sign * (c.alpha * n + c.delta - running_sum_oracle(name, n))


def test_wrong_alpha_is_refused():
    with pytest.raises(An.CertificateError):
        An.nonsync_certificate("pd", "(10)^r 1", Fraction(1, 2))
    with pytest.raises(An.CertificateError):
        An.nonsync_certificate("T", "(10)^r 1", Fraction(1, 2), Fraction(1, 2))


def test_formula_certificates():
    for name in ("rs", "bs"):
        c = An.formula_certificate(name)
        assert c.method == "integer-formula" and c.recheck()


def test_growth_scan():
    scan = An.growth_scan("T", 1.0, range(10, 15))
    assert An.growth_drift(scan) < 0.05
    # independent maximum from brute-force sums
    sums = np.array(running_sums("T", 2 ** 12 + 1)[1:], dtype=float)
    assert scan[12] == pytest.approx(max(sums / np.arange(1, 2 ** 12 + 1)))
