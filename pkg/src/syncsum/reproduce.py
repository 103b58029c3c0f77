"""Reproduction checks, one row per result, grouped by section id."""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from . import analysis as An
from . import learn as Ln
from . import linrep as L
from . import logic as G
from .numeration import parse_pattern
from .sequences import NAMES, catalog, ind_oracle, oracle_values, running_sums


@dataclass
class Row:
    section: str
    check: str
    claim: str
    passed: bool
    detail: str = ""
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"section": self.section, "check": self.check, "claim": self.claim,
                "passed": self.passed, "detail": self.detail, "seconds": round(self.seconds, 3)}


ALIASES = {"4.1": "5.1", "4.4": "5.4", "4.8": "5.8"}
SECTIONS = ("2", "3", "4", "5.1", "5.2", "5.3", "5.4", "5.5", "5.6", "5.7", "5.8")


def resolve(section: str) -> list[str]:
    if section == "all":
        return list(SECTIONS)
    section = ALIASES.get(section, section)
    if section == "5":
        return [s for s in SECTIONS if s.startswith("5.")]
    if section not in SECTIONS:
        raise KeyError(f"unknown section {section!r}; choose from all, {', '.join(SECTIONS)}")
    return [section]


def _row(section, check, claim, fn: Callable[[], tuple[bool, str]]) -> Row:
    t0 = time.perf_counter()
    try:
        ok, detail = fn()
    except Exception as exc:  # a crashing check is a failing row, not a crashed report
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    return Row(section, check, claim, bool(ok), detail, time.perf_counter() - t0)


@lru_cache(maxsize=None)
def learned(name: str) -> Ln.LearnResult:
    return Ln.learn_catalog(name)


# -- individual checks ---------------------------------------------------------

def check_catalog(limit: int = 10 ** 5):
    from .sequences import dfao_values
    bad = [n for n in NAMES if list(dfao_values(catalog(n), limit)) != oracle_values(n, limit)]
    return not bad, f"{len(NAMES)} sequences, n < {limit}" + (f"; mismatches: {bad}" if bad else "")


def check_linreps(limit: int = 2 ** 14):
    bad = []
    for n in NAMES:
        lr = L.derive_running_sum(catalog(n).to_msd())
        if L.eval_linrep_range(lr, limit + 1) != running_sums(n, limit + 1):
            bad.append(n)
    return not bad, f"n <= {limit}" + (f"; mismatches: {bad}" if bad else "")


def check_sum_T():
    vals = running_sums("T", 10)
    return tuple(vals) == (0, 1, 2, 2, 3, 3, 3, 4, 5, 5), " ".join(map(str, vals))


def check_ind_T():
    expect = (1, 2, 4, 7, 8, 11, 13, 14, 16)
    got = tuple(ind_oracle("T", 9))
    res = learned("T")
    if not res.proved:
        return False, "tmsum was not proved"
    A_ = G.index_from_sum(res.predicate, catalog("T"))
    via_pred = tuple(next(k for k in range(64) if A_(n, k)) for n in range(9))
    return got == expect == via_pred, f"oracle {got}; index predicate {via_pred}"


def check_learn(name: str):
    res = learned(name)
    verdicts = ", ".join(str(r) for r in res.reports)
    return res.proved, f"{res.outcome}; {res.stats['states']} states; {verdicts}"


def check_roundtrip():
    res = learned("T")
    T = catalog("T")
    A_ = G.index_from_sum(res.predicate, T)
    B = G.sum_from_index(A_, T)
    A2 = G.index_from_sum(B, T)
    ok = G.equivalent(A_, A2) and G.equivalent(B, G.reorder(G.rename(res.predicate, {"n": "k"}), ["k", "s"]))
    return ok, f"A has {A_.n_states} states, rebuilt sum predicate {B.n_states}"


def check_growth(name: str, beta: float):
    scan = An.growth_scan(name, beta)
    drift = An.growth_drift(scan)
    return drift < 0.05, f"max ratio {scan[20]:.6f} at N = 2^20; drift {drift:.4%}"


def check_minpoly(fixture: str, word: str, expect: str):
    lr = L.load_fixture(fixture)
    m = L.word_matrix(lr, parse_pattern(f"({word})^r", lr.system).block)
    p = An.minimal_polynomial(m)
    witness = An.repeated_nonzero_root(p)
    return str(p) == expect, f"{p}; repeated non-zero root factor {witness}"


def check_bs_annihilator():
    m = L.load_fixture("bs").mats[0]
    return An.BS_RECURRENCE.annihilates(m), f"minimal polynomial of M0: {An.minimal_polynomial(m)}"


def check_pattern_form(name: str):
    t, spots = An.certify_pattern_form(name)
    return t.ok and t.replay() and spots[-1][0] == 50, (
        f"recurrence degree {t.degree}, {t.degree + 1} initial values agree; spot checks to r = {spots[-1][0]}")


def check_certificate(name: str):
    c = An.standard_certificate(name)
    return c.residual[1] != 0 and c.recheck() and bool(c.narrative), (
        f"g(r) = {c.closed_form} for r >= {c.start}; pattern {c.pattern}, alpha {c.alpha}, delta {c.delta}")


def check_formula(name: str):
    rep = An.verify_integer_formula(name)
    return rep.ok, f"{len(rep.checked)} values checked" + (f"; {rep.notes}" if rep.notes else "")


def check_divergence(name: str):
    res = Ln.learn_sync(*Ln.oracle_for(name), max_states=64)
    return res.outcome == "diverged", f"{res.outcome} after {res.stats['rounds']} rounds"


def check_fib_identities():
    i = [(1, 14), (-18, 8), (1, 2)]
    ii = [(1, 14), (-6, 8), (-16, 7), (-16, 4), (5, 2)]
    ok = (An.fib_identity(i, 200) and An.fib_identity(ii, 200)
          and An.poly_divides(An.GOLDEN, An.shift_polynomial(i))
          and An.poly_divides(An.GOLDEN, An.shift_polynomial(ii)))
    return ok, f"r <= 200; x^2 - x - 1 divides {An.shift_polynomial(i)} and {An.shift_polynomial(ii)}"


def check_le_values():
    lr = L.derive_running_sum(catalog("LE"))
    got = tuple(L.eval_linrep(lr, (13 ** r - 1) // 12) for r in range(1, 7))
    return got == An.LE_FULL_VALUES, " ".join(map(str, got))


# -- section table ---------------------------------------------------------

def _rows_for(section: str) -> list:
    s = section
    if s == "2":
        return [
            (s, "dfao-vs-oracle", "each catalog automaton agrees with a direct definition for n < 10^5", check_catalog),
            (s, "linrep-vs-oracle", "derived running-sum representations agree with brute-force sums", check_linreps),
        ]
    if s == "3":
        return [
            (s, "sum_T", "running sum of Thue-Morse starts 0 1 2 2 3 3 3 4 5 5", check_sum_T),
            (s, "ind_T", "positions of the 1s of Thue-Morse start 1 2 4 7 8 11 13 14 16", check_ind_T),
        ]
    if s == "4":
        rows = [(s, f"learn-{n}", f"the running sum of {n} is synchronised; all three checks hold",
                 (lambda n=n: check_learn(n))) for n in ("T", "CA", "sb", "ttm", "gamma")]
        rows.append((s, "index-roundtrip", "sum and index predicates convert into each other exactly", check_roundtrip))
        rows.append((s, "growth-tmsum", "tmsum(n)/n stays bounded", lambda: check_growth("T", 1.0)))
        rows.append((s, "growth-cansum", "cansum(n)/n^(log 2/log 3) stays bounded",
                     lambda: check_growth("CA", An.CANSUM_BETA)))
        return rows
    if s == "5.1":
        return [
            (s, "minpoly", "block M1 M0 has minimal polynomial x^4 - 6x^3 + 9x^2 - 4x",
             lambda: check_minpoly("pd", "10", "x^4 - 6x^3 + 9x^2 - 4x")),
            (s, "closed form", "sum_pd((4^(r+1) - 1)/3) = (2 * 4^(r+1) + 3r + 1)/9", lambda: check_pattern_form("pd")),
            (s, "consequence", "2n/3 minus the running sum grows like r; the running sum is not synchronised",
             lambda: check_certificate("pd")),
        ]
    if s == "5.2":
        return [
            (s, "minpoly", "block M1^2 has minimal polynomial x^3 - 11x^2 + 19x - 9",
             lambda: check_minpoly("mw", "11", "x^3 - 11x^2 + 19x - 9")),
            (s, "closed form", "sum_mw((9^r - 1)/2) = n/2 - r", lambda: check_pattern_form("mw")),
            (s, "consequence", "n/2 minus the running sum equals r; not synchronised", lambda: check_certificate("mw")),
        ]
    if s == "5.3":
        return [
            (s, "minpoly", "block M1 M0 has minimal polynomial x^4 - 6x^3 + 9x^2 - 4x",
             lambda: check_minpoly("pf", "10", "x^4 - 6x^3 + 9x^2 - 4x")),
            (s, "closed form", "sum_pf((4^(r+1) - 1)/3) = (n + 1)/2 - r for r >= 1", lambda: check_pattern_form("pf")),
            (s, "consequence", "(n + 1)/2 minus the running sum equals r; not synchronised",
             lambda: check_certificate("pf")),
        ]
    if s == "5.4":
        return [
            (s, "minpoly", "M1 has the degree-6 minimal polynomial x^6 - 12x^5 - 12x^4 - 14x^3 + 12x^2 + 12x + 13",
             lambda: check_minpoly("le", "1", "x^6 - 12x^5 - 12x^4 - 14x^3 + 12x^2 + 12x + 13")),
            (s, "values", "sum_le((13^r - 1)/12) for r = 1..6 is 1, 16, 186, 2377, 30943, 402240", check_le_values),
            (s, "closed form", "sum_le((13^(3r) - 1)/12) = n + 3r", lambda: check_pattern_form("LE")),
            (s, "formula", "n + 3r checked directly for r <= 15", lambda: check_formula("le_pattern")),
            (s, "consequence", "the running sum minus n equals 3r; not synchronised", lambda: check_certificate("LE")),
        ]
    if s == "5.5":
        return [
            (s, "annihilator", "(x^2 - x - 1)(x^2 - 1) annihilates M0", check_bs_annihilator),
            (s, "formula", "sum_bs(2^k) follows the order-4 recurrence and the phi/psi closed form, k <= 60",
             lambda: check_formula("bs_pow2")),
            (s, "learner", "no synchronising automaton with at most 64 states is found",
             lambda: check_divergence("bs")),
        ]
    if s == "5.6":
        return [
            (s, "minpoly", "M1 has minimal polynomial x^3 - 5x^2 + 7x - 3",
             lambda: check_minpoly("sc", "1", "x^3 - 5x^2 + 7x - 3")),
            (s, "closed form", "sum_sc(3^r - 1) = (3^r - 2r - 1)/4", lambda: check_pattern_form("sc")),
            (s, "consequence", "n/2 minus the running sum equals r/2; not synchronised",
             lambda: check_certificate("sc")),
        ]
    if s == "5.7":
        return [
            (s, "minpoly", "M1 has minimal polynomial x^6 - 2x^5 - 3x^4 + 6x^3 + 2x^2 - 4x",
             lambda: check_minpoly("rs", "1", "x^6 - 2x^5 - 3x^4 + 6x^3 + 2x^2 - 4x")),
            (s, "formula", "sum_rs(2^k - 1) is 2^(k-1) minus 2^(k/2-1) or 2^((k-1)/2) by parity, k <= 40",
             lambda: check_formula("rs_pow2")),
            (s, "learner", "no synchronising automaton with at most 64 states is found",
             lambda: check_divergence("rs")),
        ]
    if s == "5.8":
        return [
            (s, "identities", "two Fibonacci identities with step 6 hold, via divisibility by x^2 - x - 1",
             check_fib_identities),
            (s, "closed form", "sum_ftm(n(r)) = a(r) + b(r) and floor(n/2) = a(r) + b(r) + r along (100100)^r",
             lambda: check_formula("ftm_pattern")),
            (s, "consequence", "n/2 minus the running sum equals r; not synchronised", lambda: check_certificate("ftm")),
        ]
    raise KeyError(section)


def run(section: str = "all", progress: Callable[[Row], None] | None = None) -> list[Row]:
    rows = []
    for s in resolve(section):
        for sec, check, claim, fn in _rows_for(s):
            row = _row(sec, check, claim, fn)
            rows.append(row)
            if progress:
                progress(row)
    return rows


def format_row(row: Row) -> str:
    mark = "PASS" if row.passed else "FAIL"
    return f"{mark}  {row.section:<4} {row.check:<18} {row.claim}  [{row.detail}] ({row.seconds:.2f}s)"


__all__ = ["Row", "run", "resolve", "format_row", "SECTIONS", "ALIASES"]
