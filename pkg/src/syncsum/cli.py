"""syncsum command line.

Exit codes: 0 ok, 1 usage or parse error, 2 learner divergence,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import analysis as An
from . import learn as Ln
from . import linrep as L
from . import logic as G
from . import reproduce as Rp
from .numeration import NumerationError, parse_pattern
from .sequences import NAMES, canonical_name, catalog, catalog_text, dfao_to_text

EXIT_OK, EXIT_USAGE, EXIT_DIVERGED, EXIT_FAILED = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _seq(name: str) -> str:
    try:
        return canonical_name(name)
    except Exception:
        raise UsageError(f"unknown sequence {name!r}; known: {', '.join(NAMES)}") from None


def _range(text: str) -> range:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise UsageError(f"bad index or range {text!r} (use N or A..B)") from None
    if lo < 0 or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return range(lo, hi + 1)


def _emit(args, payload, text: str):
    if args.json:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print(text)


def _write(path: str | None, text: str):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -----------------------------------------------------------------

def cmd_eval(args) -> int:
    name = _seq(args.sequence)
    d = catalog(name)
    ns = _range(args.range)
    vals = [d(n) for n in ns]
    _emit(args, {"sequence": name, "start": ns.start, "values": vals}, " ".join(map(str, vals)))
    return EXIT_OK


def cmd_sum(args) -> int:
    name = _seq(args.sequence)
    lr = An.running_sum_linrep(name)
    ns = _range(args.range)
    if ns.start == 0 and len(ns) <= 10 ** 6:
        vals = L.eval_linrep_range(lr, len(ns))
    else:
        vals = [L.eval_linrep(lr, n) for n in ns]
    _emit(args, {"sequence": name, "start": ns.start, "values": vals}, " ".join(map(str, vals)))
    return EXIT_OK


def cmd_derive(args) -> int:
    if args.fixture:
        if args.fixture not in L.FIXTURES:
            raise UsageError(f"unknown fixture {args.fixture!r}; known: {', '.join(L.FIXTURES)}")
        _write(args.output, L.linrep_to_json(L.load_fixture(args.fixture)))
        return EXIT_OK
    if not args.sequence:
        raise UsageError("derive needs a sequence or --fixture")
    name = _seq(args.sequence)
    d = catalog(name).to_msd()
    lr = L.derive_running_sum(d) if args.target is None else L.derive_sum_linrep(d, args.target)
    lr.meta.setdefault("sequence", name)
    lr.meta.setdefault("name", f"{name}sum" if args.target is None else f"{name}count{args.target}")
    _write(args.output, L.linrep_to_json(lr))
    return EXIT_OK


def cmd_learn(args) -> int:
    name = _seq(args.sequence)
    log = (lambda m: print(m, file=sys.stderr)) if args.verbose else None
    res = Ln.learn_catalog(name, max_states=args.max_states, test_len=args.test_len, seed=args.seed, log=log)
    if args.transcript:
        Path(args.transcript).write_text(res.transcript_text())
    if res.predicate is not None and res.outcome in ("proved", "evaluation-verified"):
        _write(args.output, G.dump_predicate(res.predicate))
    payload = {"sequence": name, "outcome": res.outcome, "stats": res.stats,
               "reports": [r.as_dict() for r in res.reports]}
    print(json.dumps(payload, indent=1, sort_keys=True) if args.json else
          f"{name}: {res.outcome} ({res.stats['states']} states, {res.stats['rounds']} rounds)",
          file=sys.stderr if not args.output and res.predicate is not None else sys.stdout)
    return {"proved": EXIT_OK, "evaluation-verified": EXIT_OK, "diverged": EXIT_DIVERGED}.get(res.outcome, EXIT_FAILED)


def cmd_verify(args) -> int:
    try:
        pred = G.parse_predicate(Path(args.predicate).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read predicate: {exc}") from None
    name = _seq(args.sequence)
    d = catalog(name).to_msd()
    reports = [G.verify_functional(pred), G.verify_total(pred)]
    if not any(s.is_fib for s in pred.systems):
        reports.append(G.verify_inductive(pred, d))
    ok = all(r.verdict for r in reports)
    _emit(args, {"predicate": args.predicate, "sequence": name, "reports": [r.as_dict() for r in reports]},
          "\n".join(str(r) for r in reports))
    return EXIT_OK if ok else EXIT_FAILED


def _load_linrep(ref: str) -> L.LinRep:
    if ref in L.FIXTURES:
        return L.load_fixture(ref)
    try:
        return L.linrep_from_json(Path(ref).read_text())
    except OSError:
        raise UsageError(f"no linrep file or fixture {ref!r}; fixtures: {', '.join(L.FIXTURES)}") from None


def cmd_minpoly(args) -> int:
    lr = _load_linrep(args.linrep)
    pattern = parse_pattern(args.pattern, lr.system)
    m = L.word_matrix(lr, pattern.block)
    p = An.minimal_polynomial(m)
    w = An.repeated_nonzero_root(p)
    _emit(args, {"polynomial": str(p), "coefficients": [str(c) for c in p.coeffs],
                 "repeated_nonzero_root": None if w is None else str(w)}, str(p))
    return EXIT_OK


def cmd_certify(args) -> int:
    name = _seq(args.sequence)
    if args.pattern is None and name in ("rs", "bs"):
        cert = An.formula_certificate(name)
    elif args.pattern is None:
        cert = An.standard_certificate(name)
    else:
        if args.alpha is None:
            raise UsageError("--alpha is required with --pattern")
        cert = An.nonsync_certificate(name, args.pattern, Fraction(args.alpha), Fraction(args.delta),
                                      args.beta, start=args.start)
    _write(args.output, cert.to_json())
    return EXIT_OK if cert.recheck() else EXIT_FAILED


def cmd_reproduce(args) -> int:
    try:
        Rp.resolve(args.section)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    show = None if args.json else (lambda row: print(Rp.format_row(row), flush=True))
    rows = Rp.run(args.section, show)
    if args.json:
        print(json.dumps([r.as_dict() for r in rows], indent=1, sort_keys=True))
    else:
        passed = sum(r.passed for r in rows)
        print(f"{passed}/{len(rows)} checks passed")
    return EXIT_OK if all(r.passed for r in rows) else EXIT_FAILED


def cmd_catalog(args) -> int:
    if args.action == "list":
        for n in NAMES:
            d = catalog(n)
            print(f"{n:6} {d.system.tag:7} {d.n_states} states")
        return EXIT_OK
    if not args.name:
        raise UsageError("catalog dump needs a sequence name")
    name = _seq(args.name)
    print(catalog_text(name) if not args.minimal else dfao_to_text(catalog(name)), end="")
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="syncsum", description="Running sums of automatic sequences: evaluate, learn, verify, certify.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
        sp.set_defaults(func=fn)
        return sp

    sp = add("eval", cmd_eval, "sequence values")
    sp.add_argument("sequence")
    sp.add_argument("range", help="N or A..B")

    sp = add("sum", cmd_sum, "running sums f(n) = a(0) + ... + a(n)")
    sp.add_argument("sequence")
    sp.add_argument("range", help="N or A..B")

    sp = add("derive", cmd_derive, "linear representation of the running sum (JSON)")
    sp.add_argument("sequence", nargs="?")
    sp.add_argument("--target", type=int, help="count occurrences of this value instead of summing")
    sp.add_argument("--fixture", help="emit a transcribed fixture instead")
    sp.add_argument("-o", "--output")

    sp = add("learn", cmd_learn, "learn and verify a synchronising automaton for the running sum")
    sp.add_argument("sequence")
    sp.add_argument("--max-states", type=int, default=64)
    sp.add_argument("--test-len", type=int, default=6)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--transcript", help="write the learning transcript here")
    sp.add_argument("-v", "--verbose", action="store_true")
    sp.add_argument("-o", "--output")

    sp = add("verify", cmd_verify, "functional, total and inductive checks for a predicate file")
    sp.add_argument("predicate")
    sp.add_argument("sequence")

    sp = add("minpoly", cmd_minpoly, "minimal polynomial of a pattern block matrix")
    sp.add_argument("linrep", help="linrep JSON file or fixture name")
    sp.add_argument("--pattern", required=True, help='e.g. "(10)^r 1"; only the block matters')

    sp = add("certify", cmd_certify, "non-synchronisation certificate (JSON)")
    sp.add_argument("sequence")
    sp.add_argument("--pattern")
    sp.add_argument("--alpha")
    sp.add_argument("--delta", default="0")
    sp.add_argument("--beta", default="1")
    sp.add_argument("--start", type=int, default=0, help="first r where the residual is affine")
    sp.add_argument("-o", "--output")

    sp = add("reproduce", cmd_reproduce, "re-run the checks of one section or all of them")
    sp.add_argument("section", nargs="?", default="all")

    sp = add("catalog", cmd_catalog, "list or dump catalog automata")
    sp.add_argument("action", choices=("list", "dump"))
    sp.add_argument("name", nargs="?")
    sp.add_argument("--minimal", action="store_true", help="dump the minimized automaton")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, NumerationError, L.LinRepError, An.AnalysisError, G.LogicError, Ln.LearnError) as exc:
        print(f"syncsum: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
